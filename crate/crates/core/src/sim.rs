//! State-vector simulation of fully controlled gates.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{Complex, Matrix};
use crate::synth::{Circuit, ControlledGate, GateOp};

/// Amplitudes over `2^n` basis states; index bit `q` is qubit `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex>,
}

impl StateVector {
    pub fn basis(n: usize, index: usize) -> Self {
        let mut amps = vec![Complex::new(0.0, 0.0); 1 << n];
        amps[index] = Complex::new(1.0, 0.0);
        StateVector { n, amps }
    }

    pub fn from_amplitudes(amps: Vec<Complex>) -> Result<Self> {
        if amps.len() < 2 || !amps.len().is_power_of_two() {
            return Err(Error::NotPowerOfTwo(amps.len()));
        }
        Ok(StateVector {
            n: amps.len().trailing_zeros() as usize,
            amps,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(Complex::norm_sqr).sum::<f64>().sqrt()
    }

    /// Applies `g` in place to every amplitude pair differing only in the
    /// target bit whose other bits satisfy the controls.
    pub fn apply_gate(&mut self, g: &ControlledGate) -> Result<()> {
        if g.n() != self.n {
            return Err(Error::DimensionMismatch {
                left: 1 << self.n,
                right: 1 << g.n(),
            });
        }
        // Exactly one pair fires: the controls fix every non-target bit.
        let i0 = g.controls();
        let i1 = i0 | 1 << g.target();
        match g.op() {
            GateOp::X => self.amps.swap(i0, i1),
            GateOp::Unitary(m) => {
                let (x, y) = (self.amps[i0], self.amps[i1]);
                self.amps[i0] = m.a * x + m.b * y;
                self.amps[i1] = m.c * x + m.d * y;
            }
        }
        Ok(())
    }

    /// Applies the circuit's unitary `G_0 ... G_{m-1}`: the last gate first.
    pub fn apply_circuit(&mut self, c: &Circuit) -> Result<()> {
        for g in c.gates().iter().rev() {
            self.apply_gate(g)?;
        }
        Ok(())
    }
}

/// Unitary of a circuit, one basis column at a time.
pub fn circuit_to_matrix(c: &Circuit) -> Matrix {
    let dim = 1usize << c.n();
    let mut m = Matrix::zeros(dim);
    for x in 0..dim {
        let mut s = StateVector::basis(c.n(), x);
        s.apply_circuit(c).expect("circuit gates share its qubit count");
        m.set_column(x, s.amplitudes());
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerificationReport {
    pub pass: bool,
    pub frobenius: f64,
    pub max_deviation: f64,
    pub gates: usize,
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pass={} frobenius={:e} maxdev={:e} gates={}",
            self.pass, self.frobenius, self.max_deviation, self.gates
        )
    }
}

/// Compares the circuit's unitary against `u`; passes when the Frobenius
/// distance is below `tol`.
pub fn verify(u: &Matrix, c: &Circuit, tol: f64) -> Result<VerificationReport> {
    if u.dim() != 1 << c.n() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: 1 << c.n(),
        });
    }
    let got = circuit_to_matrix(c);
    let frobenius = got.frobenius_distance(u)?;
    Ok(VerificationReport {
        pass: frobenius < tol,
        frobenius,
        max_deviation: got.max_abs_diff(u)?,
        gates: c.len(),
    })
}
