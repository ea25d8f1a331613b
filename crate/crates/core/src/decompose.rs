//! Two-level decomposition of a unitary along a fixed-column ordering.
//!
//! Each ordering pair `(r, c)` yields a Givens-style matrix `M_j` that zeroes
//! entry `(r, c)` of the working matrix; the emitted factor is `V_j = M_j^dagger`
//! and the factors multiply left-to-right back to the input.

use crate::error::{Error, Result};
use crate::linalg::{ComponentMatrix, Matrix, TwoLevelMatrix, RECONSTRUCTION_TOL, UNITARY_TOL, ZERO_TOL};
use crate::ordering::OrderArray;

/// How the working matrix is updated after each step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Update {
    /// Rewrite only rows `c` and `r`.
    #[default]
    TwoRow,
    /// Full dense product with the expanded step matrix.
    Dense,
}

/// Ordered factors `V_1 ... V_k` with `V_1 V_2 ... V_k = U`.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    n: usize,
    factors: Vec<TwoLevelMatrix>,
}

impl Decomposition {
    pub fn new(n: usize, factors: Vec<TwoLevelMatrix>) -> Result<Self> {
        let dim = 1usize << n;
        if let Some(f) = factors.iter().find(|f| f.dim() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: f.dim(),
            });
        }
        Ok(Decomposition { n, factors })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn factors(&self) -> &[TwoLevelMatrix] {
        &self.factors
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.factors.iter().map(TwoLevelMatrix::pair)
    }

    /// `V_1 V_2 ... V_k`, accumulated with column updates.
    pub fn product(&self) -> Matrix {
        let mut acc = Matrix::identity(self.dim());
        for f in &self.factors {
            acc.right_mul_two_level(f)
                .expect("factor dimensions checked at construction");
        }
        acc
    }

    /// One line per factor: `r c a b c d` with complex entries as `re,im`.
    pub fn debug_dump(&self) -> String {
        let mut out = String::new();
        for f in &self.factors {
            let m = f.comp();
            let entries: Vec<String> = m.entries().iter().map(crate::linalg::format_complex).collect();
            out.push_str(&format!("{} {} {}\n", f.row(), f.col(), entries.join(" ")));
        }
        out
    }
}

/// Number of factors produced for `n` qubits: `2^(n-1) (2^n - 1)`.
pub fn factor_count(n: usize) -> usize {
    (1usize << (n - 1)) * ((1usize << n) - 1)
}

/// Decomposes `u` following `order`, with the default update strategy.
pub fn two_level_decompose(u: &Matrix, order: &OrderArray) -> Result<Decomposition> {
    decompose_with(u, order, Update::default(), |_, _| {})
}

/// Decomposes `u` following `order`. `on_column` is called with the column
/// index and the working matrix after each column has been eliminated.
pub fn decompose_with(
    u: &Matrix,
    order: &OrderArray,
    update: Update,
    mut on_column: impl FnMut(usize, &Matrix),
) -> Result<Decomposition> {
    let n = u.num_qubits().ok_or_else(|| Error::NotPowerOfTwo(u.dim()))?;
    if order.n() != n {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: order.dim(),
        });
    }
    order.validate()?;
    u.check_finite()?;
    u.check_unitary(UNITARY_TOL)?;

    let dim = u.dim();
    let mut m = u.clone();
    let mut factors = Vec::with_capacity(order.num_pairs());
    for (c, rows) in order.columns().iter().enumerate() {
        let last = *rows.last().expect("validated columns are non-empty");
        for &r in rows {
            let step = TwoLevelMatrix::new(r, c, elimination_step(&m, r, c, last, dim), dim)?;
            match update {
                Update::TwoRow => m.left_mul_two_level(&step)?,
                Update::Dense => m = step.expand().matmul(&m)?,
            }
            factors.push(step.adjoint());
        }
        on_column(c, &m);
    }
    Decomposition::new(n, factors)
}

/// Component of `M_j` for pair `(r, c)` given the current working matrix.
fn elimination_step(m: &Matrix, r: usize, c: usize, last: usize, dim: usize) -> ComponentMatrix {
    let mcc = m[(c, c)];
    let mrc = m[(r, c)];
    if c == dim - 2 {
        ComponentMatrix::new(mcc.conj(), mrc.conj(), m[(c, r)].conj(), m[(r, r)].conj())
    } else if mrc.norm() < ZERO_TOL {
        let mut comp = ComponentMatrix::identity();
        if r == last {
            comp.a = mcc.conj();
        }
        comp
    } else {
        let norm = (mcc.norm_sqr() + mrc.norm_sqr()).sqrt();
        ComponentMatrix::new(mcc.conj() / norm, mrc.conj() / norm, mrc / norm, -mcc / norm)
    }
}

/// True iff columns `0..=c` of `m` (and, by unitarity, rows `0..=c`) match the
/// identity within the reconstruction tolerance.
pub fn progress_invariant_check(m: &Matrix, c: usize) -> bool {
    let dim = m.dim();
    (0..=c.min(dim.saturating_sub(1))).all(|j| {
        (0..dim).all(|i| {
            let expect = if i == j { 1.0 } else { 0.0 };
            (m[(i, j)].re - expect).abs() < RECONSTRUCTION_TOL
                && m[(i, j)].im.abs() < RECONSTRUCTION_TOL
                && (i == j || m[(j, i)].norm() < RECONSTRUCTION_TOL)
        })
    })
}
