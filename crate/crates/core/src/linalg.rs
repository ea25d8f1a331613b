//! Dense complex matrices, two-level embeddings and seeded random unitaries.
//!
//! Matrices here are small (dimension at most 128 in practice), so everything
//! is stored densely in row-major order.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

pub use num_complex::Complex64 as Complex;

/// Magnitude below which an entry counts as zero inside the algorithms.
pub const ZERO_TOL: f64 = 1e-12;
/// Tolerance for unitarity validation.
pub const UNITARY_TOL: f64 = 1e-10;
/// Tolerance for end-to-end reconstruction.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;

/// Largest qubit count accepted by [`random_unitary`].
pub const MAX_RANDOM_QUBITS: usize = 7;

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);

/// Square dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<Complex>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Matrix::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Matrix { dim, data }
    }

    /// Builds a matrix from rows; every row must have as many entries as there are rows.
    pub fn from_rows(rows: Vec<Vec<Complex>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix { dim, data })
    }

    /// Builds a matrix from real-valued rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of qubits `n` with `dim = 2^n`, if the dimension is a power of two of at least 2.
    pub fn num_qubits(&self) -> Option<usize> {
        if self.dim >= 2 && self.dim.is_power_of_two() {
            Some(self.dim.trailing_zeros() as usize)
        } else {
            None
        }
    }

    pub fn row(&self, i: usize) -> &[Complex] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<Complex> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, values: &[Complex]) {
        for (i, v) in values.iter().enumerate() {
            self[(i, j)] = *v;
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_dim(other)?;
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let row_k = &other.data[k * n..(k + 1) * n];
                let out_row = &mut out.data[i * n..(i + 1) * n];
                for (o, b) in out_row.iter_mut().zip(row_k) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Largest entry magnitude of `M^dagger M - I`.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for k in 0..n {
                    acc += self[(k, i)].conj() * self[(k, j)];
                }
                if i == j {
                    acc -= ONE;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() < tol
    }

    /// Fails with [`Error::NotUnitary`] when the deviation is not below `tol`.
    pub fn check_unitary(&self, tol: f64) -> Result<()> {
        let deviation = self.unitarity_deviation();
        if deviation < tol {
            Ok(())
        } else {
            Err(Error::NotUnitary { deviation, tol })
        }
    }

    pub fn check_finite(&self) -> Result<()> {
        match self.data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            Some(p) => Err(Error::NonFinite {
                row: p / self.dim,
                col: p % self.dim,
            }),
            None => Ok(()),
        }
    }

    pub fn frobenius_distance(&self, other: &Matrix) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `self <- T * self`, touching only rows `c` and `r` of `T`'s ordering pair.
    pub fn left_mul_two_level(&mut self, t: &TwoLevelMatrix) -> Result<()> {
        self.check_dim(t.dim())?;
        let (r, c) = (t.row(), t.col());
        let m = t.comp();
        let n = self.dim;
        for j in 0..n {
            let x = self.data[c * n + j];
            let y = self.data[r * n + j];
            self.data[c * n + j] = m.a * x + m.b * y;
            self.data[r * n + j] = m.c * x + m.d * y;
        }
        Ok(())
    }

    /// `self <- self * T`, touching only columns `c` and `r`.
    pub fn right_mul_two_level(&mut self, t: &TwoLevelMatrix) -> Result<()> {
        self.check_dim(t.dim())?;
        let (r, c) = (t.row(), t.col());
        let m = t.comp();
        let n = self.dim;
        for i in 0..n {
            let x = self.data[i * n + c];
            let y = self.data[i * n + r];
            self.data[i * n + c] = x * m.a + y * m.c;
            self.data[i * n + r] = x * m.b + y * m.d;
        }
        Ok(())
    }

    fn check_same_dim(&self, other: &Matrix) -> Result<()> {
        self.check_dim(other.dim)
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.dim,
                right: dim,
            })
        }
    }

    /// Serializes to the matrix text format: the dimension, then one line per
    /// row of `re,im` tokens.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<Matrix> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (lineno, first) = lines.next().ok_or_else(|| Error::parse(1, "empty matrix file"))?;
        let dim: usize = first
            .parse()
            .map_err(|_| Error::parse(lineno, format!("expected dimension, found `{first}`")))?;
        if dim == 0 {
            return Err(Error::parse(lineno, "dimension must be positive"));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for _ in 0..dim {
            let (lineno, line) = lines
                .next()
                .ok_or_else(|| Error::parse(lineno + 1, format!("expected {dim} rows")))?;
            let before = data.len();
            for tok in line.split_whitespace() {
                data.push(parse_complex(tok).map_err(|msg| Error::parse(lineno, msg))?);
            }
            if data.len() - before != dim {
                return Err(Error::parse(
                    lineno,
                    format!("expected {dim} entries, found {}", data.len() - before),
                ));
            }
        }
        if let Some((lineno, _)) = lines.next() {
            return Err(Error::parse(lineno, "trailing data after last row"));
        }
        Ok(Matrix { dim, data })
    }
}

pub(crate) fn parse_complex(tok: &str) -> std::result::Result<Complex, String> {
    let (re, im) = tok
        .split_once(',')
        .ok_or_else(|| format!("expected `re,im`, found `{tok}`"))?;
    let re: f64 = re.parse().map_err(|_| format!("bad real part in `{tok}`"))?;
    let im: f64 = im.parse().map_err(|_| format!("bad imaginary part in `{tok}`"))?;
    Ok(Complex::new(re, im))
}

pub(crate) fn format_complex(z: &Complex) -> String {
    format!("{:?},{:?}", z.re, z.im)
}

impl Index<(usize, usize)> for Matrix {
    type Output = Complex;

    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = self.row(i).iter().map(format_complex).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for Matrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Matrix::parse(s)
    }
}

/// The 2x2 component `[[a, b], [c, d]]` of a two-level matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComponentMatrix {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub d: Complex,
}

impl ComponentMatrix {
    pub const fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Self {
        ComponentMatrix { a, b, c, d }
    }

    pub const fn identity() -> Self {
        ComponentMatrix::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn pauli_x() -> Self {
        ComponentMatrix::new(ZERO, ONE, ONE, ZERO)
    }

    pub fn adjoint(&self) -> Self {
        ComponentMatrix::new(self.a.conj(), self.c.conj(), self.b.conj(), self.d.conj())
    }

    /// `X M X`: the same operator with the two basis states exchanged.
    pub fn swapped(&self) -> Self {
        ComponentMatrix::new(self.d, self.c, self.b, self.a)
    }

    pub fn mul(&self, o: &ComponentMatrix) -> ComponentMatrix {
        ComponentMatrix::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn entries(&self) -> [Complex; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn max_abs_diff(&self, o: &ComponentMatrix) -> f64 {
        self.entries()
            .iter()
            .zip(o.entries().iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.adjoint().mul(self).max_abs_diff(&ComponentMatrix::identity()) < tol
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.max_abs_diff(&ComponentMatrix::identity()) < tol
    }
}

/// A two-level matrix: identity except on the ordering pair `(row, col)`, `row > col`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoLevelMatrix {
    row: usize,
    col: usize,
    comp: ComponentMatrix,
    dim: usize,
}

impl TwoLevelMatrix {
    pub fn new(row: usize, col: usize, comp: ComponentMatrix, dim: usize) -> Result<Self> {
        if row <= col || row >= dim {
            return Err(Error::InvalidPair { row, col, dim });
        }
        Ok(TwoLevelMatrix { row, col, comp, dim })
    }

    pub fn row(&self) -> usize {
        self.row
    }

    pub fn col(&self) -> usize {
        self.col
    }

    /// The ordering pair `(row, col)`.
    pub fn pair(&self) -> (usize, usize) {
        (self.row, self.col)
    }

    pub fn comp(&self) -> &ComponentMatrix {
        &self.comp
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn adjoint(&self) -> TwoLevelMatrix {
        TwoLevelMatrix {
            comp: self.comp.adjoint(),
            ..*self
        }
    }

    /// Embeds the component at `(c,c), (c,r), (r,c), (r,r)` of a `dim x dim` identity.
    pub fn expand(&self) -> Matrix {
        let mut m = Matrix::identity(self.dim);
        let (r, c) = (self.row, self.col);
        m[(c, c)] = self.comp.a;
        m[(c, r)] = self.comp.b;
        m[(r, c)] = self.comp.c;
        m[(r, r)] = self.comp.d;
        m
    }
}

/// Seeded Haar-like random unitary on `n` qubits: a complex Gaussian matrix
/// whose columns are orthonormalized by modified Gram-Schmidt.
pub fn random_unitary(n: usize, seed: u64) -> Result<Matrix> {
    if !(1..=MAX_RANDOM_QUBITS).contains(&n) {
        return Err(Error::QubitCount {
            n,
            min: 1,
            max: MAX_RANDOM_QUBITS,
        });
    }
    let dim = 1usize << n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<Complex>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    Complex::new(re, im)
                })
                .collect()
        })
        .collect();

    for j in 0..dim {
        let (done, rest) = cols.split_at_mut(j);
        let v = &mut rest[0];
        for q in done.iter() {
            let proj: Complex = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= proj * qi;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for vi in v.iter_mut() {
            *vi /= norm;
        }
    }

    let mut m = Matrix::zeros(dim);
    for (j, col) in cols.iter().enumerate() {
        m.set_column(j, col);
    }
    Ok(m)
}
