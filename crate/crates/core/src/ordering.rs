//! Fixed-column ordering arrays for two-level decomposition.
//!
//! Column `c` lists the rows `r > c` whose entries are eliminated, in order.
//! Only columns `0..=2^n-2` are stored.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Qubit count above which constructors log a size warning.
pub const SOFT_MAX_QUBITS: usize = 7;

/// Triangular ordering array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderArray {
    n: usize,
    columns: Vec<Vec<usize>>,
}

/// The two built-in orderings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderKind {
    Conventional,
    Poa,
}

impl OrderKind {
    pub fn build(self, n: usize) -> Result<OrderArray> {
        match self {
            OrderKind::Conventional => OrderArray::conventional(n),
            OrderKind::Poa => OrderArray::poa(n),
        }
    }
}

impl FromStr for OrderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conventional" => Ok(OrderKind::Conventional),
            "poa" => Ok(OrderKind::Poa),
            other => Err(Error::InvalidOrder(format!("unknown ordering `{other}`"))),
        }
    }
}

fn warn_if_large(n: usize) {
    if n > SOFT_MAX_QUBITS {
        log::warn!(
            "building an order array for {n} qubits ({} ordering pairs)",
            (1usize << (n - 1)) * ((1usize << n) - 1)
        );
    }
}

impl OrderArray {
    /// Rows `c+1, c+2, ..., 2^n-1` for every column `c`.
    pub fn conventional(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::QubitCount {
                n,
                min: 1,
                max: usize::BITS as usize - 1,
            });
        }
        warn_if_large(n);
        let dim = 1usize << n;
        let columns = (0..dim - 1).map(|c| (c + 1..dim).collect()).collect();
        Ok(OrderArray { n, columns })
    }

    /// The palindromic ordering, grown level by level from the 2-qubit
    /// conventional array: column `2c` of level `m` is `2R, 2c+1, 2R+1` and
    /// column `2c+1` is `2R, 2R+1`, where `R` is column `c` of level `m-1`.
    pub fn poa(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::QubitCount {
                n,
                min: 2,
                max: usize::BITS as usize - 1,
            });
        }
        warn_if_large(n);
        let mut columns = OrderArray::conventional(2)?.columns;
        for m in 3..=n {
            let mut next = Vec::with_capacity((1 << m) - 1);
            for (c, prev) in columns.iter().enumerate() {
                let evens = prev.iter().map(|r| 2 * r);
                let odds = prev.iter().map(|r| 2 * r + 1);
                let mut even_col: Vec<usize> = evens.clone().collect();
                even_col.push(2 * c + 1);
                even_col.extend(odds.clone());
                let odd_col: Vec<usize> = evens.chain(odds).collect();
                next.push(even_col);
                next.push(odd_col);
            }
            // The previous level's final column has no stored entries, so its
            // successor column 2^m-2 is the single row 2^m-1.
            next.push(vec![(1 << m) - 1]);
            columns = next;
        }
        Ok(OrderArray { n, columns })
    }

    /// Builds and validates an array from explicit columns.
    pub fn from_columns(n: usize, columns: Vec<Vec<usize>>) -> Result<Self> {
        let order = OrderArray::from_columns_unchecked(n, columns);
        order.validate()?;
        Ok(order)
    }

    /// Builds an array without validation; see [`OrderArray::is_valid`].
    pub fn from_columns_unchecked(n: usize, columns: Vec<Vec<usize>>) -> Self {
        OrderArray { n, columns }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn columns(&self) -> &[Vec<usize>] {
        &self.columns
    }

    pub fn column(&self, c: usize) -> &[usize] {
        &self.columns[c]
    }

    /// Ordering pairs `(r, c)` in decomposition order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, rows)| rows.iter().map(move |&r| (r, c)))
    }

    pub fn num_pairs(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Checks that there are `2^n-1` columns and column `c` is a permutation
    /// of `c+1..2^n`.
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 || self.n >= usize::BITS as usize {
            return Err(Error::InvalidOrder(format!("bad qubit count {}", self.n)));
        }
        let dim = self.dim();
        if self.columns.len() != dim - 1 {
            return Err(Error::InvalidOrder(format!(
                "expected {} columns, found {}",
                dim - 1,
                self.columns.len()
            )));
        }
        let mut seen = vec![false; dim];
        for (c, rows) in self.columns.iter().enumerate() {
            if rows.len() != dim - 1 - c {
                return Err(Error::InvalidOrder(format!(
                    "column {c} has {} entries, expected {}",
                    rows.len(),
                    dim - 1 - c
                )));
            }
            seen.iter_mut().for_each(|s| *s = false);
            for &r in rows {
                if r <= c || r >= dim {
                    return Err(Error::InvalidOrder(format!(
                        "column {c} contains row {r} outside {}..{dim}",
                        c + 1
                    )));
                }
                if std::mem::replace(&mut seen[r], true) {
                    return Err(Error::InvalidOrder(format!("column {c} repeats row {r}")));
                }
            }
        }
        Ok(())
    }

    /// Serializes to the order file format (`n=<int>` then `c: r1 r2 ...`).
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Parses and validates an order file.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (lineno, header) = lines.next().ok_or_else(|| Error::parse(1, "empty order file"))?;
        let n: usize = header
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::parse(lineno, format!("expected `n=<int>`, found `{header}`")))?;
        let mut columns = Vec::new();
        for (lineno, line) in lines {
            let (idx, rows) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(lineno, "expected `<column>: <rows>`"))?;
            let idx: usize = idx
                .trim()
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad column index `{idx}`")))?;
            if idx != columns.len() {
                return Err(Error::parse(
                    lineno,
                    format!("expected column {}, found {idx}", columns.len()),
                ));
            }
            let rows = rows
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::parse(lineno, format!("bad row `{t}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            columns.push(rows);
        }
        OrderArray::from_columns(n, columns)
    }
}

impl fmt::Display for OrderArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        for (c, rows) in self.columns.iter().enumerate() {
            write!(f, "{c}:")?;
            for r in rows {
                write!(f, " {r}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for OrderArray {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OrderArray::parse(s)
    }
}
