//! Gray-code construction of fully controlled gate circuits.
//!
//! Every two-level factor on `(r, c)` becomes a palindromic subcircuit: a run
//! of controlled-X gates walking `|c>` towards `|r>` one bit at a time
//! (least significant differing bit first), one controlled component gate,
//! and the X run mirrored.
//!
//! Gate sequences in a [`Circuit`] are kept in matrix-product order: the
//! circuit's unitary is `G_0 G_1 ... G_{m-1}`, so the last gate in the list
//! acts on a state first.

use std::fmt;
use std::str::FromStr;

use crate::decompose::Decomposition;
use crate::error::{Error, Result};
use crate::linalg::{format_complex, parse_complex, ComponentMatrix, TwoLevelMatrix, UNITARY_TOL};

/// Operator applied to the target qubit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateOp {
    X,
    /// A 2x2 unitary in the (target = 0, target = 1) basis.
    Unitary(ComponentMatrix),
}

/// A gate on `n` qubits controlled on every non-target qubit.
///
/// `controls` holds the required value of each non-target qubit as a bit
/// mask; the target bit is always clear.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ControlledGate {
    n: usize,
    target: usize,
    controls: usize,
    op: GateOp,
}

impl ControlledGate {
    pub fn new(n: usize, target: usize, controls: usize, op: GateOp) -> Result<Self> {
        if n == 0 || n >= usize::BITS as usize {
            return Err(Error::InvalidGate(format!("bad qubit count {n}")));
        }
        if target >= n {
            return Err(Error::InvalidGate(format!(
                "target {target} out of range for {n} qubits"
            )));
        }
        if controls >> n != 0 {
            return Err(Error::InvalidGate(format!(
                "control mask {controls:#b} wider than {n} qubits"
            )));
        }
        Ok(ControlledGate {
            n,
            target,
            controls: controls & !(1 << target),
            op,
        })
    }

    pub fn x(n: usize, target: usize, controls: usize) -> Result<Self> {
        ControlledGate::new(n, target, controls, GateOp::X)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn target(&self) -> usize {
        self.target
    }

    /// Required values of the non-target qubits, as a mask with the target bit clear.
    pub fn controls(&self) -> usize {
        self.controls
    }

    pub fn op(&self) -> &GateOp {
        &self.op
    }

    pub fn is_x(&self) -> bool {
        matches!(self.op, GateOp::X)
    }

    /// Whether basis state `index` satisfies every control.
    pub fn fires_on(&self, index: usize) -> bool {
        index & !(1 << self.target) == self.controls
    }

    /// Control pattern with qubit `n-1` leftmost and `_` at the target.
    pub fn pattern(&self) -> String {
        (0..self.n)
            .rev()
            .map(|q| {
                if q == self.target {
                    '_'
                } else if self.controls >> q & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect()
    }

    /// The inverse gate.
    pub fn inverse(&self) -> ControlledGate {
        let op = match self.op {
            GateOp::X => GateOp::X,
            GateOp::Unitary(m) => GateOp::Unitary(m.adjoint()),
        };
        ControlledGate { op, ..*self }
    }

    fn parse_line(line: &str, n: usize, lineno: usize) -> Result<Self> {
        let err = |msg: String| Error::parse(lineno, msg);
        let mut parts = line.split_whitespace();
        let kind = parts.next().ok_or_else(|| err("empty gate line".into()))?;
        let mut target = None;
        let mut pattern = None;
        let mut matrix = None;
        for part in parts {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, found `{part}`")))?;
            match key {
                "t" => {
                    target = Some(
                        value
                            .parse::<usize>()
                            .map_err(|_| err(format!("bad target `{value}`")))?,
                    )
                }
                "c" => pattern = Some(value),
                "m" => matrix = Some(value),
                _ => return Err(err(format!("unknown field `{key}`"))),
            }
        }
        let target = target.ok_or_else(|| err("missing t=".into()))?;
        let pattern = pattern.ok_or_else(|| err("missing c=".into()))?;
        if pattern.len() != n {
            return Err(err(format!("pattern `{pattern}` must have {n} characters")));
        }
        let mut controls = 0usize;
        for (i, ch) in pattern.chars().enumerate() {
            let q = n - 1 - i;
            match (ch, q == target) {
                ('_', true) => {}
                ('0', false) => {}
                ('1', false) => controls |= 1 << q,
                _ => return Err(err(format!("pattern `{pattern}` inconsistent with target {target}"))),
            }
        }
        let op = match (kind, matrix) {
            ("X", None) => GateOp::X,
            ("U", Some(m)) => {
                let entries = m
                    .split(';')
                    .map(parse_complex)
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(err)?;
                if entries.len() != 4 {
                    return Err(err(format!("matrix needs 4 entries, found {}", entries.len())));
                }
                GateOp::Unitary(ComponentMatrix::new(entries[0], entries[1], entries[2], entries[3]))
            }
            ("X", Some(_)) => return Err(err("X gates take no matrix".into())),
            ("U", None) => return Err(err("missing m=".into())),
            (other, _) => return Err(err(format!("unknown gate kind `{other}`"))),
        };
        ControlledGate::new(n, target, controls, op).map_err(|e| err(e.to_string()))
    }
}

impl fmt::Display for ControlledGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.op {
            GateOp::X => write!(f, "X t={} c={}", self.target, self.pattern()),
            GateOp::Unitary(m) => {
                let entries: Vec<String> = m.entries().iter().map(format_complex).collect();
                write!(f, "U t={} c={} m={}", self.target, self.pattern(), entries.join(";"))
            }
        }
    }
}

/// Gray code between two basis states, flipping the least significant
/// differing bit at each step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayCode {
    n: usize,
    codes: Vec<usize>,
}

impl GrayCode {
    pub fn codes(&self) -> &[usize] {
        &self.codes
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    /// Bit position flipped between consecutive codes.
    pub fn flips(&self) -> impl Iterator<Item = usize> + '_ {
        self.codes.windows(2).map(|w| (w[0] ^ w[1]).trailing_zeros() as usize)
    }

    /// Codes as `n`-character binary strings, most significant qubit first.
    pub fn to_strings(&self) -> Vec<String> {
        self.codes
            .iter()
            .map(|&g| format!("{g:0width$b}", width = self.n))
            .collect()
    }
}

pub fn gray_code(from: usize, to: usize, n: usize) -> Result<GrayCode> {
    if n == 0 || n >= usize::BITS as usize || from == to || from >> n != 0 || to >> n != 0 {
        return Err(Error::GrayEndpoints { from, to, n });
    }
    let mut g = from;
    let mut codes = vec![g];
    while g != to {
        let diff = g ^ to;
        g ^= diff & diff.wrapping_neg();
        codes.push(g);
    }
    Ok(GrayCode { n, codes })
}

/// `prefix, middle, reverse(prefix)` for one ordering pair.
#[derive(Clone, Debug, PartialEq)]
pub struct PalindromicSubcircuit {
    pair: (usize, usize),
    prefix: Vec<ControlledGate>,
    middle: ControlledGate,
}

impl PalindromicSubcircuit {
    /// Prefix gates must be X gates; the middle may be anything.
    pub fn new(pair: (usize, usize), prefix: Vec<ControlledGate>, middle: ControlledGate) -> Result<Self> {
        if let Some(g) = prefix.iter().find(|g| !g.is_x()) {
            return Err(Error::InvalidGate(format!("prefix gate `{g}` is not an X gate")));
        }
        Ok(PalindromicSubcircuit { pair, prefix, middle })
    }

    /// The ordering pair `(r, c)`.
    pub fn pair(&self) -> (usize, usize) {
        self.pair
    }

    pub fn prefix(&self) -> &[ControlledGate] {
        &self.prefix
    }

    pub fn middle(&self) -> &ControlledGate {
        &self.middle
    }

    /// Gate count of the flattened subcircuit.
    pub fn len(&self) -> usize {
        2 * self.prefix.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn gates(&self) -> impl Iterator<Item = &ControlledGate> + '_ {
        self.prefix
            .iter()
            .chain(std::iter::once(&self.middle))
            .chain(self.prefix.iter().rev())
    }

    /// The component matrix of the middle gate, if it is not an X gate.
    pub fn component(&self) -> Option<ComponentMatrix> {
        match self.middle.op {
            GateOp::X => None,
            GateOp::Unitary(m) => Some(m),
        }
    }
}

/// Subcircuit for a two-level factor on `n` qubits.
pub fn build_subcircuit(v: &TwoLevelMatrix, n: usize) -> Result<PalindromicSubcircuit> {
    if v.dim() != 1 << n {
        return Err(Error::DimensionMismatch {
            left: 1 << n,
            right: v.dim(),
        });
    }
    let (r, c) = v.pair();
    let gray = gray_code(c, r, n)?;
    let codes = gray.codes();
    let m = codes.len();
    let prefix = codes[..m - 1]
        .windows(2)
        .map(|w| {
            let target = (w[0] ^ w[1]).trailing_zeros() as usize;
            ControlledGate::x(n, target, w[0])
        })
        .collect::<Result<Vec<_>>>()?;
    let target = (codes[m - 2] ^ codes[m - 1]).trailing_zeros() as usize;
    // The last flip is the highest differing bit, which is set in r since r > c,
    // so the component is already in the (target = 0, target = 1) basis.
    debug_assert_eq!(r >> target & 1, 1);
    let op = *v.comp();
    let middle = ControlledGate::new(n, target, r, GateOp::Unitary(op))?;
    PalindromicSubcircuit::new((r, c), prefix, middle)
}

/// One subcircuit per factor, in factor order.
pub fn subcircuits(d: &Decomposition) -> Result<Vec<PalindromicSubcircuit>> {
    d.factors().iter().map(|v| build_subcircuit(v, d.n())).collect()
}

/// Sequence of fully controlled gates in matrix-product order.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n: usize,
    gates: Vec<ControlledGate>,
}

impl Circuit {
    pub fn new(n: usize, gates: Vec<ControlledGate>) -> Result<Self> {
        if let Some(g) = gates.iter().find(|g| g.n != n) {
            return Err(Error::InvalidGate(format!(
                "gate `{g}` is on {} qubits, circuit has {n}",
                g.n
            )));
        }
        Ok(Circuit { n, gates })
    }

    pub fn empty(n: usize) -> Self {
        Circuit { n, gates: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[ControlledGate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn x_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_x()).count()
    }

    pub fn from_subcircuits<'a>(n: usize, subs: impl IntoIterator<Item = &'a PalindromicSubcircuit>) -> Result<Self> {
        Circuit::new(n, subs.into_iter().flat_map(|s| s.gates().copied()).collect())
    }

    /// Splits an uncancelled circuit back into palindromic subcircuits,
    /// recovering each ordering pair from the gate walk.
    pub fn split_subcircuits(&self) -> Result<Vec<PalindromicSubcircuit>> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.gates.len() {
            let start = i;
            while i < self.gates.len() && self.gates[i].is_x() {
                i += 1;
            }
            if i == self.gates.len() {
                return Err(Error::NotPalindromic(format!("gates {start}.. have no middle gate")));
            }
            let prefix = self.gates[start..i].to_vec();
            let middle = self.gates[i];
            i += 1;
            for (k, g) in prefix.iter().rev().enumerate() {
                if self.gates.get(i + k) != Some(g) {
                    return Err(Error::NotPalindromic(format!(
                        "gate {} does not mirror the prefix starting at {start}",
                        i + k
                    )));
                }
            }
            i += prefix.len();

            // The middle joins r (target bit set) with the state the prefix
            // reached; undoing the prefix from there recovers c.
            let r = middle.controls | 1 << middle.target;
            let mut c = middle.controls;
            for g in prefix.iter().rev() {
                if !g.fires_on(c) {
                    return Err(Error::NotPalindromic(format!(
                        "prefix gate `{g}` does not act on the walked state"
                    )));
                }
                c ^= 1 << g.target;
            }
            if r <= c {
                return Err(Error::NotPalindromic(format!(
                    "subcircuit at {start} walks from {c} to {r}, expected r > c"
                )));
            }
            out.push(PalindromicSubcircuit::new((r, c), prefix, middle)?);
        }
        Ok(out)
    }

    /// Ordering pairs of the subcircuits, in circuit order.
    pub fn pair_sequence(&self) -> Result<Vec<(usize, usize)>> {
        Ok(self.split_subcircuits()?.iter().map(|s| s.pair()).collect())
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<Circuit> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (lineno, header) = lines.next().ok_or_else(|| Error::parse(1, "empty circuit file"))?;
        let bad_header = || Error::parse(lineno, format!("expected `n=<int> gates=<int>`, found `{header}`"));
        let mut fields = header.split_whitespace();
        let n: usize = fields
            .next()
            .and_then(|f| f.strip_prefix("n="))
            .and_then(|v| v.parse().ok())
            .ok_or_else(bad_header)?;
        let count: usize = fields
            .next()
            .and_then(|f| f.strip_prefix("gates="))
            .and_then(|v| v.parse().ok())
            .ok_or_else(bad_header)?;
        if fields.next().is_some() || n == 0 || n >= usize::BITS as usize {
            return Err(bad_header());
        }
        let gates = lines
            .map(|(lineno, line)| ControlledGate::parse_line(line, n, lineno))
            .collect::<Result<Vec<_>>>()?;
        if gates.len() != count {
            return Err(Error::parse(
                lineno,
                format!("header declares {count} gates, found {}", gates.len()),
            ));
        }
        Circuit::new(n, gates)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={} gates={}", self.n, self.gates.len())?;
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

impl FromStr for Circuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Circuit::parse(s)
    }
}

/// Concatenates the subcircuits of `V_1 ... V_k` in factor order. With
/// `skip_identity`, factors whose component is the identity are dropped.
pub fn construct_circuit(d: &Decomposition, skip_identity: bool) -> Result<Circuit> {
    let subs = d
        .factors()
        .iter()
        .filter(|v| !(skip_identity && v.comp().is_identity(UNITARY_TOL)))
        .map(|v| build_subcircuit(v, d.n()))
        .collect::<Result<Vec<_>>>()?;
    Circuit::from_subcircuits(d.n(), &subs)
}
