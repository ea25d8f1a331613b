//! Palindrome trie over subcircuit prefixes.
//!
//! Entering `prefix + middle` of every subcircuit into a trie groups shared
//! prefixes; any leaf order that keeps each subtrie's leaves contiguous
//! maximizes the number of X gates cancelled between neighbours, and the
//! cancelled gate count is `leaves + 2 * interior`.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::synth::{ControlledGate, PalindromicSubcircuit};

/// Trie label: an X gate by structure, or a middle gate by its subcircuit index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateSymbol {
    X { target: usize, controls: usize },
    Middle(usize),
}

impl GateSymbol {
    pub fn of_x(g: &ControlledGate) -> Self {
        debug_assert!(g.is_x());
        GateSymbol::X {
            target: g.target(),
            controls: g.controls(),
        }
    }
}

#[derive(Clone, Debug)]
struct Node {
    symbol: Option<GateSymbol>,
    depth: usize,
    children: Vec<usize>,
}

/// Rooted prefix tree; children are kept in insertion order.
#[derive(Clone, Debug)]
pub struct PalindromeTrie {
    n: usize,
    nodes: Vec<Node>,
    leaves: Vec<usize>,
    labels: Vec<String>,
}

const ROOT: usize = 0;

/// Enters `prefix + middle` of each subcircuit; leaf `j` is `subs[j]`.
pub fn build_trie(subs: &[PalindromicSubcircuit]) -> Result<PalindromeTrie> {
    let mut trie = PalindromeTrie {
        n: subs.first().map_or(0, |s| s.middle().n()),
        nodes: vec![Node {
            symbol: None,
            depth: 0,
            children: Vec::new(),
        }],
        leaves: Vec::with_capacity(subs.len()),
        labels: Vec::with_capacity(subs.len()),
    };
    let mut seen = HashSet::with_capacity(subs.len());
    for (j, s) in subs.iter().enumerate() {
        let key: Vec<GateSymbol> = s.prefix().iter().map(GateSymbol::of_x).collect();
        if !seen.insert((s.pair(), key)) {
            let (row, col) = s.pair();
            return Err(Error::DuplicateSubcircuit { row, col });
        }
        let mut at = ROOT;
        for g in s.prefix() {
            at = trie.child_or_insert(at, GateSymbol::of_x(g));
        }
        let leaf = trie.push_child(at, GateSymbol::Middle(j));
        trie.leaves.push(leaf);
        trie.labels.push(s.middle().to_string());
    }
    Ok(trie)
}

impl PalindromeTrie {
    fn push_child(&mut self, parent: usize, symbol: GateSymbol) -> usize {
        let id = self.nodes.len();
        let depth = self.nodes[parent].depth + 1;
        self.nodes.push(Node {
            symbol: Some(symbol),
            depth,
            children: Vec::new(),
        });
        self.nodes[parent].children.push(id);
        id
    }

    fn child_or_insert(&mut self, parent: usize, symbol: GateSymbol) -> usize {
        let found = self.nodes[parent]
            .children
            .iter()
            .copied()
            .find(|&c| self.nodes[c].symbol == Some(symbol));
        match found {
            Some(c) => c,
            None => self.push_child(parent, symbol),
        }
    }

    pub fn num_leaves(&self) -> usize {
        self.leaves.len()
    }

    /// Non-root, non-leaf nodes.
    pub fn num_interior(&self) -> usize {
        self.nodes.len() - 1 - self.leaves.len()
    }

    /// Gates left after cancelling a contiguous-subtrie ordering: `leaves + 2 * interior`.
    pub fn gate_count(&self) -> usize {
        self.num_leaves() + 2 * self.num_interior()
    }

    /// Leaf labels (subcircuit indices) in depth-first order.
    pub fn dfs_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.leaves.len());
        let mut stack = vec![ROOT];
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id];
            if let Some(GateSymbol::Middle(j)) = node.symbol {
                out.push(j);
            }
            stack.extend(node.children.iter().rev());
        }
        out
    }

    /// Whether `seq` keeps the leaves of every subtrie contiguous, i.e. is a
    /// maximal overlap sequence.
    pub fn mos_check(&self, seq: &[usize]) -> Result<bool> {
        let leaf_count = self.leaves.len();
        if seq.len() != leaf_count {
            return Err(Error::NotAPermutation);
        }
        let mut position = vec![usize::MAX; leaf_count];
        for (p, &j) in seq.iter().enumerate() {
            if j >= leaf_count || position[j] != usize::MAX {
                return Err(Error::NotAPermutation);
            }
            position[j] = p;
        }
        Ok(self.contiguous(ROOT, &position).is_some())
    }

    /// (min, max, count) of leaf positions under `id`, or `None` if some
    /// subtrie below is not contiguous.
    fn contiguous(&self, id: usize, position: &[usize]) -> Option<(usize, usize, usize)> {
        let node = &self.nodes[id];
        if let Some(GateSymbol::Middle(j)) = node.symbol {
            return Some((position[j], position[j], 1));
        }
        let mut acc: Option<(usize, usize, usize)> = None;
        for &c in &node.children {
            let (lo, hi, k) = self.contiguous(c, position)?;
            acc = Some(match acc {
                None => (lo, hi, k),
                Some((a, b, m)) => (a.min(lo), b.max(hi), m + k),
            });
        }
        let (lo, hi, k) = acc?;
        (hi - lo + 1 == k).then_some((lo, hi, k))
    }

    /// Indented dump: one node per line, two spaces per depth below the root,
    /// leaves suffixed with `[leaf <id>]`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let mut stack: Vec<usize> = self.nodes[ROOT].children.iter().rev().copied().collect();
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id];
            let indent = "  ".repeat(node.depth - 1);
            match node.symbol {
                Some(GateSymbol::X { target, controls }) => {
                    let g = self.x_gate_label(target, controls);
                    let _ = writeln!(out, "{indent}{g}");
                }
                Some(GateSymbol::Middle(j)) => {
                    let _ = writeln!(out, "{indent}{} [leaf {j}]", self.labels[j]);
                }
                None => {}
            }
            stack.extend(node.children.iter().rev());
        }
        out
    }

    fn x_gate_label(&self, target: usize, controls: usize) -> String {
        ControlledGate::x(self.n, target, controls)
            .map(|g| g.to_string())
            .unwrap_or_else(|_| format!("X t={target} c={controls:b}"))
    }
}

/// Number of X gates cancelled between `a` followed by `b`: the longest
/// common prefix of their X runs.
pub fn overlap(a: &PalindromicSubcircuit, b: &PalindromicSubcircuit) -> usize {
    a.prefix().iter().zip(b.prefix()).take_while(|(x, y)| x == y).count()
}

/// Overlaps between adjacent subcircuits of a sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapReport {
    pub adjacent: Vec<usize>,
    pub total: usize,
}

pub fn overlap_report(seq: &[PalindromicSubcircuit]) -> OverlapReport {
    let adjacent: Vec<usize> = seq.windows(2).map(|w| overlap(&w[0], &w[1])).collect();
    let total = adjacent.iter().sum();
    OverlapReport { adjacent, total }
}
