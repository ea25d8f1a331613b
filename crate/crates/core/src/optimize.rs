//! X-gate cancellation, structural gate counting and closed-form counts.

use crate::error::Result;
use crate::linalg::{ComponentMatrix, TwoLevelMatrix};
use crate::ordering::{OrderArray, OrderKind};
use crate::synth::{build_subcircuit, Circuit, PalindromicSubcircuit};

/// Removes adjacent identical X gates until none remain. Component gates are
/// never touched.
pub fn cancel_pass(c: &Circuit) -> Circuit {
    let mut out = Vec::with_capacity(c.len());
    for g in c.gates() {
        if g.is_x() && out.last() == Some(g) {
            out.pop();
        } else {
            out.push(*g);
        }
    }
    Circuit::new(c.n(), out).expect("gates come from a valid circuit")
}

/// Subcircuits for the rows of column `c`, with identity placeholders as middles.
pub fn column_subcircuits(order: &OrderArray, c: usize) -> Result<Vec<PalindromicSubcircuit>> {
    order
        .column(c)
        .iter()
        .map(|&r| placeholder_subcircuit(order, r, c))
        .collect()
}

fn placeholder_subcircuit(order: &OrderArray, r: usize, c: usize) -> Result<PalindromicSubcircuit> {
    let v = TwoLevelMatrix::new(r, c, ComponentMatrix::identity(), order.dim())?;
    build_subcircuit(&v, order.n())
}

/// Uncancelled circuit built from Gray codes alone, one placeholder middle per pair.
pub fn structural_circuit(order: &OrderArray) -> Result<Circuit> {
    let subs = order
        .pairs()
        .map(|(r, c)| placeholder_subcircuit(order, r, c))
        .collect::<Result<Vec<_>>>()?;
    Circuit::from_subcircuits(order.n(), &subs)
}

/// Gate count of the circuit `order` produces, optionally after cancellation.
pub fn count_structural(order: &OrderArray, cancelled: bool) -> Result<usize> {
    order.validate()?;
    let circuit = structural_circuit(order)?;
    Ok(if cancelled {
        cancel_pass(&circuit).len()
    } else {
        circuit.len()
    })
}

/// Per-column gate counts, each column cancelled on its own when `cancelled`.
pub fn column_gate_counts(order: &OrderArray, cancelled: bool) -> Result<Vec<usize>> {
    (0..order.columns().len())
        .map(|c| {
            let circuit = Circuit::from_subcircuits(order.n(), &column_subcircuits(order, c)?)?;
            Ok(if cancelled {
                cancel_pass(&circuit).len()
            } else {
                circuit.len()
            })
        })
        .collect()
}

/// Gates cancelled across column boundaries: per-column cancelled counts
/// summed, minus the count for the whole cancelled circuit.
pub fn inter_column_cancellations(order: &OrderArray) -> Result<usize> {
    let per_column: usize = column_gate_counts(order, true)?.iter().sum();
    Ok(per_column - count_structural(order, true)?)
}

fn pow2(k: u32) -> u64 {
    1u64 << k
}

/// Conventional ordering, no cancellation: `(n-1) 2^(2n-1) + 2^(n-1)`.
pub fn formula_conventional(n: u32) -> u64 {
    assert!(n >= 1, "need at least one qubit");
    u64::from(n - 1) * pow2(2 * n - 1) + pow2(n - 1)
}

/// Conventional ordering with cancellation: `(n-1) 2^(2n-1) - 2^(n-1) + 2`.
pub fn formula_conventional_cancel(n: u32) -> u64 {
    assert!(n >= 1, "need at least one qubit");
    u64::from(n - 1) * pow2(2 * n - 1) + 2 - pow2(n - 1)
}

/// Palindromic ordering with cancellation: `(7 2^(2n-1) + 10) / 3 - 7 2^(n-1)`.
pub fn formula_poa(n: u32) -> u64 {
    assert!(n >= 1, "need at least one qubit");
    let numerator = 7 * pow2(2 * n - 1) + 10;
    debug_assert_eq!(numerator % 3, 0);
    numerator / 3 - 7 * pow2(n - 1)
}

/// Iterates `poa_n = 4(poa_{n-1} + 2^(n-1) - 2) + 5(2^(n-1) - 1) + 1 - 2(2^(n-1) - 1)`
/// from `poa_2 = 8`.
pub fn poa_recurrence(n: u32) -> u64 {
    assert!(n >= 2, "recurrence starts at two qubits");
    let mut poa = 8u64;
    for m in 3..=n {
        let half = pow2(m - 1);
        poa = 4 * (poa + half - 2) + 5 * (half - 1) + 1 - 2 * (half - 1);
    }
    poa
}

/// Per-column cancelled counts `T^c_n` of the palindromic ordering via the
/// doubling recurrence: column `2c` gets `2T + 3`, column `2c+1` gets
/// `2T + 2`, and the final column is a single gate. The base is counted
/// structurally at two qubits.
pub fn column_counts(n: u32) -> Result<Vec<u64>> {
    assert!(n >= 2, "recurrence starts at two qubits");
    let base = column_gate_counts(&OrderKind::Poa.build(2)?, true)?;
    let mut counts: Vec<u64> = base.into_iter().map(|c| c as u64).collect();
    for _ in 3..=n {
        let mut next = Vec::with_capacity(2 * counts.len() + 1);
        for &t in &counts {
            next.push(2 * t + 3);
            next.push(2 * t + 2);
        }
        next.push(1);
        counts = next;
    }
    Ok(counts)
}

/// One row of the gate-count table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GateCounts {
    pub n: u32,
    pub palindromic: u64,
    pub conventional: u64,
    pub no_canceling: u64,
}

impl GateCounts {
    pub fn from_formulas(n: u32) -> Self {
        GateCounts {
            n,
            palindromic: formula_poa(n),
            conventional: formula_conventional_cancel(n),
            no_canceling: formula_conventional(n),
        }
    }

    /// Builds and cancels the structural circuits for both orderings.
    pub fn enumerate(n: u32) -> Result<Self> {
        let poa = OrderKind::Poa.build(n as usize)?;
        let conv = OrderKind::Conventional.build(n as usize)?;
        Ok(GateCounts {
            n,
            palindromic: count_structural(&poa, true)? as u64,
            conventional: count_structural(&conv, true)? as u64,
            no_canceling: count_structural(&conv, false)? as u64,
        })
    }

    /// Tab-separated `n palindromic conventional no_canceling`.
    pub fn to_tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}",
            self.n, self.palindromic, self.conventional, self.no_canceling
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::two_level_decompose;
    use crate::linalg::random_unitary;
    use crate::synth::{construct_circuit, ControlledGate, GateOp};

    /// Repeated adjacent-pair deletion until nothing changes.
    fn cancel_fixed_point(c: &Circuit) -> Circuit {
        let mut gates = c.gates().to_vec();
        loop {
            let mut changed = false;
            let mut i = 0;
            while i + 1 < gates.len() {
                if gates[i].is_x() && gates[i] == gates[i + 1] {
                    gates.drain(i..i + 2);
                    changed = true;
                } else {
                    i += 1;
                }
            }
            if !changed {
                return Circuit::new(c.n(), gates).unwrap();
            }
        }
    }

    #[test]
    fn cancels_pairs() {
        let x = ControlledGate::x(2, 0, 2).unwrap();
        let y = ControlledGate::x(2, 1, 0).unwrap();
        let u = ControlledGate::new(2, 0, 0, GateOp::Unitary(ComponentMatrix::identity())).unwrap();
        assert!(cancel_pass(&Circuit::new(2, vec![x, x]).unwrap()).is_empty());
        assert!(cancel_pass(&Circuit::new(2, vec![x, y, y, x]).unwrap()).is_empty());
        assert_eq!(cancel_pass(&Circuit::new(2, vec![u, u]).unwrap()).len(), 2);
        assert_eq!(cancel_pass(&Circuit::new(2, vec![x, u, x]).unwrap()).len(), 3);
    }

    #[test]
    fn stack_and_fixed_point_agree() {
        for n in 2..=5 {
            for kind in [OrderKind::Conventional, OrderKind::Poa] {
                let c = structural_circuit(&kind.build(n).unwrap()).unwrap();
                assert_eq!(cancel_pass(&c), cancel_fixed_point(&c), "n={n} {kind:?}");
            }
        }
    }

    #[test]
    fn structural_counts_small_cases() {
        let conv3 = OrderArray::conventional(3).unwrap();
        assert_eq!(count_structural(&conv3, false).unwrap(), 68);
        assert_eq!(count_structural(&conv3, true).unwrap(), 62);
        assert_eq!(count_structural(&OrderArray::poa(3).unwrap(), true).unwrap(), 50);
        assert_eq!(count_structural(&OrderArray::poa(2).unwrap(), true).unwrap(), 8);
    }

    #[test]
    fn formula_values() {
        assert_eq!(formula_conventional(2), 10);
        assert_eq!(formula_conventional(3), 68);
        assert_eq!(formula_conventional(7), 49216);
        assert_eq!(formula_conventional_cancel(2), 8);
        assert_eq!(formula_conventional_cancel(3), 62);
        assert_eq!(formula_conventional_cancel(5), 2034);
        assert_eq!(formula_poa(2), 8);
        assert_eq!(formula_poa(3), 50);
        assert_eq!(formula_poa(6), 4558);
        assert_eq!(poa_recurrence(2), 8);
        assert_eq!(poa_recurrence(3), 50);
        assert_eq!(poa_recurrence(7), 18670);
    }

    #[test]
    fn closed_form_matches_recurrence_far_out() {
        for n in 2..=30 {
            assert_eq!(formula_poa(n), poa_recurrence(n), "n={n}");
        }
    }

    #[test]
    fn conventional_formula_matches_gray_length_sum() {
        // Sum over pairs of 2 * (Hamming distance) - 1.
        for n in 1..=8u32 {
            let dim = 1usize << n;
            let mut total = 0u64;
            for c in 0..dim {
                for r in c + 1..dim {
                    total += 2 * u64::from((r ^ c).count_ones()) - 1;
                }
            }
            assert_eq!(total, formula_conventional(n), "n={n}");
        }
    }

    #[test]
    fn column_count_recurrence() {
        let t3 = column_counts(3).unwrap();
        assert_eq!(t3, vec![13, 12, 11, 10, 5, 4, 1]);
        for n in 2..=7u32 {
            let t = column_counts(n).unwrap();
            assert_eq!(*t.last().unwrap(), 1);
            let total: u64 = t.iter().sum();
            assert_eq!(total - 2 * (pow2(n - 1) - 1), formula_poa(n), "n={n}");
            let measured = column_gate_counts(&OrderArray::poa(n as usize).unwrap(), true).unwrap();
            assert!(t.iter().zip(&measured).all(|(&a, &b)| a == b as u64), "n={n}");
        }
    }

    #[test]
    fn inter_column_cancellation_is_two_per_even_column() {
        for n in 2..=6 {
            for kind in [OrderKind::Conventional, OrderKind::Poa] {
                let got = inter_column_cancellations(&kind.build(n).unwrap()).unwrap();
                assert_eq!(got, 2 * ((1 << (n - 1)) - 1), "n={n} {kind:?}");
            }
        }
    }

    #[test]
    fn structural_count_is_input_independent() {
        let order = OrderArray::poa(3).unwrap();
        for seed in 0..3 {
            let d = two_level_decompose(&random_unitary(3, seed).unwrap(), &order).unwrap();
            let c = construct_circuit(&d, false).unwrap();
            assert_eq!(cancel_pass(&c).len(), count_structural(&order, true).unwrap());
        }
    }

    #[test]
    fn table_rows() {
        let rows: Vec<String> = (2..=7).map(|n| GateCounts::from_formulas(n).to_tsv()).collect();
        assert_eq!(rows[0], "2\t8\t8\t10");
        assert_eq!(rows[2], "4\t246\t378\t392");
        for n in 2..=5 {
            assert_eq!(GateCounts::enumerate(n).unwrap(), GateCounts::from_formulas(n));
        }
    }
}
