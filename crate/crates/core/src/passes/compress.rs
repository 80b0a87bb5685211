//! Merging and packing of commuting diagonal gates.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use super::{ceil_log2, Ancillae, CopyTree, PassResult};
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::linalg::angle_distance;

/// Phase spread below which a merged table is a pure global phase.
const CONSTANT_EPS: f64 = 1e-12;

/// Re-expresses a phase table over `qubits` on the ascending order of the
/// same qubits.
fn sorted_table(qubits: &[usize], phases: &[f64]) -> (Vec<usize>, Vec<f64>) {
    let k = qubits.len();
    let mut sorted = qubits.to_vec();
    sorted.sort_unstable();
    // bit position (from the top) of sorted[b] in the original local index
    let origin: Vec<usize> = sorted
        .iter()
        .map(|q| qubits.iter().position(|p| p == q).expect("same set"))
        .collect();
    let table = (0..1usize << k)
        .map(|local| {
            let original = (0..k).fold(0, |acc, b| {
                let bit = local >> (k - 1 - b) & 1;
                acc | bit << (k - 1 - origin[b])
            });
            phases[original]
        })
        .collect();
    (sorted, table)
}

/// Merges a circuit of diagonal gates into one gate per occupied qubit
/// tuple (phases summed, reduced mod 2π) and packs the merged gates into
/// layers by first-fit.
///
/// Tables that are constant are folded into the global phase. With
/// `log_depth`, each qubit is instead copied once per tuple that uses it so
/// every merged gate runs in a single layer between the copy and uncopy
/// trees: depth `2⌈log2 Δ⌉ + 1` where `Δ` is the largest number of tuples
/// sharing a qubit.
pub fn diag_compress(circuit: &Circuit, log_depth: bool) -> Result<PassResult> {
    circuit.check()?;
    let width = circuit.total_width();
    let mut merged: BTreeMap<Vec<usize>, Vec<f64>> = BTreeMap::new();
    for (index, gate) in circuit.gates.iter().enumerate() {
        let (qubits, phases) = gate.diagonal_table().ok_or_else(|| Error::UnsupportedGate {
            index,
            kind: gate.kind_name(),
            reason: "non-diagonal gate present".into(),
        })?;
        let (key, table) = sorted_table(&qubits, &phases);
        let acc = merged.entry(key).or_insert_with(|| vec![0.0; table.len()]);
        acc.iter_mut().zip(&table).for_each(|(a, p)| *a += p);
    }

    let mut global_phase = circuit.global_phase;
    let mut tuples: Vec<(Vec<usize>, Vec<f64>)> = Vec::new();
    let mut folded = 0;
    for (qubits, phases) in merged {
        let phases: Vec<f64> = phases.iter().map(|p| p.rem_euclid(TAU)).collect();
        if phases.iter().all(|&p| angle_distance(p, phases[0]) <= CONSTANT_EPS) {
            global_phase += phases[0];
            folded += 1;
            continue;
        }
        tuples.push((qubits, phases));
    }

    let mut per_qubit = vec![0usize; width];
    for (qubits, _) in &tuples {
        qubits.iter().for_each(|&q| per_qubit[q] += 1);
    }
    let max_share = per_qubit.iter().copied().max().unwrap_or(0);
    let max_arity = tuples.iter().map(|(q, _)| q.len()).max().unwrap_or(0);

    let mut notes = vec![format!(
        "{} gates merged into {} tuples ({folded} constant tables folded into the global phase)",
        circuit.gates.len(),
        tuples.len()
    )];

    if log_depth && !tuples.is_empty() {
        let mut ancillae = Ancillae::new(width);
        let trees: Vec<Option<CopyTree>> = per_qubit
            .iter()
            .enumerate()
            .map(|(q, &c)| (c > 0).then(|| CopyTree::new(q, c, &mut ancillae)))
            .collect();
        let mut next_copy = vec![0usize; width];
        let mut gates: Vec<Gate> = trees.iter().flatten().flat_map(CopyTree::copy_gates).collect();
        for (qubits, phases) in &tuples {
            let mapped = qubits
                .iter()
                .map(|&q| {
                    let tree = trees[q].as_ref().expect("qubit in a tuple has a tree");
                    let copy = tree.copies[next_copy[q]];
                    next_copy[q] += 1;
                    copy
                })
                .collect();
            gates.push(Gate::Diagonal { qubits: mapped, phases: phases.clone() });
        }
        gates.extend(trees.iter().flatten().flat_map(CopyTree::uncopy_gates));
        notes.push(format!(
            "log-depth variant: each qubit copied once per tuple using it (up to {max_share} copies), \
             all merged gates in one layer"
        ));
        return PassResult::build(
            width,
            ancillae.used(),
            global_phase,
            gates,
            2 * ceil_log2(max_share) + 1,
            notes,
        );
    }

    // first-fit packing of tuples into qubit-disjoint layers
    let mut layers: Vec<(Vec<bool>, Vec<Gate>)> = Vec::new();
    for (qubits, phases) in tuples.iter() {
        let gate = Gate::Diagonal { qubits: qubits.clone(), phases: phases.clone() };
        match layers.iter_mut().find(|(busy, _)| qubits.iter().all(|&q| !busy[q])) {
            Some((busy, gates)) => {
                qubits.iter().for_each(|&q| busy[q] = true);
                gates.push(gate);
            }
            None => {
                let mut busy = vec![false; width];
                qubits.iter().for_each(|&q| busy[q] = true);
                layers.push((busy, vec![gate]));
            }
        }
    }
    let gates: Vec<Gate> = layers.into_iter().flat_map(|(_, g)| g).collect();
    // first-fit uses at most (conflict degree + 1) layers
    let bound = if tuples.is_empty() {
        0
    } else {
        tuples.len().min(max_arity * (max_share - 1) + 1)
    };
    PassResult::build(width, 0, global_phase, gates, bound, notes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::phase_vector;

    #[test]
    fn same_pair_phases_add() {
        let c = Circuit::from_gates(
            2,
            vec![
                Gate::Diagonal { qubits: vec![0, 1], phases: vec![0.1, 0.2, 0.3, 0.4] },
                Gate::Diagonal { qubits: vec![0, 1], phases: vec![1.0, 2.0, 3.0, 4.0] },
            ],
        );
        let r = diag_compress(&c, false).unwrap();
        let flat = r.flatten();
        assert_eq!(flat.len(), 1);
        match &flat.gates[0] {
            Gate::Diagonal { phases, .. } => {
                let expected = [1.1, 2.2, 3.3, 4.4];
                for (p, e) in phases.iter().zip(expected) {
                    assert!((p - e).abs() < 1e-12);
                }
            }
            g => panic!("unexpected {g:?}"),
        }
    }

    #[test]
    fn reversed_qubit_order_is_normalized() {
        let c = Circuit::from_gates(
            2,
            vec![
                Gate::Diagonal { qubits: vec![1, 0], phases: vec![0.0, 0.5, 0.0, 0.0] },
                Gate::Diagonal { qubits: vec![0, 1], phases: vec![0.0, 0.0, 0.25, 0.0] },
            ],
        );
        let r = diag_compress(&c, false).unwrap();
        assert_eq!(r.flatten().len(), 1);
        let expected = phase_vector(&c).unwrap();
        assert!(phase_vector(&r.flatten()).unwrap().max_circle_distance(&expected) < 1e-12);
    }

    #[test]
    fn complete_graph_on_four_packs_into_three_layers() {
        let mut gates = Vec::new();
        for a in 0..4 {
            for b in a + 1..4 {
                gates.push(Gate::SymmetricPhase { q1: a, q2: b, theta: 0.1 + a as f64 });
            }
        }
        let c = Circuit::from_gates(4, gates);
        let r = diag_compress(&c, false).unwrap();
        assert_eq!(r.flatten().len(), 6);
        assert_eq!(r.depth(), 3);
    }

    #[test]
    fn log_depth_variant_is_one_merged_layer() {
        let mut gates = Vec::new();
        for a in 0..4 {
            for b in a + 1..4 {
                gates.push(Gate::SymmetricPhase { q1: a, q2: b, theta: 0.3 });
            }
        }
        let c = Circuit::from_gates(4, gates);
        let r = diag_compress(&c, true).unwrap();
        // each qubit is in 3 tuples: 2 copy rounds, 1 gate layer, 2 uncopy rounds
        assert_eq!(r.depth(), 5);
        assert_eq!(r.ancillae_used, 4 * 2);
    }

    #[test]
    fn non_diagonal_gate_is_rejected() {
        let c = Circuit::from_gates(2, vec![Gate::h(0)]);
        assert!(matches!(
            diag_compress(&c, false),
            Err(Error::UnsupportedGate { index: 0, .. })
        ));
    }

    #[test]
    fn constant_tables_become_global_phase() {
        let c = Circuit::from_gates(1, vec![Gate::phase_diag(0, 0.4, 0.4)]);
        let r = diag_compress(&c, false).unwrap();
        assert_eq!(r.depth(), 0);
        assert!((r.circuit.global_phase - 0.4).abs() < 1e-12);
    }
}
