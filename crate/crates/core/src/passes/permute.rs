//! Wire permutations in constant depth.

use super::PassResult;
use crate::circuit::{swap_gates, Gate, Permutation};
use crate::error::Result;

/// Four CNOT layers with `n` ancillae: copy each moved wire into its
/// ancilla, clear the wire from the ancilla, copy the ancilla onto the
/// destination wire, and clear the ancilla from the destination.
///
/// Fixed points are left alone; the identity needs no gates.
pub fn permute_with_ancillae(p: &Permutation) -> Result<PassResult> {
    let n = p.len();
    let moved: Vec<usize> = (0..n).filter(|&i| p.image(i) != i).collect();
    let anc = |i: usize| n + i;
    let mut gates = Vec::with_capacity(4 * moved.len());
    gates.extend(moved.iter().map(|&i| Gate::cnot(i, anc(i))));
    gates.extend(moved.iter().map(|&i| Gate::cnot(anc(i), i)));
    gates.extend(moved.iter().map(|&i| Gate::cnot(anc(i), p.image(i))));
    gates.extend(moved.iter().map(|&i| Gate::cnot(p.image(i), anc(i))));

    let mut notes = vec![format!("{} of {n} wires moved", moved.len())];
    if moved.is_empty() {
        notes.push("all fixed points elided".into());
    }
    let bound = if moved.is_empty() { 0 } else { 4 };
    PassResult::build(n, n, 0.0, gates, bound, notes)
}

/// Six CNOT layers, no ancillae.
///
/// Each cycle `c0 → c1 → … → c(L−1)` is the product of two reflections of
/// its positions, `k ↦ −k` followed by `k ↦ 1 − k` (mod L). A reflection is a
/// set of disjoint transpositions, and each transposition is a three-CNOT
/// swap, so each reflection takes three layers across all cycles at once.
pub fn permute_no_ancillae(p: &Permutation) -> Result<PassResult> {
    let n = p.len();
    let cycles = p.cycles();
    let mut first = Vec::new();
    let mut second = Vec::new();
    for cycle in &cycles {
        let len = cycle.len();
        for k in 1..len {
            let r = len - k;
            if k < r {
                first.push((cycle[k], cycle[r]));
            }
        }
        for k in 0..len {
            let r = (len + 1 - k) % len;
            if k < r {
                second.push((cycle[k], cycle[r]));
            }
        }
    }
    let mut gates = Vec::new();
    for &(a, b) in first.iter().chain(&second) {
        gates.extend(swap_gates(a, b));
    }
    let bound = match (first.is_empty(), second.is_empty()) {
        (true, true) => 0,
        (false, false) => 6,
        _ => 3,
    };
    let notes = vec![format!(
        "{} cycles; {} + {} disjoint swaps",
        cycles.len(),
        first.len(),
        second.len()
    )];
    PassResult::build(n, 0, 0.0, gates, bound, notes)
}
