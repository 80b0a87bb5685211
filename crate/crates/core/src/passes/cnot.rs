//! Logarithmic-depth rewriting of CNOT circuits.
//!
//! A CNOT circuit is the linear map `q ↦ Mq` over GF(2). The rewrite
//! computes `Mq` onto fresh output wires with XOR trees, computes
//! `M⁻¹(Mq) = q` from those outputs with a second set of trees to clear the
//! inputs, and swaps the outputs back onto the data wires.

use super::{ceil_log2, Ancillae, CopyTree, PassResult};
use crate::circuit::{Circuit, Gate};
use crate::error::Result;
use crate::linalg::{gf2_invert, Gf2Matrix};
use crate::sim::gf2_simulate;

/// Depth of one XOR stage with fan-out `r` and row weight `s`.
fn stage_depth(r: usize, s: usize) -> usize {
    let tree = if s >= 2 { 4 * ceil_log2(s) - 2 } else { 1 };
    2 * ceil_log2(r) + tree
}

/// Gates computing `targets[i] ^= ⊕_j rows[i][j] · sources[j]`, with the
/// scratch ancillae returned to `|0⟩`. Each row sums private copies of its
/// sources in a balanced tree of fresh nodes; the last pair XORs straight
/// into the target.
fn xor_stage(sources: &[usize], rows: &Gf2Matrix, targets: &[usize], ancillae: &mut Ancillae) -> Vec<Gate> {
    let n = sources.len();
    let trees: Vec<CopyTree> = (0..n)
        .map(|j| CopyTree::new(sources[j], rows.column_weight(j).max(1), ancillae))
        .collect();
    let mut next_copy = vec![0usize; n];
    let mut build = Vec::new();
    let mut unbuild: Vec<Vec<Gate>> = Vec::new();
    for (i, &target) in targets.iter().enumerate() {
        let mut level: Vec<usize> = rows
            .row_support(i)
            .into_iter()
            .map(|j| {
                let copy = trees[j].copies[next_copy[j]];
                next_copy[j] += 1;
                copy
            })
            .collect();
        if level.len() == 1 {
            build.push(Gate::cnot(level[0], target));
            continue;
        }
        let mut interior = Vec::new();
        while level.len() > 2 {
            let mut up = Vec::with_capacity(level.len().div_ceil(2));
            for pair in level.chunks(2) {
                match *pair {
                    [a, b] => {
                        let node = ancillae.alloc();
                        build.push(Gate::cnot(a, node));
                        build.push(Gate::cnot(b, node));
                        interior.push(Gate::cnot(a, node));
                        interior.push(Gate::cnot(b, node));
                        up.push(node);
                    }
                    [a] => up.push(a),
                    _ => unreachable!(),
                }
            }
            level = up;
        }
        build.push(Gate::cnot(level[0], target));
        build.push(Gate::cnot(level[1], target));
        unbuild.push(interior);
    }
    let mut gates: Vec<Gate> = trees.iter().flat_map(CopyTree::copy_gates).collect();
    gates.extend(build);
    // each row's nodes are cleared in reverse creation order
    gates.extend(unbuild.into_iter().flat_map(|g| g.into_iter().rev()));
    gates.extend(trees.iter().flat_map(CopyTree::uncopy_gates));
    gates
}

fn max_weights(m: &Gf2Matrix) -> (usize, usize) {
    let n = m.dim();
    let r = (0..n).map(|j| m.column_weight(j)).max().unwrap_or(0);
    let s = (0..n).map(|i| m.row_weight(i)).max().unwrap_or(0);
    (r, s)
}

/// Rewrites a CNOT-only circuit on `n` wires into depth
/// `O(log n)` using `O(n²)` ancillae.
pub fn cnot_parallelize(circuit: &Circuit) -> Result<PassResult> {
    let m = gf2_simulate(circuit)?;
    let n = m.dim();
    if m.is_identity() {
        let notes = vec!["linear map is the identity; no gates emitted".into()];
        return PassResult::build(n, 0, circuit.global_phase, Vec::new(), 0, notes);
    }
    let m_inv = gf2_invert(&m)?;
    let (r, s) = max_weights(&m);
    let (r_inv, s_inv) = max_weights(&m_inv);

    let mut ancillae = Ancillae::new(n);
    let outputs: Vec<usize> = (0..n).map(|_| ancillae.alloc()).collect();
    let data: Vec<usize> = (0..n).collect();
    let scratch = ancillae.mark();

    let mut gates = xor_stage(&data, &m, &outputs, &mut ancillae);
    ancillae.release_to(scratch);
    gates.extend(xor_stage(&outputs, &m_inv, &data, &mut ancillae));
    // data wires are zero here; swapping needs only two layers
    gates.extend((0..n).map(|i| Gate::cnot(outputs[i], i)));
    gates.extend((0..n).map(|i| Gate::cnot(i, outputs[i])));

    let bound = stage_depth(r, s) + stage_depth(r_inv, s_inv) + 2;
    let notes = vec![format!(
        "max column/row weight {r}/{s} forward, {r_inv}/{s_inv} inverse"
    )];
    PassResult::build(n, ancillae.used(), circuit.global_phase, gates, bound, notes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::verify_embedding_gf2;

    fn staircase(n: usize) -> Circuit {
        Circuit::from_gates(n, (0..n - 1).map(|i| Gate::cnot(i, i + 1)).collect())
    }

    #[test]
    fn single_cnot_map() {
        let c = Circuit::from_gates(2, vec![Gate::cnot(0, 1)]);
        let r = cnot_parallelize(&c).unwrap();
        let expected = Gf2Matrix::from_rows(&[vec![1, 0], vec![1, 1]]).unwrap();
        let out = gf2_simulate(&r.flatten()).unwrap();
        assert_eq!(out.leading_block(2), expected);
        assert!(verify_embedding_gf2(&c, &r.flatten()).unwrap().pass);
    }

    #[test]
    fn empty_circuit_is_empty() {
        let r = cnot_parallelize(&Circuit::new(3)).unwrap();
        assert_eq!((r.depth(), r.ancillae_used), (0, 0));
    }

    #[test]
    fn staircases_grow_slowly() {
        let r4 = cnot_parallelize(&staircase(4)).unwrap();
        let r8 = cnot_parallelize(&staircase(8)).unwrap();
        assert!(verify_embedding_gf2(&staircase(4), &r4.flatten()).unwrap().pass);
        assert!(verify_embedding_gf2(&staircase(8), &r8.flatten()).unwrap().pass);
        assert!(r8.depth() <= r4.depth() + 12, "{} vs {}", r8.depth(), r4.depth());
    }

    #[test]
    fn rejects_non_cnot_gates() {
        let c = Circuit::from_gates(2, vec![Gate::h(0)]);
        assert!(cnot_parallelize(&c).is_err());
    }

    #[test]
    fn stage_depths() {
        assert_eq!(stage_depth(1, 1), 1);
        assert_eq!(stage_depth(2, 2), 2 + 2);
        assert_eq!(stage_depth(4, 8), 4 + 10);
    }
}
