//! Depth-reducing rewrites.
//!
//! Every pass returns a [`PassResult`] whose circuit keeps the input's qubits
//! as its data register and appends fresh ancillae above them. Ancillae start
//! in `|0⟩` and are returned there. Gate lists are emitted in construction
//! order and layered by [`schedule_greedy`], so the reported depth is the
//! greedy depth of that order.

mod cnot;
mod compress;
mod fanin;
mod morse;
mod permute;

pub use cnot::cnot_parallelize;
pub use compress::diag_compress;
pub use fanin::{commuting_fanin_parallelize, diag_fanin_parallelize, fanout_parallelize, power_circuit, power_reference};
pub use morse::{morse_block, morse_synthesize, MORSE_MAX_N, PRUNE_EPS};
pub use permute::{permute_no_ancillae, permute_with_ancillae};

use crate::circuit::{schedule_greedy, Circuit, Gate, LayeredCircuit};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct PassResult {
    pub circuit: LayeredCircuit,
    pub ancillae_used: usize,
    /// Depth guaranteed by the construction for this input.
    pub claimed_depth_bound: usize,
    pub notes: Vec<String>,
}

impl PassResult {
    fn build(
        width_data: usize,
        ancillae_used: usize,
        global_phase: f64,
        gates: Vec<Gate>,
        claimed_depth_bound: usize,
        notes: Vec<String>,
    ) -> Result<Self> {
        let flat = Circuit {
            width_data,
            width_ancilla: ancillae_used,
            gates,
            global_phase,
        };
        let circuit = schedule_greedy(&flat)?;
        assert!(
            circuit.depth() <= claimed_depth_bound,
            "construction exceeded its depth bound: {} > {claimed_depth_bound}",
            circuit.depth()
        );
        Ok(Self {
            circuit,
            ancillae_used,
            claimed_depth_bound,
            notes,
        })
    }

    pub fn depth(&self) -> usize {
        self.circuit.depth()
    }

    /// The output as a flat gate list in layer order.
    pub fn flatten(&self) -> Circuit {
        self.circuit.flatten()
    }
}

/// `⌈log2 n⌉`, with `0` for `n ≤ 1`.
pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Hands out ancilla indices above the data register.
#[derive(Debug)]
struct Ancillae {
    base: usize,
    next: usize,
    high_water: usize,
}

impl Ancillae {
    fn new(base: usize) -> Self {
        Self {
            base,
            next: base,
            high_water: base,
        }
    }

    fn alloc(&mut self) -> usize {
        let a = self.next;
        self.next += 1;
        self.high_water = self.high_water.max(self.next);
        a
    }

    fn mark(&self) -> usize {
        self.next
    }

    /// Releases everything allocated after `mark`; callers guarantee those
    /// ancillae are back in `|0⟩`.
    fn release_to(&mut self, mark: usize) {
        self.next = mark;
    }

    fn used(&self) -> usize {
        self.high_water - self.base
    }
}

/// CNOT doubling tree: after the copy rounds, every wire in `copies` holds
/// the value of `copies[0]` (the root), entangled rather than cloned.
#[derive(Debug)]
struct CopyTree {
    copies: Vec<usize>,
    rounds: Vec<Vec<(usize, usize)>>,
}

impl CopyTree {
    /// `count` copies including the root; `⌈log2 count⌉` rounds.
    fn new(root: usize, count: usize, ancillae: &mut Ancillae) -> Self {
        let mut copies = vec![root];
        let mut rounds = Vec::new();
        while copies.len() < count {
            let have = copies.len();
            let round: Vec<(usize, usize)> = (0..have.min(count - have))
                .map(|i| (copies[i], ancillae.alloc()))
                .collect();
            copies.extend(round.iter().map(|&(_, a)| a));
            rounds.push(round);
        }
        Self { copies, rounds }
    }

    fn copy_gates(&self) -> impl Iterator<Item = Gate> + '_ {
        self.rounds.iter().flatten().map(|&(c, t)| Gate::cnot(c, t))
    }

    fn uncopy_gates(&self) -> impl Iterator<Item = Gate> + '_ {
        self.rounds.iter().rev().flatten().map(|&(c, t)| Gate::cnot(c, t))
    }
}

/// Copies a register `count` times with one tree per qubit, applies `gates`
/// with gate `i` reading copy `i` of the register, and uncopies.
///
/// Sound only when every gate is diagonal on the register qubits (or uses
/// them purely as controls): such gates see the computational-basis value
/// of the register, which all copies share.
fn fan_over_register(
    register: &[usize],
    gates: &[Gate],
    ancillae: &mut Ancillae,
) -> Vec<Gate> {
    let trees: Vec<CopyTree> = register
        .iter()
        .map(|&q| CopyTree::new(q, gates.len(), ancillae))
        .collect();
    let mut out: Vec<Gate> = trees.iter().flat_map(CopyTree::copy_gates).collect();
    for (i, gate) in gates.iter().enumerate() {
        out.push(gate.remap(|q| match register.iter().position(|&r| r == q) {
            Some(r) => trees[r].copies[i],
            None => q,
        }));
    }
    out.extend(trees.iter().flat_map(CopyTree::uncopy_gates));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_log2_values() {
        let expected = [0, 0, 1, 2, 2, 3, 3, 3, 3, 4];
        for (n, e) in expected.iter().enumerate() {
            assert_eq!(ceil_log2(n), *e, "n = {n}");
        }
        assert_eq!(ceil_log2(16), 4);
        assert_eq!(ceil_log2(17), 5);
    }

    #[test]
    fn copy_tree_round_count() {
        for count in 1..20 {
            let mut anc = Ancillae::new(100);
            let t = CopyTree::new(0, count, &mut anc);
            assert_eq!(t.copies.len(), count);
            assert_eq!(t.rounds.len(), ceil_log2(count));
            assert_eq!(anc.used(), count - 1);
            for round in &t.rounds {
                let mut seen = std::collections::HashSet::new();
                for &(c, a) in round {
                    assert!(seen.insert(c) && seen.insert(a));
                }
            }
        }
    }
}
