//! Synthesis of arbitrary diagonal operators from parity phases.
//!
//! A phase vector `ω` is expanded as `Σ_s θ_s μ_s`. Each non-empty subset
//! `s` becomes one block: a CNOT tree folds the parity of `s` onto its
//! lowest qubit, `diag(e^{iθ_s}, e^{−iθ_s})` acts there, and the tree is
//! undone. `θ_∅` is a global phase.

use super::{ceil_log2, PassResult};
use crate::circuit::Gate;
use crate::error::{Error, Result};
use crate::linalg::walsh::subset_qubits;
use crate::linalg::{walsh_coefficients, PhaseVector};

/// Largest register accepted; gate count grows as `2^n`.
pub const MORSE_MAX_N: usize = 10;
/// Coefficients at or below this magnitude are dropped.
pub const PRUNE_EPS: f64 = 1e-12;

/// Gates applying phase `+θ` where the qubits of `s` have even parity and
/// `−θ` where odd. Depth `2⌈log2 |s|⌉ + 1`, no ancillae.
pub fn morse_block(n: usize, s: usize, theta: f64) -> Vec<Gate> {
    let qubits = subset_qubits(n, s);
    let k = qubits.len();
    if k == 0 {
        return Vec::new();
    }
    let mut tree = Vec::with_capacity(k - 1);
    let mut stride = 1;
    while stride < k {
        for i in (0..k).step_by(2 * stride) {
            if i + stride < k {
                tree.push(Gate::cnot(qubits[i + stride], qubits[i]));
            }
        }
        stride *= 2;
    }
    let mut gates = tree.clone();
    gates.push(Gate::phase_diag(qubits[0], theta, -theta));
    gates.extend(tree.into_iter().rev());
    gates
}

pub fn morse_synthesize(pv: &PhaseVector) -> Result<PassResult> {
    let n = pv.num_qubits();
    if n > MORSE_MAX_N {
        return Err(Error::TooLarge {
            what: "parity-phase synthesis",
            requested: n,
            limit: MORSE_MAX_N,
        });
    }
    if n == 0 {
        return Err(Error::Precondition("phase vector needs at least one qubit".into()));
    }
    let coefficients = walsh_coefficients(pv);
    let global_phase = coefficients.get(0);
    let mut gates = Vec::new();
    let mut bound = 0;
    let mut blocks = 0;
    for (s, theta) in coefficients.iter() {
        if s == 0 || theta.abs() <= PRUNE_EPS {
            continue;
        }
        let size = s.count_ones() as usize;
        gates.extend(morse_block(n, s, theta));
        bound += 2 * ceil_log2(size) + 1;
        blocks += 1;
    }
    let notes = vec![format!("{blocks} parity blocks, global phase {global_phase:.6}")];
    PassResult::build(n, 0, global_phase, gates, bound, notes)
}
