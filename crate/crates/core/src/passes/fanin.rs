//! Logarithmic-depth fan-out and fan-in through entangled copies.

use std::f64::consts::TAU;

use super::{ceil_log2, fan_over_register, Ancillae, PassResult};
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::linalg::complex::{angle_distance, mat2_adjoint, mat2_identity, mat2_max_diff, pauli_x};
use crate::linalg::{eig_unitary, simultaneous_diagonalize, ComplexMatrix, Mat2};

/// Residual below which a basis change is treated as the identity and elided.
const IDENTITY_EPS: f64 = 1e-14;

fn precondition(index: usize, msg: impl Into<String>) -> Error {
    Error::Precondition(format!("gate {index}: {}", msg.into()))
}

fn controlled_parts(gate: &Gate) -> Option<(usize, usize, Mat2)> {
    match gate {
        Gate::ControlledU { control, target, u } => Some((*control, *target, *u)),
        Gate::Cnot { control, target } => Some((*control, *target, pauli_x())),
        _ => None,
    }
}

/// `n` controlled gates on one control: fan the control out to `n` copies,
/// apply every gate at once from its own copy, uncopy.
/// Depth `2⌈log2 n⌉ + 1`, `n − 1` ancillae.
pub fn fanout_parallelize(circuit: &Circuit) -> Result<PassResult> {
    circuit.check()?;
    let width = circuit.total_width();
    let mut control = None;
    let mut targets = Vec::new();
    for (i, gate) in circuit.gates.iter().enumerate() {
        let (c, t, _) = controlled_parts(gate)
            .ok_or_else(|| precondition(i, format!("{} is not a controlled gate", gate.kind_name())))?;
        if *control.get_or_insert(c) != c {
            return Err(precondition(i, format!("control {c} differs from shared control {}", control.unwrap())));
        }
        if targets.contains(&t) {
            return Err(precondition(i, format!("target {t} repeated")));
        }
        targets.push(t);
    }
    let count = circuit.gates.len();
    let Some(control) = control else {
        return PassResult::build(width, 0, circuit.global_phase, Vec::new(), 0, vec!["empty input".into()]);
    };
    let mut ancillae = Ancillae::new(width);
    let gates = fan_over_register(&[control], &circuit.gates, &mut ancillae);
    let notes = vec![format!("control {control} fanned out to {count} copies")];
    PassResult::build(
        width,
        ancillae.used(),
        circuit.global_phase,
        gates,
        2 * ceil_log2(count) + 1,
        notes,
    )
}

/// Finds the qubit shared by every two-qubit gate and checks the others are
/// distinct from it and from each other.
fn shared_qubit(gates: &[(Vec<usize>, Vec<f64>)]) -> Result<usize> {
    let first = &gates[0].0;
    let shared = if gates.len() == 1 {
        first[0]
    } else {
        let second = &gates[1].0;
        match (second.contains(&first[0]), second.contains(&first[1])) {
            (true, false) => first[0],
            (false, true) => first[1],
            (true, true) => return Err(precondition(1, "acts on the same pair as gate 0")),
            (false, false) => return Err(precondition(1, "shares no qubit with gate 0")),
        }
    };
    let mut others = Vec::with_capacity(gates.len());
    for (i, (qubits, _)) in gates.iter().enumerate() {
        let Some(pos) = qubits.iter().position(|&q| q == shared) else {
            return Err(precondition(i, format!("does not touch the shared qubit {shared}")));
        };
        let other = qubits[1 - pos];
        if others.contains(&other) {
            return Err(precondition(i, format!("partner qubit {other} repeated")));
        }
        others.push(other);
    }
    Ok(shared)
}

/// `n` two-qubit diagonal gates sharing one qubit: copy the shared qubit,
/// apply `D_i` to (copy `i`, partner `i`) simultaneously, uncopy.
/// Depth `2⌈log2 n⌉ + 1`, `n − 1` ancillae.
pub fn diag_fanin_parallelize(circuit: &Circuit) -> Result<PassResult> {
    circuit.check()?;
    let width = circuit.total_width();
    let mut tables = Vec::with_capacity(circuit.gates.len());
    for (i, gate) in circuit.gates.iter().enumerate() {
        match gate.diagonal_table() {
            Some(t) if t.0.len() == 2 => tables.push(t),
            Some(_) => return Err(precondition(i, "diagonal gate does not act on exactly two qubits")),
            None => return Err(precondition(i, format!("{} is not diagonal", gate.kind_name()))),
        }
    }
    if tables.is_empty() {
        return PassResult::build(width, 0, circuit.global_phase, Vec::new(), 0, vec!["empty input".into()]);
    }
    let shared = shared_qubit(&tables)?;
    let count = tables.len();
    let mut ancillae = Ancillae::new(width);
    let gates = fan_over_register(&[shared], &circuit.gates, &mut ancillae);
    PassResult::build(
        width,
        ancillae.used(),
        circuit.global_phase,
        gates,
        2 * ceil_log2(count) + 1,
        vec![format!("shared qubit {shared} copied {count} ways")],
    )
}

fn is_identity_phase(phases: &[f64]) -> bool {
    phases.iter().all(|&p| angle_distance(p, 0.0) <= IDENTITY_EPS)
}

/// `n` controlled-`U_i` on one target with mutually commuting `U_i`: rotate
/// the target into the shared eigenbasis `T`, run the controlled diagonals
/// `diag(1, 1, d_i0, d_i1)` through the diagonal fan-in, rotate back.
/// Depth `2⌈log2 n⌉ + 3`, `n − 1` ancillae.
pub fn commuting_fanin_parallelize(circuit: &Circuit) -> Result<PassResult> {
    circuit.check()?;
    let width = circuit.total_width();
    let mut target = None;
    let mut controls = Vec::new();
    let mut us = Vec::new();
    for (i, gate) in circuit.gates.iter().enumerate() {
        let (c, t, u) = controlled_parts(gate)
            .ok_or_else(|| precondition(i, format!("{} is not a controlled gate", gate.kind_name())))?;
        if *target.get_or_insert(t) != t {
            return Err(precondition(i, format!("target {t} differs from shared target {}", target.unwrap())));
        }
        if controls.contains(&c) {
            return Err(precondition(i, format!("control {c} repeated")));
        }
        controls.push(c);
        us.push(u);
    }
    let Some(target) = target else {
        return PassResult::build(width, 0, circuit.global_phase, Vec::new(), 0, vec!["empty input".into()]);
    };
    let count = us.len();
    let (t, ds) = simultaneous_diagonalize(&us)?;
    let conjugate = mat2_max_diff(&t, &mat2_identity()) > IDENTITY_EPS;

    let mut notes = Vec::new();
    let mut diagonals = Vec::new();
    for (&c, d) in controls.iter().zip(&ds) {
        let phases = vec![0.0, 0.0, d[0].arg(), d[1].arg()];
        if is_identity_phase(&phases) {
            notes.push(format!("controlled identity from qubit {c} elided"));
            continue;
        }
        diagonals.push(Gate::Diagonal {
            qubits: vec![c, target],
            phases,
        });
    }
    let mut ancillae = Ancillae::new(width);
    let mut gates = Vec::new();
    if conjugate {
        gates.push(Gate::OneQubit { qubit: target, u: mat2_adjoint(&t) });
    } else {
        notes.push("family already diagonal; basis change elided".into());
    }
    if !diagonals.is_empty() {
        gates.extend(fan_over_register(&[target], &diagonals, &mut ancillae));
    }
    if conjugate {
        gates.push(Gate::OneQubit { qubit: target, u: t });
    }
    notes.push(format!("{count} commuting gates on target {target}"));
    PassResult::build(
        width,
        ancillae.used(),
        circuit.global_phase,
        gates,
        2 * ceil_log2(count) + 3,
        notes,
    )
}

fn basis_change(qubits: &[usize], m: ComplexMatrix) -> Gate {
    match m.to_mat2() {
        Some(u) => Gate::OneQubit { qubit: qubits[0], u },
        None => Gate::Unitary { qubits: qubits.to_vec(), u: m },
    }
}

/// `Σ_q |q⟩⟨q| ⊗ U^q` for a `k`-qubit control register holding `q` in binary
/// (qubit 0 most significant) and `U` on the following qubits.
///
/// With `U = T·D·T†`, control qubit `j` (weight `w = 2^{k−1−j}`) applies the
/// diagonal `D^w` to a private copy of the target register, all at once,
/// between a single `T†` and `T`.
pub fn power_circuit(u: &ComplexMatrix, k: usize) -> Result<PassResult> {
    if k == 0 {
        return Err(Error::Precondition("control register must have at least one qubit".into()));
    }
    let tq = u.num_qubits().ok_or(Error::NotPowerOfTwo(u.dim()))?;
    if tq == 0 {
        return Err(Error::Precondition("operator must act on at least one qubit".into()));
    }
    let (t, eigenvalues) = eig_unitary(u)?;
    let width = k + tq;
    let register: Vec<usize> = (k..width).collect();
    let conjugate = t.max_abs_diff(&ComplexMatrix::identity(u.dim())) > IDENTITY_EPS;

    let mut notes = Vec::new();
    let mut diagonals = Vec::new();
    for j in 0..k {
        let weight = 1u64 << (k - 1 - j);
        let mut phases = vec![0.0; 2 * u.dim()];
        for (slot, ev) in phases[u.dim()..].iter_mut().zip(&eigenvalues) {
            *slot = (ev.arg() * weight as f64).rem_euclid(TAU);
        }
        if is_identity_phase(&phases) {
            notes.push(format!("control {j}: U^{weight} is the identity, elided"));
            continue;
        }
        let mut qubits = vec![j];
        qubits.extend(&register);
        diagonals.push(Gate::Diagonal { qubits, phases });
    }

    let mut ancillae = Ancillae::new(width);
    let mut gates = Vec::new();
    if conjugate {
        gates.push(basis_change(&register, t.adjoint()));
    }
    let active = diagonals.len();
    if active > 0 {
        gates.extend(fan_over_register(&register, &diagonals, &mut ancillae));
    }
    if conjugate {
        gates.push(basis_change(&register, t));
    }
    let bound = if active == 0 && !conjugate {
        0
    } else {
        2 * usize::from(conjugate) + 2 * ceil_log2(k) + 1
    };
    notes.push(format!("{active} controlled powers over {tq}-qubit register copies"));
    PassResult::build(width, ancillae.used(), 0.0, gates, bound, notes)
}

/// Serial reference for [`power_circuit`]: one controlled-`U^{2^{k−1−j}}`
/// per control qubit, each as a dense gate.
pub fn power_reference(u: &ComplexMatrix, k: usize) -> Result<Circuit> {
    let tq = u.num_qubits().ok_or(Error::NotPowerOfTwo(u.dim()))?;
    let dim = u.dim();
    let mut c = Circuit::new(k + tq);
    for j in 0..k {
        let p = u.pow(1 << (k - 1 - j));
        let mut m = ComplexMatrix::identity(2 * dim);
        for r in 0..dim {
            for col in 0..dim {
                m.set(dim + r, dim + col, p.get(r, col));
            }
        }
        let mut qubits = vec![j];
        qubits.extend(k..k + tq);
        c.push(Gate::Unitary { qubits, u: m });
    }
    Ok(c)
}
