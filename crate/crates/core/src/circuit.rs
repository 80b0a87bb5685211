//! Circuit intermediate representation and greedy layer scheduling.
//!
//! Qubits `0..width_data` carry data; ancillae occupy the high range
//! `width_data..width_data + width_ancilla`. Basis indices put qubit 0 in the
//! most significant bit, and the same holds for the local index of a
//! multi-qubit gate (its first listed qubit is the most significant).

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::complex::{self, mat2_is_diagonal, mat2_unitarity_deviation};
use crate::linalg::{ComplexMatrix, Gf2Matrix, Mat2, EPS_UNITARY};

/// Off-diagonal magnitude below which a matrix counts as diagonal.
pub const EPS_DIAGONAL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    OneQubit { qubit: usize, u: Mat2 },
    ControlledU { control: usize, target: usize, u: Mat2 },
    Cnot { control: usize, target: usize },
    /// `diag(1, 1, 1, e^{iθ})`.
    SymmetricPhase { q1: usize, q2: usize, theta: f64 },
    /// Arbitrary diagonal gate; `phases[k]` is applied to local basis state `k`.
    Diagonal { qubits: Vec<usize>, phases: Vec<f64> },
    /// Arbitrary unitary on a few qubits. Used for multi-qubit basis changes.
    Unitary { qubits: Vec<usize>, u: ComplexMatrix },
}

impl Gate {
    pub fn h(qubit: usize) -> Self {
        Gate::OneQubit {
            qubit,
            u: complex::hadamard(),
        }
    }

    pub fn x(qubit: usize) -> Self {
        Gate::OneQubit {
            qubit,
            u: complex::pauli_x(),
        }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::Cnot { control, target }
    }

    /// One-qubit `diag(e^{iθ0}, e^{iθ1})`.
    pub fn phase_diag(qubit: usize, theta0: f64, theta1: f64) -> Self {
        Gate::OneQubit {
            qubit,
            u: complex::mat2_diag(
                complex::C64::from_polar(1.0, theta0),
                complex::C64::from_polar(1.0, theta1),
            ),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Gate::OneQubit { .. } => "one_qubit",
            Gate::ControlledU { .. } => "controlled_u",
            Gate::Cnot { .. } => "cnot",
            Gate::SymmetricPhase { .. } => "symmetric_phase",
            Gate::Diagonal { .. } => "diagonal",
            Gate::Unitary { .. } => "unitary",
        }
    }

    /// Qubit support in the gate's own order.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::OneQubit { qubit, .. } => vec![*qubit],
            Gate::ControlledU { control, target, .. } | Gate::Cnot { control, target } => {
                vec![*control, *target]
            }
            Gate::SymmetricPhase { q1, q2, .. } => vec![*q1, *q2],
            Gate::Diagonal { qubits, .. } | Gate::Unitary { qubits, .. } => qubits.clone(),
        }
    }

    /// Same gate with every qubit index passed through `f`.
    pub fn remap(&self, f: impl Fn(usize) -> usize) -> Gate {
        match self {
            Gate::OneQubit { qubit, u } => Gate::OneQubit { qubit: f(*qubit), u: *u },
            Gate::ControlledU { control, target, u } => Gate::ControlledU {
                control: f(*control),
                target: f(*target),
                u: *u,
            },
            Gate::Cnot { control, target } => Gate::Cnot {
                control: f(*control),
                target: f(*target),
            },
            Gate::SymmetricPhase { q1, q2, theta } => Gate::SymmetricPhase {
                q1: f(*q1),
                q2: f(*q2),
                theta: *theta,
            },
            Gate::Diagonal { qubits, phases } => Gate::Diagonal {
                qubits: qubits.iter().map(|&q| f(q)).collect(),
                phases: phases.clone(),
            },
            Gate::Unitary { qubits, u } => Gate::Unitary {
                qubits: qubits.iter().map(|&q| f(q)).collect(),
                u: u.clone(),
            },
        }
    }

    /// For gates diagonal in the computational basis, the qubit list and the
    /// local phase table (first qubit most significant). `None` otherwise.
    pub fn diagonal_table(&self) -> Option<(Vec<usize>, Vec<f64>)> {
        match self {
            Gate::OneQubit { qubit, u } if mat2_is_diagonal(u, EPS_DIAGONAL) => {
                Some((vec![*qubit], vec![u[0][0].arg(), u[1][1].arg()]))
            }
            Gate::ControlledU { control, target, u } if mat2_is_diagonal(u, EPS_DIAGONAL) => Some((
                vec![*control, *target],
                vec![0.0, 0.0, u[0][0].arg(), u[1][1].arg()],
            )),
            Gate::SymmetricPhase { q1, q2, theta } => Some((vec![*q1, *q2], vec![0.0, 0.0, 0.0, *theta])),
            Gate::Diagonal { qubits, phases } => Some((qubits.clone(), phases.clone())),
            Gate::Unitary { qubits, u } if u.is_diagonal(EPS_DIAGONAL) => Some((
                qubits.clone(),
                u.diagonal().iter().map(|z| z.arg()).collect(),
            )),
            _ => None,
        }
    }

    pub fn is_diagonal(&self) -> bool {
        self.diagonal_table().is_some()
    }

    /// Local unitary matrix of the gate (dimension `2^k` for `k` qubits).
    pub fn matrix(&self) -> ComplexMatrix {
        use complex::{C64, ONE, ZERO};
        match self {
            Gate::OneQubit { u, .. } => ComplexMatrix::from_mat2(u),
            Gate::ControlledU { u, .. } => {
                let mut m = ComplexMatrix::identity(4);
                for i in 0..2 {
                    for j in 0..2 {
                        m.set(2 + i, 2 + j, u[i][j]);
                    }
                }
                m
            }
            Gate::Cnot { .. } => {
                let mut m = ComplexMatrix::identity(4);
                m.set(2, 2, ZERO);
                m.set(3, 3, ZERO);
                m.set(2, 3, ONE);
                m.set(3, 2, ONE);
                m
            }
            Gate::SymmetricPhase { theta, .. } => {
                ComplexMatrix::from_diagonal(&[ONE, ONE, ONE, C64::from_polar(1.0, *theta)])
            }
            Gate::Diagonal { phases, .. } => ComplexMatrix::from_diagonal(
                &phases.iter().map(|&p| C64::from_polar(1.0, p)).collect::<Vec<_>>(),
            ),
            Gate::Unitary { u, .. } => u.clone(),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::OneQubit { qubit, .. } => write!(f, "U({qubit})"),
            Gate::ControlledU { control, target, .. } => write!(f, "CU({control}->{target})"),
            Gate::Cnot { control, target } => write!(f, "CNOT({control}->{target})"),
            Gate::SymmetricPhase { q1, q2, theta } => write!(f, "CP({q1},{q2};{theta:.4})"),
            Gate::Diagonal { qubits, .. } => write!(f, "D{qubits:?}"),
            Gate::Unitary { qubits, .. } => write!(f, "U{qubits:?}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub width_data: usize,
    pub width_ancilla: usize,
    pub gates: Vec<Gate>,
    pub global_phase: f64,
}

impl Circuit {
    pub fn new(width_data: usize) -> Self {
        Self::with_ancillae(width_data, 0)
    }

    pub fn with_ancillae(width_data: usize, width_ancilla: usize) -> Self {
        Self {
            width_data,
            width_ancilla,
            gates: Vec::new(),
            global_phase: 0.0,
        }
    }

    pub fn from_gates(width_data: usize, gates: Vec<Gate>) -> Self {
        Self {
            gates,
            ..Self::new(width_data)
        }
    }

    pub fn total_width(&self) -> usize {
        self.width_data + self.width_ancilla
    }

    pub fn push(&mut self, gate: Gate) -> &mut Self {
        self.gates.push(gate);
        self
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn validate(&self) -> Vec<Violation> {
        validate(self)
    }

    /// Fails with the joined violation list if the circuit is invalid.
    pub fn check(&self) -> Result<()> {
        let v = validate(self);
        if v.is_empty() {
            Ok(())
        } else {
            let msgs: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            Err(Error::InvalidCircuit(msgs.join("; ")))
        }
    }
}

/// One broken invariant found by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub gate: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Checks every structural invariant of a circuit and lists what is broken.
pub fn validate(circuit: &Circuit) -> Vec<Violation> {
    let mut out = Vec::new();
    if circuit.width_data == 0 {
        out.push(Violation {
            gate: None,
            message: "width_data must be at least 1".into(),
        });
    }
    if !circuit.global_phase.is_finite() {
        out.push(Violation {
            gate: None,
            message: "global phase is not finite".into(),
        });
    }
    let total = circuit.total_width();
    for (i, gate) in circuit.gates.iter().enumerate() {
        let mut report = |message: String| out.push(Violation { gate: Some(i), message });
        let qubits = gate.qubits();
        if qubits.is_empty() {
            report(format!("empty qubit list at gate {i}"));
        }
        for (a, &q) in qubits.iter().enumerate() {
            if q >= total {
                report(format!("qubit index {q} out of range at gate {i}"));
            }
            if qubits[..a].contains(&q) {
                report(format!("duplicate qubit index at gate {i}"));
            }
        }
        match gate {
            Gate::OneQubit { u, .. } | Gate::ControlledU { u, .. } => {
                let dev = mat2_unitarity_deviation(u);
                if !(dev <= EPS_UNITARY) {
                    report(format!("non-unitary at gate {i}"));
                }
            }
            Gate::SymmetricPhase { theta, .. } if !theta.is_finite() => {
                report(format!("non-finite angle at gate {i}"));
            }
            Gate::Diagonal { qubits, phases } => {
                let expected = 1usize.checked_shl(qubits.len() as u32).unwrap_or(0);
                if phases.len() != expected {
                    report(format!(
                        "diagonal phase list has length {}, expected {expected} at gate {i}",
                        phases.len()
                    ));
                }
                if phases.iter().any(|p| !p.is_finite()) {
                    report(format!("non-finite angle at gate {i}"));
                }
            }
            Gate::Unitary { qubits, u } => {
                if Some(u.dim()) != 1usize.checked_shl(qubits.len() as u32) {
                    report(format!(
                        "unitary of dimension {} does not match {} qubits at gate {i}",
                        u.dim(),
                        qubits.len()
                    ));
                } else if !(u.unitarity_deviation() <= EPS_UNITARY) {
                    report(format!("non-unitary at gate {i}"));
                }
            }
            _ => {}
        }
    }
    out
}

/// A circuit partitioned into layers of qubit-disjoint gates.
#[derive(Clone, Debug, PartialEq)]
pub struct LayeredCircuit {
    pub width_data: usize,
    pub width_ancilla: usize,
    pub global_phase: f64,
    pub layers: Vec<Vec<Gate>>,
}

impl LayeredCircuit {
    /// Builds a layered circuit, checking validity and per-layer disjointness.
    pub fn from_layers(
        width_data: usize,
        width_ancilla: usize,
        global_phase: f64,
        layers: Vec<Vec<Gate>>,
    ) -> Result<Self> {
        let lc = Self {
            width_data,
            width_ancilla,
            global_phase,
            layers,
        };
        lc.flatten().check()?;
        for (l, layer) in lc.layers.iter().enumerate() {
            let mut seen = vec![false; lc.total_width()];
            for g in layer {
                for q in g.qubits() {
                    if std::mem::replace(&mut seen[q], true) {
                        return Err(Error::InvalidCircuit(format!(
                            "qubit {q} used twice in layer {l}"
                        )));
                    }
                }
            }
        }
        Ok(lc)
    }

    pub fn total_width(&self) -> usize {
        self.width_data + self.width_ancilla
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn flatten(&self) -> Circuit {
        Circuit {
            width_data: self.width_data,
            width_ancilla: self.width_ancilla,
            gates: self.layers.iter().flatten().cloned().collect(),
            global_phase: self.global_phase,
        }
    }
}

/// Number of layers.
pub fn depth(layered: &LayeredCircuit) -> usize {
    layered.depth()
}

/// As-soon-as-possible layering: each gate goes one layer after the latest
/// earlier gate it shares a qubit with.
pub fn schedule_greedy(circuit: &Circuit) -> Result<LayeredCircuit> {
    circuit.check()?;
    let mut next_free = vec![0usize; circuit.total_width()];
    let mut layers: Vec<Vec<Gate>> = Vec::new();
    for gate in &circuit.gates {
        let qubits = gate.qubits();
        let level = qubits.iter().map(|&q| next_free[q]).max().unwrap_or(0);
        if level == layers.len() {
            layers.push(Vec::new());
        }
        layers[level].push(gate.clone());
        for q in qubits {
            next_free[q] = level + 1;
        }
    }
    Ok(LayeredCircuit {
        width_data: circuit.width_data,
        width_ancilla: circuit.width_ancilla,
        global_phase: circuit.global_phase,
        layers,
    })
}

/// A permutation of `n` wires: the state on wire `i` moves to wire `images[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("empty permutation".into()));
        }
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n {
                return Err(Error::InvalidPermutation(format!("image {v} out of range 0..{n}")));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPermutation(format!("image {v} appears twice")));
            }
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Self { images: inv }
    }

    /// Disjoint cycles of length ≥ 2, each listed as `c0 → c1 → …`.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.images[i];
            }
            out.push(cycle);
        }
        out
    }

    /// The GF(2) map of the permutation: `M[images[i]][i] = 1`.
    pub fn to_gf2(&self) -> Gf2Matrix {
        let mut m = Gf2Matrix::zeros(self.len());
        for (i, &v) in self.images.iter().enumerate() {
            m.set(v, i, true);
        }
        m
    }

    pub fn from_gf2(m: &Gf2Matrix) -> Result<Self> {
        let images = m
            .as_permutation()
            .ok_or_else(|| Error::InvalidPermutation("matrix is not a permutation matrix".into()))?;
        Self::new(images)
    }

    /// Serial realization as a chain of three-CNOT swaps, one swap at a time.
    pub fn to_swap_circuit(&self) -> Circuit {
        let n = self.len();
        let mut circuit = Circuit::new(n);
        // occupant[w]: original wire whose state currently sits on wire w
        let mut occupant: Vec<usize> = (0..n).collect();
        let mut position: Vec<usize> = (0..n).collect();
        let inv = self.inverse();
        for w in 0..n {
            let wanted = inv.images[w];
            let at = position[wanted];
            if at != w {
                circuit.gates.extend(swap_gates(at, w));
                let displaced = occupant[w];
                occupant.swap(at, w);
                position[wanted] = w;
                position[displaced] = at;
            }
        }
        circuit
    }
}

/// The three CNOTs exchanging two wires.
pub fn swap_gates(a: usize, b: usize) -> [Gate; 3] {
    [Gate::cnot(a, b), Gate::cnot(b, a), Gate::cnot(a, b)]
}
