//! The JSON circuit interchange format.
//!
//! ```json
//! {
//!   "format_version": "1",
//!   "width_data": 2,
//!   "width_ancilla": 0,
//!   "global_phase": 0.0,
//!   "gates": [
//!     {"kind": "one_qubit", "qubits": [0], "params": {"matrix": [[[0.7071067811865476, 0.0], ...]]}},
//!     {"kind": "cnot", "qubits": [0, 1]}
//!   ]
//! }
//! ```
//!
//! Complex numbers are `[re, im]` pairs and angles are radians. Unknown
//! fields are rejected. Floats are written in shortest round-trip form, so
//! serialization is lossless.

use serde::{Deserialize, Serialize};
use shallowq::linalg::{ComplexMatrix, Mat2, C64};
use shallowq::{Circuit, Gate, LayeredCircuit};

pub const FORMAT_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitFile {
    pub format_version: String,
    pub width_data: usize,
    #[serde(default)]
    pub width_ancilla: usize,
    #[serde(default)]
    pub global_phase: f64,
    pub gates: Vec<GateRecord>,
    /// Sizes of consecutive layers when `gates` is stored in layer order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layer_sizes: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateRecord {
    pub kind: String,
    pub qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Params::is_empty")]
    pub params: Params,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases: Option<Vec<f64>>,
}

impl Params {
    fn is_empty(&self) -> bool {
        self.matrix.is_none() && self.theta.is_none() && self.phases.is_none()
    }
}

#[derive(Debug, PartialEq)]
pub struct FormatError(pub String);

impl std::fmt::Display for FormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for FormatError {}

fn fail<T>(msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError(msg.into()))
}

fn encode_matrix(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    m.rows()
        .iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn decode_matrix(rows: &[Vec<[f64; 2]>]) -> Result<ComplexMatrix, FormatError> {
    let rows: Vec<Vec<C64>> = rows
        .iter()
        .map(|row| row.iter().map(|&[re, im]| C64::new(re, im)).collect())
        .collect();
    ComplexMatrix::from_rows(&rows).map_err(|e| FormatError(e.to_string()))
}

fn encode_mat2(u: &Mat2) -> Vec<Vec<[f64; 2]>> {
    encode_matrix(&ComplexMatrix::from_mat2(u))
}

fn decode_mat2(index: usize, params: &Params) -> Result<Mat2, FormatError> {
    let Some(rows) = &params.matrix else {
        return fail(format!("gate {index}: missing params.matrix"));
    };
    decode_matrix(rows)?
        .to_mat2()
        .ok_or_else(|| FormatError(format!("gate {index}: matrix must be 2x2")))
}

impl GateRecord {
    pub fn from_gate(gate: &Gate) -> Self {
        let mut params = Params::default();
        match gate {
            Gate::OneQubit { u, .. } | Gate::ControlledU { u, .. } => params.matrix = Some(encode_mat2(u)),
            Gate::Cnot { .. } => {}
            Gate::SymmetricPhase { theta, .. } => params.theta = Some(*theta),
            Gate::Diagonal { phases, .. } => params.phases = Some(phases.clone()),
            Gate::Unitary { u, .. } => params.matrix = Some(encode_matrix(u)),
        }
        Self {
            kind: gate.kind_name().to_string(),
            qubits: gate.qubits(),
            params,
        }
    }

    pub fn to_gate(&self, index: usize) -> Result<Gate, FormatError> {
        let arity = |k: usize| -> Result<(), FormatError> {
            if self.qubits.len() == k {
                Ok(())
            } else {
                fail(format!(
                    "gate {index} ({}): expected {k} qubits, got {}",
                    self.kind,
                    self.qubits.len()
                ))
            }
        };
        let q = &self.qubits;
        let gate = match self.kind.as_str() {
            "one_qubit" => {
                arity(1)?;
                Gate::OneQubit { qubit: q[0], u: decode_mat2(index, &self.params)? }
            }
            "controlled_u" => {
                arity(2)?;
                Gate::ControlledU { control: q[0], target: q[1], u: decode_mat2(index, &self.params)? }
            }
            "cnot" => {
                arity(2)?;
                Gate::Cnot { control: q[0], target: q[1] }
            }
            "symmetric_phase" => {
                arity(2)?;
                let Some(theta) = self.params.theta else {
                    return fail(format!("gate {index}: missing params.theta"));
                };
                Gate::SymmetricPhase { q1: q[0], q2: q[1], theta }
            }
            "diagonal" => {
                let Some(phases) = &self.params.phases else {
                    return fail(format!("gate {index}: missing params.phases"));
                };
                Gate::Diagonal { qubits: q.clone(), phases: phases.clone() }
            }
            "unitary" => {
                let Some(rows) = &self.params.matrix else {
                    return fail(format!("gate {index}: missing params.matrix"));
                };
                Gate::Unitary { qubits: q.clone(), u: decode_matrix(rows)? }
            }
            other => return fail(format!("gate {index}: unknown kind {other:?}")),
        };
        Ok(gate)
    }
}

impl CircuitFile {
    pub fn from_circuit(circuit: &Circuit) -> Self {
        Self {
            format_version: FORMAT_VERSION.into(),
            width_data: circuit.width_data,
            width_ancilla: circuit.width_ancilla,
            global_phase: circuit.global_phase,
            gates: circuit.gates.iter().map(GateRecord::from_gate).collect(),
            layer_sizes: None,
        }
    }

    pub fn from_layered(layered: &LayeredCircuit) -> Self {
        let mut file = Self::from_circuit(&layered.flatten());
        file.layer_sizes = Some(layered.layers.iter().map(Vec::len).collect());
        file
    }

    /// Converts to a circuit, checking the version and that the circuit
    /// validates.
    pub fn to_circuit(&self) -> Result<Circuit, FormatError> {
        if self.format_version != FORMAT_VERSION {
            return fail(format!(
                "unsupported format_version {:?} (expected {FORMAT_VERSION:?})",
                self.format_version
            ));
        }
        let gates = self
            .gates
            .iter()
            .enumerate()
            .map(|(i, g)| g.to_gate(i))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(sizes) = &self.layer_sizes {
            if sizes.iter().sum::<usize>() != gates.len() {
                return fail("layer_sizes do not add up to the gate count");
            }
        }
        let circuit = Circuit {
            width_data: self.width_data,
            width_ancilla: self.width_ancilla,
            gates,
            global_phase: self.global_phase,
        };
        circuit.check().map_err(|e| FormatError(e.to_string()))?;
        Ok(circuit)
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        serde_json::from_str(text).map_err(|e| FormatError(format!("malformed circuit file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit files always serialize")
    }
}

pub fn parse_circuit(text: &str) -> Result<Circuit, FormatError> {
    CircuitFile::parse(text)?.to_circuit()
}

pub fn circuit_to_json(circuit: &Circuit) -> String {
    CircuitFile::from_circuit(circuit).to_json()
}
