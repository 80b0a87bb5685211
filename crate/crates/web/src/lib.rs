//! Browser bindings. Every exported function returns a JSON document that
//! the static page in `www/` renders; the `*_json` functions hold the logic
//! and are callable natively.

use serde::Serialize;
use shallowq::generators::{gen_qft, gen_random, random_unitary2, rng_from_seed, RandomFamily};
use shallowq::linalg::{walsh_coefficients, PhaseVector};
use shallowq::passes::{
    cnot_parallelize, commuting_fanin_parallelize, diag_compress, diag_fanin_parallelize, fanout_parallelize,
    morse_synthesize, permute_no_ancillae, permute_with_ancillae, PassResult,
};
use shallowq::sim::{phase_vector, verify_embedding, verify_embedding_gf2, verify_embedding_monomial};
use shallowq::{schedule_greedy, Circuit, Gate, LayeredCircuit};
use wasm_bindgen::prelude::*;

/// Largest register the demo builds; keeps rendering and verification fast.
pub const DEMO_MAX_N: usize = 12;
const DEMO_VERIFY_QUBITS: usize = 16;

#[derive(Serialize)]
struct GateView {
    kind: &'static str,
    qubits: Vec<usize>,
    label: String,
}

#[derive(Serialize)]
struct LayeredView {
    width_data: usize,
    width_ancilla: usize,
    depth: usize,
    gate_count: usize,
    layers: Vec<Vec<GateView>>,
}

fn label(gate: &Gate) -> String {
    match gate {
        Gate::OneQubit { .. } => "U".into(),
        Gate::ControlledU { .. } => "CU".into(),
        Gate::Cnot { .. } => "X".into(),
        Gate::SymmetricPhase { theta, .. } => format!("P({theta:.3})"),
        Gate::Diagonal { .. } => "D".into(),
        Gate::Unitary { .. } => "U".into(),
    }
}

fn view(layered: &LayeredCircuit) -> LayeredView {
    LayeredView {
        width_data: layered.width_data,
        width_ancilla: layered.width_ancilla,
        depth: layered.depth(),
        gate_count: layered.gate_count(),
        layers: layered
            .layers
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .map(|g| GateView { kind: g.kind_name(), qubits: g.qubits(), label: label(g) })
                    .collect()
            })
            .collect(),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("views always serialize")
}

fn check_n(n: usize, min: usize) -> Result<(), String> {
    if (min..=DEMO_MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(format!("n must be in {min}..={DEMO_MAX_N}"))
    }
}

/// Greedy layering of the `n`-qubit QFT.
pub fn qft_layers_json(n: usize) -> Result<String, String> {
    check_n(n, 1)?;
    let layered = schedule_greedy(&gen_qft(n)).map_err(|e| e.to_string())?;
    Ok(to_json(&view(&layered)))
}

#[derive(Serialize)]
struct PassView {
    pass: String,
    before: LayeredView,
    after: LayeredView,
    ancillae_used: usize,
    claimed_depth_bound: usize,
    verified: Option<bool>,
    notes: Vec<String>,
}

fn demo_input(pass: &str, n: usize, seed: u64) -> Result<Circuit, String> {
    let mut rng = rng_from_seed(seed);
    let circuit = match pass {
        "fanout" => Circuit::from_gates(
            n + 1,
            (1..=n)
                .map(|t| Gate::ControlledU { control: 0, target: t, u: random_unitary2(&mut rng) })
                .collect(),
        ),
        "diag-fanin" => Circuit::from_gates(
            n + 1,
            (1..=n)
                .map(|t| Gate::SymmetricPhase { q1: 0, q2: t, theta: 0.1 * t as f64 })
                .collect(),
        ),
        "commute-fanin" => gen_random(RandomFamily::ControlledCommuting, n + 1, n, seed).map_err(|e| e.to_string())?,
        "diag-compress" => gen_random(RandomFamily::Diagonal2q, n, 3 * n, seed).map_err(|e| e.to_string())?,
        "cnot" => gen_random(RandomFamily::Cnot, n, 2 * n, seed).map_err(|e| e.to_string())?,
        "permute" | "permute-anc" => gen_random(RandomFamily::Permutation, n, 0, seed).map_err(|e| e.to_string())?,
        other => return Err(format!("unknown pass {other:?}")),
    };
    Ok(circuit)
}

fn verify(reference: &Circuit, candidate: &Circuit) -> Option<bool> {
    let cnot_only = |c: &Circuit| c.gates.iter().all(|g| matches!(g, Gate::Cnot { .. }));
    let report = if cnot_only(reference) && cnot_only(candidate) {
        verify_embedding_gf2(reference, candidate)
    } else if reference.gates.iter().chain(&candidate.gates).all(shallowq::sim::is_monomial) {
        verify_embedding_monomial(reference, candidate, 1e-8)
    } else if candidate.total_width() <= DEMO_VERIFY_QUBITS {
        verify_embedding(reference, candidate, 1e-8)
    } else {
        return None;
    };
    report.ok().map(|r| r.pass)
}

/// Runs `pass` on a generated instance of size `n` and reports both
/// layerings.
pub fn parallelize_json(pass: &str, n: usize, seed: u64) -> Result<String, String> {
    check_n(n, if pass.starts_with("permute") { 1 } else { 2 })?;
    let input = demo_input(pass, n, seed)?;
    let result: PassResult = match pass {
        "fanout" => fanout_parallelize(&input),
        "diag-fanin" => diag_fanin_parallelize(&input),
        "commute-fanin" => commuting_fanin_parallelize(&input),
        "diag-compress" => diag_compress(&input, false),
        "cnot" => cnot_parallelize(&input),
        "permute" | "permute-anc" => {
            let m = shallowq::sim::gf2_simulate(&input).map_err(|e| e.to_string())?;
            let p = shallowq::Permutation::from_gf2(&m).map_err(|e| e.to_string())?;
            if pass == "permute" {
                permute_no_ancillae(&p)
            } else {
                permute_with_ancillae(&p)
            }
        }
        _ => unreachable!("demo_input rejects unknown passes"),
    }
    .map_err(|e| e.to_string())?;
    let before = schedule_greedy(&input).map_err(|e| e.to_string())?;
    Ok(to_json(&PassView {
        pass: pass.into(),
        before: view(&before),
        after: view(&result.circuit),
        ancillae_used: result.ancillae_used,
        claimed_depth_bound: result.claimed_depth_bound,
        verified: verify(&input, &result.flatten()),
        notes: result.notes.clone(),
    }))
}

#[derive(Serialize)]
struct ParityView {
    coefficients: Vec<(Vec<usize>, f64)>,
    circuit: LayeredView,
    max_error: f64,
}

/// Expands a phase vector over parity functions and synthesizes it.
pub fn parity_expansion_json(angles: &[f64]) -> Result<String, String> {
    let pv = PhaseVector::new(angles.to_vec()).map_err(|e| e.to_string())?;
    let n = pv.num_qubits();
    check_n(n, 1).and_then(|_| if n <= 6 { Ok(()) } else { Err("at most 64 angles".into()) })?;
    let theta = walsh_coefficients(&pv);
    let result = morse_synthesize(&pv).map_err(|e| e.to_string())?;
    let flat = result.flatten();
    let max_error = shallowq::sim::embedded_phase_vector(&flat)
        .or_else(|_| phase_vector(&flat))
        .map(|got| got.max_circle_distance(&pv))
        .map_err(|e| e.to_string())?;
    Ok(to_json(&ParityView {
        coefficients: theta
            .iter()
            .map(|(s, t)| (shallowq::linalg::walsh::subset_qubits(n, s), t))
            .collect(),
        circuit: view(&result.circuit),
        max_error,
    }))
}

#[wasm_bindgen]
pub fn qft_layers(n: usize) -> Result<String, JsError> {
    qft_layers_json(n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn parallelize(pass: &str, n: usize, seed: u64) -> Result<String, JsError> {
    parallelize_json(pass, n, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn parity_expansion(angles: Vec<f64>) -> Result<String, JsError> {
    parity_expansion_json(&angles).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> serde_json::Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn qft_layer_count() {
        for n in 1..=6 {
            assert_eq!(parse(&qft_layers_json(n).unwrap())["depth"], 2 * n - 1);
        }
        assert!(qft_layers_json(0).is_err());
    }

    #[test]
    fn every_demo_pass_verifies() {
        for pass in ["fanout", "diag-fanin", "commute-fanin", "diag-compress", "cnot", "permute", "permute-anc"] {
            let v = parse(&parallelize_json(pass, 4, 1).unwrap());
            assert_eq!(v["verified"], true, "{pass}");
            assert!(v["after"]["depth"].as_u64() <= v["claimed_depth_bound"].as_u64());
        }
        assert!(parallelize_json("bogus", 4, 1).is_err());
    }

    #[test]
    fn parity_expansion_reproduces_angles() {
        let v = parse(&parity_expansion_json(&[0.1, 0.5, -0.3, 1.2]).unwrap());
        assert!(v["max_error"].as_f64().unwrap() < 1e-9);
        assert!(parity_expansion_json(&[0.0; 3]).is_err());
    }
}
