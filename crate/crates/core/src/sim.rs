//! Brute-force oracles.
//!
//! Four independent ways of evaluating a circuit: dense state vectors (and
//! full unitaries built from them), GF(2) simulation of CNOT circuits, phase
//! vectors of diagonal circuits, and basis-state tracking of monomial
//! circuits (CNOTs plus diagonal and anti-diagonal gates). The embedding
//! verifiers compare a candidate on `n + m` qubits with a reference on `n`
//! qubits, ancillae starting in `|0⟩`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::circuit::{Circuit, Gate, LayeredCircuit, EPS_DIAGONAL};
use crate::error::{Error, Result};
use crate::linalg::complex::{C64, ONE, ZERO};
use crate::linalg::{ComplexMatrix, Gf2Matrix, PhaseVector};

pub const SIM_MAX_QUBITS: usize = 22;
pub const DENSE_MAX_QUBITS: usize = 10;
/// Data-register size up to which verification enumerates every basis state.
pub const EXHAUSTIVE_STATES: usize = 256;
/// Seed for the random data states used beyond the exhaustive range.
pub const DEFAULT_VERIFY_SEED: u64 = 0x5eed;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_total: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// Computational basis state `|index⟩` on `n_total` qubits.
    pub fn basis(n_total: usize, index: usize) -> Self {
        let mut amplitudes = vec![ZERO; 1 << n_total];
        amplitudes[index] = ONE;
        Self { n_total, amplitudes }
    }

    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        Ok(Self {
            n_total: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n_total
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `self ⊗ |0…0⟩` with `m` extra low-order qubits.
    pub fn extend_with_zeros(&self, m: usize) -> Self {
        let mut amplitudes = vec![ZERO; 1 << (self.n_total + m)];
        for (i, &a) in self.amplitudes.iter().enumerate() {
            amplitudes[i << m] = a;
        }
        Self {
            n_total: self.n_total + m,
            amplitudes,
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn check_cap(what: &'static str, requested: usize, limit: usize) -> Result<()> {
    if requested > limit {
        Err(Error::TooLarge {
            what,
            requested,
            limit,
        })
    } else {
        Ok(())
    }
}

/// Applies the circuit to a state, gate by gate, then the global phase.
pub fn apply(circuit: &Circuit, state: &StateVector) -> Result<StateVector> {
    let n = circuit.total_width();
    if state.n_total != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: state.n_total,
        });
    }
    check_cap("state-vector simulation", n, SIM_MAX_QUBITS)?;
    circuit.check()?;
    let mut out = state.clone();
    for gate in &circuit.gates {
        apply_gate(&mut out.amplitudes, n, gate);
    }
    if circuit.global_phase != 0.0 {
        let g = C64::from_polar(1.0, circuit.global_phase);
        out.amplitudes.iter_mut().for_each(|a| *a *= g);
    }
    Ok(out)
}

pub fn apply_layered(layered: &LayeredCircuit, state: &StateVector) -> Result<StateVector> {
    apply(&layered.flatten(), state)
}

#[inline]
fn mask_of(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}

/// Local index of basis state `x` restricted to `qubits` (first most significant).
#[inline]
fn local_index(n: usize, qubits: &[usize], x: usize) -> usize {
    qubits
        .iter()
        .fold(0, |acc, &q| (acc << 1) | usize::from(x & mask_of(n, q) != 0))
}

fn apply_gate(amps: &mut [C64], n: usize, gate: &Gate) {
    match gate {
        Gate::OneQubit { qubit, u } => {
            let m = mask_of(n, *qubit);
            for i in 0..amps.len() {
                if i & m == 0 {
                    let (a0, a1) = (amps[i], amps[i | m]);
                    amps[i] = u[0][0] * a0 + u[0][1] * a1;
                    amps[i | m] = u[1][0] * a0 + u[1][1] * a1;
                }
            }
        }
        Gate::ControlledU { control, target, u } => {
            let (cm, tm) = (mask_of(n, *control), mask_of(n, *target));
            for i in 0..amps.len() {
                if i & cm != 0 && i & tm == 0 {
                    let (a0, a1) = (amps[i], amps[i | tm]);
                    amps[i] = u[0][0] * a0 + u[0][1] * a1;
                    amps[i | tm] = u[1][0] * a0 + u[1][1] * a1;
                }
            }
        }
        Gate::Cnot { control, target } => {
            let (cm, tm) = (mask_of(n, *control), mask_of(n, *target));
            for i in 0..amps.len() {
                if i & cm != 0 && i & tm == 0 {
                    amps.swap(i, i | tm);
                }
            }
        }
        Gate::SymmetricPhase { q1, q2, theta } => {
            let both = mask_of(n, *q1) | mask_of(n, *q2);
            let p = C64::from_polar(1.0, *theta);
            for (i, a) in amps.iter_mut().enumerate() {
                if i & both == both {
                    *a *= p;
                }
            }
        }
        Gate::Diagonal { qubits, phases } => {
            let factors: Vec<C64> = phases.iter().map(|&p| C64::from_polar(1.0, p)).collect();
            for (i, a) in amps.iter_mut().enumerate() {
                *a *= factors[local_index(n, qubits, i)];
            }
        }
        Gate::Unitary { qubits, u } => {
            let k = qubits.len();
            let masks: Vec<usize> = qubits.iter().map(|&q| mask_of(n, q)).collect();
            let support = masks.iter().fold(0, |a, m| a | m);
            let offsets: Vec<usize> = (0..1usize << k)
                .map(|l| {
                    (0..k)
                        .filter(|&b| l >> (k - 1 - b) & 1 == 1)
                        .fold(0, |a, b| a | masks[b])
                })
                .collect();
            let mut buf = vec![ZERO; 1 << k];
            for base in 0..amps.len() {
                if base & support != 0 {
                    continue;
                }
                for (l, off) in offsets.iter().enumerate() {
                    buf[l] = amps[base | off];
                }
                for (r, off) in offsets.iter().enumerate() {
                    amps[base | off] = (0..buf.len()).map(|c| u.get(r, c) * buf[c]).sum();
                }
            }
        }
    }
}

/// The `2^N × 2^N` matrix of the circuit; column `j` is the image of `|j⟩`.
pub fn full_unitary(circuit: &Circuit) -> Result<ComplexMatrix> {
    let n = circuit.total_width();
    check_cap("dense unitary", n, DENSE_MAX_QUBITS)?;
    let dim = 1 << n;
    let mut m = ComplexMatrix::zeros(dim);
    for j in 0..dim {
        let out = apply(circuit, &StateVector::basis(n, j))?;
        m.set_column(j, out.amplitudes());
    }
    Ok(m)
}

fn first_offending(circuit: &Circuit, ok: impl Fn(&Gate) -> bool, reason: &str) -> Result<()> {
    match circuit.gates.iter().position(|g| !ok(g)) {
        Some(index) => Err(Error::UnsupportedGate {
            index,
            kind: circuit.gates[index].kind_name(),
            reason: reason.to_string(),
        }),
        None => Ok(()),
    }
}

/// GF(2) map `M` of a CNOT circuit over all of its qubits: output `= M·input`.
pub fn gf2_simulate(circuit: &Circuit) -> Result<Gf2Matrix> {
    first_offending(circuit, |g| matches!(g, Gate::Cnot { .. }), "only CNOT gates have a GF(2) map")?;
    circuit.check()?;
    let mut m = Gf2Matrix::identity(circuit.total_width());
    for gate in &circuit.gates {
        if let Gate::Cnot { control, target } = gate {
            m.add_row(*control, *target);
        }
    }
    Ok(m)
}

/// Phase vector of a diagonal circuit over all of its qubits, global phase
/// included. Angles are accumulated, not reduced.
pub fn phase_vector(circuit: &Circuit) -> Result<PhaseVector> {
    first_offending(circuit, Gate::is_diagonal, "gate is not diagonal")?;
    let n = circuit.total_width();
    check_cap("phase-vector simulation", n, SIM_MAX_QUBITS)?;
    circuit.check()?;
    let mut pv = PhaseVector::zeros(n);
    let omega = pv.angles_mut();
    for gate in &circuit.gates {
        let (qubits, phases) = gate.diagonal_table().expect("checked diagonal");
        for (x, w) in omega.iter_mut().enumerate() {
            *w += phases[local_index(n, &qubits, x)];
        }
    }
    if circuit.global_phase != 0.0 {
        omega.iter_mut().for_each(|w| *w += circuit.global_phase);
    }
    Ok(pv)
}

/// A computational basis state on an arbitrary number of qubits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitState {
    words: Vec<u64>,
}

impl BitState {
    pub fn zeros(n: usize) -> Self {
        Self {
            words: vec![0; n.div_ceil(64).max(1)],
        }
    }

    #[inline]
    pub fn get(&self, q: usize) -> bool {
        self.words[q / 64] >> (q % 64) & 1 == 1
    }

    #[inline]
    pub fn flip(&mut self, q: usize) {
        self.words[q / 64] ^= 1 << (q % 64);
    }

    pub fn set(&mut self, q: usize, v: bool) {
        if self.get(q) != v {
            self.flip(q);
        }
    }

    /// Loads the `n` data qubits from a basis index (qubit 0 most significant).
    pub fn from_index(n_total: usize, n_data: usize, x: usize) -> Self {
        let mut s = Self::zeros(n_total);
        for q in 0..n_data {
            s.set(q, x >> (n_data - 1 - q) & 1 == 1);
        }
        s
    }

    /// Basis index of qubits `range`, first most significant.
    pub fn index_of(&self, range: std::ops::Range<usize>) -> usize {
        range.fold(0, |acc, q| (acc << 1) | usize::from(self.get(q)))
    }

    pub fn any_in(&self, range: std::ops::Range<usize>) -> bool {
        range.into_iter().any(|q| self.get(q))
    }
}

/// Whether a gate maps basis states to basis states (up to phase).
pub fn is_monomial(gate: &Gate) -> bool {
    match gate {
        Gate::Cnot { .. } => true,
        Gate::OneQubit { u, .. } | Gate::ControlledU { u, .. } => {
            let anti = u[0][0].norm() <= EPS_DIAGONAL && u[1][1].norm() <= EPS_DIAGONAL;
            anti || gate.is_diagonal()
        }
        g => g.is_diagonal(),
    }
}

/// Image of a basis state under a monomial circuit: the output basis state
/// and the accumulated phase (global phase included).
pub fn monomial_image(circuit: &Circuit, input: &BitState) -> Result<(BitState, f64)> {
    first_offending(circuit, is_monomial, "gate does not map basis states to basis states")?;
    let mut s = input.clone();
    let mut phase = circuit.global_phase;
    for gate in &circuit.gates {
        match gate {
            Gate::Cnot { control, target } => {
                if s.get(*control) {
                    s.flip(*target);
                }
            }
            Gate::OneQubit { qubit, u } if !gate.is_diagonal() => {
                let b = usize::from(s.get(*qubit));
                phase += u[1 - b][b].arg();
                s.flip(*qubit);
            }
            Gate::ControlledU { control, target, u } if !gate.is_diagonal() => {
                if s.get(*control) {
                    let b = usize::from(s.get(*target));
                    phase += u[1 - b][b].arg();
                    s.flip(*target);
                }
            }
            g => {
                let (qubits, phases) = g.diagonal_table().expect("monomial diagonal");
                let local = qubits.iter().fold(0, |acc, &q| (acc << 1) | usize::from(s.get(q)));
                phase += phases[local];
            }
        }
    }
    Ok((s, phase))
}

/// How a candidate was checked against its reference.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMethod {
    Dense,
    Gf2,
    Monomial,
}

impl VerifyMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerifyMethod::Dense => "dense",
            VerifyMethod::Gf2 => "gf2",
            VerifyMethod::Monomial => "monomial",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingReport {
    pub subspace_preserved: bool,
    /// Largest norm, over checked inputs, of the output component with some
    /// ancilla set.
    pub max_leakage: f64,
    /// Largest amplitude deviation on the data register after removing the
    /// shared global phase.
    pub max_block_deviation: f64,
    pub global_phase_applied: f64,
    pub pass: bool,
    pub tolerance: f64,
    pub method: VerifyMethod,
    pub states_checked: usize,
    /// Seed of the random data states, when the check was not exhaustive.
    pub seed: Option<u64>,
}

impl EmbeddingReport {
    fn finish(
        max_leakage: f64,
        max_block_deviation: f64,
        global_phase_applied: f64,
        tolerance: f64,
        method: VerifyMethod,
        states_checked: usize,
        seed: Option<u64>,
    ) -> Self {
        Self {
            subspace_preserved: max_leakage <= tolerance,
            max_leakage,
            max_block_deviation,
            global_phase_applied,
            pass: max_leakage <= tolerance && max_block_deviation <= tolerance,
            tolerance,
            method,
            states_checked,
            seed,
        }
    }
}

fn widths(reference: &Circuit, candidate: &Circuit) -> Result<(usize, usize)> {
    let n = reference.total_width();
    let total = candidate.total_width();
    if total < n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: total,
        });
    }
    Ok((n, total - n))
}

fn random_state(n: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let mut amps: Vec<C64> = (0..1usize << n)
        .map(|_| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    StateVector::from_amplitudes(amps).expect("power of two")
}

/// Dense check that `candidate` embeds `reference` with its extra qubits as
/// ancillae: the ancilla-zero subspace is preserved and, restricted to it,
/// the candidate acts as the reference up to one shared global phase.
pub fn verify_embedding(reference: &Circuit, candidate: &Circuit, tol: f64) -> Result<EmbeddingReport> {
    verify_embedding_seeded(reference, candidate, tol, DEFAULT_VERIFY_SEED)
}

pub fn verify_embedding_seeded(
    reference: &Circuit,
    candidate: &Circuit,
    tol: f64,
    seed: u64,
) -> Result<EmbeddingReport> {
    let (n, m) = widths(reference, candidate)?;
    check_cap("embedding verification", n + m, SIM_MAX_QUBITS)?;
    let exhaustive = (1usize << n) <= EXHAUSTIVE_STATES;
    let count = if exhaustive { 1 << n } else { EXHAUSTIVE_STATES };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ancilla_mask = (1usize << m) - 1;

    let mut leakage = 0.0f64;
    let mut deviation = 0.0f64;
    let mut global: Option<C64> = None;
    for k in 0..count {
        let input = if exhaustive {
            StateVector::basis(n, k)
        } else {
            random_state(n, &mut rng)
        };
        let expected = apply(reference, &input)?;
        let got = apply(candidate, &input.extend_with_zeros(m))?;
        let leaked: f64 = got
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(i, _)| i & ancilla_mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        leakage = leakage.max(leaked.sqrt());
        let data = |y: usize| got.amplitudes()[y << m];
        let g = *global.get_or_insert_with(|| {
            let (y, r) = expected
                .amplitudes()
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
                .expect("non-empty");
            let cy = data(y);
            if cy.norm() > 1e-9 && r.norm() > 1e-9 {
                let ratio = cy / r;
                ratio / ratio.norm()
            } else {
                ONE
            }
        });
        for (y, r) in expected.amplitudes().iter().enumerate() {
            deviation = deviation.max((data(y) - g * r).norm());
        }
    }
    let phase = global.map_or(0.0, |g| g.arg());
    Ok(EmbeddingReport::finish(
        leakage,
        deviation,
        phase,
        tol,
        VerifyMethod::Dense,
        count,
        (!exhaustive).then_some(seed),
    ))
}

/// Exact check for CNOT-only circuits: the data block of the candidate's
/// GF(2) map equals the reference map and no ancilla row reads a data qubit.
pub fn verify_embedding_gf2(reference: &Circuit, candidate: &Circuit) -> Result<EmbeddingReport> {
    let (n, m) = widths(reference, candidate)?;
    let reference_map = gf2_simulate(reference)?;
    let cand = gf2_simulate(candidate)?;
    let leaks = (n..n + m).any(|a| (0..n).any(|j| cand.get(a, j)));
    let differs = cand.leading_block(n) != reference_map;
    Ok(EmbeddingReport::finish(
        if leaks { 1.0 } else { 0.0 },
        if differs { 1.0 } else { 0.0 },
        0.0,
        0.0,
        VerifyMethod::Gf2,
        0,
        None,
    ))
}

/// Exact-arithmetic check for monomial circuits by tracking every data basis
/// state (exhaustive up to 2^16 data states, seeded sample beyond).
pub fn verify_embedding_monomial(
    reference: &Circuit,
    candidate: &Circuit,
    tol: f64,
) -> Result<EmbeddingReport> {
    use rand::Rng;
    let (n, m) = widths(reference, candidate)?;
    let exhaustive = n <= 16;
    let count = if exhaustive { 1usize << n } else { EXHAUSTIVE_STATES };
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_VERIFY_SEED);

    let mut leakage = 0.0f64;
    let mut deviation = 0.0f64;
    let mut global: Option<f64> = None;
    for k in 0..count {
        let (input_ref, input_cand) = if exhaustive {
            (BitState::from_index(n, n, k), BitState::from_index(n + m, n, k))
        } else {
            let mut a = BitState::zeros(n);
            let mut b = BitState::zeros(n + m);
            for q in 0..n {
                let v: bool = rng.gen();
                a.set(q, v);
                b.set(q, v);
            }
            (a, b)
        };
        let (out_ref, phase_ref) = monomial_image(reference, &input_ref)?;
        let (out_cand, phase_cand) = monomial_image(candidate, &input_cand)?;
        if out_cand.any_in(n..n + m) {
            leakage = 1.0;
            deviation = deviation.max(1.0);
            continue;
        }
        if (0..n).any(|q| out_cand.get(q) != out_ref.get(q)) {
            deviation = deviation.max(1.0);
            continue;
        }
        let g = *global.get_or_insert(phase_cand - phase_ref);
        let diff = C64::from_polar(1.0, phase_cand) - C64::from_polar(1.0, phase_ref + g);
        deviation = deviation.max(diff.norm());
    }
    Ok(EmbeddingReport::finish(
        leakage,
        deviation,
        global.map_or(0.0, crate::linalg::wrap_angle),
        tol,
        VerifyMethod::Monomial,
        count,
        (!exhaustive).then_some(DEFAULT_VERIFY_SEED),
    ))
}

/// Phase vector of the operator a monomial candidate induces on its data
/// register, provided every data basis state returns to itself with the
/// ancillae cleared. Errors otherwise.
pub fn embedded_phase_vector(candidate: &Circuit) -> Result<PhaseVector> {
    let n = candidate.width_data;
    let total = candidate.total_width();
    check_cap("embedded phase vector", n, SIM_MAX_QUBITS)?;
    let mut omega = vec![0.0; 1 << n];
    for (x, w) in omega.iter_mut().enumerate() {
        let input = BitState::from_index(total, n, x);
        let (out, phase) = monomial_image(candidate, &input)?;
        if out != input {
            return Err(Error::Precondition(format!(
                "basis state {x} is not mapped to itself with clean ancillae"
            )));
        }
        *w = phase;
    }
    PhaseVector::new(omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::complex::c;

    #[test]
    fn identity_circuit_leaves_state() {
        let s = StateVector::basis(2, 0b01);
        let out = apply(&Circuit::new(2), &s).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn cnot_entangles_control_copy() {
        let (alpha, beta) = (c(0.6, 0.0), c(0.0, 0.8));
        let s = StateVector::from_amplitudes(vec![alpha, ZERO, beta, ZERO]).unwrap();
        let out = apply(&Circuit::from_gates(2, vec![Gate::cnot(0, 1)]), &s).unwrap();
        assert_eq!(out.amplitudes(), &[alpha, ZERO, ZERO, beta]);
    }

    #[test]
    fn symmetric_phase_hits_only_11() {
        let theta = 0.7;
        let g = Circuit::from_gates(2, vec![Gate::SymmetricPhase { q1: 0, q2: 1, theta }]);
        let out = apply(&g, &StateVector::basis(2, 3)).unwrap();
        assert!((out.amplitudes()[3] - C64::from_polar(1.0, theta)).norm() < 1e-15);
        let out = apply(&g, &StateVector::basis(2, 2)).unwrap();
        assert_eq!(out.amplitudes()[2], ONE);
    }

    #[test]
    fn apply_checks_width_and_cap() {
        let err = apply(&Circuit::new(3), &StateVector::basis(2, 0)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 3, got: 2 });
        let big = Circuit::new(SIM_MAX_QUBITS + 1);
        assert!(matches!(
            full_unitary(&big),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn full_unitary_of_cnot() {
        let u = full_unitary(&Circuit::from_gates(2, vec![Gate::cnot(0, 1)])).unwrap();
        let mut expected = ComplexMatrix::identity(4);
        expected.set(2, 2, ZERO);
        expected.set(3, 3, ZERO);
        expected.set(2, 3, ONE);
        expected.set(3, 2, ONE);
        assert_eq!(u, expected);
        assert_eq!(full_unitary(&Circuit::new(2)).unwrap(), ComplexMatrix::identity(4));
    }

    #[test]
    fn gf2_of_two_cnots() {
        // CNOT(0,1): (a,b) -> (a, a+b); then CNOT(1,0): -> (b, a+b)
        let c = Circuit::from_gates(2, vec![Gate::cnot(0, 1), Gate::cnot(1, 0)]);
        let m = gf2_simulate(&c).unwrap();
        assert_eq!(m, Gf2Matrix::from_rows(&[vec![0, 1], vec![1, 1]]).unwrap());
        assert!(gf2_simulate(&Circuit::new(3)).unwrap().is_identity());
    }

    #[test]
    fn gf2_rejects_non_cnot() {
        let c = Circuit::from_gates(2, vec![Gate::cnot(0, 1), Gate::h(0)]);
        assert!(matches!(
            gf2_simulate(&c),
            Err(Error::UnsupportedGate { index: 1, .. })
        ));
    }

    #[test]
    fn phase_vector_examples() {
        assert_eq!(phase_vector(&Circuit::new(2)).unwrap(), PhaseVector::zeros(2));
        let theta = 0.3;
        let c1 = Circuit::from_gates(2, vec![Gate::SymmetricPhase { q1: 0, q2: 1, theta }]);
        assert_eq!(phase_vector(&c1).unwrap().angles(), &[0.0, 0.0, 0.0, theta]);

        let d = Gate::Diagonal { qubits: vec![1, 0], phases: vec![0.1, 0.2, 0.3, 0.4] };
        let c2 = Circuit::from_gates(2, vec![d.clone()]);
        // local index is (q1, q0): basis 01 has q1 = 1 → local 2
        assert_eq!(phase_vector(&c2).unwrap().angles(), &[0.1, 0.3, 0.2, 0.4]);
        let both = Circuit::from_gates(2, vec![Gate::SymmetricPhase { q1: 0, q2: 1, theta }, d]);
        let sum = phase_vector(&c1).unwrap().add(&phase_vector(&c2).unwrap()).unwrap();
        assert!(phase_vector(&both).unwrap().max_circle_distance(&sum) < 1e-15);
    }

    #[test]
    fn verifier_accepts_padded_reference() {
        let reference = Circuit::from_gates(2, vec![Gate::h(0), Gate::cnot(0, 1)]);
        let mut candidate = reference.clone();
        candidate.width_ancilla = 2;
        let r = verify_embedding(&reference, &candidate, 1e-12).unwrap();
        assert!(r.pass);
        assert_eq!(r.max_leakage, 0.0);
        assert!(r.max_block_deviation < 1e-15);
    }

    #[test]
    fn verifier_catches_dirty_ancilla() {
        let reference = Circuit::from_gates(1, vec![Gate::h(0)]);
        let mut candidate = reference.clone();
        candidate.width_ancilla = 1;
        candidate.push(Gate::x(1));
        let r = verify_embedding(&reference, &candidate, 1e-8).unwrap();
        assert!(!r.pass);
        assert!(!r.subspace_preserved);
        assert!((r.max_leakage - 1.0).abs() < 1e-12);
    }

    #[test]
    fn verifier_tolerates_only_one_shared_phase() {
        let reference = Circuit::from_gates(1, vec![Gate::h(0)]);
        let mut shifted = reference.clone();
        shifted.global_phase = 1.0;
        let r = verify_embedding(&reference, &shifted, 1e-12).unwrap();
        assert!(r.pass);
        assert!((r.global_phase_applied - 1.0).abs() < 1e-12);

        let kicked = Circuit::from_gates(1, vec![Gate::phase_diag(0, 0.0, 0.1)]);
        let r = verify_embedding(&Circuit::new(1), &kicked, 1e-8).unwrap();
        assert!(!r.pass);
        assert!((r.max_block_deviation - (C64::from_polar(1.0, 0.1) - ONE).norm()).abs() < 1e-12);
    }

    #[test]
    fn monomial_tracking_matches_dense() {
        let c = Circuit::from_gates(
            3,
            vec![
                Gate::x(2),
                Gate::cnot(0, 1),
                Gate::SymmetricPhase { q1: 1, q2: 2, theta: 0.4 },
                Gate::phase_diag(0, 0.2, -0.3),
            ],
        );
        let u = full_unitary(&c).unwrap();
        for x in 0..8 {
            let (out, phase) = monomial_image(&c, &BitState::from_index(3, 3, x)).unwrap();
            let y = out.index_of(0..3);
            assert!((u.get(y, x) - C64::from_polar(1.0, phase)).norm() < 1e-12);
        }
    }

    #[test]
    fn gf2_verifier_flags_leak_and_mismatch() {
        let reference = Circuit::from_gates(2, vec![Gate::cnot(0, 1)]);
        let mut leaky = Circuit::with_ancillae(2, 1);
        leaky.gates = vec![Gate::cnot(0, 1), Gate::cnot(0, 2)];
        let r = verify_embedding_gf2(&reference, &leaky).unwrap();
        assert!(!r.pass && r.max_leakage == 1.0 && r.max_block_deviation == 0.0);

        let mut wrong = Circuit::with_ancillae(2, 1);
        wrong.gates = vec![Gate::cnot(1, 0)];
        let r = verify_embedding_gf2(&reference, &wrong).unwrap();
        assert!(!r.pass && r.max_leakage == 0.0 && r.max_block_deviation == 1.0);
    }
}
