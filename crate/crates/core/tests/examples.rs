use std::f64::consts::PI;

use rand::Rng;
use shallowq::generators::{gen_qft, gen_random, gen_staircase, random_unitary, rng_from_seed, RandomFamily};
use shallowq::linalg::complex::{c, hadamard, mat2_diag, pauli_z, phase_gate};
use shallowq::linalg::walsh::parity_sign;
use shallowq::linalg::{eig_unitary, walsh_coefficients, ComplexMatrix, PhaseVector, C64};
use shallowq::passes::{
    cnot_parallelize, commuting_fanin_parallelize, diag_compress, diag_fanin_parallelize,
    fanout_parallelize, morse_synthesize,
};
use shallowq::sim::{
    embedded_phase_vector, full_unitary, gf2_simulate, phase_vector, verify_embedding,
    verify_embedding_gf2,
};
use shallowq::{schedule_greedy, Circuit, Gate};

#[test]
fn random_four_by_four_unitary_recomposes() {
    let mut rng = rng_from_seed(11);
    let u = random_unitary(4, &mut rng);
    let (t, d) = eig_unitary(&u).unwrap();
    assert!(t.is_unitary(1e-10));
    let recomposed = t
        .mul(&ComplexMatrix::from_diagonal(&d))
        .unwrap()
        .mul(&t.adjoint())
        .unwrap();
    assert!(recomposed.max_abs_diff(&u) <= 1e-8);
}

#[test]
fn two_qubit_walsh_reconstruction_matches_direct_sum() {
    let mut rng = rng_from_seed(12);
    let omega: Vec<f64> = (0..4).map(|_| rng.gen_range(-PI..PI)).collect();
    let theta = walsh_coefficients(&PhaseVector::new(omega.clone()).unwrap());
    for (x, w) in omega.iter().enumerate() {
        let direct: f64 = (0..4).map(|s| theta.get(s) * parity_sign(s, x)).sum();
        assert!((direct - w).abs() <= 1e-12);
    }
}

#[test]
fn diagonal_fanin_of_two_phases_equals_serial() {
    let serial = Circuit::from_gates(
        3,
        vec![
            Gate::Diagonal { qubits: vec![0, 1], phases: vec![0.0, 0.0, 0.0, PI / 3.0] },
            Gate::Diagonal { qubits: vec![0, 2], phases: vec![0.0, 0.0, 0.0, PI / 7.0] },
        ],
    );
    let r = diag_fanin_parallelize(&serial).unwrap();
    let expected = phase_vector(&serial).unwrap();
    let got = embedded_phase_vector(&r.flatten()).unwrap();
    assert!(got.max_circle_distance(&expected) < 1e-15);
}

#[test]
fn commuting_z_and_s_embed_on_four_qubits() {
    let serial = Circuit::from_gates(
        3,
        vec![
            Gate::ControlledU { control: 1, target: 0, u: pauli_z() },
            Gate::ControlledU { control: 2, target: 0, u: phase_gate(PI / 2.0) },
        ],
    );
    let r = commuting_fanin_parallelize(&serial).unwrap();
    assert_eq!(r.circuit.total_width(), 4);
    let report = verify_embedding(&serial, &r.flatten(), 1e-9).unwrap();
    assert!(report.pass, "{report:?}");
}

#[test]
fn fanout_of_four_passes_verifier() {
    let mut rng = rng_from_seed(13);
    let gates = (1..=4)
        .map(|t| Gate::ControlledU {
            control: 0,
            target: t,
            u: shallowq::generators::random_unitary2(&mut rng),
        })
        .collect();
    let serial = Circuit::from_gates(5, gates);
    let r = fanout_parallelize(&serial).unwrap();
    assert_eq!(r.depth(), 5);
    assert!(verify_embedding(&serial, &r.flatten(), 1e-8).unwrap().pass);
}

#[test]
fn two_qubit_qft_is_bit_reversed_dft() {
    let u = full_unitary(&gen_qft(2)).unwrap();
    let omega = |p: usize| C64::from_polar(0.5, PI / 2.0 * (p % 4) as f64);
    let reverse = |y: usize| (y & 1) << 1 | y >> 1;
    for y in 0..4 {
        for x in 0..4 {
            assert!((u.get(y, x) - omega(reverse(y) * x)).norm() <= 1e-10, "({y},{x})");
        }
    }
}

#[test]
fn staircase_depths() {
    assert_eq!(gen_staircase(2, hadamard()).unwrap().len(), 1);
    let five = gen_staircase(5, hadamard()).unwrap();
    assert_eq!(five.len(), 4);
    assert_eq!(schedule_greedy(&five).unwrap().depth(), 4);
}

#[test]
fn diagonal_staircase_compresses() {
    let u = mat2_diag(c(1.0, 0.0), C64::from_polar(1.0, 0.7));
    let serial = gen_staircase(6, u).unwrap();
    let r = diag_compress(&serial, false).unwrap();
    let d = phase_vector(&r.flatten()).unwrap().max_circle_distance(&phase_vector(&serial).unwrap());
    assert!(d <= 1e-9);
    assert!(r.depth() <= 2);
}

#[test]
fn fifty_symmetric_phases_on_six_qubits_compress() {
    let mut rng = rng_from_seed(14);
    let gates = (0..50)
        .map(|_| {
            let a = rng.gen_range(0..6);
            let b = (a + rng.gen_range(1..6)) % 6;
            Gate::SymmetricPhase { q1: a, q2: b, theta: rng.gen_range(-PI..PI) }
        })
        .collect();
    let serial = Circuit::from_gates(6, gates);
    let r = diag_compress(&serial, false).unwrap();
    assert!(r.flatten().len() <= 15);
    let d = phase_vector(&r.flatten()).unwrap().max_circle_distance(&phase_vector(&serial).unwrap());
    assert!(d <= 1e-9);
}

#[test]
fn three_qubit_parity_synthesis_round_trip() {
    let mut rng = rng_from_seed(15);
    let pv = PhaseVector::new((0..8).map(|_| rng.gen_range(-PI..PI)).collect()).unwrap();
    let r = morse_synthesize(&pv).unwrap();
    let blocks = r.flatten().gates.iter().filter(|g| !matches!(g, Gate::Cnot { .. })).count();
    assert!(blocks <= 7);
    assert!(embedded_phase_vector(&r.flatten()).unwrap().max_circle_distance(&pv) <= 1e-9);
}

#[test]
fn cnot_staircase_of_eight() {
    let stairs = |n: usize| Circuit::from_gates(n, (0..n - 1).map(|i| Gate::cnot(i, i + 1)).collect());
    let r8 = cnot_parallelize(&stairs(8)).unwrap();
    let r4 = cnot_parallelize(&stairs(4)).unwrap();
    assert_eq!(gf2_simulate(&r8.flatten()).unwrap().leading_block(8), gf2_simulate(&stairs(8)).unwrap());
    assert!(verify_embedding_gf2(&stairs(8), &r8.flatten()).unwrap().pass);
    assert!(r8.depth() <= r4.depth() + 12);
}

#[test]
fn random_family_determinism() {
    let a = gen_random(RandomFamily::Cnot, 4, 10, 7).unwrap();
    let b = gen_random(RandomFamily::Cnot, 4, 10, 7).unwrap();
    assert_eq!(a, b);
}
