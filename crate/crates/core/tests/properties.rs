use std::f64::consts::PI;

use proptest::prelude::*;
use shallowq::generators::{random_unitary, random_unitary2, rng_from_seed};
use shallowq::linalg::complex::{mat2_adjoint, mat2_diag, mat2_max_diff, mat2_mul};
use shallowq::linalg::walsh::parity_sign;
use shallowq::linalg::{gf2_invert, gf2_mul, simultaneous_diagonalize, walsh_coefficients, Gf2Matrix, PhaseVector, C64};
use shallowq::passes::{
    ceil_log2, cnot_parallelize, commuting_fanin_parallelize, diag_compress, fanout_parallelize, morse_synthesize,
};
use shallowq::sim::{apply, full_unitary, gf2_simulate, verify_embedding, verify_embedding_gf2, StateVector};
use shallowq::{schedule_greedy, Circuit, Gate};

fn arb_gate(n: usize) -> impl Strategy<Value = Gate> {
    let pair = (0..n, 1..n).prop_map(move |(a, d)| (a, (a + d) % n));
    prop_oneof![
        (0..n).prop_map(Gate::h),
        pair.clone().prop_map(|(c, t)| Gate::cnot(c, t)),
        (pair.clone(), -PI..PI).prop_map(|((a, b), theta)| Gate::SymmetricPhase { q1: a, q2: b, theta }),
        (pair.clone(), any::<u64>()).prop_map(|((c, t), seed)| Gate::ControlledU {
            control: c,
            target: t,
            u: random_unitary2(&mut rng_from_seed(seed)),
        }),
        (pair, proptest::collection::vec(-PI..PI, 4))
            .prop_map(|((a, b), phases)| Gate::Diagonal { qubits: vec![a, b], phases }),
    ]
}

fn arb_circuit(max_n: usize, max_gates: usize) -> impl Strategy<Value = Circuit> {
    (2..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec(arb_gate(n), 0..=max_gates).prop_map(move |gates| Circuit::from_gates(n, gates))
    })
}

fn arb_cnot_circuit(n: usize, max_gates: usize) -> impl Strategy<Value = Circuit> {
    proptest::collection::vec((0..n, 1..n), 0..=max_gates).prop_map(move |pairs| {
        Circuit::from_gates(n, pairs.into_iter().map(|(c, d)| Gate::cnot(c, (c + d) % n)).collect())
    })
}

/// Longest chain of gates where each shares a qubit with the next.
fn longest_overlap_chain(c: &Circuit) -> usize {
    let mut chain = vec![0usize; c.len()];
    for i in 0..c.len() {
        let qi = c.gates[i].qubits();
        let best = (0..i)
            .filter(|&j| c.gates[j].qubits().iter().any(|q| qi.contains(q)))
            .map(|j| chain[j])
            .max()
            .unwrap_or(0);
        chain[i] = best + 1;
    }
    chain.into_iter().max().unwrap_or(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gf2_inverse_round_trips(n in 1usize..=64, ops in proptest::collection::vec((0usize..64, 1usize..64), 0..200)) {
        let mut m = Gf2Matrix::identity(n);
        if n > 1 {
            for (a, d) in ops {
                let a = a % n;
                m.add_row(a, (a + d % (n - 1) + 1) % n);
            }
        }
        let inv = gf2_invert(&m).unwrap();
        prop_assert!(gf2_mul(&m, &inv).unwrap().is_identity());
        prop_assert_eq!(gf2_invert(&inv).unwrap(), m.clone());
        prop_assert_eq!(m.rank(), n);
    }

    #[test]
    fn cnot_maps_are_invertible(c in arb_cnot_circuit(6, 30)) {
        prop_assert_eq!(gf2_simulate(&c).unwrap().rank(), 6);
    }

    #[test]
    fn commuting_family_recomposes(seed in any::<u64>(), phases in proptest::collection::vec((-PI..PI, -PI..PI), 1..5)) {
        let t = random_unitary2(&mut rng_from_seed(seed));
        let us: Vec<_> = phases
            .iter()
            .map(|&(a, b)| mat2_mul(&mat2_mul(&t, &mat2_diag(C64::from_polar(1.0, a), C64::from_polar(1.0, b))), &mat2_adjoint(&t)))
            .collect();
        let (t2, ds) = simultaneous_diagonalize(&us).unwrap();
        for (u, d) in us.iter().zip(&ds) {
            let r = mat2_mul(&mat2_mul(&t2, &mat2_diag(d[0], d[1])), &mat2_adjoint(&t2));
            prop_assert!(mat2_max_diff(&r, u) <= 1e-8);
        }
    }

    #[test]
    fn walsh_round_trip(n in 1usize..=10, seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = rng_from_seed(seed);
        let pv = PhaseVector::new((0..1 << n).map(|_| rng.gen_range(-PI..PI)).collect()).unwrap();
        let back = walsh_coefficients(&pv).reconstruct();
        let err = pv.angles().iter().zip(back.angles()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-12);
    }

    #[test]
    fn simulation_preserves_norm(c in arb_circuit(6, 25), seed in any::<u64>()) {
        let n = c.total_width();
        let u = random_unitary(1 << n, &mut rng_from_seed(seed));
        let state = StateVector::from_amplitudes(u.column(0)).unwrap();
        let out = apply(&c, &state).unwrap();
        prop_assert!((out.norm() - 1.0).abs() <= 1e-9);
        prop_assert!(full_unitary(&c).unwrap().is_unitary(1e-8));
    }

    #[test]
    fn greedy_schedule_is_faithful(c in arb_circuit(8, 40)) {
        let layered = schedule_greedy(&c).unwrap();
        prop_assert_eq!(layered.gate_count(), c.len());
        prop_assert_eq!(layered.depth(), longest_overlap_chain(&c));
        for layer in &layered.layers {
            let mut seen = std::collections::HashSet::new();
            for g in layer {
                for q in g.qubits() {
                    prop_assert!(seen.insert(q));
                }
            }
        }
        if c.total_width() <= 6 {
            let a = full_unitary(&c).unwrap();
            let b = full_unitary(&layered.flatten()).unwrap();
            prop_assert!(a.max_abs_diff(&b) <= 1e-12);
        }
    }

    #[test]
    fn cnot_pass_is_exact(c in arb_cnot_circuit(7, 40)) {
        let r = cnot_parallelize(&c).unwrap();
        prop_assert!(verify_embedding_gf2(&c, &r.flatten()).unwrap().pass);
        prop_assert!(r.depth() <= r.claimed_depth_bound);
    }

    #[test]
    fn fanout_depth_formula(n in 1usize..=6, seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let gates = (1..=n).map(|t| Gate::ControlledU { control: 0, target: t, u: random_unitary2(&mut rng) }).collect();
        let serial = Circuit::from_gates(n + 1, gates);
        let r = fanout_parallelize(&serial).unwrap();
        prop_assert_eq!(r.depth(), 2 * ceil_log2(n) + 1);
        prop_assert!(verify_embedding(&serial, &r.flatten(), 1e-8).unwrap().pass);
    }

    #[test]
    fn commuting_fanin_depth_formula(n in 1usize..=5, seed in any::<u64>()) {
        let serial = shallowq::generators::gen_random(shallowq::generators::RandomFamily::ControlledCommuting, n + 1, n, seed).unwrap();
        let r = commuting_fanin_parallelize(&serial).unwrap();
        prop_assert_eq!(r.depth(), 2 * ceil_log2(n) + 3);
        prop_assert!(verify_embedding(&serial, &r.flatten(), 1e-8).unwrap().pass);
    }

    #[test]
    fn parity_synthesis_gate_count(n in 1usize..=6, seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = rng_from_seed(seed);
        let pv = PhaseVector::new((0..1 << n).map(|_| rng.gen_range(-PI..PI)).collect()).unwrap();
        let r = morse_synthesize(&pv).unwrap();
        let limit: usize = walsh_coefficients(&pv)
            .iter()
            .filter(|&(s, t)| s != 0 && t.abs() > 1e-12)
            .map(|(s, _)| 2 * (s.count_ones() as usize - 1) + 1)
            .sum();
        prop_assert!(r.flatten().len() <= limit);
    }

    #[test]
    fn compression_never_repeats_a_tuple(c in arb_circuit(6, 40).prop_map(|c| Circuit::from_gates(c.width_data, c.gates.into_iter().filter(Gate::is_diagonal).collect()))) {
        let r = diag_compress(&c, false).unwrap();
        let mut tuples: Vec<_> = r.flatten().gates.iter().map(|g| { let mut q = g.qubits(); q.sort(); q }).collect();
        let total = tuples.len();
        tuples.sort();
        tuples.dedup();
        prop_assert_eq!(tuples.len(), total);
        prop_assert!(verify_embedding(&c, &r.flatten(), 1e-8).unwrap().pass);
    }
}

#[test]
fn parity_vectors_are_orthogonal() {
    for n in 0..=6usize {
        for s in 0..1usize << n {
            for t in 0..1usize << n {
                let dot: f64 = (0..1usize << n).map(|x| parity_sign(s, x) * parity_sign(t, x)).sum();
                assert_eq!(dot, if s == t { (1u64 << n) as f64 } else { 0.0 });
            }
        }
    }
}
