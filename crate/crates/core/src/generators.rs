//! Circuit families used as pass inputs, fixtures and demos.

use std::f64::consts::{PI, TAU};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::circuit::{Circuit, Gate, Permutation};
use crate::error::{Error, Result};
use crate::linalg::complex::{self, mat2_adjoint, mat2_mul, mat2_unitarity_deviation, C64};
use crate::linalg::{ComplexMatrix, Mat2, EPS_UNITARY};

/// The textbook QFT without the final bit reversal.
///
/// Qubit `j` gets a Hadamard followed by controlled phases `π/2^{k-j}` with
/// every later qubit `k`. In this order greedy layering packs the circuit
/// into `2n − 1` layers. The operator equals `R·F` where `F` is the DFT
/// matrix and `R` reverses the bit order of the output index (see
/// [`qft_output_permutation`]).
pub fn gen_qft(n: usize) -> Circuit {
    let mut c = Circuit::new(n.max(1));
    for j in 0..n {
        c.push(Gate::h(j));
        for k in j + 1..n {
            c.push(Gate::SymmetricPhase {
                q1: k,
                q2: j,
                theta: PI / (1u64 << (k - j)) as f64,
            });
        }
    }
    c
}

/// Bit reversal of `n`-bit indices, the output order left by [`gen_qft`],
/// expressed as a wire permutation (wire `i` ↔ wire `n − 1 − i`).
pub fn qft_output_permutation(n: usize) -> Permutation {
    Permutation::new((0..n).rev().collect()).expect("reversal is a bijection")
}

/// Controlled-`u` gates on `(i, i+1)` for `i = 0..n−2`.
pub fn gen_staircase(n: usize, u: Mat2) -> Result<Circuit> {
    if n < 2 {
        return Err(Error::Precondition("staircase needs at least 2 qubits".into()));
    }
    let deviation = mat2_unitarity_deviation(&u);
    if deviation > EPS_UNITARY {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(Circuit::from_gates(
        n,
        (0..n - 1)
            .map(|i| Gate::ControlledU { control: i, target: i + 1, u })
            .collect(),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomFamily {
    Cnot,
    Diagonal2q,
    ControlledCommuting,
    Permutation,
}

impl RandomFamily {
    pub fn name(&self) -> &'static str {
        match self {
            RandomFamily::Cnot => "cnot",
            RandomFamily::Diagonal2q => "diagonal-2q",
            RandomFamily::ControlledCommuting => "controlled-commuting",
            RandomFamily::Permutation => "permutation",
        }
    }
}

impl FromStr for RandomFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "cnot" => RandomFamily::Cnot,
            "diagonal-2q" | "diagonal" => RandomFamily::Diagonal2q,
            "controlled-commuting" | "commuting" => RandomFamily::ControlledCommuting,
            "permutation" => RandomFamily::Permutation,
            other => return Err(Error::UnknownFamily(other.to_string())),
        })
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Haar-like random unitary: Gram–Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        // two passes of modified Gram–Schmidt for numerical orthogonality
        for _ in 0..2 {
            for u in &cols {
                let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                v.iter_mut().zip(u).for_each(|(b, a)| *b -= proj * a);
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= norm);
        cols.push(v);
    }
    let mut m = ComplexMatrix::zeros(dim);
    for (j, col) in cols.iter().enumerate() {
        m.set_column(j, col);
    }
    m
}

pub fn random_unitary2<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    random_unitary(2, rng).to_mat2().expect("2x2")
}

pub fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.gen_range(0.0..TAU)
}

pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Permutation::new(images).expect("shuffle is a bijection")
}

fn distinct_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (usize, usize) {
    let a = rng.gen_range(0..n);
    let mut b = rng.gen_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

/// Seeded random instance of a pass's input family.
///
/// - `cnot`: `count` CNOTs on random distinct pairs;
/// - `diagonal-2q`: `count` two-qubit diagonal gates with uniform phases;
/// - `controlled-commuting`: `count` controlled-`U_i` gates on target 0 with
///   `U_i = T·D_i·T†` for one random `T`; controls cycle through a shuffled
///   `1..n`, so they are distinct whenever `count < n`;
/// - `permutation`: a uniform random permutation as a serial swap chain
///   (`count` is ignored).
pub fn gen_random(family: RandomFamily, n: usize, count: usize, seed: u64) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let mut rng = rng_from_seed(seed);
    if family != RandomFamily::Permutation && n < 2 {
        return Err(Error::Precondition(format!(
            "family {} needs at least 2 qubits",
            family.name()
        )));
    }
    let circuit = match family {
        RandomFamily::Cnot => Circuit::from_gates(
            n,
            (0..count)
                .map(|_| {
                    let (c, t) = distinct_pair(n, &mut rng);
                    Gate::cnot(c, t)
                })
                .collect(),
        ),
        RandomFamily::Diagonal2q => Circuit::from_gates(
            n,
            (0..count)
                .map(|_| {
                    let (a, b) = distinct_pair(n, &mut rng);
                    Gate::Diagonal {
                        qubits: vec![a, b],
                        phases: (0..4).map(|_| random_phase(&mut rng)).collect(),
                    }
                })
                .collect(),
        ),
        RandomFamily::ControlledCommuting => {
            let t = random_unitary2(&mut rng);
            let t_adj = mat2_adjoint(&t);
            let mut controls: Vec<usize> = (1..n).collect();
            controls.shuffle(&mut rng);
            Circuit::from_gates(
                n,
                (0..count)
                    .map(|i| {
                        let d = complex::mat2_diag(
                            C64::from_polar(1.0, random_phase(&mut rng)),
                            C64::from_polar(1.0, random_phase(&mut rng)),
                        );
                        Gate::ControlledU {
                            control: controls[i % controls.len()],
                            target: 0,
                            u: mat2_mul(&mat2_mul(&t, &d), &t_adj),
                        }
                    })
                    .collect(),
            )
        }
        RandomFamily::Permutation => random_permutation(n, &mut rng).to_swap_circuit(),
    };
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::schedule_greedy;
    use crate::linalg::complex::{hadamard, mat2_commutator_norm, pauli_z};

    #[test]
    fn qft_gate_counts_and_depths() {
        for n in 1..=8 {
            let c = gen_qft(n);
            assert_eq!(c.len(), n + n * (n - 1) / 2);
            assert!(c.validate().is_empty());
            assert_eq!(schedule_greedy(&c).unwrap().depth(), 2 * n - 1, "n = {n}");
        }
    }

    #[test]
    fn staircase_shapes() {
        assert_eq!(gen_staircase(2, hadamard()).unwrap().len(), 1);
        let c = gen_staircase(5, hadamard()).unwrap();
        assert_eq!(c.len(), 4);
        assert_eq!(schedule_greedy(&c).unwrap().depth(), 4);
        assert!(gen_staircase(1, hadamard()).is_err());
        let bad = [[C64::new(2.0, 0.0), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]];
        assert!(matches!(gen_staircase(3, bad), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn random_is_deterministic() {
        let a = gen_random(RandomFamily::Cnot, 4, 10, 7).unwrap();
        let b = gen_random(RandomFamily::Cnot, 4, 10, 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, gen_random(RandomFamily::Cnot, 4, 10, 8).unwrap());
    }

    #[test]
    fn random_permutation_family_is_bijective() {
        let c = gen_random(RandomFamily::Permutation, 5, 0, 1).unwrap();
        let m = crate::sim::gf2_simulate(&c).unwrap();
        let p = Permutation::from_gf2(&m).unwrap();
        assert_eq!(p.len(), 5);
    }

    #[test]
    fn commuting_family_commutes() {
        let c = gen_random(RandomFamily::ControlledCommuting, 3, 4, 2).unwrap();
        let us: Vec<Mat2> = c
            .gates
            .iter()
            .map(|g| match g {
                Gate::ControlledU { u, .. } => *u,
                _ => unreachable!(),
            })
            .collect();
        for a in &us {
            for b in &us {
                assert!(mat2_commutator_norm(a, b) <= 1e-9);
            }
        }
        assert!(mat2_commutator_norm(&us[0], &pauli_z()) > 1e-6);
    }

    #[test]
    fn unknown_family_is_rejected() {
        assert_eq!(
            "toffoli".parse::<RandomFamily>().unwrap_err(),
            Error::UnknownFamily("toffoli".into())
        );
    }

    #[test]
    fn random_unitaries_are_unitary() {
        let mut rng = rng_from_seed(3);
        for dim in [2, 4, 8] {
            assert!(random_unitary(dim, &mut rng).unitarity_deviation() < 1e-12);
        }
    }
}
