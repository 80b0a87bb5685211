//! Phase vectors of diagonal operators and their expansion in the parity
//! (Walsh) basis.
//!
//! Subset masks share the bit layout of basis indices: qubit `q` of an
//! `n`-qubit register is bit `n - 1 - q`. With that layout the parity sign of
//! subset `s` at basis state `x` is simply `(-1)^popcount(x & s)`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// The `2^n` phase angles of a diagonal operator, indexed by basis state.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseVector {
    n: usize,
    omega: Vec<f64>,
}

impl PhaseVector {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            omega: vec![0.0; 1 << n],
        }
    }

    pub fn new(omega: Vec<f64>) -> Result<Self> {
        let len = omega.len();
        if !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        Ok(Self {
            n: len.trailing_zeros() as usize,
            omega,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn angles(&self) -> &[f64] {
        &self.omega
    }

    pub fn angles_mut(&mut self) -> &mut [f64] {
        &mut self.omega
    }

    /// Elementwise sum; composing diagonal operators adds their phases.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(Self {
            n: self.n,
            omega: self.omega.iter().zip(&other.omega).map(|(a, b)| a + b).collect(),
        })
    }

    /// Largest distance on the unit circle between corresponding angles,
    /// i.e. the comparison is mod 2π.
    pub fn max_circle_distance(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        self.omega
            .iter()
            .zip(&other.omega)
            .map(|(a, b)| crate::linalg::angle_distance(*a, *b))
            .fold(0.0, f64::max)
    }

    /// Copy with every angle reduced into `[0, 2π)`.
    pub fn reduced(&self) -> Self {
        Self {
            n: self.n,
            omega: self.omega.iter().map(|a| a.rem_euclid(TAU)).collect(),
        }
    }
}

/// Coefficients `θ_s` of a phase vector in the parity basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetCoefficients {
    n: usize,
    theta: BTreeMap<usize, f64>,
}

impl SubsetCoefficients {
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Coefficient for subset mask `s` (zero when absent).
    pub fn get(&self, s: usize) -> f64 {
        self.theta.get(&s).copied().unwrap_or(0.0)
    }

    /// Non-zero entries in ascending mask order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.theta.iter().map(|(&s, &t)| (s, t))
    }

    /// `Σ_s θ_s μ_s`, evaluated directly.
    pub fn reconstruct(&self) -> PhaseVector {
        let mut omega = vec![0.0; 1 << self.n];
        for (x, w) in omega.iter_mut().enumerate() {
            *w = self.iter().map(|(s, t)| t * parity_sign(s, x)).sum();
        }
        PhaseVector { n: self.n, omega }
    }
}

/// `μ_s(x)`: +1 when an even number of the qubits in `s` are set in `x`.
#[inline]
pub fn parity_sign(s: usize, x: usize) -> f64 {
    if (s & x).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Subset mask for a list of qubits of an `n`-qubit register.
pub fn subset_mask(n: usize, qubits: &[usize]) -> usize {
    qubits.iter().fold(0, |m, &q| m | (1 << (n - 1 - q)))
}

/// Qubits of subset mask `s`, ascending.
pub fn subset_qubits(n: usize, s: usize) -> Vec<usize> {
    (0..n).filter(|&q| s >> (n - 1 - q) & 1 == 1).collect()
}

/// Expands `ω` in the parity basis: `θ_s = 2^{-n} Σ_x ω_x μ_s(x)`.
///
/// Uses the in-place fast Walsh–Hadamard butterfly, `O(n·2^n)`. Exact zeros
/// are omitted from the result.
pub fn walsh_coefficients(pv: &PhaseVector) -> SubsetCoefficients {
    let mut a = pv.omega.clone();
    let len = a.len();
    let mut h = 1;
    while h < len {
        for block in (0..len).step_by(2 * h) {
            for i in block..block + h {
                let (x, y) = (a[i], a[i + h]);
                a[i] = x + y;
                a[i + h] = x - y;
            }
        }
        h *= 2;
    }
    let scale = 1.0 / len as f64;
    let theta = a
        .into_iter()
        .enumerate()
        .filter(|(_, v)| *v != 0.0)
        .map(|(s, v)| (s, v * scale))
        .collect();
    SubsetCoefficients { n: pv.n, theta }
}

/// [`walsh_coefficients`] on a raw angle list.
pub fn walsh_coefficients_of(omega: &[f64]) -> Result<SubsetCoefficients> {
    Ok(walsh_coefficients(&PhaseVector::new(omega.to_vec())?))
}
