//! Dense complex matrices, unitary checks and eigendecomposition of unitaries.

use std::f64::consts::{PI, TAU};
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// A 2×2 complex matrix, row-major.
pub type Mat2 = [[C64; 2]; 2];

/// Tolerance on `u†u = I` for anything treated as a gate.
pub const EPS_UNITARY: f64 = 1e-10;
/// Tolerance on `‖UV − VU‖_max` for "mutually commuting".
pub const EPS_COMMUTE: f64 = 1e-9;
/// Eigenphase separation above which a 2×2 unitary's eigenbasis is trusted.
pub const EIG_SEPARATION: f64 = 1e-6;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn mat2_identity() -> Mat2 {
    [[ONE, ZERO], [ZERO, ONE]]
}

pub fn mat2_diag(a: C64, b: C64) -> Mat2 {
    [[a, ZERO], [ZERO, b]]
}

pub fn hadamard() -> Mat2 {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

pub fn pauli_x() -> Mat2 {
    [[ZERO, ONE], [ONE, ZERO]]
}

pub fn pauli_z() -> Mat2 {
    mat2_diag(ONE, -ONE)
}

pub fn phase_gate(theta: f64) -> Mat2 {
    mat2_diag(ONE, C64::from_polar(1.0, theta))
}

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat2_adjoint(a: &Mat2) -> Mat2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

pub fn mat2_max_diff(a: &Mat2, b: &Mat2) -> f64 {
    let mut m = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            m = m.max((a[i][j] - b[i][j]).norm());
        }
    }
    m
}

/// `‖u†u − I‖_max`.
pub fn mat2_unitarity_deviation(u: &Mat2) -> f64 {
    mat2_max_diff(&mat2_mul(&mat2_adjoint(u), u), &mat2_identity())
}

pub fn mat2_is_diagonal(u: &Mat2, tol: f64) -> bool {
    u[0][1].norm() <= tol && u[1][0].norm() <= tol
}

/// Commutator norm `‖ab − ba‖_max`.
pub fn mat2_commutator_norm(a: &Mat2, b: &Mat2) -> f64 {
    mat2_max_diff(&mat2_mul(a, b), &mat2_mul(b, a))
}

/// Square complex matrix, row-major. Dimension is a power of two whenever
/// the matrix is used as an operator on qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_diagonal(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    pub fn from_mat2(m: &Mat2) -> Self {
        Self {
            dim: 2,
            data: vec![m[0][0], m[0][1], m[1][0], m[1][1]],
        }
    }

    pub fn to_mat2(&self) -> Option<Mat2> {
        (self.dim == 2).then(|| [[self.data[0], self.data[1]], [self.data[2], self.data[3]]])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of qubits the matrix acts on, if the dimension is a power of two.
    pub fn num_qubits(&self) -> Option<usize> {
        (self.dim.is_power_of_two()).then(|| self.dim.trailing_zeros() as usize)
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: C64) {
        self.data[row * self.dim + col] = v;
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        self.data.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, col: usize) -> Vec<C64> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }

    pub fn set_column(&mut self, col: usize, values: &[C64]) {
        for (r, &v) in values.iter().enumerate() {
            self.set(r, col, v);
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖m†m − I‖_max`.
    pub fn unitarity_deviation(&self) -> f64 {
        let prod = self.adjoint().mul(self).expect("same dimension");
        prod.max_abs_diff(&Self::identity(self.dim))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| i == j || self.get(i, j).norm() <= tol))
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).expect("same dimension");
            }
            base = base.mul(&base).expect("same dimension");
            exp >>= 1;
        }
        acc
    }

    fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }

    fn from_nalgebra(m: &DMatrix<C64>) -> Self {
        let dim = m.nrows();
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                out.set(i, j, m[(i, j)]);
            }
        }
        out
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.data.chunks(self.dim) {
            let cells: Vec<String> = row
                .iter()
                .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
                .collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Phase of `z` in `[0, 2π)`, with values within 1e-12 of 2π snapped to 0.
fn phase_0_2pi(z: C64) -> f64 {
    let p = z.arg().rem_euclid(TAU);
    if TAU - p < 1e-12 {
        0.0
    } else {
        p
    }
}

/// Distance between two angles on the circle, in `[0, π]`.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Reduces an angle into `(−π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Eigendecomposition `u = t·diag(d)·t†` of a unitary matrix.
///
/// Columns of `t` are ordered by increasing eigenphase in `[0, 2π)`, and each
/// column is rephased so that its first non-negligible entry is real positive.
/// The decomposition goes through a complex Schur form, which is diagonal for
/// normal matrices.
pub fn eig_unitary(u: &ComplexMatrix) -> Result<(ComplexMatrix, Vec<C64>)> {
    if !u.dim.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(u.dim));
    }
    let deviation = u.unitarity_deviation();
    if deviation > EPS_UNITARY {
        return Err(Error::NotUnitary { deviation });
    }
    let (q, t) = u.to_nalgebra().schur().unpack();
    let q = ComplexMatrix::from_nalgebra(&q);
    let n = u.dim;

    let mut order: Vec<(f64, usize)> = (0..n)
        .map(|i| {
            let ev = t[(i, i)];
            (phase_0_2pi(ev), i)
        })
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut vectors = ComplexMatrix::zeros(n);
    let mut values = Vec::with_capacity(n);
    for (col, &(_, src)) in order.iter().enumerate() {
        let mut v = q.column(src);
        if let Some(lead) = v.iter().copied().find(|z| z.norm() > 1e-12) {
            let rot = lead.conj() / lead.norm();
            v.iter_mut().for_each(|z| *z *= rot);
            // make the leading entry exactly real
            if let Some(first) = v.iter_mut().find(|z| z.norm() > 1e-12) {
                first.im = 0.0;
            }
        }
        vectors.set_column(col, &v);
        let ev = t[(src, src)];
        values.push(ev / ev.norm());
    }
    Ok((vectors, values))
}

/// Shared eigenbasis of a commuting family of 2×2 unitaries.
///
/// Returns `t` and, for each input, the diagonal `(d0, d1)` with
/// `u_i = t·diag(d_i)·t†`. The basis comes from the first input whose
/// eigenphases are separated by more than [`EIG_SEPARATION`]; failing that,
/// from the best-separated input; a family of scalars gets `t = I`.
pub fn simultaneous_diagonalize(us: &[Mat2]) -> Result<(Mat2, Vec<[C64; 2]>)> {
    for u in us {
        let deviation = mat2_unitarity_deviation(u);
        if deviation > EPS_UNITARY {
            return Err(Error::NotUnitary { deviation });
        }
    }
    for i in 0..us.len() {
        for j in i + 1..us.len() {
            let norm = mat2_commutator_norm(&us[i], &us[j]);
            if norm > EPS_COMMUTE {
                return Err(Error::NotCommuting {
                    first: i,
                    second: j,
                    norm,
                });
            }
        }
    }

    let mut best: Option<(f64, Mat2)> = None;
    let mut chosen = None;
    for u in us {
        let (t, d) = eig_unitary(&ComplexMatrix::from_mat2(u))?;
        let sep = angle_distance(d[0].arg(), d[1].arg());
        let t = t.to_mat2().expect("2x2");
        if sep > EIG_SEPARATION {
            chosen = Some(t);
            break;
        }
        if best.as_ref().map_or(true, |(s, _)| sep > *s) {
            best = Some((sep, t));
        }
    }
    let t = match (chosen, best) {
        (Some(t), _) => t,
        (None, Some((sep, t))) if sep > 1e-12 => t,
        _ => mat2_identity(),
    };

    let t_adj = mat2_adjoint(&t);
    let mut ds = Vec::with_capacity(us.len());
    for (i, u) in us.iter().enumerate() {
        let m = mat2_mul(&mat2_mul(&t_adj, u), &t);
        let d = [m[0][0], m[1][1]];
        let recomposed = mat2_mul(&mat2_mul(&t, &mat2_diag(d[0], d[1])), &t_adj);
        let residual = mat2_max_diff(&recomposed, u);
        if residual > 1e-8 {
            return Err(Error::NotCommuting {
                first: 0,
                second: i,
                norm: residual,
            });
        }
        ds.push([d[0] / d[0].norm(), d[1] / d[1].norm()]);
    }
    Ok((t, ds))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Mat2, b: &Mat2, tol: f64) -> bool {
        mat2_max_diff(a, b) <= tol
    }

    #[test]
    fn identity_family_gives_identity_basis() {
        let (t, ds) = simultaneous_diagonalize(&[mat2_identity(), mat2_identity()]).unwrap();
        assert!(close(&t, &mat2_identity(), 1e-12));
        assert_eq!(ds.len(), 2);
        for d in ds {
            assert!((d[0] - ONE).norm() < 1e-12 && (d[1] - ONE).norm() < 1e-12);
        }
    }

    #[test]
    fn already_diagonal_family_keeps_identity_basis() {
        let s = mat2_diag(ONE, c(0.0, 1.0));
        let (t, ds) = simultaneous_diagonalize(&[pauli_z(), s]).unwrap();
        assert!(close(&t, &mat2_identity(), 1e-12));
        assert!((ds[0][1] + ONE).norm() < 1e-12);
        assert!((ds[1][1] - c(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn bit_flip_family_is_diagonalized_by_hadamard() {
        // eigenvectors of X: (1,1)/√2 for +1, (1,-1)/√2 for -1; phases 0 < π
        let (t, ds) = simultaneous_diagonalize(&[pauli_x(), mat2_identity()]).unwrap();
        assert!(close(&t, &hadamard(), 1e-12), "{t:?}");
        assert!((ds[0][0] - ONE).norm() < 1e-12);
        assert!((ds[0][1] + ONE).norm() < 1e-12);
        assert!((ds[1][0] - ONE).norm() < 1e-12 && (ds[1][1] - ONE).norm() < 1e-12);
    }

    #[test]
    fn non_commuting_pair_is_reported() {
        let err = simultaneous_diagonalize(&[pauli_x(), pauli_z()]).unwrap_err();
        match err {
            Error::NotCommuting { first, second, norm } => {
                assert_eq!((first, second), (0, 1));
                assert!((norm - 2.0).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn eig_of_identity_and_diagonal() {
        let (t, d) = eig_unitary(&ComplexMatrix::identity(4)).unwrap();
        assert!(t.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
        assert!(d.iter().all(|z| (z - ONE).norm() < 1e-12));

        let w = C64::from_polar(1.0, PI / 4.0);
        let u = ComplexMatrix::from_diagonal(&[ONE, w]);
        let (t, d) = eig_unitary(&u).unwrap();
        assert!(t.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
        assert!((d[0] - ONE).norm() < 1e-12 && (d[1] - w).norm() < 1e-12);
    }

    #[test]
    fn eig_rejects_non_unitary() {
        let m = ComplexMatrix::from_diagonal(&[ONE, c(2.0, 0.0)]);
        assert!(matches!(eig_unitary(&m), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn wrap_and_distance() {
        assert!((wrap_angle(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_angle(-0.5) + 0.5).abs() < 1e-12);
        assert!((angle_distance(0.1, TAU - 0.1) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn pow_matches_repeated_product() {
        let h = ComplexMatrix::from_mat2(&hadamard());
        assert!(h.pow(2).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
        assert!(h.pow(3).max_abs_diff(&h) < 1e-12);
        assert!(h.pow(0).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
    }
}
