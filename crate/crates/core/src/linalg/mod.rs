//! GF(2) matrices, complex unitaries and the parity-basis transform.

pub mod complex;
pub mod gf2;
pub mod walsh;

pub use complex::{
    angle_distance, eig_unitary, simultaneous_diagonalize, wrap_angle, ComplexMatrix, Mat2, C64,
    EPS_COMMUTE, EPS_UNITARY,
};
pub use gf2::{gf2_invert, gf2_mul, Gf2Matrix};
pub use walsh::{parity_sign, walsh_coefficients, PhaseVector, SubsetCoefficients};
