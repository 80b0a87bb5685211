//! Depth-reducing rewrite passes for quantum circuits.
//!
//! The crate turns long sequential circuits of particular shapes into
//! shallow ones that use ancilla qubits: permutations in constant depth,
//! fan-out and fan-in of controlled and diagonal gates in logarithmic depth,
//! CNOT circuits resynthesized through their GF(2) matrix, and arbitrary
//! diagonal operators expanded in the parity basis. Every pass comes with an
//! independent brute-force oracle in [`sim`] that checks the rewritten
//! circuit acts as the original when its ancillae start in `|0⟩`, and
//! returns them there.
//!
//! Modules:
//! - [`circuit`]: the gate/circuit IR, validation and greedy layering;
//! - [`linalg`]: GF(2) matrices, complex unitaries, the parity transform;
//! - [`sim`]: dense, GF(2), phase-vector and basis-tracking oracles;
//! - [`passes`]: the rewrites;
//! - [`generators`]: QFT, staircase and seeded random test circuits.

pub mod circuit;
pub mod error;
pub mod generators;
pub mod linalg;
pub mod passes;
pub mod sim;

pub use circuit::{depth, schedule_greedy, validate, Circuit, Gate, LayeredCircuit, Permutation, Violation};
pub use error::{Error, Result};
pub use passes::PassResult;
