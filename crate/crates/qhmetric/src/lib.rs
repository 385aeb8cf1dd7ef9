//! Exact construction of Hilbert-space metrics for Gegenbauer quantum-lattice
//! Hamiltonians.
//!
//! The crate builds the tridiagonal lattice Hamiltonians `H(a)`, solves the
//! quasi-Hermiticity (Dieudonne) equation `H^T Theta = Theta H` exactly over
//! rational functions in the coupling `a` by recurrent elimination, and maps
//! out where the resulting candidate metrics are positive definite, including
//! high-precision eigenvalue curves and the hermitizing similarity transform.

pub mod bigfloat;
pub mod dieudonne;
pub mod error;
pub mod gegenbauer;
pub mod hamiltonian;
pub mod matrix;
pub mod poly;
pub mod positivity;
pub mod rational;
pub mod ratfunc;
pub mod roots;
pub mod verify;

pub use bigfloat::BigFloat;
pub use error::{Error, Result};
pub use poly::RatPoly;
pub use rational::Rational;
pub use ratfunc::RatFunc;
