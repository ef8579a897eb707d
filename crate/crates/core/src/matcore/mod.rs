//! Dense complex linear algebra on small square matrices.
//!
//! Composite indices follow `i·d2 + k` everywhere: subsystem one is the slow
//! index.

mod eig;
mod gellmann;
mod matrix;
mod ops;
pub mod random;

pub use eig::{hermitian_eig, min_eigenvalue, HermitianEigen};
pub use gellmann::gell_mann_basis;
pub use matrix::{kron_vec, pauli, vec_inner, vec_norm, ComplexMatrix, C64, HERMITIAN_TOL, I, ONE, ZERO};
pub use ops::{kron, partial_trace, partial_transpose, psd_project, Leg};
