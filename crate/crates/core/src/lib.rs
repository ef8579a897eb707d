//! Positive maps, Choi matrices and bipartite entanglement diagnostics on
//! small dense systems.
//!
//! * [`matcore`]: dense complex linear algebra (Jacobi eigensolver, Kronecker
//!   products, partial trace and transpose, PSD projection).
//! * [`states`]: density matrices, restrictions, entropy, fixtures and Gibbs
//!   states of spin chains.
//! * [`maps`]: linear maps as Choi matrices, the CP / decomposable /
//!   block-positive hierarchy and a Dykstra decomposability solver.
//! * [`measures`]: PPT and map witnesses, negativity, entanglement of
//!   formation and the coefficient of quantum correlations (upper bounds).
//! * [`dynamics`]: time-parametrized channel families applied to a state.

pub mod dynamics;
pub mod error;
pub mod maps;
pub mod matcore;
pub mod measures;
pub mod states;

pub use error::{Error, Result};
