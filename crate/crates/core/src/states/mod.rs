//! Bipartite density matrices, restrictions to subsystems, entropy and the
//! finite ensembles that stand in for decomposition measures.

mod gibbs;
mod named;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{hermitian_eig, kron, partial_trace, ComplexMatrix, HermitianEigen, Leg};

pub use gibbs::{gibbs_state, ising_hamiltonian, xxz_hamiltonian};
pub use named::{make_named, random_density, random_separable, Fixture, StateFamily};

/// Trace must equal one within this tolerance.
pub const TRACE_TOL: f64 = 1e-9;
/// Smallest eigenvalue allowed in a valid state.
pub const PSD_TOL: f64 = 1e-9;
/// Eigenvalues at or below this floor contribute nothing to the entropy.
pub const ENTROPY_FLOOR: f64 = 1e-12;

/// A density matrix on `C^{d1} ⊗ C^{d2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    d1: usize,
    d2: usize,
}

impl DensityMatrix {
    /// Validates hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix, d1: usize, d2: usize) -> Result<Self> {
        if d1 == 0 || d2 == 0 || matrix.dim() != d1 * d2 {
            return Err(Error::DimensionMismatch {
                expected: d1 * d2,
                found: matrix.dim(),
            });
        }
        let matrix = matrix.checked_hermitian()?;
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let min = hermitian_eig(&matrix)?.min();
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { matrix, d1, d2 })
    }

    /// Normalizes a nonzero PSD matrix to unit trace.
    pub fn from_unnormalized(matrix: ComplexMatrix, d1: usize, d2: usize) -> Result<Self> {
        let tr = matrix.trace().re;
        if !(tr > 0.0) || !tr.is_finite() {
            return Err(Error::InvalidState(format!("cannot normalize trace {tr}")));
        }
        Self::new(matrix.scale_real(1.0 / tr), d1, d2)
    }

    /// Pure state `|ψ><ψ|/<ψ|ψ>`.
    pub fn pure(psi: &[crate::matcore::C64], d1: usize, d2: usize) -> Result<Self> {
        Self::from_unnormalized(ComplexMatrix::projector(psi), d1, d2)
    }

    /// Single-system state (trivial second leg).
    pub fn single(matrix: ComplexMatrix) -> Result<Self> {
        let d = matrix.dim();
        Self::new(matrix, d, 1)
    }

    pub fn maximally_mixed(d1: usize, d2: usize) -> Self {
        let d = d1 * d2;
        Self {
            matrix: ComplexMatrix::identity(d).scale_real(1.0 / d as f64),
            d1,
            d2,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn split(&self) -> (usize, usize) {
        (self.d1, self.d2)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn eigen(&self) -> HermitianEigen {
        // validated at construction, cannot fail
        hermitian_eig(&self.matrix).expect("density matrix is hermitian")
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.eigen().values.iter().filter(|&&x| x > tol).count()
    }

    /// Marginal on `leg`, returned with trivial split `(d, 1)`.
    pub fn restrict(&self, leg: Leg) -> DensityMatrix {
        let m = partial_trace(&self.matrix, (self.d1, self.d2), leg).expect("split checked");
        let d = m.dim();
        DensityMatrix {
            matrix: m.symmetrized(),
            d1: d,
            d2: 1,
        }
    }

    /// `ϱ₁ ⊗ ϱ₂` with split `(dim ϱ₁, dim ϱ₂)`.
    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            matrix: kron(&a.matrix, &b.matrix),
            d1: a.dim(),
            d2: b.dim(),
        }
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> f64 {
        von_neumann_entropy(self)
    }

    pub fn to_json(&self) -> StateJson {
        let (re, im) = self.matrix.to_parts();
        StateJson {
            d1: self.d1,
            d2: self.d2,
            re,
            im,
        }
    }

    pub fn from_json(json: &StateJson) -> Result<Self> {
        let m = ComplexMatrix::from_parts(&json.re, &json.im)?;
        Self::new(m, json.d1, json.d2)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("state serializes")
    }

    /// Parses and validates a state from its JSON text.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let json: StateJson = serde_json::from_str(text)?;
        Self::from_json(&json)
    }

    /// Wraps a matrix already known to be a valid state (internal use).
    pub(crate) fn from_trusted(matrix: ComplexMatrix, d1: usize, d2: usize) -> Self {
        debug_assert_eq!(matrix.dim(), d1 * d2);
        Self { matrix, d1, d2 }
    }
}

/// Wire format of a state: `{d1, d2, re, im}` with row-major nested lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    pub d1: usize,
    pub d2: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

/// Shannon entropy (bits) of a spectrum, ignoring entries at or below
/// [`ENTROPY_FLOOR`].
pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    let s: f64 = values
        .iter()
        .filter(|&&x| x > ENTROPY_FLOOR)
        .map(|&x| -x * x.log2())
        .sum();
    s.max(0.0)
}

/// `S(ϱ) = −Tr ϱ log₂ ϱ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(&rho.eigen().values)
}

/// Finite decomposition `ϱ = Σ λᵢ ϱᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    weights: Vec<f64>,
    components: Vec<DensityMatrix>,
}

impl Ensemble {
    pub const WEIGHT_TOL: f64 = 1e-12;

    pub fn new(weights: Vec<f64>, components: Vec<DensityMatrix>) -> Result<Self> {
        if weights.len() != components.len() || weights.is_empty() {
            return Err(Error::InvalidState(format!(
                "ensemble has {} weights and {} components",
                weights.len(),
                components.len()
            )));
        }
        if weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidState("ensemble weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > Self::WEIGHT_TOL {
            return Err(Error::InvalidState(format!("ensemble weights sum to {total}")));
        }
        let split = components[0].split();
        if components.iter().any(|c| c.split() != split) {
            return Err(Error::InvalidState("ensemble components differ in split".into()));
        }
        Ok(Self { weights, components })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn components(&self) -> &[DensityMatrix] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &DensityMatrix)> {
        self.weights.iter().copied().zip(&self.components)
    }

    /// `Σ λᵢ ϱᵢ`.
    pub fn barycenter(&self) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.components[0].dim());
        for (w, c) in self.iter() {
            acc += &c.matrix().scale_real(w);
        }
        acc
    }

    /// Frobenius distance between the barycenter and `state`.
    pub fn barycenter_error(&self, state: &DensityMatrix) -> f64 {
        self.barycenter().distance(state.matrix())
    }

    /// Pushforward along the restriction to `leg`: `{(λᵢ, rᵢ ϱᵢ)}`.
    pub fn pushforward(&self, leg: Leg) -> Ensemble {
        Ensemble {
            weights: self.weights.clone(),
            components: self.components.iter().map(|c| c.restrict(leg)).collect(),
        }
    }

    pub fn to_json(&self) -> EnsembleJson {
        EnsembleJson {
            weights: self.weights.clone(),
            components: self.components.iter().map(|c| c.to_json()).collect(),
        }
    }

    pub fn from_json(json: &EnsembleJson) -> Result<Self> {
        let comps = json
            .components
            .iter()
            .map(DensityMatrix::from_json)
            .collect::<Result<Vec<_>>>()?;
        Self::new(json.weights.clone(), comps)
    }

    pub(crate) fn from_trusted(weights: Vec<f64>, components: Vec<DensityMatrix>) -> Self {
        Self { weights, components }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleJson {
    pub weights: Vec<f64>,
    pub components: Vec<StateJson>,
}
