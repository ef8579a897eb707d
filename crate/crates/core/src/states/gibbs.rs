//! Gibbs states and the open-boundary Ising / XXZ chains used as reference
//! Hamiltonians.

use super::DensityMatrix;
use crate::error::{Error, Result};
use crate::matcore::{hermitian_eig, kron, pauli, ComplexMatrix};

const MIN_SITES: usize = 2;
const MAX_SITES: usize = 6;

/// `exp(−βH) / Tr exp(−βH)`, returned with trivial split `(d, 1)`.
pub fn gibbs_state(h: &ComplexMatrix, beta: f64) -> Result<DensityMatrix> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::OutOfRange {
            name: "beta",
            value: beta,
            reason: "inverse temperature must be finite and non-negative",
        });
    }
    let eig = hermitian_eig(h)?;
    let e0 = eig.min();
    let weights: Vec<f64> = eig.values.iter().map(|&e| (-beta * (e - e0)).exp()).collect();
    let z: f64 = weights.iter().sum();
    let rho = eig.map_values(|e| (-beta * (e - e0)).exp() / z);
    let d = h.dim();
    Ok(DensityMatrix::from_trusted(rho.symmetrized(), d, 1))
}

fn check_sites(n: usize) -> Result<()> {
    if !(MIN_SITES..=MAX_SITES).contains(&n) {
        return Err(Error::OutOfRange {
            name: "sites",
            value: n as f64,
            reason: "chain length must be in 2..=6",
        });
    }
    Ok(())
}

/// `op` acting on `site` of an `n`-site chain, identity elsewhere.
fn site_operator(op: &ComplexMatrix, site: usize, n: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::identity(1);
    for s in 0..n {
        let factor = if s == site {
            op.clone()
        } else {
            ComplexMatrix::identity(2)
        };
        out = kron(&out, &factor);
    }
    out
}

fn bond(op: &ComplexMatrix, i: usize, n: usize) -> ComplexMatrix {
    site_operator(op, i, n).matmul(&site_operator(op, i + 1, n))
}

/// `−J Σ σᶻᵢσᶻᵢ₊₁ − h Σ σˣᵢ` with open boundaries.
pub fn ising_hamiltonian(n: usize, j: f64, h: f64) -> Result<ComplexMatrix> {
    check_sites(n)?;
    let (x, z) = (pauli::x(), pauli::z());
    let mut out = ComplexMatrix::zeros(1 << n);
    for i in 0..n - 1 {
        out -= &bond(&z, i, n).scale_real(j);
    }
    for i in 0..n {
        out -= &site_operator(&x, i, n).scale_real(h);
    }
    Ok(out)
}

/// `−J Σ (σˣᵢσˣᵢ₊₁ + σʸᵢσʸᵢ₊₁ + Δ σᶻᵢσᶻᵢ₊₁)` with open boundaries.
pub fn xxz_hamiltonian(n: usize, j: f64, delta: f64) -> Result<ComplexMatrix> {
    check_sites(n)?;
    let (x, y, z) = (pauli::x(), pauli::y(), pauli::z());
    let mut out = ComplexMatrix::zeros(1 << n);
    for i in 0..n - 1 {
        let b = &(&bond(&x, i, n) + &bond(&y, i, n)) + &bond(&z, i, n).scale_real(delta);
        out -= &b.scale_real(j);
    }
    Ok(out)
}
