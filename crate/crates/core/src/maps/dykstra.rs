//! Decomposability as a two-cone feasibility problem.
//!
//! `C` is decomposable iff `C = A + B` with `A ⪰ 0` and `B^Γ ⪰ 0`. In terms
//! of `A` alone: `A ∈ K₁ ∩ K₂` with `K₁` the PSD cone and
//! `K₂ = {A : (C − A)^Γ ⪰ 0}`. Because `Γ` is a linear Frobenius isometry
//! and an involution, projecting `Z` onto `K₂` is
//! `B ← P_psd((C − Z)^Γ)`, `A ← C − B^Γ`.

use serde::Serialize;

use super::ChoiMatrix;
use crate::error::Result;
use crate::matcore::{hermitian_eig, partial_transpose, psd_project, ComplexMatrix, Leg};

#[derive(Debug, Clone, Copy)]
pub struct DykstraOptions {
    pub max_iter: usize,
    /// Residual below which the split is accepted.
    pub tol: f64,
}

impl Default for DykstraOptions {
    fn default() -> Self {
        Self {
            max_iter: 5000,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionVerdict {
    Decomposable,
    /// Budget exhausted with residual in `[tol, 10·tol)`.
    Indeterminate,
    /// Residual at least `10·tol` after the budget. Numerical evidence, not
    /// a proof.
    NonDecomposable,
}

#[derive(Debug, Clone)]
pub struct DecompositionReport {
    pub verdict: DecompositionVerdict,
    /// Frobenius distance between the last PSD iterate and the last `K₂`
    /// iterate.
    pub residual: f64,
    pub iterations: usize,
    /// `(A, B)` with `C = A + B`, `A ⪰ −tol`, `B^Γ ⪰ 0`; only on success.
    pub split: Option<(ComplexMatrix, ComplexMatrix)>,
}

impl DecompositionReport {
    pub fn is_decomposable(&self) -> bool {
        self.verdict == DecompositionVerdict::Decomposable
    }
}

fn project_k2(c: &ComplexMatrix, z: &ComplexMatrix, dims: (usize, usize)) -> Result<ComplexMatrix> {
    let b_pt = psd_project(&partial_transpose(&(c - z), dims, Leg::Second)?.symmetrized())?;
    Ok(c - &partial_transpose(&b_pt, dims, Leg::Second)?)
}

fn trivial_split(a: ComplexMatrix, b: ComplexMatrix) -> DecompositionReport {
    DecompositionReport {
        verdict: DecompositionVerdict::Decomposable,
        residual: 0.0,
        iterations: 0,
        split: Some((a, b)),
    }
}

/// Dykstra's alternating projections between `K₁` and `K₂`, started at `C`.
pub fn is_decomposable(choi: &ChoiMatrix, opts: &DykstraOptions) -> Result<DecompositionReport> {
    choi.require_hermitian()?;
    let dims = choi.dims();
    let c = choi.matrix();
    let n = c.dim();

    // Cone members split trivially.
    if hermitian_eig(c)?.min() >= 0.0 {
        return Ok(trivial_split(c.clone(), ComplexMatrix::zeros(n)));
    }
    if hermitian_eig(&partial_transpose(c, dims, Leg::Second)?)?.min() >= 0.0 {
        return Ok(trivial_split(ComplexMatrix::zeros(n), c.clone()));
    }

    let mut x = c.clone();
    let mut p = ComplexMatrix::zeros(n);
    let mut q = ComplexMatrix::zeros(n);
    let mut residual = f64::INFINITY;
    let mut iterations = 0;

    for k in 1..=opts.max_iter.max(1) {
        iterations = k;
        let xp = (&x + &p).symmetrized();
        let y = psd_project(&xp)?;
        p = &xp - &y;

        let yq = (&y + &q).symmetrized();
        let next = project_k2(c, &yq, dims)?;
        q = &yq - &next;
        x = next;

        residual = y.distance(&x);
        if residual < opts.tol {
            let b = c - &x;
            return Ok(DecompositionReport {
                verdict: DecompositionVerdict::Decomposable,
                residual,
                iterations,
                split: Some((x, b)),
            });
        }
    }

    let verdict = if residual < 10.0 * opts.tol {
        DecompositionVerdict::Indeterminate
    } else {
        DecompositionVerdict::NonDecomposable
    };
    Ok(DecompositionReport {
        verdict,
        residual,
        iterations,
        split: None,
    })
}
