//! Separability probes and entanglement measures.
//!
//! Witness verdicts are one-sided: a negative eigenvalue certifies
//! entanglement, a non-negative one proves nothing. The optimization-based
//! quantities ([`eof_upper`], [`dcoef`], [`dcoef_sup`]) are upper bounds on
//! infima over decompositions and are never read as separability proofs.

mod search;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::{apply_on_first_leg, dual_map, ChoiMatrix};
use crate::matcore::{gell_mann_basis, hermitian_eig, kron, partial_transpose, ComplexMatrix, Leg, C64};
use crate::states::{DensityMatrix, Ensemble, EnsembleJson};

use search::{search_ladder, Objective};
pub use search::{MeasureOptions, RANK_TOL};

/// Eigenvalues below `−WITNESS_TOL` certify entanglement.
pub const WITNESS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    Ensemble(Ensemble),
    Eigenvector(Vec<C64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureReport {
    pub value: f64,
    pub certificate: Option<Certificate>,
    pub converged: bool,
    pub restarts_used: usize,
}

/// Wire format: `{value, converged, restarts_used, certificate?}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureReportJson {
    pub value: f64,
    pub converged: bool,
    pub restarts_used: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateJson {
    Ensemble(EnsembleJson),
    Eigenvector { re: Vec<f64>, im: Vec<f64> },
}

impl MeasureReport {
    pub fn to_json(&self) -> MeasureReportJson {
        MeasureReportJson {
            value: self.value,
            converged: self.converged,
            restarts_used: self.restarts_used,
            certificate: self.certificate.as_ref().map(|c| match c {
                Certificate::Ensemble(e) => CertificateJson::Ensemble(e.to_json()),
                Certificate::Eigenvector(v) => CertificateJson::Eigenvector {
                    re: v.iter().map(|z| z.re).collect(),
                    im: v.iter().map(|z| z.im).collect(),
                },
            }),
        }
    }

    pub fn from_json(json: &MeasureReportJson) -> Result<Self> {
        let certificate = match &json.certificate {
            None => None,
            Some(CertificateJson::Ensemble(e)) => Some(Certificate::Ensemble(Ensemble::from_json(e)?)),
            Some(CertificateJson::Eigenvector { re, im }) => {
                if re.len() != im.len() {
                    return Err(Error::DimensionMismatch {
                        expected: re.len(),
                        found: im.len(),
                    });
                }
                if re.iter().chain(im).any(|x| !x.is_finite()) {
                    return Err(Error::NonFinite);
                }
                Some(Certificate::Eigenvector(
                    re.iter().zip(im).map(|(&a, &b)| C64::new(a, b)).collect(),
                ))
            }
        };
        Ok(Self {
            value: json.value,
            certificate,
            converged: json.converged,
            restarts_used: json.restarts_used,
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("report serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let json: MeasureReportJson = serde_json::from_str(text)?;
        Self::from_json(&json)
    }

    pub fn ensemble(&self) -> Option<&Ensemble> {
        match &self.certificate {
            Some(Certificate::Ensemble(e)) => Some(e),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PptVerdict {
    /// Negative partial transpose: entangled, certified.
    #[serde(rename = "NPT")]
    Npt,
    /// Positive partial transpose: separable only when `d1·d2 ≤ 6`.
    #[serde(rename = "PPT")]
    Ppt,
}

#[derive(Debug, Clone)]
pub struct PptOutcome {
    pub min_eigenvalue: f64,
    pub verdict: PptVerdict,
    /// Whether the verdict decides separability (always true for NPT).
    pub conclusive: bool,
    pub eigenvector: Vec<C64>,
}

impl PptOutcome {
    pub fn report(&self) -> MeasureReport {
        MeasureReport {
            value: self.min_eigenvalue,
            certificate: Some(Certificate::Eigenvector(self.eigenvector.clone())),
            converged: true,
            restarts_used: 0,
        }
    }
}

/// Spectrum test on `ϱ^Γ` (transpose on the second leg).
pub fn ppt_test(rho: &DensityMatrix) -> PptOutcome {
    let pt = partial_transpose(rho.matrix(), rho.split(), Leg::Second).expect("split checked");
    let e = hermitian_eig(&pt).expect("partial transpose of a state is hermitian");
    let min = e.min();
    let verdict = if min < -WITNESS_TOL {
        PptVerdict::Npt
    } else {
        PptVerdict::Ppt
    };
    let (d1, d2) = rho.split();
    PptOutcome {
        min_eigenvalue: min,
        verdict,
        conclusive: verdict == PptVerdict::Npt || d1 * d2 <= 6,
        eigenvector: e.vector(0),
    }
}

/// `Σ max(0, −λ)` over the spectrum of `ϱ^Γ`.
pub fn negativity(rho: &DensityMatrix) -> f64 {
    let pt = partial_transpose(rho.matrix(), rho.split(), Leg::Second).expect("split checked");
    hermitian_eig(&pt)
        .expect("partial transpose of a state is hermitian")
        .values
        .iter()
        .map(|&x| (-x).max(0.0))
        .sum()
}

#[derive(Debug, Clone)]
pub struct WitnessOutcome {
    pub min_eigenvalue: f64,
    /// Certified entangled (sound for block-positive maps).
    pub entangled: bool,
    pub eigenvector: Vec<C64>,
    pub output: ComplexMatrix,
}

/// `(τ ⊗ id)ᵈ ϱ` for a map `τ` on the first leg.
pub fn witness_output(rho: &DensityMatrix, c: &ChoiMatrix) -> Result<ComplexMatrix> {
    let (d1, d2) = rho.split();
    let dual = dual_map(c);
    if dual.d_in() != d1 {
        return Err(Error::DimensionMismatch {
            expected: d1,
            found: dual.d_in(),
        });
    }
    apply_on_first_leg(&dual, rho.matrix(), (d1, d2))
}

/// Lowest eigenvalue of `(τ ⊗ id)ᵈ ϱ`. The caller vouches that `τ` is
/// positive; for positive maps a negative value certifies entanglement.
pub fn map_witness(rho: &DensityMatrix, c: &ChoiMatrix) -> Result<WitnessOutcome> {
    c.require_hermitian()?;
    let out = witness_output(rho, c)?;
    let e = hermitian_eig(&out)?;
    let min = e.min();
    Ok(WitnessOutcome {
        min_eigenvalue: min,
        entangled: min < -WITNESS_TOL,
        eigenvector: e.vector(0),
        output: out,
    })
}

/// `Σ λᵢ S(r₁ ϱᵢ)`, the objective of the entanglement of formation.
pub fn average_marginal_entropy(ens: &Ensemble) -> f64 {
    ens.iter().map(|(w, c)| w * c.restrict(Leg::First).entropy()).sum()
}

/// `|Tr[ϱ (a₁⊗a₂)] − Σ λᵢ Tr[r₁ϱᵢ a₁]·Tr[r₂ϱᵢ a₂]|` for a decomposition of `ϱ`.
pub fn classical_deviation(rho: &DensityMatrix, ens: &Ensemble, a1: &ComplexMatrix, a2: &ComplexMatrix) -> f64 {
    let quantum = rho.matrix().trace_product(&kron(a1, a2)).re;
    let classical: f64 = ens
        .iter()
        .map(|(w, c)| {
            let x = c.restrict(Leg::First).matrix().trace_product(a1).re;
            let y = c.restrict(Leg::Second).matrix().trace_product(a2).re;
            w * x * y
        })
        .sum();
    (quantum - classical).abs()
}

fn single_component(rho: &DensityMatrix) -> Ensemble {
    Ensemble::from_trusted(vec![1.0], vec![rho.clone()])
}

fn is_pure(rho: &DensityMatrix) -> bool {
    rho.rank(RANK_TOL) <= 1
}

/// Upper bound on the entanglement of formation (bits).
pub fn eof_upper(rho: &DensityMatrix, opts: &MeasureOptions) -> Result<MeasureReport> {
    let k = search::resolve_k(rho.rank(RANK_TOL), opts.k)?;
    Ok(eof_upper_ladder(rho, &[k], opts)?.remove(0))
}

/// [`eof_upper`] along ascending ensemble sizes; each restart continues from
/// its previous rung, so the values are non-increasing.
pub fn eof_upper_ladder(rho: &DensityMatrix, ks: &[usize], opts: &MeasureOptions) -> Result<Vec<MeasureReport>> {
    if ks.is_empty() {
        return Ok(Vec::new());
    }
    let rank = rho.rank(RANK_TOL);
    if is_pure(rho) {
        for &k in ks {
            search::resolve_k(rank, Some(k))?;
        }
        let value = rho.restrict(Leg::First).entropy();
        let report = MeasureReport {
            value,
            certificate: Some(Certificate::Ensemble(single_component(rho))),
            converged: true,
            restarts_used: 0,
        };
        return Ok(vec![report; ks.len()]);
    }
    let (d1, d2) = rho.split();
    let obj = Objective::Entanglement { d1, d2 };
    Ok(search_ladder(rho, &obj, ks, opts)?
        .into_iter()
        .map(|(run, restarts)| MeasureReport {
            value: run.value,
            certificate: Some(Certificate::Ensemble(run.point.ensemble(d1, d2))),
            converged: run.converged,
            restarts_used: restarts,
        })
        .collect())
}

fn check_observables(
    rho: &DensityMatrix,
    a1: &ComplexMatrix,
    a2: &ComplexMatrix,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let (d1, d2) = rho.split();
    if a1.dim() != d1 {
        return Err(Error::DimensionMismatch {
            expected: d1,
            found: a1.dim(),
        });
    }
    if a2.dim() != d2 {
        return Err(Error::DimensionMismatch {
            expected: d2,
            found: a2.dim(),
        });
    }
    Ok((a1.checked_hermitian()?, a2.checked_hermitian()?))
}

/// Upper bound on the coefficient of quantum correlations `d(φ, a₁, a₂)`.
pub fn dcoef(
    rho: &DensityMatrix,
    a1: &ComplexMatrix,
    a2: &ComplexMatrix,
    opts: &MeasureOptions,
) -> Result<MeasureReport> {
    let k = search::resolve_k(rho.rank(RANK_TOL), opts.k)?;
    Ok(dcoef_ladder(rho, a1, a2, &[k], opts)?.remove(0))
}

/// [`dcoef`] along ascending ensemble sizes (non-increasing values).
pub fn dcoef_ladder(
    rho: &DensityMatrix,
    a1: &ComplexMatrix,
    a2: &ComplexMatrix,
    ks: &[usize],
    opts: &MeasureOptions,
) -> Result<Vec<MeasureReport>> {
    let (a1, a2) = check_observables(rho, a1, a2)?;
    if ks.is_empty() {
        return Ok(Vec::new());
    }
    let rank = rho.rank(RANK_TOL);
    if is_pure(rho) {
        for &k in ks {
            search::resolve_k(rank, Some(k))?;
        }
        let ens = single_component(rho);
        let report = MeasureReport {
            value: classical_deviation(rho, &ens, &a1, &a2),
            certificate: Some(Certificate::Ensemble(ens)),
            converged: true,
            restarts_used: 0,
        };
        return Ok(vec![report; ks.len()]);
    }
    let (d1, d2) = rho.split();
    let left = kron(&a1, &ComplexMatrix::identity(d2));
    let right = kron(&ComplexMatrix::identity(d1), &a2);
    let target = rho.matrix().trace_product(&kron(&a1, &a2)).re;
    let obj = Objective::Correlation { left, right, target };
    Ok(search_ladder(rho, &obj, ks, opts)?
        .into_iter()
        .map(|(run, restarts)| MeasureReport {
            value: run.value,
            certificate: Some(Certificate::Ensemble(run.point.ensemble(d1, d2))),
            converged: run.converged,
            restarts_used: restarts,
        })
        .collect())
}

/// Maximum of [`dcoef`] over all pairs of generalized Gell-Mann matrices.
pub fn dcoef_sup(rho: &DensityMatrix, opts: &MeasureOptions) -> Result<MeasureReport> {
    let (d1, d2) = rho.split();
    let left = gell_mann_basis(d1);
    let right = gell_mann_basis(d2);
    if left.is_empty() || right.is_empty() {
        // a trivial leg carries no correlations
        return Ok(MeasureReport {
            value: 0.0,
            certificate: Some(Certificate::Ensemble(single_component(rho))),
            converged: true,
            restarts_used: 0,
        });
    }
    let pairs: Vec<(usize, usize)> = (0..left.len())
        .flat_map(|i| (0..right.len()).map(move |j| (i, j)))
        .collect();
    let reports: Vec<MeasureReport> = pairs
        .par_iter()
        .map(|&(i, j)| dcoef(rho, &left[i], &right[j], opts))
        .collect::<Result<_>>()?;
    let converged = reports.iter().all(|r| r.converged);
    let mut best = reports
        .into_iter()
        .reduce(|a, b| if b.value > a.value { b } else { a })
        .expect("non-empty basis");
    best.converged = converged;
    Ok(best)
}
