//! Time-parametrized map families acting on the first leg of a bipartite
//! state.
//!
//! A family gives a positive map `τ_t` in the observable picture; the state
//! evolves as `ϱ_t = (τ_t ⊗ id)ᵈ ϱ₀`. All built-in families are unital, so
//! the evolution preserves the trace. Each grid point is evaluated in closed
//! form, so nothing accumulates along the grid.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::{apply_on_first_leg, catalog, dual_map, CatalogMap, ChoiMatrix};
use crate::matcore::{hermitian_eig, ComplexMatrix};
use crate::measures::{dcoef_sup, eof_upper, negativity, MeasureOptions};
use crate::states::{gibbs_state, DensityMatrix, PSD_TOL, TRACE_TOL};

/// `λ_min` below this marks the output as no longer positive.
pub const NEGATIVE_TOL: f64 = 1e-9;
/// Largest first-leg dimension accepted by `glauber_flip`.
const MAX_GLAUBER_DIM: usize = 16;

#[derive(Debug, Clone)]
pub enum ChannelFamily {
    Identity {
        d: usize,
    },
    /// `τ_t` = depolarizing with `λ = e^{−rate·t}`.
    DepolarizingFlow {
        d: usize,
        rate: f64,
    },
    /// `τ_t = (1−m) id + m T` with `m = min(1, speed·t)`: positive for all
    /// `t`, completely positive only while `m = 0`.
    TransposeMix {
        d: usize,
        speed: f64,
    },
    /// `τ_t = e^{−rate·t} id + (1 − e^{−rate·t}) M`, where the state evolves
    /// under `Mᵈ`, a single-site spin flip with Metropolis acceptance
    /// `min(1, g(s')/g(s))` read off the diagonal `g` of a Gibbs state.
    GlauberFlip {
        rate: f64,
        flip: ChoiMatrix,
    },
}

impl ChannelFamily {
    pub const NAMES: [&'static str; 4] = ["identity", "depolarizing_flow", "transpose_mix", "glauber_flip"];

    pub fn identity(d: usize) -> Result<Self> {
        check_dim(d)?;
        Ok(ChannelFamily::Identity { d })
    }

    pub fn depolarizing_flow(d: usize, rate: f64) -> Result<Self> {
        check_dim(d)?;
        check_rate("rate", rate)?;
        Ok(ChannelFamily::DepolarizingFlow { d, rate })
    }

    pub fn transpose_mix(d: usize, speed: f64) -> Result<Self> {
        check_dim(d)?;
        check_rate("speed", speed)?;
        Ok(ChannelFamily::TransposeMix { d, speed })
    }

    /// Flip dynamics for a Hamiltonian on `n` spins (`2ⁿ ≤ 16`).
    pub fn glauber_flip(h: &ComplexMatrix, beta: f64, rate: f64) -> Result<Self> {
        check_rate("rate", rate)?;
        let d = h.dim();
        if d < 2 || !d.is_power_of_two() || d > MAX_GLAUBER_DIM {
            return Err(Error::OutOfRange {
                name: "d",
                value: d as f64,
                reason: "glauber_flip needs 2 to 4 spins",
            });
        }
        let gibbs = gibbs_state(h, beta)?;
        let flip = metropolis_flip(&gibbs.matrix().diag().iter().map(|z| z.re).collect::<Vec<_>>())?;
        Ok(ChannelFamily::GlauberFlip { rate, flip })
    }

    /// Dimension of the leg the maps act on.
    pub fn dim(&self) -> usize {
        match self {
            ChannelFamily::Identity { d }
            | ChannelFamily::DepolarizingFlow { d, .. }
            | ChannelFamily::TransposeMix { d, .. } => *d,
            ChannelFamily::GlauberFlip { flip, .. } => flip.d_in(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ChannelFamily::Identity { .. } => Self::NAMES[0],
            ChannelFamily::DepolarizingFlow { .. } => Self::NAMES[1],
            ChannelFamily::TransposeMix { .. } => Self::NAMES[2],
            ChannelFamily::GlauberFlip { .. } => Self::NAMES[3],
        }
    }

    /// Whether the induced state evolution preserves the trace.
    pub fn is_trace_preserving(&self) -> bool {
        true
    }

    /// Choi matrix of `τ_t`.
    pub fn choi_at(&self, t: f64) -> Result<ChoiMatrix> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::OutOfRange {
                name: "t",
                value: t,
                reason: "times must be finite and non-negative",
            });
        }
        match self {
            ChannelFamily::Identity { d } => catalog(&CatalogMap::Identity { d: *d }),
            ChannelFamily::DepolarizingFlow { d, rate } => catalog(&CatalogMap::Depolarizing {
                d: *d,
                lambda: (-rate * t).exp(),
            }),
            ChannelFamily::TransposeMix { d, speed } => {
                let m = (speed * t).min(1.0);
                let id = catalog(&CatalogMap::Identity { d: *d })?;
                let tr = catalog(&CatalogMap::Transpose { d: *d })?;
                id.mix(&tr, m)
            }
            ChannelFamily::GlauberFlip { rate, flip } => {
                let id = catalog(&CatalogMap::Identity { d: flip.d_in() })?;
                id.mix(flip, 1.0 - (-rate * t).exp())
            }
        }
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d == 0 || d > MAX_GLAUBER_DIM {
        return Err(Error::OutOfRange {
            name: "d",
            value: d as f64,
            reason: "family dimension must be between 1 and 16",
        });
    }
    Ok(())
}

fn check_rate(name: &'static str, x: f64) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::OutOfRange {
            name,
            value: x,
            reason: "must be finite and non-negative",
        });
    }
    Ok(())
}

/// Observable-picture Choi of the Metropolis flip channel with Kraus
/// operators `√(a_j(s)/n) |s⊕e_j⟩⟨s|` and a diagonal stay operator.
fn metropolis_flip(g: &[f64]) -> Result<ChoiMatrix> {
    let d = g.len();
    let n = d.trailing_zeros() as usize;
    let mut kraus = Vec::new();
    let mut stay = vec![1.0; d];
    for s in 0..d {
        for j in 0..n {
            let t = s ^ (1 << j);
            let accept = if g[s] > 0.0 { (g[t] / g[s]).min(1.0) } else { 1.0 };
            let p = accept / n as f64;
            stay[s] -= p;
            if p > 0.0 {
                kraus.push(ComplexMatrix::from_fn(d, |r, c| {
                    if r == t && c == s {
                        p.sqrt().into()
                    } else {
                        0.0.into()
                    }
                }));
            }
        }
    }
    kraus.push(ComplexMatrix::from_diag(
        &stay.iter().map(|&x| x.max(0.0).sqrt()).collect::<Vec<_>>(),
    ));
    let channel = ChoiMatrix::from_map(d, d, |x| {
        kraus.iter().fold(ComplexMatrix::zeros(d), |acc, k| {
            &acc + &k.matmul(x).matmul(&k.dagger())
        })
    })?;
    Ok(dual_map(&channel))
}

/// Which optional measures to record along the track.
#[derive(Debug, Clone, Default)]
pub struct TrackOptions {
    pub eof: bool,
    pub dcoef_sup: bool,
    pub measure: MeasureOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrackPoint {
    pub t: f64,
    pub min_eig: f64,
    /// Present only when the output is a valid state.
    pub negativity: Option<f64>,
    pub eof_upper: Option<f64>,
    pub dcoef_sup: Option<f64>,
    pub trace: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackRecord {
    pub family: &'static str,
    pub points: Vec<TrackPoint>,
}

impl TrackRecord {
    pub fn times(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.t).collect()
    }

    /// First grid time with `λ_min < −NEGATIVE_TOL`.
    pub fn first_negative_time(&self) -> Option<f64> {
        self.points.iter().find(|p| p.min_eig < -NEGATIVE_TOL).map(|p| p.t)
    }

    /// JSON array of per-time objects.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.points).expect("track serializes")
    }

    /// CSV with header `t,min_eig,negativity,eof_upper,dcoef_sup,trace`;
    /// undefined entries are empty.
    pub fn to_csv_string(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for p in &self.points {
            w.serialize(p).expect("in-memory csv write");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("csv is utf-8")
    }
}

/// `(τ_t ⊗ id)ᵈ ϱ₀` at a single time.
pub fn evolve_at(rho: &DensityMatrix, family: &ChannelFamily, t: f64) -> Result<ComplexMatrix> {
    let (d1, d2) = rho.split();
    if family.dim() != d1 {
        return Err(Error::DimensionMismatch {
            expected: d1,
            found: family.dim(),
        });
    }
    let dual = dual_map(&family.choi_at(t)?);
    apply_on_first_leg(&dual, rho.matrix(), (d1, d2))
}

/// Diagnostics of the evolved state over an ascending time grid.
pub fn evolve_track(
    rho: &DensityMatrix,
    family: &ChannelFamily,
    grid: &[f64],
    opts: &TrackOptions,
) -> Result<TrackRecord> {
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::OutOfRange {
            name: "grid",
            value: f64::NAN,
            reason: "time grid must be strictly ascending",
        });
    }
    let (d1, d2) = rho.split();
    let points = grid
        .par_iter()
        .map(|&t| {
            let out = evolve_at(rho, family, t)?;
            let min_eig = hermitian_eig(&out)?.min();
            let trace = out.trace().re;
            let valid = min_eig >= -PSD_TOL && (trace - 1.0).abs() <= TRACE_TOL;
            let state = if valid {
                Some(DensityMatrix::new(out, d1, d2)?)
            } else {
                None
            };
            let eof = match (&state, opts.eof) {
                (Some(s), true) => Some(eof_upper(s, &opts.measure)?.value),
                _ => None,
            };
            let dsup = match (&state, opts.dcoef_sup) {
                (Some(s), true) => Some(dcoef_sup(s, &opts.measure)?.value),
                _ => None,
            };
            Ok(TrackPoint {
                t,
                min_eig,
                negativity: state.as_ref().map(negativity),
                eof_upper: eof,
                dcoef_sup: dsup,
                trace,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TrackRecord {
        family: family.name(),
        points,
    })
}

/// `n + 1` evenly spaced times from `0` to `t_max`.
pub fn uniform_grid(t_max: f64, n: usize) -> Result<Vec<f64>> {
    if !t_max.is_finite() || t_max <= 0.0 || n == 0 {
        return Err(Error::OutOfRange {
            name: "t_max",
            value: t_max,
            reason: "need a positive horizon and at least one step",
        });
    }
    Ok((0..=n).map(|i| t_max * i as f64 / n as f64).collect())
}
