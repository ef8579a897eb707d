//! Random-restart local search over finite decompositions of a state.
//!
//! A decomposition of `ϱ` into `K` pure components is a list of
//! unnormalized vectors `φ̃ᵢ` with `Σ |φ̃ᵢ⟩⟨φ̃ᵢ| = ϱ`. Every such list arises
//! from a `K`-column isometry applied to the ancilla of the purification
//! `{√pₖ eₖ}`; equivalently, from a `K x K` unitary acting on the padded
//! list. The search moves through this space with two-component unitary
//! rotations, which preserve the barycenter exactly, so every visited point
//! is a valid decomposition. Mixed components are represented by group
//! labels: components sharing a label are merged into one mixed state.

use rand::Rng;
use rayon::prelude::*;
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::matcore::random::{random_unitary, substream};
use crate::matcore::{hermitian_eig, ComplexMatrix, C64, ZERO};
use crate::states::{entropy_of_spectrum, DensityMatrix, Ensemble};

/// Eigenvalues of `ϱ` at or below this are treated as zero when building the
/// purification and counting rank.
pub const RANK_TOL: f64 = 1e-10;
/// Components lighter than this are dropped from certificates.
const NEGLIGIBLE_WEIGHT: f64 = 1e-18;
/// Values at or below this are the global minimum (all objectives are `≥ 0`).
const ZERO_VALUE: f64 = 1e-13;
const INITIAL_STEP: f64 = 0.5;

/// Budgets shared by the optimization-based measures.
#[derive(Debug, Clone)]
pub struct MeasureOptions {
    /// Ensemble size; defaults to `rank²`.
    pub k: Option<usize>,
    pub restarts: usize,
    /// Maximum number of sweeps per restart.
    pub iters: usize,
    pub seed: u64,
    /// The search stops once the rotation step shrinks below this.
    pub step_tol: f64,
    /// Decomposition used as the starting point of restart 0, if it fits in
    /// `k` pure components.
    pub warm_start: Option<Ensemble>,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        Self {
            k: None,
            restarts: 32,
            iters: 300,
            seed: 0,
            step_tol: 1e-7,
            warm_start: None,
        }
    }
}

/// What is being minimized.
#[derive(Debug, Clone)]
pub(crate) enum Objective {
    /// `Σ wᵢ S(r φᵢ)` over pure components.
    Entanglement { d1: usize, d2: usize },
    /// `|target − Σ_g A_g B_g / W_g|` over grouped components, with
    /// `A = ⟨a₁ ⊗ I⟩`, `B = ⟨I ⊗ a₂⟩` (unnormalized).
    Correlation {
        left: ComplexMatrix,
        right: ComplexMatrix,
        target: f64,
    },
}

#[derive(Debug, Clone, Copy, Default)]
struct Stat {
    w: f64,
    a: f64,
    b: f64,
}

impl Objective {
    fn grouped(&self) -> bool {
        matches!(self, Objective::Correlation { .. })
    }

    fn stat(&self, v: &[C64]) -> Stat {
        let w: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if w <= 0.0 {
            return Stat::default();
        }
        match self {
            Objective::Entanglement { d1, d2 } => Stat {
                w,
                a: w * reduced_entropy(v, *d1, *d2, w),
                b: 0.0,
            },
            Objective::Correlation { left, right, .. } => Stat {
                w,
                a: left.expectation(v).re,
                b: right.expectation(v).re,
            },
        }
    }

    fn total(&self, stats: &[Stat], labels: &[usize], scratch: &mut Vec<Stat>) -> f64 {
        match self {
            Objective::Entanglement { .. } => stats.iter().map(|s| s.a).sum(),
            Objective::Correlation { target, .. } => {
                scratch.clear();
                scratch.resize(stats.len(), Stat::default());
                for (s, &g) in stats.iter().zip(labels) {
                    let acc = &mut scratch[g];
                    acc.w += s.w;
                    acc.a += s.a;
                    acc.b += s.b;
                }
                let classical: f64 = scratch
                    .iter()
                    .filter(|g| g.w > NEGLIGIBLE_WEIGHT)
                    .map(|g| g.a * g.b / g.w)
                    .sum();
                (target - classical).abs()
            }
        }
    }
}

/// Entropy (bits) of the reduced state of the pure state `v / √w`, computed
/// on the smaller leg.
fn reduced_entropy(v: &[C64], d1: usize, d2: usize, w: f64) -> f64 {
    let small = d1.min(d2);
    if small == 1 {
        return 0.0;
    }
    let entry = |i: usize, j: usize| -> C64 {
        let mut acc = ZERO;
        if d1 <= d2 {
            for k in 0..d2 {
                acc += v[i * d2 + k] * v[j * d2 + k].conj();
            }
        } else {
            for k in 0..d1 {
                acc += v[k * d2 + i] * v[k * d2 + j].conj();
            }
        }
        acc / w
    };
    if small == 2 {
        let a = entry(0, 0).re;
        let c = entry(1, 1).re;
        let b = entry(0, 1);
        let disc = ((a - c) * (a - c) + 4.0 * b.norm_sqr()).sqrt();
        let tr = a + c;
        return entropy_of_spectrum(&[0.5 * (tr + disc), (0.5 * (tr - disc)).max(0.0)]);
    }
    let m = ComplexMatrix::from_fn(small, entry);
    match hermitian_eig(&m) {
        Ok(e) => entropy_of_spectrum(&e.values),
        Err(_) => f64::INFINITY,
    }
}

/// `√pₖ eₖ` for the nonzero spectrum of `ϱ`.
pub(crate) fn purification(rho: &DensityMatrix) -> Vec<Vec<C64>> {
    let e = rho.eigen();
    (0..e.values.len())
        .filter(|&k| e.values[k] > RANK_TOL)
        .map(|k| {
            let s = e.values[k].sqrt();
            e.vector(k).into_iter().map(|z| z * s).collect()
        })
        .collect()
}

/// Pure components and labels of a decomposition.
#[derive(Debug, Clone)]
pub(crate) struct Point {
    pub vecs: Vec<Vec<C64>>,
    pub labels: Vec<usize>,
}

impl Point {
    /// Pads with zero vectors (fresh labels) up to `k` components.
    fn padded(&self, k: usize) -> Point {
        let dim = self.vecs.first().map_or(0, Vec::len);
        let mut p = self.clone();
        while p.vecs.len() < k {
            let label = p.vecs.len();
            p.vecs.push(vec![ZERO; dim]);
            p.labels.push(label);
        }
        p
    }

    /// Merges components sharing a label into mixed states.
    pub fn ensemble(&self, d1: usize, d2: usize) -> Ensemble {
        let k = self.vecs.len();
        let dim = d1 * d2;
        let mut weights = Vec::new();
        let mut comps = Vec::new();
        for g in 0..k {
            let members: Vec<&Vec<C64>> = self
                .vecs
                .iter()
                .zip(&self.labels)
                .filter(|(_, &l)| l == g)
                .map(|(v, _)| v)
                .collect();
            let w: f64 = members
                .iter()
                .map(|v| v.iter().map(|z| z.norm_sqr()).sum::<f64>())
                .sum();
            if w <= NEGLIGIBLE_WEIGHT {
                continue;
            }
            let mut m = ComplexMatrix::zeros(dim);
            for v in members {
                m += &ComplexMatrix::projector(v);
            }
            weights.push(w);
            comps.push(DensityMatrix::from_trusted(m.scale_real(1.0 / w).symmetrized(), d1, d2));
        }
        Ensemble::from_trusted(weights, comps)
    }
}

/// Converts a decomposition into labelled pure components; `None` if it
/// needs more than `k` of them.
pub(crate) fn point_from_ensemble(ens: &Ensemble, k: usize) -> Option<Point> {
    let mut vecs = Vec::new();
    let mut labels = Vec::new();
    for (g, (w, c)) in ens.iter().enumerate() {
        let e = c.eigen();
        for (idx, &mu) in e.values.iter().enumerate() {
            if mu > 1e-14 {
                let s = (w * mu).sqrt();
                vecs.push(e.vector(idx).into_iter().map(|z| z * s).collect());
                labels.push(g);
            }
        }
    }
    if vecs.len() > k {
        return None;
    }
    Some(Point { vecs, labels }.padded(k))
}

fn random_point<R: Rng>(pure: &[Vec<C64>], k: usize, grouped: bool, rng: &mut R) -> Point {
    let dim = pure[0].len();
    let u = random_unitary(k, rng);
    let vecs: Vec<Vec<C64>> = (0..k)
        .map(|i| {
            let mut v = vec![ZERO; dim];
            for (col, psi) in pure.iter().enumerate() {
                let c = u[(i, col)];
                for (x, y) in v.iter_mut().zip(psi) {
                    *x += c * y;
                }
            }
            v
        })
        .collect();
    let labels = if grouped && rng.random::<bool>() {
        (0..k).map(|_| rng.random_range(0..k)).collect()
    } else {
        (0..k).collect()
    };
    Point { vecs, labels }
}

#[derive(Debug, Clone)]
pub(crate) struct RunResult {
    pub value: f64,
    pub point: Point,
    pub converged: bool,
}

const PHASES: [f64; 2] = [0.0, std::f64::consts::FRAC_PI_2];

/// Coordinate descent from `start`: two-component rotations with shrinking
/// angle, plus relabelling moves for grouped objectives.
fn descend(obj: &Objective, start: Point, iters: usize, step_tol: f64, abort: &dyn Fn() -> bool) -> Option<RunResult> {
    let Point { mut vecs, mut labels } = start;
    let k = vecs.len();
    let grouped = obj.grouped();
    let mut stats: Vec<Stat> = vecs.iter().map(|v| obj.stat(v)).collect();
    let mut scratch = Vec::with_capacity(k);
    let mut value = obj.total(&stats, &labels, &mut scratch);
    let mut step = INITIAL_STEP;
    let mut converged = false;
    let mut best = (value, vecs.clone(), labels.clone());

    let dim = vecs.first().map_or(0, Vec::len);
    let mut ni = vec![ZERO; dim];
    let mut nj = vec![ZERO; dim];

    for _ in 0..iters {
        if value <= ZERO_VALUE {
            converged = true;
            break;
        }
        if abort() {
            return None;
        }
        let mut improved = false;
        for i in 0..k {
            for j in (i + 1)..k {
                'pair: for &phi in &PHASES {
                    for theta in [step, -step] {
                        let (s, c) = theta.sin_cos();
                        let e = C64::from_polar(1.0, phi);
                        for t in 0..dim {
                            let (x, y) = (vecs[i][t], vecs[j][t]);
                            ni[t] = x * c - e.conj() * y * s;
                            nj[t] = e * x * s + y * c;
                        }
                        let (si, sj) = (obj.stat(&ni), obj.stat(&nj));
                        let (oi, oj) = (stats[i], stats[j]);
                        stats[i] = si;
                        stats[j] = sj;
                        let next = obj.total(&stats, &labels, &mut scratch);
                        if next < value {
                            value = next;
                            vecs[i].copy_from_slice(&ni);
                            vecs[j].copy_from_slice(&nj);
                            improved = true;
                            break 'pair;
                        }
                        stats[i] = oi;
                        stats[j] = oj;
                    }
                }
            }
        }
        if grouped {
            for i in 0..k {
                let current = labels[i];
                for g in 0..k {
                    if g == current {
                        continue;
                    }
                    labels[i] = g;
                    let next = obj.total(&stats, &labels, &mut scratch);
                    if next < value {
                        value = next;
                        improved = true;
                        break;
                    }
                    labels[i] = current;
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < step_tol {
                converged = true;
                break;
            }
        }
        // keep the running value free of incremental drift
        stats = vecs.iter().map(|v| obj.stat(v)).collect();
        value = obj.total(&stats, &labels, &mut scratch);
        if value < best.0 {
            best = (value, vecs.clone(), labels.clone());
        }
    }
    let (value, vecs, labels) = best;
    if value <= ZERO_VALUE {
        converged = true;
    }
    Some(RunResult {
        value,
        point: Point { vecs, labels },
        converged,
    })
}

/// Resolved ensemble size for `rho`.
pub(crate) fn resolve_k(rank: usize, k: Option<usize>) -> Result<usize> {
    let k = k.unwrap_or(rank * rank).max(1);
    if k < rank {
        return Err(Error::InfeasibleEnsembleSize { k, rank });
    }
    Ok(k)
}

/// Best result per rung of `ks` (ascending), each restart carrying its
/// final point into the next rung padded with zero components. The value
/// is therefore non-increasing along the ladder and in the restart count.
pub(crate) fn search_ladder(
    rho: &DensityMatrix,
    obj: &Objective,
    ks: &[usize],
    opts: &MeasureOptions,
) -> Result<Vec<(RunResult, usize)>> {
    let pure = purification(rho);
    let rank = pure.len();
    for w in ks.windows(2) {
        if w[1] < w[0] {
            return Err(Error::OutOfRange {
                name: "k",
                value: w[1] as f64,
                reason: "ensemble sizes must be ascending",
            });
        }
    }
    for &k in ks {
        resolve_k(rank, Some(k))?;
    }
    let warm = match &opts.warm_start {
        Some(ens) => {
            let err = ens.barycenter_error(rho);
            if err > 1e-9 {
                return Err(Error::InvalidState(format!(
                    "warm start does not decompose the state (error {err:e})"
                )));
            }
            point_from_ensemble(ens, ks[0])
        }
        None => None,
    };
    let restarts = opts.restarts.max(1);
    let grouped = obj.grouped();

    // Once some restart reaches the global minimum on the first rung, later
    // restarts cannot change the outcome and are skipped. The candidate set
    // is every restart up to the lowest such index, which keeps the result
    // independent of scheduling.
    let lowest_zero = AtomicUsize::new(usize::MAX);
    let runs: Vec<Option<Vec<RunResult>>> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let abort = || lowest_zero.load(Ordering::Relaxed) < r;
            if abort() {
                return None;
            }
            let mut rng = substream(opts.seed, r as u64);
            let mut point = match (&warm, r) {
                (Some(p), 0) => p.clone(),
                _ => random_point(&pure, ks[0], grouped, &mut rng),
            };
            let mut out = Vec::with_capacity(ks.len());
            for (rung, &k) in ks.iter().enumerate() {
                let res = descend(obj, point.padded(k), opts.iters, opts.step_tol, &abort)?;
                if rung == 0 && res.value <= ZERO_VALUE {
                    lowest_zero.fetch_min(r, Ordering::Relaxed);
                }
                point = res.point.clone();
                out.push(res);
            }
            Some(out)
        })
        .collect();

    let cutoff = lowest_zero.into_inner().min(restarts - 1);
    let candidates: Vec<&Vec<RunResult>> = runs[..=cutoff]
        .iter()
        .map(|run| run.as_ref().expect("restarts up to the cutoff complete"))
        .collect();
    let mut best = Vec::with_capacity(ks.len());
    for rung in 0..ks.len() {
        let mut winner: Option<&RunResult> = None;
        for run in &candidates {
            let cand = &run[rung];
            if winner.is_none_or(|w| cand.value < w.value) {
                winner = Some(cand);
            }
        }
        best.push((winner.expect("at least one restart").clone(), restarts));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{make_named, StateFamily};

    #[test]
    fn random_points_decompose_the_state() {
        let rho = make_named(&StateFamily::RandomDensity {
            d1: 2,
            d2: 3,
            rank: 4,
            seed: 1,
        })
        .unwrap()
        .state;
        let pure = purification(&rho);
        assert_eq!(pure.len(), 4);
        let mut rng = substream(0, 0);
        let p = random_point(&pure, 9, true, &mut rng);
        assert!(p.ensemble(2, 3).barycenter_error(&rho) < 1e-12);
    }

    #[test]
    fn descent_preserves_barycenter() {
        let rho = make_named(&StateFamily::Werner { p: 0.6 }).unwrap().state;
        let obj = Objective::Entanglement { d1: 2, d2: 2 };
        let pure = purification(&rho);
        let mut rng = substream(3, 0);
        let start = random_point(&pure, 6, false, &mut rng);
        let start_value = obj.total(
            &start.vecs.iter().map(|v| obj.stat(v)).collect::<Vec<_>>(),
            &start.labels,
            &mut Vec::new(),
        );
        let res = descend(&obj, start, 50, 1e-6, &|| false).unwrap();
        assert!(res.value <= start_value);
        assert!(res.point.ensemble(2, 2).barycenter_error(&rho) < 1e-12);
    }

    #[test]
    fn reduced_entropy_matches_general_path() {
        let mut rng = substream(8, 0);
        for (d1, d2) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
            let v = crate::matcore::random::gaussian_vector(d1 * d2, &mut rng);
            let w: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            let fast = reduced_entropy(&v, d1, d2, w);
            let slow = DensityMatrix::pure(&v, d1, d2)
                .unwrap()
                .restrict(crate::matcore::Leg::First)
                .entropy();
            assert!((fast - slow).abs() < 1e-10, "{d1}x{d2}");
        }
    }

    #[test]
    fn warm_start_conversion() {
        let (rho, cert) = crate::states::random_separable(2, 2, 3, 4).unwrap();
        let p = point_from_ensemble(&cert, 16).unwrap();
        assert_eq!(p.vecs.len(), 16);
        assert!(p.ensemble(2, 2).barycenter_error(&rho) < 1e-12);
        assert!(point_from_ensemble(&cert, 1).is_none());
    }
}
