//! Cyclic Jacobi eigensolver for small dense hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a[p][q]` with a
//! diagonal unitary, then applies a real Givens rotation that zeroes the now
//! real symmetric 2x2 block. Cost per sweep is O(n^3), which is irrelevant at
//! the dimensions handled here (n <= 64 or so).

use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::Result;

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `H = V diag(values) V†` with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// `V f(Λ) V†`.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, |i, j| {
            let mut acc = ZERO;
            for k in 0..n {
                if fv[k] != 0.0 {
                    acc += v[(i, k)] * v[(j, k)].conj() * fv[k];
                }
            }
            acc
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_values(|x| x)
    }
}

/// Eigen-decomposition of a hermitian matrix.
///
/// Inputs within [`super::HERMITIAN_TOL`] of hermitian are symmetrized;
/// anything further off is rejected.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEigen> {
    let a = h.checked_hermitian()?;
    Ok(jacobi(a))
}

/// Smallest eigenvalue of a hermitian matrix.
pub fn min_eigenvalue(h: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eig(h)?.min())
}

fn off_diagonal_sq(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut off = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            off += a[(p, q)].norm_sqr();
        }
    }
    off
}

fn jacobi(mut a: ComplexMatrix) -> HermitianEigen {
    let n = a.dim();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    if scale > 0.0 {
        let target = (1e-15 * scale).powi(2);
        let skip = 1e-18 * scale;
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_sq(&a) <= target {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    let r = apq.norm();
                    if r <= skip {
                        continue;
                    }
                    rotate(&mut a, &mut v, p, q, apq, r);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, k| v[(i, order[k])]);
    HermitianEigen { values, vectors }
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, apq: C64, r: f64) {
    let n = a.dim();
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_finite() {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    } else {
        0.0
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G = [[c, s], [-s e^{-iφ}, c e^{-iφ}]] in the (p, q) plane.
    let pc = phase.conj();
    let g_qp = -pc * s;
    let g_qq = pc * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c + akq * g_qp;
        a[(k, q)] = akp * s + akq * g_qq;

        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * g_qp;
        v[(k, q)] = vkp * s + vkq * g_qq;
    }
    // Rows: G† A.
    let h_pq = -phase * s;
    let h_qq = phase * c;
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c + aqk * h_pq;
        a[(q, k)] = apk * s + aqk * h_qq;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
}
