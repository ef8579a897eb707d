use serde::{Deserialize, Serialize};

use super::eig::hermitian_eig;
use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

/// Tensor leg of a bipartite index `i·d2 + k` (leg one is the slow index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Leg {
    First,
    Second,
}

impl Leg {
    pub fn other(self) -> Leg {
        match self {
            Leg::First => Leg::Second,
            Leg::Second => Leg::First,
        }
    }
}

fn check_split(m: &ComplexMatrix, (d1, d2): (usize, usize)) -> Result<()> {
    if d1 == 0 || d2 == 0 || m.dim() != d1 * d2 {
        return Err(Error::DimensionMismatch {
            expected: d1 * d2,
            found: m.dim(),
        });
    }
    Ok(())
}

/// Kronecker product, `(A⊗B)[(i·dB+k),(j·dB+l)] = A[i,j]·B[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (a.dim(), b.dim());
    let mut out = ComplexMatrix::zeros(na * nb);
    for i in 0..na {
        for j in 0..na {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..nb {
                for l in 0..nb {
                    out[(i * nb + k, j * nb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Traces out the leg not named by `keep`.
pub fn partial_trace(m: &ComplexMatrix, dims: (usize, usize), keep: Leg) -> Result<ComplexMatrix> {
    check_split(m, dims)?;
    let (d1, d2) = dims;
    Ok(match keep {
        Leg::First => ComplexMatrix::from_fn(d1, |i, j| (0..d2).map(|k| m[(i * d2 + k, j * d2 + k)]).sum()),
        Leg::Second => ComplexMatrix::from_fn(d2, |k, l| (0..d1).map(|i| m[(i * d2 + k, i * d2 + l)]).sum()),
    })
}

/// Transposes the named leg, `(A⊗B)^Γ₂ = A⊗Bᵀ` extended linearly.
pub fn partial_transpose(m: &ComplexMatrix, dims: (usize, usize), leg: Leg) -> Result<ComplexMatrix> {
    check_split(m, dims)?;
    let (d1, d2) = dims;
    let mut out = ComplexMatrix::zeros(m.dim());
    for i in 0..d1 {
        for k in 0..d2 {
            for j in 0..d1 {
                for l in 0..d2 {
                    let src = match leg {
                        Leg::Second => (i * d2 + l, j * d2 + k),
                        Leg::First => (j * d2 + k, i * d2 + l),
                    };
                    out[(i * d2 + k, j * d2 + l)] = m[src];
                }
            }
        }
    }
    Ok(out)
}

/// Frobenius-nearest positive semidefinite matrix: `V·max(Λ,0)·V†`.
pub fn psd_project(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(hermitian_eig(h)?.map_values(|x| x.max(0.0)))
}
