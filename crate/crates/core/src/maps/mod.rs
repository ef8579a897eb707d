//! Linear maps on matrices represented by their Choi matrices.
//!
//! Convention: `C(τ) = Σᵢⱼ Eᵢⱼ ⊗ τ(Eᵢⱼ)`, input leg first, so
//! `C[(i·d_out + a), (j·d_out + b)] = τ(Eᵢⱼ)[a, b]`.

mod catalog;
mod dykstra;
mod positivity;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{ComplexMatrix, HERMITIAN_TOL, ZERO};

pub use catalog::{catalog, CatalogMap};
pub use dykstra::{is_decomposable, DecompositionReport, DecompositionVerdict, DykstraOptions};
pub use positivity::{is_block_positive, is_co_cp, is_cp, BlockPositivity, ConeVerdict, SeeSawOptions};

/// Choi matrix of a linear map `M_{d_in} → M_{d_out}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    matrix: ComplexMatrix,
    d_in: usize,
    d_out: usize,
    hermiticity_preserving: bool,
}

impl ChoiMatrix {
    pub fn new(matrix: ComplexMatrix, d_in: usize, d_out: usize) -> Result<Self> {
        if d_in == 0 || d_out == 0 || matrix.dim() != d_in * d_out {
            return Err(Error::DimensionMismatch {
                expected: d_in * d_out,
                found: matrix.dim(),
            });
        }
        if matrix.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let hermiticity_preserving = matrix.is_hermitian(HERMITIAN_TOL);
        let matrix = if hermiticity_preserving {
            matrix.symmetrized()
        } else {
            matrix
        };
        Ok(Self {
            matrix,
            d_in,
            d_out,
            hermiticity_preserving,
        })
    }

    /// Choi matrix of the map defined by its action on matrix units.
    pub fn from_map(d_in: usize, d_out: usize, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Result<Self> {
        let mut c = ComplexMatrix::zeros(d_in * d_out);
        for i in 0..d_in {
            for j in 0..d_in {
                let mut unit = ComplexMatrix::zeros(d_in);
                unit[(i, j)] = crate::matcore::ONE;
                let img = f(&unit);
                if img.dim() != d_out {
                    return Err(Error::DimensionMismatch {
                        expected: d_out,
                        found: img.dim(),
                    });
                }
                for a in 0..d_out {
                    for b in 0..d_out {
                        c[(i * d_out + a, j * d_out + b)] = img[(a, b)];
                    }
                }
            }
        }
        Self::new(c, d_in, d_out)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d_in, self.d_out)
    }

    /// Whether the map sends hermitian matrices to hermitian matrices
    /// (equivalently, `C` is hermitian).
    pub fn is_hermiticity_preserving(&self) -> bool {
        self.hermiticity_preserving
    }

    pub(crate) fn require_hermitian(&self) -> Result<()> {
        if self.hermiticity_preserving {
            Ok(())
        } else {
            Err(Error::NotHermitian {
                deviation: self.matrix.hermitian_deviation(),
            })
        }
    }

    /// `(1−w)·self + w·other`.
    pub fn mix(&self, other: &ChoiMatrix, w: f64) -> Result<ChoiMatrix> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch {
                expected: self.matrix.dim(),
                found: other.matrix.dim(),
            });
        }
        let m = &self.matrix.scale_real(1.0 - w) + &other.matrix.scale_real(w);
        ChoiMatrix::new(m, self.d_in, self.d_out)
    }

    pub fn to_json(&self) -> ChoiJson {
        let (re, im) = self.matrix.to_parts();
        ChoiJson {
            d_in: self.d_in,
            d_out: self.d_out,
            re,
            im,
            convention: CONVENTION.to_string(),
        }
    }

    pub fn from_json(json: &ChoiJson) -> Result<Self> {
        if json.convention != CONVENTION {
            return Err(Error::InvalidChoi(format!(
                "unsupported convention `{}`",
                json.convention
            )));
        }
        let m = ComplexMatrix::from_parts(&json.re, &json.im)?;
        Self::new(m, json.d_in, json.d_out)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("choi serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let json: ChoiJson = serde_json::from_str(text)?;
        Self::from_json(&json)
    }
}

pub const CONVENTION: &str = "in_out";

/// Wire format: `{d_in, d_out, re, im, convention: "in_out"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChoiJson {
    pub d_in: usize,
    pub d_out: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
    pub convention: String,
}

/// `τ(X) = Tr_in[(Xᵀ ⊗ I)·C]`.
pub fn apply_map(c: &ChoiMatrix, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (d_in, d_out) = c.dims();
    if x.dim() != d_in {
        return Err(Error::DimensionMismatch {
            expected: d_in,
            found: x.dim(),
        });
    }
    let cm = &c.matrix;
    let mut out = ComplexMatrix::zeros(d_out);
    for i in 0..d_in {
        for j in 0..d_in {
            let xij = x[(i, j)];
            if xij == ZERO {
                continue;
            }
            for a in 0..d_out {
                for b in 0..d_out {
                    out[(a, b)] += xij * cm[(i * d_out + a, j * d_out + b)];
                }
            }
        }
    }
    Ok(out)
}

/// `(τ ⊗ id)(M)` for `M` on `C^{d1} ⊗ C^{d2}` with `d1 = d_in`, computed
/// blockwise without forming the Choi matrix of `τ ⊗ id`.
pub fn apply_on_first_leg(c: &ChoiMatrix, m: &ComplexMatrix, dims: (usize, usize)) -> Result<ComplexMatrix> {
    let (d1, d2) = dims;
    let (d_in, d_out) = c.dims();
    if d1 != d_in || m.dim() != d1 * d2 {
        return Err(Error::DimensionMismatch {
            expected: d_in * d2,
            found: m.dim(),
        });
    }
    let cm = &c.matrix;
    let mut out = ComplexMatrix::zeros(d_out * d2);
    for i in 0..d_in {
        for j in 0..d_in {
            for k in 0..d2 {
                for l in 0..d2 {
                    let x = m[(i * d2 + k, j * d2 + l)];
                    if x == ZERO {
                        continue;
                    }
                    for a in 0..d_out {
                        for b in 0..d_out {
                            out[(a * d2 + k, b * d2 + l)] += x * cm[(i * d_out + a, j * d_out + b)];
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Choi matrix of the trace-dual `τᵈ`, defined by `Tr[τ(X)†Y] = Tr[X†τᵈ(Y)]`.
pub fn dual_map(c: &ChoiMatrix) -> ChoiMatrix {
    let (d_in, d_out) = c.dims();
    let cm = &c.matrix;
    let mut out = ComplexMatrix::zeros(d_in * d_out);
    for i in 0..d_in {
        for j in 0..d_in {
            for a in 0..d_out {
                for b in 0..d_out {
                    out[(a * d_in + i, b * d_in + j)] = cm[(i * d_out + a, j * d_out + b)].conj();
                }
            }
        }
    }
    ChoiMatrix {
        matrix: out,
        d_in: d_out,
        d_out: d_in,
        hermiticity_preserving: c.hermiticity_preserving,
    }
}

/// Choi matrix of `τ ⊗ id_{d2}` (input `d_in·d2`, output `d_out·d2`).
pub fn tensor_with_identity(c: &ChoiMatrix, d2: usize) -> ChoiMatrix {
    let (d_in, d_out) = c.dims();
    let n_in = d_in * d2;
    let n_out = d_out * d2;
    let cm = &c.matrix;
    let mut out = ComplexMatrix::zeros(n_in * n_out);
    for i in 0..d_in {
        for k in 0..d2 {
            let row_in = i * d2 + k;
            for j in 0..d_in {
                for m in 0..d2 {
                    let col_in = j * d2 + m;
                    for a in 0..d_out {
                        for b in 0..d_out {
                            let v = cm[(i * d_out + a, j * d_out + b)];
                            if v == ZERO {
                                continue;
                            }
                            // id(E_km) = E_km: output indices (a,k), (b,m)
                            let r = row_in * n_out + a * d2 + k;
                            let s = col_in * n_out + b * d2 + m;
                            out[(r, s)] = v;
                        }
                    }
                }
            }
        }
    }
    ChoiMatrix {
        matrix: out,
        d_in: n_in,
        d_out: n_out,
        hermiticity_preserving: c.hermiticity_preserving,
    }
}
