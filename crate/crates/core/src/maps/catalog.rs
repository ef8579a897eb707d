use super::ChoiMatrix;
use crate::error::{Error, Result};
use crate::matcore::{ComplexMatrix, C64};

/// Built-in maps.
#[derive(Debug, Clone, PartialEq)]
pub enum CatalogMap {
    Identity {
        d: usize,
    },
    Transpose {
        d: usize,
    },
    /// `X ↦ λX + (1−λ) Tr(X) I/d`.
    Depolarizing {
        d: usize,
        lambda: f64,
    },
    /// `X ↦ Tr(X) I − X`.
    Reduction {
        d: usize,
    },
    /// The Choi map on `M₃`: diagonal `x_kk + x_{k+1,k+1}` (indices mod 3),
    /// off-diagonal `−x_ij`.
    ChoiMap,
    /// `X ↦ (Tr(X) I − Xᵀ)/(d−1)`.
    WernerHolevo {
        d: usize,
    },
}

impl CatalogMap {
    pub const NAMES: [&'static str; 6] = [
        "identity",
        "transpose",
        "depolarizing",
        "reduction",
        "choi_map",
        "werner_holevo",
    ];

    /// Looks a map up by name. `d` defaults to 2 (ignored for `choi_map`),
    /// `lambda` to 1.
    pub fn from_name(name: &str, d: Option<usize>, lambda: Option<f64>) -> Result<Self> {
        let d = d.unwrap_or(2);
        Ok(match name {
            "identity" => CatalogMap::Identity { d },
            "transpose" => CatalogMap::Transpose { d },
            "depolarizing" => CatalogMap::Depolarizing {
                d,
                lambda: lambda.unwrap_or(1.0),
            },
            "reduction" => CatalogMap::Reduction { d },
            "choi_map" => CatalogMap::ChoiMap,
            "werner_holevo" => CatalogMap::WernerHolevo { d },
            _ => {
                return Err(Error::UnknownName {
                    kind: "map",
                    name: name.to_string(),
                })
            }
        })
    }

    /// One representative of each entry, for table-driven tests.
    pub fn all_examples() -> Vec<CatalogMap> {
        vec![
            CatalogMap::Identity { d: 2 },
            CatalogMap::Identity { d: 3 },
            CatalogMap::Transpose { d: 2 },
            CatalogMap::Transpose { d: 3 },
            CatalogMap::Depolarizing { d: 2, lambda: 0.5 },
            CatalogMap::Depolarizing { d: 3, lambda: -0.1 },
            CatalogMap::Reduction { d: 2 },
            CatalogMap::Reduction { d: 3 },
            CatalogMap::ChoiMap,
            CatalogMap::WernerHolevo { d: 2 },
            CatalogMap::WernerHolevo { d: 3 },
        ]
    }
}

fn check_dim(d: usize, min: usize) -> Result<()> {
    if d < min || d > 16 {
        return Err(Error::OutOfRange {
            name: "d",
            value: d as f64,
            reason: "map dimension out of supported range",
        });
    }
    Ok(())
}

pub fn catalog(map: &CatalogMap) -> Result<ChoiMatrix> {
    match *map {
        CatalogMap::Identity { d } => {
            check_dim(d, 1)?;
            ChoiMatrix::from_map(d, d, |x| x.clone())
        }
        CatalogMap::Transpose { d } => {
            check_dim(d, 1)?;
            ChoiMatrix::from_map(d, d, |x| x.transpose())
        }
        CatalogMap::Depolarizing { d, lambda } => {
            check_dim(d, 1)?;
            if !lambda.is_finite() || lambda.abs() > 1e6 {
                return Err(Error::OutOfRange {
                    name: "lambda",
                    value: lambda,
                    reason: "must be finite",
                });
            }
            ChoiMatrix::from_map(d, d, |x| {
                let mixed = ComplexMatrix::identity(d).scale(x.trace() * ((1.0 - lambda) / d as f64));
                &x.scale_real(lambda) + &mixed
            })
        }
        CatalogMap::Reduction { d } => {
            check_dim(d, 1)?;
            ChoiMatrix::from_map(d, d, |x| &ComplexMatrix::identity(d).scale(x.trace()) - x)
        }
        CatalogMap::ChoiMap => ChoiMatrix::from_map(3, 3, |x| {
            ComplexMatrix::from_fn(3, |i, j| {
                if i == j {
                    x[(i, i)] + x[((i + 1) % 3, (i + 1) % 3)]
                } else {
                    -x[(i, j)]
                }
            })
        }),
        CatalogMap::WernerHolevo { d } => {
            check_dim(d, 2)?;
            let norm = 1.0 / (d as f64 - 1.0);
            ChoiMatrix::from_map(d, d, |x| {
                (&ComplexMatrix::identity(d).scale(x.trace()) - &x.transpose()).scale(C64::new(norm, 0.0))
            })
        }
    }
}
