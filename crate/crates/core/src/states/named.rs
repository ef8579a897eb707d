use rand::Rng;

use super::{DensityMatrix, Ensemble};
use crate::error::{Error, Result};
use crate::matcore::random::{random_psd, substream};
use crate::matcore::{ComplexMatrix, C64, ZERO};

/// Named state families used as fixtures and by the command line.
#[derive(Debug, Clone)]
pub enum StateFamily {
    /// `k = 1..4`: Φ⁺, Φ⁻, Ψ⁺, Ψ⁻.
    Bell {
        k: u8,
    },
    /// `p|Ψ⁻><Ψ⁻| + (1−p) I/4`.
    Werner {
        p: f64,
    },
    /// `f|Φ⁺><Φ⁺| + (1−f)(I − |Φ⁺><Φ⁺|)/(d²−1)` on `d x d`.
    Isotropic {
        d: usize,
        f: f64,
    },
    MaxMixed {
        d1: usize,
        d2: usize,
    },
    Product(DensityMatrix, DensityMatrix),
    RandomSeparable {
        d1: usize,
        d2: usize,
        m: usize,
        seed: u64,
    },
    RandomDensity {
        d1: usize,
        d2: usize,
        rank: usize,
        seed: u64,
    },
}

/// A generated state, with a separable decomposition when one is known by
/// construction.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub state: DensityMatrix,
    pub certificate: Option<Ensemble>,
}

impl From<DensityMatrix> for Fixture {
    fn from(state: DensityMatrix) -> Self {
        Fixture {
            state,
            certificate: None,
        }
    }
}

fn unit_interval(name: &'static str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::OutOfRange {
            name,
            value: v,
            reason: "must lie in [0, 1]",
        });
    }
    Ok(())
}

fn positive_dim(name: &'static str, d: usize) -> Result<()> {
    if d == 0 || d > 64 {
        return Err(Error::OutOfRange {
            name,
            value: d as f64,
            reason: "dimension must be in 1..=64",
        });
    }
    Ok(())
}

fn bell_vector(k: u8) -> Result<[C64; 4]> {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    Ok(match k {
        1 => [h, ZERO, ZERO, h],
        2 => [h, ZERO, ZERO, -h],
        3 => [ZERO, h, h, ZERO],
        4 => [ZERO, h, -h, ZERO],
        _ => {
            return Err(Error::OutOfRange {
                name: "k",
                value: k as f64,
                reason: "Bell index must be 1..=4",
            })
        }
    })
}

pub fn make_named(family: &StateFamily) -> Result<Fixture> {
    match family {
        StateFamily::Bell { k } => {
            let v = bell_vector(*k)?;
            Ok(DensityMatrix::from_trusted(ComplexMatrix::projector(&v), 2, 2).into())
        }
        StateFamily::Werner { p } => {
            unit_interval("p", *p)?;
            let singlet = ComplexMatrix::projector(&bell_vector(4)?);
            let m = &singlet.scale_real(*p) + &ComplexMatrix::identity(4).scale_real((1.0 - p) / 4.0);
            Ok(DensityMatrix::new(m, 2, 2)?.into())
        }
        StateFamily::Isotropic { d, f } => {
            unit_interval("f", *f)?;
            if *d < 2 || *d > 8 {
                return Err(Error::OutOfRange {
                    name: "d",
                    value: *d as f64,
                    reason: "isotropic dimension must be in 2..=8",
                });
            }
            let n = d * d;
            let amp = C64::new(1.0 / (*d as f64).sqrt(), 0.0);
            let mut omega = vec![ZERO; n];
            for i in 0..*d {
                omega[i * d + i] = amp;
            }
            let proj = ComplexMatrix::projector(&omega);
            let rest = &ComplexMatrix::identity(n) - &proj;
            let m = &proj.scale_real(*f) + &rest.scale_real((1.0 - f) / (n as f64 - 1.0));
            Ok(DensityMatrix::new(m, *d, *d)?.into())
        }
        StateFamily::MaxMixed { d1, d2 } => {
            positive_dim("d1", *d1)?;
            positive_dim("d2", *d2)?;
            Ok(DensityMatrix::maximally_mixed(*d1, *d2).into())
        }
        StateFamily::Product(a, b) => Ok(DensityMatrix::product(a, b).into()),
        StateFamily::RandomSeparable { d1, d2, m, seed } => {
            let (state, cert) = random_separable(*d1, *d2, *m, *seed)?;
            Ok(Fixture {
                state,
                certificate: Some(cert),
            })
        }
        StateFamily::RandomDensity { d1, d2, rank, seed } => {
            positive_dim("d1", *d1)?;
            positive_dim("d2", *d2)?;
            if *rank == 0 || *rank > d1 * d2 {
                return Err(Error::OutOfRange {
                    name: "rank",
                    value: *rank as f64,
                    reason: "rank must be in 1..=d1*d2",
                });
            }
            let mut rng = substream(*seed, 0);
            Ok(random_density(*d1, *d2, *rank, &mut rng).into())
        }
    }
}

/// Normalized Wishart state of the given rank.
pub fn random_density<R: Rng + ?Sized>(d1: usize, d2: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    let w = random_psd(d1 * d2, rank, rng);
    let tr = w.trace().re;
    DensityMatrix::from_trusted(w.scale_real(1.0 / tr).symmetrized(), d1, d2)
}

/// `Σ λᵢ ϱᵢ¹ ⊗ ϱᵢ²` with `m` random mixed product components and
/// Dirichlet(1) weights. Returns the state together with its decomposition.
pub fn random_separable(d1: usize, d2: usize, m: usize, seed: u64) -> Result<(DensityMatrix, Ensemble)> {
    positive_dim("d1", d1)?;
    positive_dim("d2", d2)?;
    if m == 0 || m > 1024 {
        return Err(Error::OutOfRange {
            name: "m",
            value: m as f64,
            reason: "component count must be in 1..=1024",
        });
    }
    let mut rng = substream(seed, 0);
    let mut raw: Vec<f64> = (0..m).map(|_| -(1.0 - rng.random::<f64>()).ln() + 1e-9).collect();
    let total: f64 = raw.iter().sum();
    raw.iter_mut().for_each(|w| *w /= total);

    let mut components = Vec::with_capacity(m);
    for _ in 0..m {
        let r1 = rng.random_range(1..=d1);
        let r2 = rng.random_range(1..=d2);
        let a = random_density(d1, 1, r1, &mut rng);
        let b = random_density(d2, 1, r2, &mut rng);
        components.push(DensityMatrix::product(&a, &b));
    }
    let cert = Ensemble::from_trusted(raw, components);
    let state = DensityMatrix::new(cert.barycenter(), d1, d2)?;
    Ok((state, cert))
}
