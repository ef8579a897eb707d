//! Seeded random matrices and the per-restart seed splitting scheme.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::{vec_inner, vec_norm, ComplexMatrix, C64};

/// Independent generator for substream `index` of `seed`.
///
/// All randomness in the crate flows through this: a run seeded with `seed`
/// uses stream `r` for its `r`-th restart, so adding restarts never changes
/// the ones already present.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<C64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

/// Haar-random unit vector.
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let v = gaussian_vector(n, rng);
        let norm = vec_norm(&v);
        if norm > 1e-12 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Random hermitian matrix with GUE-like entries.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, |_, _| complex_gaussian(rng));
    (&g + &g.dagger()).scale_real(0.5)
}

/// Wishart matrix `G G†` with `G` of shape `n x rank`.
pub fn random_psd<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> ComplexMatrix {
    let cols: Vec<Vec<C64>> = (0..rank).map(|_| gaussian_vector(n, rng)).collect();
    ComplexMatrix::from_fn(n, |i, j| cols.iter().map(|c| c[i] * c[j].conj()).sum())
}

/// Haar-random unitary, columns from Gram–Schmidt on a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v = gaussian_vector(n, rng);
        for c in &cols {
            let ov = vec_inner(c, &v);
            for (x, y) in v.iter_mut().zip(c) {
                *x -= ov * y;
            }
        }
        let norm = vec_norm(&v);
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    ComplexMatrix::from_fn(n, |i, j| cols[j][i])
}
