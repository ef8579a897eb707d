use super::matrix::{ComplexMatrix, C64, I, ONE};

/// Generalized Gell-Mann matrices of `M_d`: the `d² − 1` traceless hermitian
/// generators (symmetric, antisymmetric, diagonal), normalized to
/// `Tr[g²] = 2`. For `d = 2` these are σx, σy, σz.
pub fn gell_mann_basis(d: usize) -> Vec<ComplexMatrix> {
    let mut out = Vec::with_capacity(d * d);
    for j in 0..d {
        for k in (j + 1)..d {
            let mut s = ComplexMatrix::zeros(d);
            s[(j, k)] = ONE;
            s[(k, j)] = ONE;
            out.push(s);
            let mut a = ComplexMatrix::zeros(d);
            a[(j, k)] = -I;
            a[(k, j)] = I;
            out.push(a);
        }
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut g = ComplexMatrix::zeros(d);
        for j in 0..l {
            g[(j, j)] = C64::new(norm, 0.0);
        }
        g[(l, l)] = C64::new(-(l as f64) * norm, 0.0);
        out.push(g);
    }
    out
}
