use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance on `max |M[i,j] - conj(M[j,i])|` below which a matrix
/// is treated as hermitian and silently symmetrized.
pub const HERMITIAN_TOL: f64 = 1e-10;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Dense square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries. Fails unless `data.len()` is a
    /// perfect square.
    pub fn from_row_major(data: Vec<C64>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim * dim != data.len() {
            return Err(Error::NotSquare {
                rows: data.len(),
                cols: 0,
            });
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from separate real and imaginary row lists.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let dim = re.len();
        if im.len() != dim {
            return Err(Error::NotSquare {
                rows: re.len(),
                cols: im.len(),
            });
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (rr, ri) in re.iter().zip(im) {
            if rr.len() != dim || ri.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    cols: rr.len().max(ri.len()),
                });
            }
            for (&a, &b) in rr.iter().zip(ri) {
                if !a.is_finite() || !b.is_finite() {
                    return Err(Error::NonFinite);
                }
                data.push(C64::new(a, b));
            }
        }
        Ok(Self { dim, data })
    }

    /// Real and imaginary parts as nested row lists.
    pub fn to_parts(&self) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let re = self.rows().map(|r| r.iter().map(|z| z.re).collect()).collect();
        let im = self.rows().map(|r| r.iter().map(|z| z.im).collect()).collect();
        (re, im)
    }

    /// Outer product `|u><v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        assert_eq!(u.len(), v.len(), "outer product of unequal vectors");
        Self::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    /// Projector `|v><v|` (not normalized).
    pub fn projector(v: &[C64]) -> Self {
        Self::outer(v, v)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[C64]> {
        self.data.chunks(self.dim.max(1))
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn diag(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius distance to `other`.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `max |M[i,j] - conj(M[j,i])|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `(M + M†) / 2`.
    pub fn symmetrized(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// Returns the symmetrized matrix if the hermiticity defect is within
    /// [`HERMITIAN_TOL`], otherwise an error.
    pub fn checked_hermitian(&self) -> Result<Self> {
        if self.data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let dev = self.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        Ok(self.symmetrized())
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        self.rows()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `<v|M|v>`.
    pub fn expectation(&self, v: &[C64]) -> C64 {
        let mv = self.matvec(v);
        v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// `Tr[A B]` without forming the product.
    pub fn trace_product(&self, other: &Self) -> C64 {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut acc = ZERO;
        for i in 0..n {
            for k in 0..n {
                acc += self.data[i * n + k] * other.data[k * n + i];
            }
        }
        acc
    }

    /// Hilbert–Schmidt inner product `Tr[A† B]`.
    pub fn inner(&self, other: &Self) -> C64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "add dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "sub dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.dim, rhs.dim, "add dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl SubAssign<&ComplexMatrix> for ComplexMatrix {
    fn sub_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.dim, rhs.dim, "sub dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|z| format!("{:+.4}{:+.4}i", z.re, z.im)).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Pauli matrices and a couple of named vectors used throughout the crate.
pub mod pauli {
    use super::*;

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_row_major(vec![ZERO, ONE, ONE, ZERO]).unwrap()
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_row_major(vec![ZERO, -I, I, ZERO]).unwrap()
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_diag(&[1.0, -1.0])
    }
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `<u|v>`.
pub fn vec_inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Kronecker product of two vectors, first factor slow.
pub fn kron_vec(u: &[C64], v: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(u.len() * v.len());
    for a in u {
        for b in v {
            out.push(a * b);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let (x, y, z) = (pauli::x(), pauli::y(), pauli::z());
        let xy = x.matmul(&y);
        assert!(xy.distance(&z.scale(I)) < 1e-15);
        assert!(x.matmul(&x).distance(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn hermitian_check_symmetrizes_small_defects() {
        let mut m = pauli::y();
        m[(0, 1)] += C64::new(5e-11, 0.0);
        let h = m.checked_hermitian().unwrap();
        assert_eq!(h.hermitian_deviation(), 0.0);

        m[(0, 1)] += C64::new(1e-6, 0.0);
        assert!(matches!(m.checked_hermitian(), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn from_row_major_rejects_non_square() {
        assert!(ComplexMatrix::from_row_major(vec![ONE; 3]).is_err());
    }

    #[test]
    fn from_parts_rejects_ragged_and_non_finite() {
        assert!(ComplexMatrix::from_parts(&[vec![1.0, 0.0]], &[vec![0.0, 0.0]]).is_err());
        assert!(ComplexMatrix::from_parts(&[vec![f64::NAN]], &[vec![0.0]]).is_err());
        let m = ComplexMatrix::from_parts(&[vec![1.0]], &[vec![2.0]]).unwrap();
        assert_eq!(m[(0, 0)], C64::new(1.0, 2.0));
    }

    #[test]
    fn trace_product_matches_matmul() {
        let a = ComplexMatrix::from_fn(3, |i, j| C64::new(i as f64, j as f64 - 1.0));
        let b = ComplexMatrix::from_fn(3, |i, j| C64::new((i * j) as f64, 0.5));
        assert!((a.trace_product(&b) - a.matmul(&b).trace()).norm() < 1e-12);
    }
}
