//! Small dense complex linear algebra.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

pub type CVector = Vec<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// `⟨a|b⟩`, antilinear in the first argument.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Scales `a` to unit norm. Fails on the zero vector.
pub fn normalize(a: &mut [Complex64]) -> Result<()> {
    let n = norm(a);
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::Domain("cannot normalize a zero or non-finite vector"));
    }
    for x in a.iter_mut() {
        *x /= n;
    }
    Ok(())
}

pub fn scale(a: &[Complex64], s: Complex64) -> CVector {
    a.iter().map(|x| x * s).collect()
}

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from rows; every row must have `rows.len()` entries.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::Dimension { expected: dim, found: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_2x2(a: [[f64; 2]; 2]) -> Self {
        let c = |x: f64| Complex64::new(x, 0.0);
        Self { dim: 2, data: vec![c(a[0][0]), c(a[0][1]), c(a[1][0]), c(a[1][1])] }
    }

    pub fn pauli_x() -> Self {
        Self { dim: 2, data: vec![ZERO, ONE, ONE, ZERO] }
    }

    pub fn pauli_y() -> Self {
        Self { dim: 2, data: vec![ZERO, -I, I, ZERO] }
    }

    pub fn pauli_z() -> Self {
        Self { dim: 2, data: vec![ONE, ZERO, ZERO, -ONE] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> CVector {
        debug_assert_eq!(v.len(), self.dim);
        self.data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `⟨a|M|b⟩`.
    pub fn sandwich(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        inner(a, &self.mul_vec(b))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Max-norm of `M − M†`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(1 − s)·self + s·other`.
    pub fn lerp(&self, other: &Self, s: f64) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a * (1.0 - s) + b * s).collect(),
        }
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        CMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        CMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl Mul<f64> for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: f64) -> CMatrix {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let x = CMatrix::pauli_x();
        let y = CMatrix::pauli_y();
        let z = CMatrix::pauli_z();
        for m in [&x, &y, &z] {
            assert_eq!(m.hermiticity_defect(), 0.0);
        }
        // σ_x σ_y = i σ_z, checked on the basis vectors
        let e0 = vec![ONE, ZERO];
        let lhs = x.mul_vec(&y.mul_vec(&e0));
        let rhs = scale(&z.mul_vec(&e0), I);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn normalize_rejects_zero() {
        let mut v = vec![ZERO; 3];
        assert!(normalize(&mut v).is_err());
        let mut w = vec![Complex64::new(3.0, 0.0), Complex64::new(0.0, 4.0)];
        normalize(&mut w).unwrap();
        assert!((norm(&w) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn from_rows_checks_shape() {
        let bad = [vec![ONE, ZERO], vec![ONE]];
        assert!(matches!(CMatrix::from_rows(&bad), Err(Error::Dimension { .. })));
    }
}
