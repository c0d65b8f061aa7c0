//! Dense complex matrices in row-major storage, with the LU-based kernels
//! (determinant, inverse, solve) everything else is built on.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        m
    }

    pub fn from_real(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Self::from_fn(r, c, |i, j| c64(rows[i][j], 0.0))
    }

    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in entries.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * s)
    }

    pub fn neg(&self) -> Self {
        self.scale(c64(-1.0, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn has_non_finite(&self) -> bool {
        self.data
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// max|A + Aᵀ|; zero for an exactly antisymmetric matrix.
    pub fn antisymmetry_violation(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                worst = worst.max((self[(i, j)] + self[(j, i)]).norm());
            }
        }
        worst
    }

    /// Checks antisymmetry within `tol` scaled by max(1, max|A|).
    pub fn require_antisymmetric(&self, tol: f64) -> Result<()> {
        self.require_square()?;
        let viol = self.antisymmetry_violation();
        let scaled = tol * self.max_abs().max(1.0);
        if viol <= scaled {
            Ok(())
        } else {
            Err(Error::NotAntisymmetric {
                violation: viol,
                tol: scaled,
            })
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Restrict rows and columns to a strictly ascending index set (0-based).
    pub fn submatrix_keep(&self, keep: &[usize]) -> Result<Self> {
        for (pos, w) in keep.windows(2).enumerate() {
            if w[0] >= w[1] {
                return Err(Error::IndexNotAscending { position: pos + 1 });
            }
        }
        if let Some(&last) = keep.last() {
            if last >= self.rows || last >= self.cols {
                return Err(Error::IndexOutOfRange {
                    index: last,
                    dim: self.rows.min(self.cols),
                });
            }
        }
        let k = keep.len();
        Ok(Self::from_fn(k, k, |i, j| self[(keep[i], keep[j])]))
    }

    /// Copy `block` into self with upper-left corner at (r0, c0).
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)];
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    /// LU decomposition with partial pivoting; None if numerically singular.
    fn lu(&self) -> Option<Lu> {
        let n = self.rows;
        assert!(self.is_square());
        let mut a = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let mut pivot = k;
            let mut best = a[k * n + k].norm();
            for i in (k + 1)..n {
                let v = a[i * n + k].norm();
                if v > best {
                    best = v;
                    pivot = i;
                }
            }
            if best == 0.0 {
                return None;
            }
            if pivot != k {
                for j in 0..n {
                    a.swap(k * n + j, pivot * n + j);
                }
                perm.swap(k, pivot);
                sign = -sign;
            }
            let pk = a[k * n + k];
            for i in (k + 1)..n {
                let f = a[i * n + k] / pk;
                a[i * n + k] = f;
                for j in (k + 1)..n {
                    let t = f * a[k * n + j];
                    a[i * n + j] -= t;
                }
            }
        }
        Some(Lu { n, a, perm, sign })
    }

    pub fn det(&self) -> Result<C64> {
        let n = self.require_square()?;
        if n == 0 {
            return Ok(ONE);
        }
        match self.lu() {
            None => Ok(ZERO),
            Some(lu) => {
                let mut d = c64(lu.sign, 0.0);
                for i in 0..n {
                    d *= lu.a[i * n + i];
                }
                Ok(d)
            }
        }
    }

    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        self.require_square()?;
        let lu = self.lu().ok_or(Error::Singular)?;
        Ok(lu.solve(rhs))
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.require_square()?;
        self.solve(&Self::identity(n))
    }

    /// 1-norm condition estimate ‖A‖₁·‖A⁻¹‖₁.
    pub fn cond_1(&self) -> Result<f64> {
        let inv = self.inverse()?;
        Ok(self.norm_1() * inv.norm_1())
    }
}

struct Lu {
    n: usize,
    a: Vec<C64>,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    fn solve(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let n = self.n;
        assert_eq!(rhs.rows(), n);
        let m = rhs.cols();
        let mut x = ComplexMatrix::zeros(n, m);
        for c in 0..m {
            // forward substitution on permuted rhs
            let mut y = vec![ZERO; n];
            for i in 0..n {
                let mut s = rhs[(self.perm[i], c)];
                for (j, yj) in y.iter().enumerate().take(i) {
                    s -= self.a[i * n + j] * yj;
                }
                y[i] = s;
            }
            // back substitution
            for i in (0..n).rev() {
                let mut s = y[i];
                for j in (i + 1)..n {
                    s -= self.a[i * n + j] * x[(j, c)];
                }
                x[(i, c)] = s / self.a[i * n + i];
            }
        }
        x
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + rhs[(i, j)])
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - rhs[(i, j)])
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// AB − BA for same-shape square matrices.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.require_square()?;
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Err(Error::ShapeMismatch {
            lhs_rows: a.rows(),
            lhs_cols: a.cols(),
            rhs_rows: b.rows(),
            rhs_cols: b.cols(),
        });
    }
    Ok(&a.matmul(b) - &b.matmul(a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_det_and_inverse() {
        let a = ComplexMatrix::from_rows(&[
            vec![c64(2.0, 0.0), c64(1.0, 1.0), c64(0.0, -1.0)],
            vec![c64(0.0, 3.0), c64(-1.0, 0.5), c64(2.0, 2.0)],
            vec![c64(1.0, 0.0), c64(0.0, 0.0), c64(4.0, -1.0)],
        ]);
        let inv = a.inverse().unwrap();
        let id = a.matmul(&inv);
        assert!(id.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);

        let d = a.det().unwrap();
        let dinv = inv.det().unwrap();
        assert!((d * dinv - ONE).norm() < 1e-12);
    }

    #[test]
    fn det_of_singular_is_zero() {
        let a = ComplexMatrix::from_rows(&[vec![ONE, ONE], vec![ONE, ONE]]);
        assert_eq!(a.det().unwrap(), ZERO);
        assert!(matches!(a.inverse(), Err(Error::Singular)));
    }

    #[test]
    fn submatrix_keep_contract() {
        let a = ComplexMatrix::from_fn(4, 4, |i, j| c64((4 * i + j) as f64, 0.0));
        let all: Vec<usize> = (0..4).collect();
        assert_eq!(a.submatrix_keep(&all).unwrap(), a);
        let empty = a.submatrix_keep(&[]).unwrap();
        assert_eq!((empty.rows(), empty.cols()), (0, 0));
        let ul = a.submatrix_keep(&[0, 1]).unwrap();
        assert_eq!(ul, a.block(0, 0, 2, 2));
        assert!(matches!(
            a.submatrix_keep(&[1, 1]),
            Err(Error::IndexNotAscending { .. })
        ));
        assert!(matches!(
            a.submatrix_keep(&[2, 7]),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn commutator_basics() {
        let a = ComplexMatrix::from_rows(&[vec![ONE, c64(2.0, 0.0)], vec![ZERO, ONE]]);
        let zero = commutator(&a, &a).unwrap();
        assert!(zero.max_abs() == 0.0);
        let b = ComplexMatrix::zeros(3, 3);
        assert!(matches!(
            commutator(&a, &b),
            Err(Error::ShapeMismatch { .. })
        ));
    }
}
