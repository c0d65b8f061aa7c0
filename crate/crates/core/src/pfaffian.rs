//! Pfaffian of a complex antisymmetric matrix by skew-symmetric
//! tridiagonalization (Parlett–Reid) with partial pivoting.
//!
//! Conventions: pf of the empty matrix is 1, pf of any odd-dimensional
//! antisymmetric matrix is 0, pf([[0, a], [-a, 0]]) = a.

use crate::error::Result;
use crate::matrix::{ComplexMatrix, C64, ONE, ZERO};

/// Default absolute antisymmetry tolerance, scaled internally by max|A|.
pub const ANTISYMMETRY_TOL: f64 = 1e-10;

pub fn pfaffian(a: &ComplexMatrix, tol: f64) -> Result<C64> {
    let n = a.require_square()?;
    a.require_antisymmetric(tol)?;
    if n == 0 {
        return Ok(ONE);
    }
    if n % 2 == 1 {
        return Ok(ZERO);
    }

    // Work on a mutable copy; eliminate two rows/columns per step, picking up
    // one tridiagonal pivot per 2x2 block. Each row/column swap flips the sign.
    let mut m: Vec<C64> = a.data().to_vec();
    let at = |m: &Vec<C64>, i: usize, j: usize| m[i * n + j];
    let mut pf = ONE;

    let mut k = 0;
    while k + 1 < n {
        // partial pivot: largest |A[i, k]| over i > k
        let mut pivot = k + 1;
        let mut best = at(&m, k + 1, k).norm();
        for i in (k + 2)..n {
            let v = at(&m, i, k).norm();
            if v > best {
                best = v;
                pivot = i;
            }
        }
        if best == 0.0 {
            // column k decoupled: the matrix is singular and so is its pfaffian
            return Ok(ZERO);
        }
        if pivot != k + 1 {
            for j in 0..n {
                m.swap((k + 1) * n + j, pivot * n + j);
            }
            for i in 0..n {
                m.swap(i * n + (k + 1), i * n + pivot);
            }
            pf = -pf;
        }
        let p = at(&m, k, k + 1);
        pf *= p;
        // zero out column k below row k+1 by the congruence A <- M A M^T
        for i in (k + 2)..n {
            let f = at(&m, i, k) / at(&m, k + 1, k);
            if f == ZERO {
                continue;
            }
            for j in 0..n {
                let t = f * at(&m, k + 1, j);
                m[i * n + j] -= t;
            }
            for j in 0..n {
                let t = f * at(&m, j, k + 1);
                m[j * n + i] -= t;
            }
        }
        k += 2;
    }
    Ok(pf)
}

/// Pfaffian with the default antisymmetry tolerance.
pub fn pfaffian_default(a: &ComplexMatrix) -> Result<C64> {
    pfaffian(a, ANTISYMMETRY_TOL)
}

/// Builds an antisymmetric matrix from its strict upper triangle, row-major.
pub fn antisymmetric_from_upper(n: usize, upper: &[C64]) -> ComplexMatrix {
    assert_eq!(upper.len(), n * (n - 1) / 2);
    let mut m = ComplexMatrix::zeros(n, n);
    let mut idx = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            m[(i, j)] = upper[idx];
            m[(j, i)] = -upper[idx];
            idx += 1;
        }
    }
    m
}
