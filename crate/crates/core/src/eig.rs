//! Eigenvalues of general complex matrices: Householder reduction to upper
//! Hessenberg form followed by the shifted QR iteration with deflation.
//!
//! Sizes in this crate stay small (at most a few dozen rows), so the plain
//! dense iteration is entirely adequate.

use crate::error::{Error, Result};
use crate::matrix::{c64, ComplexMatrix, C64, ZERO};

fn hessenberg(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        // Householder vector annihilating column k below the subdiagonal
        let mut x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let norm_x = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let alpha = if x[0] == ZERO {
            c64(-norm_x, 0.0)
        } else {
            -(x[0] / x[0].norm()) * norm_x
        };
        x[0] -= alpha;
        let vnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for v in &mut x {
            *v /= vnorm;
        }
        // H <- (I - 2vv*) H (I - 2vv*)
        for j in 0..n {
            let s: C64 = (0..x.len()).map(|i| x[i].conj() * h[(k + 1 + i, j)]).sum();
            for i in 0..x.len() {
                let t = 2.0 * x[i] * s;
                h[(k + 1 + i, j)] -= t;
            }
        }
        for i in 0..n {
            let s: C64 = (0..x.len()).map(|j| h[(i, k + 1 + j)] * x[j]).sum();
            for j in 0..x.len() {
                let t = 2.0 * s * x[j].conj();
                h[(i, k + 1 + j)] -= t;
            }
        }
    }
    h
}

/// Eigenvalue of the trailing 2x2 block closest to its (1,1) entry.
fn wilkinson_shift(h: &ComplexMatrix, hi: usize) -> C64 {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - 4.0 * det).sqrt();
    let l1 = (tr + disc) / 2.0;
    let l2 = (tr - disc) / 2.0;
    if (l1 - d).norm() < (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// All eigenvalues of a square complex matrix (unordered).
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<C64>> {
    let n = a.require_square()?;
    if n == 0 {
        return Ok(vec![]);
    }
    if n == 1 {
        return Ok(vec![a[(0, 0)]]);
    }
    let mut h = hessenberg(a);
    let mut out = Vec::with_capacity(n);
    let mut hi = n - 1; // active block is lo..=hi
    let mut iters_since_deflation = 0usize;
    let max_total = 100 * n;
    let mut total = 0usize;

    while out.len() < n {
        // deflate negligible subdiagonals, then locate the active window
        for i in 1..=hi {
            let s = h[(i - 1, i - 1)].norm() + h[(i, i)].norm();
            let s = if s == 0.0 { 1.0 } else { s };
            if h[(i, i - 1)].norm() <= 4.0 * f64::EPSILON * s {
                h[(i, i - 1)] = ZERO;
            }
        }
        if hi == 0 || h[(hi, hi - 1)] == ZERO {
            out.push(h[(hi, hi)]);
            if hi == 0 {
                break;
            }
            hi -= 1;
            iters_since_deflation = 0;
            continue;
        }
        let mut lo = hi;
        while lo > 0 && h[(lo, lo - 1)] != ZERO {
            lo -= 1;
        }

        total += 1;
        iters_since_deflation += 1;
        if total > max_total {
            return Err(Error::EigNoConvergence { iters: total });
        }
        // occasional exceptional shift breaks stalls on symmetric spectra
        let shift = if iters_since_deflation.is_multiple_of(20) {
            h[(hi, hi)] + c64(1.5 * h[(hi, hi - 1)].norm(), 0.5 * h[(hi - 1, hi)].norm())
        } else {
            wilkinson_shift(&h, hi)
        };

        // explicit shifted QR step on the window: H - sI = QR, H <- RQ + sI
        for i in lo..=hi {
            h[(i, i)] -= shift;
        }
        // left Givens sweep reduces the window to upper triangular
        let mut rot: Vec<(C64, C64, f64)> = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let aa = h[(k, k)];
            let bb = h[(k + 1, k)];
            let r = (aa.norm_sqr() + bb.norm_sqr()).sqrt();
            if r == 0.0 {
                rot.push((c64(1.0, 0.0), ZERO, 1.0));
                continue;
            }
            for j in k..=hi {
                let top = h[(k, j)];
                let bot = h[(k + 1, j)];
                h[(k, j)] = (aa.conj() * top + bb.conj() * bot) / r;
                h[(k + 1, j)] = (-bb * top + aa * bot) / r;
            }
            rot.push((aa, bb, r));
        }
        // right multiplication by the adjoints restores Hessenberg form
        for (k, &(aa, bb, r)) in (lo..hi).zip(rot.iter()) {
            if r == 1.0 && bb == ZERO && aa == c64(1.0, 0.0) {
                continue;
            }
            let top_row = if k + 1 < hi { k + 2 } else { hi };
            for i in lo..=top_row {
                let left = h[(i, k)];
                let right = h[(i, k + 1)];
                h[(i, k)] = (left * aa + right * bb) / r;
                h[(i, k + 1)] = (-left * bb.conj() + right * aa.conj()) / r;
            }
        }
        for i in lo..=hi {
            h[(i, i)] += shift;
        }
    }
    Ok(out)
}

/// Distance from `z` to the closed negative real axis {x <= 0}.
pub fn dist_to_negative_axis(z: C64) -> f64 {
    if z.re <= 0.0 {
        z.im.abs()
    } else {
        z.norm()
    }
}
