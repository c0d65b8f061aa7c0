//! Principal matrix logarithm by inverse scaling and squaring: repeated
//! principal square roots (Denman–Beavers) until the argument is close to the
//! identity, then a truncated log(I + X) series.

use crate::error::{Error, Result};
use crate::matrix::{c64, ComplexMatrix};
use crate::{eig, expm};

/// Eigenvalues this close to the closed negative real axis make the principal
/// branch (and hence any square-root sign convention built on it) ambiguous.
pub const BRANCH_TOL: f64 = 1e-8;

fn denman_beavers_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.rows();
    let mut y = a.clone();
    let mut z = ComplexMatrix::identity(n);
    for _ in 0..60 {
        let y_inv = y.inverse()?;
        let z_inv = z.inverse()?;
        let y_next = (&y + &z_inv).scale(c64(0.5, 0.0));
        let z_next = (&z + &y_inv).scale(c64(0.5, 0.0));
        let delta = y_next.max_abs_diff(&y);
        y = y_next;
        z = z_next;
        if delta <= 1e-15 * y.max_abs().max(1.0) {
            break;
        }
    }
    Ok(y)
}

/// log(I + X) for small ‖X‖ by the alternating power series.
fn log_near_identity(x: &ComplexMatrix) -> ComplexMatrix {
    let n = x.rows();
    let mut term = x.clone();
    let mut acc = ComplexMatrix::zeros(n, n);
    for k in 1..=24 {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        acc.add_assign(&term.scale(c64(sign / k as f64, 0.0)));
        term = term.matmul(x);
        if term.max_abs() < 1e-18 {
            break;
        }
    }
    acc
}

/// Principal logarithm: exp(result) = A, eigenvalue arguments in (−π, π).
///
/// Fails when A is singular or has an eigenvalue within [`BRANCH_TOL`]
/// (relative) of the closed negative real axis.
pub fn matrix_log_principal(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    matrix_log_principal_with_tol(a, BRANCH_TOL)
}

pub fn matrix_log_principal_with_tol(a: &ComplexMatrix, branch_tol: f64) -> Result<ComplexMatrix> {
    let n = a.require_square()?;
    if n == 0 {
        return Ok(ComplexMatrix::zeros(0, 0));
    }
    for lambda in eig::eigenvalues(a)? {
        let dist = eig::dist_to_negative_axis(lambda);
        if dist <= branch_tol * lambda.norm().max(1.0) {
            if lambda.norm() <= branch_tol {
                return Err(Error::Singular);
            }
            return Err(Error::BranchCut {
                re: lambda.re,
                im: lambda.im,
                dist,
            });
        }
    }

    let mut current = a.clone();
    let mut sqrts = 0u32;
    let id = ComplexMatrix::identity(n);
    while (&current - &id).norm_1() > 0.25 {
        current = denman_beavers_sqrt(&current)?;
        sqrts += 1;
        if sqrts > 50 {
            break;
        }
    }
    let x = &current - &id;
    let log_small = log_near_identity(&x);
    let result = log_small.scale(c64(2f64.powi(sqrts as i32), 0.0));

    // round-trip guard: exp(log A) must reproduce A
    let back = expm::matrix_exp(&result)?;
    let dev = back.max_abs_diff(a);
    if dev > 1e-10 * a.max_abs().max(1.0) {
        return Err(Error::BranchCut {
            re: f64::NAN,
            im: f64::NAN,
            dist: dev,
        });
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::C64;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn log_identity_is_zero() {
        let log = matrix_log_principal(&ComplexMatrix::identity(5)).unwrap();
        assert!(log.max_abs() < 1e-14);
    }

    #[test]
    fn log_of_exp_diagonal() {
        let d = [c64(0.4, 1.2), c64(-0.3, -2.9), c64(1.5, 0.0)];
        let m = ComplexMatrix::diag(&d.iter().map(|z| z.exp()).collect::<Vec<_>>());
        let log = matrix_log_principal(&m).unwrap();
        for (i, v) in d.iter().enumerate() {
            assert!((log[(i, i)] - v).norm() < 1e-11, "entry {i}");
        }
    }

    #[test]
    fn branch_cut_detected() {
        let m = ComplexMatrix::diag(&[c64(-1.0, 0.0), c64(2.0, 0.0)]);
        assert!(matches!(
            matrix_log_principal(&m),
            Err(Error::BranchCut { .. })
        ));
        let near = ComplexMatrix::diag(&[c64(-1.0, 1e-9), c64(2.0, 0.0)]);
        assert!(matches!(
            matrix_log_principal(&near),
            Err(Error::BranchCut { .. })
        ));
    }

    #[test]
    fn singular_rejected() {
        let m = ComplexMatrix::diag(&[c64(0.0, 0.0), c64(1.0, 0.0)]);
        assert!(matrix_log_principal(&m).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        /// exp(log A) = A round trip through a random well-conditioned T22-like input.
        #[test]
        fn exp_log_round_trip(seed in 0u64..10_000) {
            let mut rng = StdRng::seed_from_u64(seed);
            let n = 4;
            let g = ComplexMatrix::from_fn(n, n, |_, _| {
                c64(rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4))
            });
            let a = expm::matrix_exp(&g).unwrap();
            let log = matrix_log_principal(&a).unwrap();
            let back = expm::matrix_exp(&log).unwrap();
            let scale = a.max_abs().max(1.0);
            prop_assert!(back.max_abs_diff(&a) <= 1e-9 * scale);
            let _: C64 = log[(0, 0)];
        }
    }
}
