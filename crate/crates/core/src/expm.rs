//! Matrix exponential by scaling and squaring with the degree-13 diagonal
//! Padé approximant (Higham 2005).

use crate::error::{Error, Result};
use crate::matrix::{c64, ComplexMatrix};

const THETA_3: f64 = 1.495585217958292e-2;
const THETA_5: f64 = 2.539_398_330_063_23e-1;
const THETA_7: f64 = 9.504178996162932e-1;
const THETA_9: f64 = 2.097847961257068e0;
const THETA_13: f64 = 5.371920351148152e0;

const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn pade_eval(a: &ComplexMatrix, b: &[f64]) -> Result<ComplexMatrix> {
    // split b into even/odd polynomials in A^2 so that P = U + V, Q = -U + V
    let n = a.rows();
    let a2 = a.matmul(a);
    let deg = b.len() - 1;
    let mut u_poly = ComplexMatrix::zeros(n, n); // odd coefficients, poly in A^2
    let mut v_poly = ComplexMatrix::zeros(n, n); // even coefficients
    let mut power = ComplexMatrix::identity(n);
    for (k, &coef) in b.iter().enumerate() {
        if k % 2 == 0 {
            v_poly.add_assign(&power.scale(c64(coef, 0.0)));
        } else {
            u_poly.add_assign(&power.scale(c64(coef, 0.0)));
        }
        if k % 2 == 1 && k < deg {
            power = power.matmul(&a2);
        }
    }
    let u = a.matmul(&u_poly);
    let p = &v_poly + &u;
    let q = &v_poly - &u;
    q.solve(&p)
}

fn pade13(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    // Higham's evaluation scheme splitting the degree-13 polynomial
    let n = a.rows();
    let b = &B13;
    let a2 = a.matmul(a);
    let a4 = a2.matmul(&a2);
    let a6 = a2.matmul(&a4);
    let w1 = {
        let mut t = a6.scale(c64(b[13], 0.0));
        t.add_assign(&a4.scale(c64(b[11], 0.0)));
        t.add_assign(&a2.scale(c64(b[9], 0.0)));
        t
    };
    let w2 = {
        let mut t = a6.scale(c64(b[7], 0.0));
        t.add_assign(&a4.scale(c64(b[5], 0.0)));
        t.add_assign(&a2.scale(c64(b[3], 0.0)));
        t.add_assign(&ComplexMatrix::identity(n).scale(c64(b[1], 0.0)));
        t
    };
    let u = a.matmul(&(&a6.matmul(&w1) + &w2));
    let z1 = {
        let mut t = a6.scale(c64(b[12], 0.0));
        t.add_assign(&a4.scale(c64(b[10], 0.0)));
        t.add_assign(&a2.scale(c64(b[8], 0.0)));
        t
    };
    let v = {
        let mut t = a6.matmul(&z1);
        t.add_assign(&a6.scale(c64(b[6], 0.0)));
        t.add_assign(&a4.scale(c64(b[4], 0.0)));
        t.add_assign(&a2.scale(c64(b[2], 0.0)));
        t.add_assign(&ComplexMatrix::identity(n).scale(c64(b[0], 0.0)));
        t
    };
    let p = &v + &u;
    let q = &v - &u;
    q.solve(&p)
}

/// exp(A) for a square complex matrix.
pub fn matrix_exp(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.require_square()?;
    if n == 0 {
        return Ok(ComplexMatrix::zeros(0, 0));
    }
    let norm = a.norm_1();
    if !norm.is_finite() {
        return Err(Error::Overflow { norm });
    }

    const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
    const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
    const B7: [f64; 8] = [
        17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
    ];
    const B9: [f64; 10] = [
        17643225600.0,
        8821612800.0,
        2075673600.0,
        302702400.0,
        30270240.0,
        2162160.0,
        110880.0,
        3960.0,
        90.0,
        1.0,
    ];

    let result = if norm <= THETA_3 {
        pade_eval(a, &B3)?
    } else if norm <= THETA_5 {
        pade_eval(a, &B5)?
    } else if norm <= THETA_7 {
        pade_eval(a, &B7)?
    } else if norm <= THETA_9 {
        pade_eval(a, &B9)?
    } else {
        let scaling = ((norm / THETA_13).log2().ceil() as i32).max(0);
        let scaled = a.scale(c64(0.5f64.powi(scaling), 0.0));
        let mut r = pade13(&scaled)?;
        for _ in 0..scaling {
            r = r.matmul(&r);
        }
        r
    };

    if result.has_non_finite() {
        return Err(Error::Overflow {
            norm: result.max_abs(),
        });
    }
    Ok(result)
}
