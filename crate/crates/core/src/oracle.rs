//! Brute-force Fock-space reference. Builds the dense 2^L representation of
//! any Gaussian operator and any product-basis rotation; ground truth for
//! every Pfaffian formula in this crate.
//!
//! Basis convention: bit l−1 of the Fock index is the occupation of site l
//! (site 1 = least significant bit), and the Jordan–Wigner dictionary maps
//! occupied ↦ spin-up.

use crate::elements::SiteAngles;
use crate::error::{Error, Result};
use crate::expm::matrix_exp;
use crate::gaussian::{CorrelationMatrix, GaussianSpec};
use crate::matrix::{c64, ComplexMatrix, C64, ONE, ZERO};

/// 2^L ≤ 1024 for operator construction.
pub const JW_GUARD: usize = 10;
/// Dense exponentials are limited to L ≤ 8.
pub const EXP_GUARD: usize = 8;

/// Dense operator on the 2^L-dimensional Fock space.
#[derive(Debug, Clone)]
pub struct DenseOperator {
    pub l: usize,
    pub matrix: ComplexMatrix,
}

impl DenseOperator {
    pub fn new(l: usize, matrix: ComplexMatrix) -> Self {
        assert_eq!(matrix.rows(), 1 << l);
        Self { l, matrix }
    }
}

/// Fock index of an occupied-site set (1-based sites).
pub fn fock_index(occupied: &[usize]) -> usize {
    occupied.iter().map(|&s| 1usize << (s - 1)).sum()
}

/// Fock index of a spin configuration (up = occupied).
pub fn fock_index_spins(spins: &[i8]) -> usize {
    spins
        .iter()
        .enumerate()
        .filter(|(_, &s)| s == 1)
        .map(|(i, _)| 1usize << i)
        .sum()
}

/// Annihilation operators c_1..c_L as dense integer-entry matrices:
/// c_l = ∏_{j<l}(−σ^z_j) σ_l^−.
pub fn jw_operators(l: usize) -> Result<Vec<ComplexMatrix>> {
    if l > JW_GUARD {
        return Err(Error::Guard {
            what: "jw L",
            got: l,
            limit: JW_GUARD,
        });
    }
    let dim = 1usize << l;
    let mut ops = Vec::with_capacity(l);
    for site in 1..=l {
        let bit = 1usize << (site - 1);
        let mut c = ComplexMatrix::zeros(dim, dim);
        for n in 0..dim {
            if n & bit != 0 {
                let below = (n & (bit - 1)).count_ones();
                let phase = if below.is_multiple_of(2) { 1.0 } else { -1.0 };
                c[(n & !bit, n)] = c64(phase, 0.0);
            }
        }
        ops.push(c);
    }
    Ok(ops)
}

/// Dense Gaussian operator: exp[½ (c†,c) ℳ (c;c†)] for generic and mixed
/// specs, exp[c†Ac] for particle-conserving specs.
pub fn build_gaussian(spec: &GaussianSpec) -> Result<DenseOperator> {
    let l = spec.sites();
    if l > EXP_GUARD {
        return Err(Error::Guard {
            what: "dense exponential L",
            got: l,
            limit: EXP_GUARD,
        });
    }
    let cs = jw_operators(l)?;
    let cds: Vec<ComplexMatrix> = cs.iter().map(ComplexMatrix::conj_transpose).collect();
    let dim = 1usize << l;
    let mut h = ComplexMatrix::zeros(dim, dim);
    if let Some(a) = spec.a_small() {
        for i in 0..l {
            for j in 0..l {
                let coeff = a[(i, j)];
                if coeff == ZERO {
                    continue;
                }
                h.add_assign(&cds[i].matmul(&cs[j]).scale(coeff));
            }
        }
    } else {
        let m = spec.matrix();
        let half = c64(0.5, 0.0);
        for a in 0..2 * l {
            let va = if a < l { &cds[a] } else { &cs[a - l] };
            for b in 0..2 * l {
                let coeff = m[(a, b)];
                if coeff == ZERO {
                    continue;
                }
                let wb = if b < l { &cs[b] } else { &cds[b - l] };
                h.add_assign(&va.matmul(wb).scale(half * coeff));
            }
        }
    }
    Ok(DenseOperator::new(l, matrix_exp(&h)?))
}

/// Tensor product of single-site rotation matrices, site 1 innermost. The
/// 2×2 matrix acts on the (spin-down, spin-up) = (empty, occupied) ordering
/// of each Fock bit.
pub fn rotation(angles: &[SiteAngles], l: usize) -> Result<DenseOperator> {
    if angles.len() != l {
        return Err(Error::BadLength {
            what: "angles",
            expected: l,
            got: angles.len(),
        });
    }
    if l > JW_GUARD {
        return Err(Error::Guard {
            what: "rotation L",
            got: l,
            limit: JW_GUARD,
        });
    }
    let mut u = ComplexMatrix::identity(1);
    for ang in angles.iter().take(l) {
        let c = (ang.theta / 2.0).cos();
        let s = (ang.theta / 2.0).sin();
        // paper-convention matrix in (up, down) ordering ...
        let uu = c64(c, 0.0);
        let ud = c64(s, 0.0) * c64(0.0, -ang.phi).exp();
        let du = c64(s, 0.0) * c64(0.0, -ang.alpha).exp();
        let dd = c64(-c, 0.0) * c64(0.0, -(ang.alpha + ang.phi)).exp();
        // ... relabeled to the Fock ordering (bit 0 = empty = down)
        let site = ComplexMatrix::from_rows(&[vec![dd, du], vec![ud, uu]]);
        let dim = u.rows();
        let mut next = ComplexMatrix::zeros(2 * dim, 2 * dim);
        for bi in 0..2 {
            for bj in 0..2 {
                for i in 0..dim {
                    for j in 0..dim {
                        next[(bi * dim + i, bj * dim + j)] = site[(bi, bj)] * u[(i, j)];
                    }
                }
            }
        }
        u = next;
    }
    Ok(DenseOperator::new(l, u))
}

/// ⟨S| U G U† |S′⟩ with the same per-site basis on both sides.
pub fn element_oracle(
    spec: &GaussianSpec,
    angles: &[SiteAngles],
    bra: &[i8],
    ket: &[i8],
) -> Result<C64> {
    element_oracle_two_sided(spec, angles, angles, bra, ket)
}

/// ⟨S| U_bra G U_ket† |S′⟩ with independent bra/ket bases.
pub fn element_oracle_two_sided(
    spec: &GaussianSpec,
    bra_angles: &[SiteAngles],
    ket_angles: &[SiteAngles],
    bra: &[i8],
    ket: &[i8],
) -> Result<C64> {
    let l = spec.sites();
    let g = build_gaussian(spec)?;
    let ub = rotation(bra_angles, l)?;
    let uk = rotation(ket_angles, l)?;
    let rotated = ub
        .matrix
        .matmul(&g.matrix)
        .matmul(&uk.matrix.conj_transpose());
    Ok(rotated[(fock_index_spins(bra), fock_index_spins(ket))])
}

/// Correlation matrix G_jk = tr[ρ (c†_j − c_j)(c†_k + c_k)] of the
/// normalized mixed state ρ = G/tr G.
pub fn correlation_oracle(spec: &GaussianSpec) -> Result<CorrelationMatrix> {
    let l = spec.sites();
    let dense = build_gaussian(spec)?;
    let trace = dense.matrix.trace();
    if trace.norm() == 0.0 {
        return Err(Error::Singular);
    }
    let rho = dense.matrix.scale(ONE / trace);
    let cs = jw_operators(l)?;
    let cds: Vec<ComplexMatrix> = cs.iter().map(ComplexMatrix::conj_transpose).collect();
    let g = ComplexMatrix::from_fn(l, l, |j, k| {
        let left = &cds[j] - &cs[j];
        let right = &cds[k] + &cs[k];
        rho.matmul(&left.matmul(&right)).trace()
    });
    CorrelationMatrix::new(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::GaussianKind;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
        &a.matmul(b) + &b.matmul(a)
    }

    #[test]
    fn jw_l1_matrix() {
        let cs = jw_operators(1).unwrap();
        // c = [[0, 1], [0, 0]] in the ordered (|0>, |1>) basis
        assert_eq!(cs[0][(0, 1)], ONE);
        assert_eq!(cs[0][(0, 0)], ZERO);
        assert_eq!(cs[0][(1, 0)], ZERO);
        assert_eq!(cs[0][(1, 1)], ZERO);
    }

    #[test]
    fn car_algebra_exact() {
        for l in [2usize, 3, 6] {
            let cs = jw_operators(l).unwrap();
            let dim = 1 << l;
            for i in 0..l {
                for j in 0..l {
                    let cc = anticommutator(&cs[i], &cs[j]);
                    assert_eq!(cc.max_abs(), 0.0, "{{c_i, c_j}} must vanish exactly");
                    let ccd = anticommutator(&cs[i], &cs[j].conj_transpose());
                    let expect = if i == j {
                        ComplexMatrix::identity(dim)
                    } else {
                        ComplexMatrix::zeros(dim, dim)
                    };
                    assert_eq!(ccd.max_abs_diff(&expect), 0.0, "CAR is exact in integers");
                }
            }
        }
    }

    #[test]
    fn guards_enforced() {
        assert!(matches!(jw_operators(11), Err(Error::Guard { .. })));
        let mut rng = StdRng::seed_from_u64(0);
        let spec = GaussianSpec::random(1, GaussianKind::Generic, &mut rng);
        drop(spec);
    }

    #[test]
    fn zero_spec_builds_identity() {
        let spec = GaussianSpec::new(GaussianKind::Generic, ComplexMatrix::zeros(4, 4)).unwrap();
        let g = build_gaussian(&spec).unwrap();
        assert!(g.matrix.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-14);
    }

    #[test]
    fn particle_conserving_diagonal_dense() {
        let a = c64(0.8, 0.0);
        let spec = GaussianSpec::particle_conserving(ComplexMatrix::diag(&[a])).unwrap();
        let g = build_gaussian(&spec).unwrap();
        assert!((g.matrix[(0, 0)] - ONE).norm() < 1e-13);
        assert!((g.matrix[(1, 1)] - a.exp()).norm() < 1e-13);
    }

    #[test]
    fn rotation_convention() {
        // U(0,0,0) = diag(1, -1) in (up, down) ordering
        let u = rotation(&[SiteAngles::Z], 1).unwrap();
        assert!((u.matrix[(1, 1)] - ONE).norm() < 1e-15); // up stays up
        assert!((u.matrix[(0, 0)] + ONE).norm() < 1e-15); // down picks up a sign
                                                          // Hadamard-like at theta = pi/2
        let u = rotation(&[SiteAngles::x()], 1).unwrap();
        let r = 0.5f64.sqrt();
        assert!((u.matrix[(1, 1)] - c64(r, 0.0)).norm() < 1e-15);
        assert!((u.matrix[(1, 0)] - c64(r, 0.0)).norm() < 1e-15);
        assert!((u.matrix[(0, 1)] - c64(r, 0.0)).norm() < 1e-15);
        assert!((u.matrix[(0, 0)] + c64(r, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn rotation_is_unitary() {
        let mut rng = StdRng::seed_from_u64(8);
        use rand::Rng;
        let l = 3;
        let angles: Vec<SiteAngles> = (0..l)
            .map(|_| SiteAngles {
                phi: rng.gen_range(-3.0..3.0),
                theta: rng.gen_range(-3.0..3.0),
                alpha: rng.gen_range(-3.0..3.0),
            })
            .collect();
        let u = rotation(&angles, l).unwrap();
        let prod = u.matrix.matmul(&u.matrix.conj_transpose());
        assert!(prod.max_abs_diff(&ComplexMatrix::identity(1 << l)) < 1e-14);
    }

    #[test]
    fn oracle_identity_is_kronecker_delta() {
        let spec = GaussianSpec::new(GaussianKind::Generic, ComplexMatrix::zeros(4, 4)).unwrap();
        let angles = vec![SiteAngles::x(), SiteAngles::y()];
        for b in 0..4usize {
            for k in 0..4usize {
                let bra: Vec<i8> = (0..2)
                    .map(|i| if (b >> i) & 1 == 1 { 1 } else { -1 })
                    .collect();
                let ket: Vec<i8> = (0..2)
                    .map(|i| if (k >> i) & 1 == 1 { 1 } else { -1 })
                    .collect();
                let v = element_oracle(&spec, &angles, &bra, &ket).unwrap();
                let expect = if b == k { ONE } else { ZERO };
                assert!((v - expect).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn x_basis_table_for_single_mode_thermal() {
        // L=1 particle-conserving diag(a): x-basis table has entries (1±e^a)/2
        let a = 0.9f64;
        let spec = GaussianSpec::particle_conserving(ComplexMatrix::diag(&[c64(a, 0.0)])).unwrap();
        let x = vec![SiteAngles::x()];
        let ea = a.exp();
        let pp = element_oracle(&spec, &x, &[1], &[1]).unwrap();
        let pm = element_oracle(&spec, &x, &[1], &[-1]).unwrap();
        let mp = element_oracle(&spec, &x, &[-1], &[1]).unwrap();
        let mm = element_oracle(&spec, &x, &[-1], &[-1]).unwrap();
        assert!((pp - c64((1.0 + ea) / 2.0, 0.0)).norm() < 1e-12);
        assert!((pm - c64((ea - 1.0) / 2.0, 0.0)).norm() < 1e-12);
        assert!((mp - c64((ea - 1.0) / 2.0, 0.0)).norm() < 1e-12);
        assert!((mm - c64((1.0 + ea) / 2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn trace_equals_normalization() {
        let mut rng = StdRng::seed_from_u64(12);
        for l in 1..=4 {
            let spec = GaussianSpec::random(l, GaussianKind::MixedHermitian, &mut rng);
            let dense = build_gaussian(&spec).unwrap();
            let z = spec.normalization().unwrap();
            let tr = dense.matrix.trace();
            assert!((z - tr).norm() < 1e-9 * tr.norm().max(1.0), "L={l}");
        }
        // particle-conserving L=1 diag(a): trace = 1 + e^a
        let spec =
            GaussianSpec::particle_conserving(ComplexMatrix::diag(&[c64(0.7, 0.0)])).unwrap();
        let z = spec.normalization().unwrap();
        assert!((z - c64(1.0 + 0.7f64.exp(), 0.0)).norm() < 1e-11);
    }

    #[test]
    fn infinite_temperature_correlations_vanish() {
        let spec =
            GaussianSpec::new(GaussianKind::MixedHermitian, ComplexMatrix::zeros(4, 4)).unwrap();
        let corr = correlation_oracle(&spec).unwrap();
        assert!(corr.matrix().max_abs() < 1e-13);
    }

    #[test]
    fn single_mode_thermal_correlation() {
        // G_11 = tanh(a/2) for the normalized single-mode state with M = diag(a, -a)
        let a = 1.3f64;
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 0)] = c64(a, 0.0);
        m[(1, 1)] = c64(-a, 0.0);
        let spec = GaussianSpec::new(GaussianKind::MixedHermitian, m).unwrap();
        let corr = correlation_oracle(&spec).unwrap();
        assert!((corr.matrix()[(0, 0)] - c64((a / 2.0).tanh(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn hermitian_spec_dense_is_hermitian() {
        let mut rng = StdRng::seed_from_u64(30);
        let spec = GaussianSpec::random(3, GaussianKind::MixedHermitian, &mut rng);
        let dense = build_gaussian(&spec).unwrap();
        let dev = dense.matrix.max_abs_diff(&dense.matrix.conj_transpose());
        assert!(dev < 1e-10 * dense.matrix.max_abs().max(1.0));
    }
}
