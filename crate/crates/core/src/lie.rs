//! Lie-algebraic self-verification: commutator closure of span{Σ, Σ′} to
//! so(2L), the block-diagonalizing orthogonal frame with its cotangent
//! spectrum, the Cartan centralizer, simple-root overlaps with their closed
//! forms, and the explicit L = 2 commutator table.

use crate::error::{Error, Result};
use crate::matrix::{c64, commutator, ComplexMatrix, C64};
use crate::signs::SignMatrix;
use std::f64::consts::PI;

/// Relative rank threshold for the closure iteration.
pub const RANK_TOL: f64 = 1e-9;

/// Elementary so(n) generator (X_{ij})_{ts} = δ_{it}δ_{js} − δ_{is}δ_{jt},
/// 1-based indices.
pub fn so_generator(n: usize, i: usize, j: usize) -> ComplexMatrix {
    assert!(i >= 1 && j >= 1 && i <= n && j <= n && i != j);
    let mut x = ComplexMatrix::zeros(n, n);
    x[(i - 1, j - 1)] = c64(1.0, 0.0);
    x[(j - 1, i - 1)] = c64(-1.0, 0.0);
    x
}

/// All L(2L−1) generators X_{ij}, i < j, of so(2L).
#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    pub l: usize,
    pub generators: Vec<ComplexMatrix>,
}

impl GeneratorBasis {
    pub fn new(l: usize) -> Self {
        let n = 2 * l;
        let mut generators = Vec::with_capacity(l * (2 * l - 1));
        for i in 1..=n {
            for j in (i + 1)..=n {
                generators.push(so_generator(n, i, j));
            }
        }
        Self { l, generators }
    }
}

fn upper_vec(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.rows();
    let mut v = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            v.push(m[(i, j)].re);
        }
    }
    v
}

/// Dimension of the smallest commutator-closed linear span containing the
/// (real antisymmetric) seeds. Maintains an orthonormal basis of vectorized
/// upper triangles and appends commutators of basis pairs until a fixed point.
pub fn closure_dimension(seeds: &[ComplexMatrix]) -> Result<usize> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut mats: Vec<ComplexMatrix> = Vec::new();
    for s in seeds {
        s.require_antisymmetric(1e-12)?;
        let imag = s.data().iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        if imag > 1e-12 {
            return Err(Error::Validation {
                reason: "closure seeds must be real antisymmetric".into(),
            });
        }
    }
    let add = |m: &ComplexMatrix, basis: &mut Vec<Vec<f64>>, mats: &mut Vec<ComplexMatrix>| {
        let mut v = upper_vec(m);
        let norm0 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm0 == 0.0 {
            return false;
        }
        for b in basis.iter() {
            let dot: f64 = b.iter().zip(&v).map(|(a, c)| a * c).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= dot * bi;
            }
        }
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > RANK_TOL * norm0.max(1.0) {
            for x in &mut v {
                *x /= norm;
            }
            basis.push(v);
            mats.push(m.clone());
            true
        } else {
            false
        }
    };
    for s in seeds {
        add(s, &mut basis, &mut mats);
    }
    loop {
        let mut grew = false;
        let snapshot = mats.len();
        for i in 0..snapshot {
            for j in (i + 1)..snapshot {
                let c = commutator(&mats[i], &mats[j])?;
                if add(&c, &mut basis, &mut mats) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    Ok(basis.len())
}

/// ω_k = −cot((2k−1)π / 4L), k = 1..L.
pub fn omega_spectrum(l: usize) -> Vec<f64> {
    (1..=l)
        .map(|k| -1.0 / (((2 * k - 1) as f64) * PI / (4.0 * l as f64)).tan())
        .collect()
}

/// Orthogonal frame g₀ with columns φ^{(1)}, ψ^{(1)}, …, φ^{(L)}, ψ^{(L)}.
#[derive(Debug, Clone)]
pub struct OrthogonalFrame {
    pub l: usize,
    pub g0: ComplexMatrix,
}

impl OrthogonalFrame {
    pub fn new(l: usize) -> Self {
        let n = 2 * l;
        let norm = (1.0 / l as f64).sqrt();
        let mut g0 = ComplexMatrix::zeros(n, n);
        for k in 1..=l {
            for j in 1..=n {
                let arg = ((j - 1) as f64) * ((2 * k - 1) as f64) * PI / (2.0 * l as f64);
                g0[(j - 1, 2 * k - 2)] = c64(norm * arg.sin(), 0.0);
                g0[(j - 1, 2 * k - 1)] = c64(norm * arg.cos(), 0.0);
            }
        }
        Self { l, g0 }
    }

    pub fn orthogonality_residual(&self) -> f64 {
        let n = 2 * self.l;
        self.g0
            .transpose()
            .matmul(&self.g0)
            .max_abs_diff(&ComplexMatrix::identity(n))
    }

    /// g = P·g₀ for a ±1 diagonal P.
    pub fn with_signs(&self, p: &[i8]) -> ComplexMatrix {
        let n = 2 * self.l;
        assert_eq!(p.len(), n);
        ComplexMatrix::from_fn(n, n, |i, j| c64(p[i] as f64, 0.0) * self.g0[(i, j)])
    }
}

/// Spectrum diagnostics of a p-form Σ: eigenvalues against {±iω_k} and the
/// conjugated matrix gᵀΣg against the direct sum of 2×2 ω-blocks.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub max_eigenvalue_dev: f64,
    pub max_block_dev: f64,
    pub all_distinct: bool,
    pub pass: bool,
}

pub fn spectrum_check(sigma: &SignMatrix, p: &[i8], l: usize) -> Result<SpectrumReport> {
    let n = 2 * l;
    if sigma.dim() != n {
        return Err(Error::BadLength {
            what: "sigma",
            expected: n,
            got: sigma.dim(),
        });
    }
    let s = sigma.to_complex();
    let omegas = omega_spectrum(l);
    let mut expected: Vec<C64> = omegas
        .iter()
        .flat_map(|&w| [c64(0.0, w), c64(0.0, -w)])
        .collect();
    let mut got = crate::eig::eigenvalues(&s)?;
    let key = |z: &C64| (z.im, z.re);
    expected.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
    got.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
    let max_eigenvalue_dev = expected
        .iter()
        .zip(&got)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let mut all_distinct = true;
    for i in 0..expected.len() {
        for j in (i + 1)..expected.len() {
            if (expected[i] - expected[j]).norm() < 1e-12 {
                all_distinct = false;
            }
        }
    }
    let frame = OrthogonalFrame::new(l);
    let g = frame.with_signs(p);
    let conj = g.transpose().matmul(&s).matmul(&g);
    let mut blocks = ComplexMatrix::zeros(n, n);
    for (k, &w) in omegas.iter().enumerate() {
        blocks[(2 * k, 2 * k + 1)] = c64(w, 0.0);
        blocks[(2 * k + 1, 2 * k)] = c64(-w, 0.0);
    }
    let max_block_dev = conj.max_abs_diff(&blocks);
    let pass = max_eigenvalue_dev <= 1e-10 && max_block_dev <= 1e-10 && all_distinct;
    Ok(SpectrumReport {
        max_eigenvalue_dev,
        max_block_dev,
        all_distinct,
        pass,
    })
}

/// Centralizer diagnostics of the block-diagonal Σ̃: commutes with the L
/// Cartan generators X_{2i−1,2i}, fails to commute with everything else.
#[derive(Debug, Clone)]
pub struct CentralizerReport {
    pub max_cartan_residual: f64,
    pub min_non_cartan_residual: f64,
    pub pass: bool,
}

pub fn centralizer_check(sigma_tilde: &ComplexMatrix, l: usize) -> Result<CentralizerReport> {
    let n = 2 * l;
    sigma_tilde.require_square()?;
    let mut max_cartan = 0.0f64;
    let mut min_other = f64::INFINITY;
    for i in 1..=n {
        for j in (i + 1)..=n {
            let x = so_generator(n, i, j);
            let c = commutator(sigma_tilde, &x)?;
            let norm = c.max_abs();
            let cartan = j == i + 1 && i % 2 == 1;
            if cartan {
                max_cartan = max_cartan.max(norm);
            } else {
                min_other = min_other.min(norm);
            }
        }
    }
    Ok(CentralizerReport {
        max_cartan_residual: max_cartan,
        min_non_cartan_residual: min_other,
        pass: max_cartan <= 1e-12 && min_other > 1e-6,
    })
}

/// Sign function (−1)^{f(i,j)} with the parity split on L.
pub fn sgn(i: usize, j: usize, l: usize) -> f64 {
    let f = if l % 2 == 1 {
        if (i <= l && j <= l) || (i <= l && j > l) {
            i + j + 1
        } else {
            i + j + 2
        }
    } else if i <= l && j <= l {
        i + j + 1
    } else {
        i + j + 2
    };
    if f % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Antisymmetric sign matrix S_{ij} built from `sgn`.
pub fn s_matrix(l: usize) -> ComplexMatrix {
    let n = 2 * l;
    ComplexMatrix::from_fn(n, n, |i0, j0| {
        let (i, j) = (i0 + 1, j0 + 1);
        if i < j {
            c64(sgn(i, j, l), 0.0)
        } else if i > j {
            c64(-sgn(j, i, l), 0.0)
        } else {
            c64(0.0, 0.0)
        }
    })
}

/// One simple-root overlap: the Hilbert–Schmidt projection of Σ̃′ = g₀ᵀ S g₀
/// onto E_{α_l}, together with the closed-form value.
#[derive(Debug, Clone)]
pub struct Overlap {
    pub direct: C64,
    pub closed_form: C64,
}

/// All L simple-root overlaps ⟨E_{α_l}, Σ̃′⟩. Uses ⟨X_{a,b}, M⟩ = M_{ab}.
pub fn root_overlaps(l: usize) -> Result<Vec<Overlap>> {
    if l < 2 {
        return Err(Error::Guard {
            what: "root overlaps L",
            got: l,
            limit: usize::MAX,
        });
    }
    let frame = OrthogonalFrame::new(l);
    let st = frame.g0.transpose().matmul(&s_matrix(l)).matmul(&frame.g0);
    let half = c64(0.5, 0.0);
    let half_i = c64(0.0, 0.5);
    let mut out = Vec::with_capacity(l);
    for root in 1..l {
        let a = 2 * root - 2; // 0-based row/col of index 2l-1
        let direct = half * st[(a, a + 2)] + half * st[(a + 1, a + 3)] + half_i * st[(a, a + 3)]
            - half_i * st[(a + 1, a + 2)];
        let closed_form = closed_form_overlap(root, l);
        out.push(Overlap {
            direct,
            closed_form,
        });
    }
    let n = 2 * l;
    let direct_last = -half * st[(n - 4, n - 2)]
        + half * st[(n - 3, n - 1)]
        + half_i * st[(n - 4, n - 1)]
        + half_i * st[(n - 3, n - 2)];
    out.push(Overlap {
        direct: direct_last,
        closed_form: closed_form_overlap(l, l),
    });
    Ok(out)
}

fn closed_form_overlap(root: usize, l: usize) -> C64 {
    let lf = l as f64;
    if root < l {
        let r = root as f64;
        let num = -(c64(0.0, -(r - 1.0) * PI / lf).exp())
            * (c64(0.0, 2.0 * r * PI / lf).exp() - c64(1.0, 0.0));
        let den = (c64(0.0, PI / lf).exp() - c64(1.0, 0.0))
            * c64(lf * ((PI / (2.0 * lf)).cos() + (r * PI / lf).cos()), 0.0);
        num / den
    } else {
        let minus_one_l = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
        let csc2 = 1.0 / (PI / (4.0 * lf)).sin().powi(2);
        c64(0.0, minus_one_l) * c64(0.0, PI / lf).exp() * c64(csc2, 0.0)
            / c64(2.0 * lf * (2.0 * (PI / (2.0 * lf)).cos() + 1.0), 0.0)
    }
}

/// Outcome of checking the explicit L = 2 closed commutator table.
#[derive(Debug, Clone)]
pub struct TableReport {
    pub max_dev: f64,
    pub pass: bool,
}

/// Verifies the 15-relation closed algebra of {Σ, Σ′, Σ₃..Σ₆} at L = 2 on
/// the given pair. The table is invariant under diagonal conjugation and the
/// parity fixups, so it holds for every pair in the census.
pub fn l2_commutator_table_check(
    sigma: &SignMatrix,
    sigma_prime: &SignMatrix,
) -> Result<TableReport> {
    if sigma.dim() != 4 || sigma_prime.dim() != 4 {
        return Err(Error::BadLength {
            what: "L=2 sign matrix",
            expected: 4,
            got: sigma.dim(),
        });
    }
    let s = sigma.to_complex();
    let sp = sigma_prime.to_complex();
    let s3 = commutator(&s, &sp)?;
    let s4 = commutator(&s, &s3)?;
    let s5 = commutator(&sp, &s3)?;
    let s6 = commutator(&s, &s4)?;
    let lin = |coeffs: &[(f64, &ComplexMatrix)]| {
        let mut acc = ComplexMatrix::zeros(4, 4);
        for (c, m) in coeffs {
            acc.add_assign(&m.scale(c64(*c, 0.0)));
        }
        acc
    };
    let zero = ComplexMatrix::zeros(4, 4);
    let relations: Vec<(ComplexMatrix, ComplexMatrix)> = vec![
        (commutator(&sp, &s4)?, lin(&[(-12.0, &s3), (-2.0, &s6)])),
        (commutator(&s3, &s4)?, lin(&[(16.0, &s)])),
        (commutator(&s, &s5)?, lin(&[(-12.0, &s3), (-2.0, &s6)])),
        (commutator(&sp, &s5)?, lin(&[(-12.0, &s3), (-1.0, &s6)])),
        (commutator(&s3, &s5)?, lin(&[(16.0, &sp)])),
        (commutator(&s4, &s5)?, lin(&[(16.0, &s3)])),
        (
            commutator(&s, &s6)?,
            lin(&[
                (-32.0 / 5.0, &s),
                (-16.0 / 5.0, &sp),
                (-36.0 / 5.0, &s4),
                (12.0 / 5.0, &s5),
            ]),
        ),
        (
            commutator(&sp, &s6)?,
            lin(&[
                (-16.0 / 5.0, &s),
                (32.0 / 5.0, &sp),
                (12.0 / 5.0, &s4),
                (-24.0 / 5.0, &s5),
            ]),
        ),
        (commutator(&s3, &s6)?, zero),
        (
            commutator(&s4, &s6)?,
            lin(&[
                (576.0 / 5.0, &s),
                (-192.0 / 5.0, &sp),
                (-32.0 / 5.0, &s4),
                (-16.0 / 5.0, &s5),
            ]),
        ),
        (
            commutator(&s5, &s6)?,
            lin(&[
                (-192.0 / 5.0, &s),
                (384.0 / 5.0, &sp),
                (-16.0 / 5.0, &s4),
                (32.0 / 5.0, &s5),
            ]),
        ),
    ];
    let max_dev = relations
        .iter()
        .map(|(lhs, rhs)| lhs.max_abs_diff(rhs))
        .fold(0.0, f64::max);
    Ok(TableReport {
        max_dev,
        pass: max_dev <= 1e-10,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signs::{canonical_pair, enumerate_pairs, from_p_vector};

    #[test]
    fn closure_of_canonical_pairs() {
        for (l, expect) in [(2usize, 6usize), (3, 15)] {
            let pair = canonical_pair(l);
            let dim = closure_dimension(&[pair.sigma.to_complex(), pair.sigma_prime.to_complex()])
                .unwrap();
            assert_eq!(dim, expect, "L={l}");
        }
    }

    #[test]
    fn generator_basis_counts_and_structure() {
        for l in [1usize, 2, 4] {
            let basis = GeneratorBasis::new(l);
            assert_eq!(basis.generators.len(), l * (2 * l - 1));
            for x in &basis.generators {
                assert_eq!(x.antisymmetry_violation(), 0.0);
                assert!(x.data().iter().all(|z| z.im == 0.0 && z.re.abs() <= 1.0));
            }
            // the full generator set closes on itself
            assert_eq!(
                closure_dimension(&basis.generators).unwrap(),
                l * (2 * l - 1)
            );
        }
    }

    #[test]
    fn single_generator_is_abelian() {
        let x = so_generator(4, 1, 2);
        assert_eq!(closure_dimension(&[x]).unwrap(), 1);
    }

    #[test]
    fn disjoint_generators_commute() {
        let c = commutator(&so_generator(4, 1, 2), &so_generator(4, 3, 4)).unwrap();
        assert_eq!(c.max_abs(), 0.0);
    }

    #[test]
    fn omega_values() {
        // L=1: omega_1 = -cot(pi/4) = -1
        let w = omega_spectrum(1);
        assert!((w[0] + 1.0).abs() < 1e-15);
        // L=2: -cot(pi/8), -cot(3pi/8)
        let w = omega_spectrum(2);
        assert!((w[0] + 2.414213562373095).abs() < 1e-12);
        assert!((w[1] + 0.414213562373095).abs() < 1e-12);
    }

    #[test]
    fn frame_orthogonality_up_to_l16() {
        for l in [1usize, 2, 3, 5, 8, 16] {
            let frame = OrthogonalFrame::new(l);
            assert!(frame.orthogonality_residual() <= 1e-12, "L={l}");
        }
    }

    #[test]
    fn spectrum_of_p_form_sigma() {
        for l in [1usize, 2, 5] {
            // build an arbitrary valid p-vector for this L
            let mut p = vec![1i8; 2 * l];
            if crate::signs::required_matching_sign(l) == -1 {
                p[2 * l - 1] = -1;
            }
            let pair = from_p_vector(&p, l).unwrap();
            let report = spectrum_check(&pair.sigma, &p, l).unwrap();
            assert!(report.pass, "L={l}: {report:?}");
        }
    }

    #[test]
    fn centralizer_of_block_form() {
        let l = 2;
        let omegas = omega_spectrum(l);
        let mut st = ComplexMatrix::zeros(4, 4);
        for (k, &w) in omegas.iter().enumerate() {
            st[(2 * k, 2 * k + 1)] = c64(w, 0.0);
            st[(2 * k + 1, 2 * k)] = c64(-w, 0.0);
        }
        let report = centralizer_check(&st, l).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn overlaps_match_closed_forms() {
        for l in 2..=8 {
            for o in root_overlaps(l).unwrap() {
                assert!((o.direct - o.closed_form).norm() <= 1e-10, "L={l}: {o:?}");
                assert!(o.direct.norm() > 1e-8);
            }
        }
    }

    #[test]
    fn hilbert_schmidt_projection_identity() {
        // <X_{a,b}, M> = M_{ab} on a random antisymmetric M
        let m = ComplexMatrix::from_fn(6, 6, |i, j| {
            if i < j {
                c64((i * 7 + j) as f64 * 0.1, (j as f64) * 0.05)
            } else if i > j {
                -c64((j * 7 + i) as f64 * 0.1, (i as f64) * 0.05)
            } else {
                c64(0.0, 0.0)
            }
        });
        for (a, b) in [(1usize, 2usize), (2, 5), (4, 6)] {
            let x = so_generator(6, a, b);
            // sum over i<j of conj(X_ij) M_ij
            let mut acc = c64(0.0, 0.0);
            for i in 0..6 {
                for j in (i + 1)..6 {
                    acc += x[(i, j)].conj() * m[(i, j)];
                }
            }
            assert_eq!(acc, m[(a - 1, b - 1)]);
        }
    }

    #[test]
    fn l2_table_holds_for_census() {
        for pair in enumerate_pairs(2).unwrap() {
            let report = l2_commutator_table_check(&pair.sigma, &pair.sigma_prime).unwrap();
            assert!(report.pass, "dev {}", report.max_dev);
        }
    }

    #[test]
    fn so4_expansion_is_canonical_pair() {
        let mut s = ComplexMatrix::zeros(4, 4);
        for (coef, i, j) in [
            (1.0, 1, 2),
            (1.0, 1, 3),
            (1.0, 1, 4),
            (-1.0, 2, 3),
            (-1.0, 2, 4),
            (-1.0, 3, 4),
        ] {
            s.add_assign(&so_generator(4, i, j).scale(c64(coef, 0.0)));
        }
        let mut sp = ComplexMatrix::zeros(4, 4);
        for (coef, i, j) in [
            (1.0, 1, 2),
            (1.0, 1, 3),
            (-1.0, 1, 4),
            (1.0, 2, 3),
            (-1.0, 2, 4),
            (1.0, 3, 4),
        ] {
            sp.add_assign(&so_generator(4, i, j).scale(c64(coef, 0.0)));
        }
        let pair = canonical_pair(2);
        assert_eq!(s.max_abs_diff(&pair.sigma.to_complex()), 0.0);
        assert_eq!(sp.max_abs_diff(&pair.sigma_prime.to_complex()), 0.0);
    }
}
