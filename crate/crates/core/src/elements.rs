//! Matrix elements of Gaussian operators: computational basis (Pfaffian of a
//! kernel submatrix), particle-conserving determinant route, σ^z and general
//! Pauli kernels built from a sign pair, the generating function, and
//! diagonal probabilities of real mixed states.

use crate::error::{Error, Result};
use crate::expm::matrix_exp;
use crate::gaussian::{BlockDecomposition, CorrelationMatrix};
use crate::matrix::{c64, ComplexMatrix, C64, ONE, ZERO};
use crate::pfaffian::{pfaffian, ANTISYMMETRY_TOL};
use crate::signs::SignPair;

/// Occupied (bra: J1, ket: I1) and complementary mode sets, 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccupationSets {
    pub l: usize,
    pub i1: Vec<usize>,
    pub j1: Vec<usize>,
}

impl OccupationSets {
    pub fn new(l: usize, j1: Vec<usize>, i1: Vec<usize>) -> Result<Self> {
        for set in [&j1, &i1] {
            for (pos, w) in set.windows(2).enumerate() {
                if w[0] >= w[1] {
                    return Err(Error::IndexNotAscending { position: pos + 1 });
                }
            }
            if let Some(&last) = set.last() {
                if last > l || last == 0 {
                    return Err(Error::IndexOutOfRange {
                        index: last,
                        dim: l,
                    });
                }
            }
        }
        Ok(Self { l, i1, j1 })
    }

    /// Spin dictionary: up = occupied.
    pub fn from_spins(l: usize, bra: &[i8], ket: &[i8]) -> Result<Self> {
        if bra.len() != l {
            return Err(Error::BadLength {
                what: "bra spins",
                expected: l,
                got: bra.len(),
            });
        }
        if ket.len() != l {
            return Err(Error::BadLength {
                what: "ket spins",
                expected: l,
                got: ket.len(),
            });
        }
        let j1 = (1..=l).filter(|&s| bra[s - 1] == 1).collect();
        let i1 = (1..=l).filter(|&s| ket[s - 1] == 1).collect();
        Self::new(l, j1, i1)
    }

    pub fn i0(&self) -> Vec<usize> {
        (1..=self.l).filter(|i| !self.i1.contains(i)).collect()
    }

    pub fn j0(&self) -> Vec<usize> {
        (1..=self.l).filter(|j| !self.j1.contains(j)).collect()
    }

    pub fn parity_even(&self) -> bool {
        (self.i1.len() + self.j1.len()).is_multiple_of(2)
    }
}

/// Per-site local basis angles (φ, θ, α) of the rotation matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteAngles {
    pub phi: f64,
    pub theta: f64,
    pub alpha: f64,
}

impl SiteAngles {
    pub const Z: SiteAngles = SiteAngles {
        phi: 0.0,
        theta: 0.0,
        alpha: 0.0,
    };

    pub fn x() -> SiteAngles {
        SiteAngles {
            phi: 0.0,
            theta: std::f64::consts::FRAC_PI_2,
            alpha: 0.0,
        }
    }

    pub fn y() -> SiteAngles {
        SiteAngles {
            phi: std::f64::consts::FRAC_PI_2,
            theta: std::f64::consts::FRAC_PI_2,
            alpha: 0.0,
        }
    }

    /// x/y/z shorthand used by basis files and the homogeneous-basis kernels.
    pub fn from_label(label: &str) -> Result<SiteAngles> {
        match label {
            "z" => Ok(SiteAngles::Z),
            "x" => Ok(SiteAngles::x()),
            "y" => Ok(SiteAngles::y()),
            other => Err(Error::BadBasisLabel(other.to_string())),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.phi == 0.0 && self.theta == 0.0 && self.alpha == 0.0
    }
}

/// Bra/ket spin assignments (±1 per site, site 1 first) plus per-site basis
/// angles shared by both sides.
#[derive(Debug, Clone)]
pub struct SpinConfiguration {
    pub l: usize,
    pub bra: Vec<i8>,
    pub ket: Vec<i8>,
    pub angles: Vec<SiteAngles>,
}

impl SpinConfiguration {
    pub fn new(l: usize, bra: Vec<i8>, ket: Vec<i8>, angles: Vec<SiteAngles>) -> Result<Self> {
        if bra.len() != l || ket.len() != l {
            return Err(Error::BadLength {
                what: "spin vector",
                expected: l,
                got: bra.len().max(ket.len()),
            });
        }
        if angles.len() != l {
            return Err(Error::BadLength {
                what: "angles",
                expected: l,
                got: angles.len(),
            });
        }
        if bra.iter().chain(ket.iter()).any(|&s| s != 1 && s != -1) {
            return Err(Error::Validation {
                reason: "spins must be +1 or -1".into(),
            });
        }
        Ok(Self {
            l,
            bra,
            ket,
            angles,
        })
    }

    pub fn sigma_z(l: usize, bra: Vec<i8>, ket: Vec<i8>) -> Result<Self> {
        Self::new(l, bra, ket, vec![SiteAngles::Z; l])
    }

    pub fn all_angles_zero(&self) -> bool {
        self.angles.iter().all(SiteAngles::is_zero)
    }

    /// Total number of up spins; elements with odd parity vanish identically.
    pub fn parity_even(&self) -> bool {
        let ups = self
            .bra
            .iter()
            .chain(self.ket.iter())
            .filter(|&&s| s == 1)
            .count();
        ups % 2 == 0
    }
}

/// 2L×2L antisymmetric Pfaffian kernel for one matrix element.
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    pub k: ComplexMatrix,
}

impl KernelMatrix {
    pub fn new(k: ComplexMatrix) -> Result<Self> {
        k.require_antisymmetric(ANTISYMMETRY_TOL)?;
        Ok(Self { k })
    }
}

/// ⟨J|G|I⟩ in the computational basis: sign × prefactor × pf(𝒜 restricted to
/// J1 ∪ (L + I1)). Odd-parity elements are returned as exact zero without a
/// Pfaffian evaluation.
pub fn element_computational(bd: &BlockDecomposition, occ: &OccupationSets) -> Result<C64> {
    if !occ.parity_even() {
        return Ok(ZERO);
    }
    let l = bd.l;
    let mut keep: Vec<usize> = occ.j1.iter().map(|&j| j - 1).collect();
    keep.extend(occ.i1.iter().map(|&i| l + i - 1));
    let sub = bd.kernel_a.submatrix_keep(&keep)?;
    let pf = pfaffian(&sub, ANTISYMMETRY_TOL)?;
    let ni = occ.i1.len();
    let nj = occ.j1.len();
    let exponent = (ni * (ni + 2 * nj + 1)) / 2;
    let sign = if exponent.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    Ok(c64(sign, 0.0) * bd.element_prefactor() * pf)
}

/// Particle-conserving operator exp[c†Ac] with e^A precomputed for repeated
/// element extraction.
#[derive(Debug, Clone)]
pub struct ParticleConservingOperator {
    pub l: usize,
    pub exp_a: ComplexMatrix,
}

impl ParticleConservingOperator {
    pub fn new(a_small: &ComplexMatrix) -> Result<Self> {
        let l = a_small.require_square()?;
        Ok(Self {
            l,
            exp_a: matrix_exp(a_small)?,
        })
    }

    /// det[(e^A)_{J0,I0}]: delete rows J0 and columns I0; zero whenever
    /// |I0| ≠ |J0|.
    pub fn element(&self, occ: &OccupationSets) -> Result<C64> {
        if occ.i0().len() != occ.j0().len() {
            return Ok(ZERO);
        }
        let rows: Vec<usize> = occ.j1.iter().map(|&j| j - 1).collect();
        let cols: Vec<usize> = occ.i1.iter().map(|&i| i - 1).collect();
        let k = rows.len();
        let minor = ComplexMatrix::from_fn(k, k, |r, c| self.exp_a[(rows[r], cols[c])]);
        minor.det()
    }
}

/// One-shot determinant route; recomputes e^A on every call.
pub fn element_particle_conserving(a_small: &ComplexMatrix, occ: &OccupationSets) -> Result<C64> {
    ParticleConservingOperator::new(a_small)?.element(occ)
}

fn up(s: i8) -> bool {
    s == 1
}

/// σ^z-basis kernel: up/up entries carry Σ∘𝒜, down/down
/// entries carry Σ′, mixed entries vanish.
pub fn kernel_sigma_z(
    bd: &BlockDecomposition,
    pair: &SignPair,
    bra: &[i8],
    ket: &[i8],
) -> ComplexMatrix {
    let n = 2 * bd.l;
    let spin = |m: usize| if m < bd.l { bra[m] } else { ket[m - bd.l] };
    let mut k = ComplexMatrix::zeros(n, n);
    for m in 0..n {
        for q in (m + 1)..n {
            let v = if up(spin(m)) && up(spin(q)) {
                c64(pair.sigma.get(m, q) as f64, 0.0) * bd.kernel_a[(m, q)]
            } else if !up(spin(m)) && !up(spin(q)) {
                c64(pair.sigma_prime.get(m, q) as f64, 0.0)
            } else {
                ZERO
            };
            k[(m, q)] = v;
            k[(q, m)] = -v;
        }
    }
    k
}

/// ⟨S|G|S′⟩ in the σ^z basis: prefactor × pf(K^z). Requires zero angles.
pub fn element_sigma_z(
    bd: &BlockDecomposition,
    pair: &SignPair,
    cfg: &SpinConfiguration,
) -> Result<C64> {
    if !cfg.all_angles_zero() {
        return Err(Error::Validation {
            reason: "element_sigma_z requires all angles zero".into(),
        });
    }
    if !cfg.parity_even() {
        return Ok(ZERO);
    }
    let k = kernel_sigma_z(bd, pair, &cfg.bra, &cfg.ket);
    let pf = pfaffian(&k, ANTISYMMETRY_TOL)?;
    Ok(bd.element_prefactor() * pf)
}

/// Integer-exponent power for the (1±s̄)/2 ∈ {0,1} trigonometric weights;
/// 0^0 = 1 by convention.
#[inline]
fn pow01(base: f64, exponent: i8) -> f64 {
    if exponent == 0 {
        1.0
    } else {
        base
    }
}

/// General Pauli-basis kernel of the closed-form element expression: the
/// Σ∘𝒜 term carries e^{i(φ̄_m+φ̄_n)} with φ̄ = +φ on bra indices and −φ on
/// ket indices, and cos/sin weights with exact {0,1} exponents.
pub fn kernel_pauli(
    bd: &BlockDecomposition,
    pair: &SignPair,
    cfg: &SpinConfiguration,
) -> ComplexMatrix {
    let l = bd.l;
    let n = 2 * l;
    let spin = |m: usize| if m < l { cfg.bra[m] } else { cfg.ket[m - l] };
    // angle indices are cyclic: site index m mod L on both sides
    let site = |m: usize| if m < l { m } else { m - l };
    let phi_bar = |m: usize| {
        let phi = cfg.angles[site(m)].phi;
        if m < l {
            phi
        } else {
            -phi
        }
    };
    let mut k = ComplexMatrix::zeros(n, n);
    for m in 0..n {
        for q in (m + 1)..n {
            let (sm, sq) = (spin(m), spin(q));
            let (tm, tq) = (cfg.angles[site(m)].theta, cfg.angles[site(q)].theta);
            let (cm, sm_half) = ((tm / 2.0).cos(), (tm / 2.0).sin());
            let (cq, sq_half) = ((tq / 2.0).cos(), (tq / 2.0).sin());
            let em = (1 + sm) / 2; // 1 when spin up
            let eq = (1 + sq) / 2;
            let phase = c64(0.0, phi_bar(m) + phi_bar(q)).exp();
            let t1 = c64(pair.sigma.get(m, q) as f64, 0.0)
                * bd.kernel_a[(m, q)]
                * phase
                * pow01(cm, em)
                * pow01(cq, eq)
                * pow01(sm_half, 1 - em)
                * pow01(sq_half, 1 - eq);
            let flip = if sm == sq { 1.0 } else { -1.0 };
            let t2 = c64(flip * pair.sigma_prime.get(m, q) as f64, 0.0)
                * pow01(sm_half, em)
                * pow01(sq_half, eq)
                * pow01(cm, 1 - em)
                * pow01(cq, 1 - eq);
            k[(m, q)] = t1 + t2;
            k[(q, m)] = -k[(m, q)];
        }
    }
    k
}

/// ⟨S|G|S′⟩ in an arbitrary product Pauli basis (same basis on bra and ket):
/// α-phase × prefactor × pf(K^{(φ,θ,α)}). Reduces bit-for-bit to the σ^z
/// route when all angles vanish.
pub fn element_pauli(
    bd: &BlockDecomposition,
    pair: &SignPair,
    cfg: &SpinConfiguration,
) -> Result<C64> {
    if cfg.all_angles_zero() {
        return element_sigma_z(bd, pair, cfg);
    }
    let k = kernel_pauli(bd, pair, cfg);
    let pf = pfaffian(&k, ANTISYMMETRY_TOL)?;
    let mut alpha_sum = 0.0;
    for j in 0..bd.l {
        if cfg.bra[j] == -1 {
            alpha_sum += cfg.angles[j].alpha;
        }
        if cfg.ket[j] == -1 {
            alpha_sum -= cfg.angles[j].alpha;
        }
    }
    Ok(c64(0.0, -alpha_sum).exp() * bd.element_prefactor() * pf)
}

/// Up/down expansion weights of one kernel index read off the rotation
/// matrix entries; ket-side weights are conjugated.
fn side_weights(s: i8, ang: &SiteAngles, ket_side: bool) -> (C64, C64) {
    let c = (ang.theta / 2.0).cos();
    let s_half = (ang.theta / 2.0).sin();
    let sgn = if ket_side { 1.0 } else { -1.0 };
    if up(s) {
        (
            c64(c, 0.0),
            c64(s_half, 0.0) * c64(0.0, sgn * ang.phi).exp(),
        )
    } else {
        (
            c64(s_half, 0.0) * c64(0.0, sgn * ang.alpha).exp(),
            c64(-c, 0.0) * c64(0.0, sgn * (ang.alpha + ang.phi)).exp(),
        )
    }
}

/// Kernel for independent bra-side and ket-side bases:
/// K_mn = u_m u_n Σ_mn 𝒜_mn + d_m d_n Σ′_mn with the u/d weights taken from
/// the respective side's rotation matrix. Equal-angle inputs reproduce the
/// same elements as [`element_pauli`].
pub fn kernel_two_sided(
    bd: &BlockDecomposition,
    pair: &SignPair,
    bra: &[i8],
    ket: &[i8],
    bra_basis: &[SiteAngles],
    ket_basis: &[SiteAngles],
) -> ComplexMatrix {
    let l = bd.l;
    let n = 2 * l;
    let weights: Vec<(C64, C64)> = (0..n)
        .map(|m| {
            if m < l {
                side_weights(bra[m], &bra_basis[m], false)
            } else {
                side_weights(ket[m - l], &ket_basis[m - l], true)
            }
        })
        .collect();
    let mut k = ComplexMatrix::zeros(n, n);
    for m in 0..n {
        for q in (m + 1)..n {
            let (um, dm) = weights[m];
            let (uq, dq) = weights[q];
            let v = um * uq * c64(pair.sigma.get(m, q) as f64, 0.0) * bd.kernel_a[(m, q)]
                + dm * dq * c64(pair.sigma_prime.get(m, q) as f64, 0.0);
            k[(m, q)] = v;
            k[(q, m)] = -v;
        }
    }
    k
}

/// ⟨S|G|S′⟩ with the bra in one product basis and the ket in another.
pub fn element_pauli_two_sided(
    bd: &BlockDecomposition,
    pair: &SignPair,
    bra: &[i8],
    ket: &[i8],
    bra_basis: &[SiteAngles],
    ket_basis: &[SiteAngles],
) -> Result<C64> {
    let k = kernel_two_sided(bd, pair, bra, ket, bra_basis, ket_basis);
    let pf = pfaffian(&k, ANTISYMMETRY_TOL)?;
    Ok(bd.element_prefactor() * pf)
}

/// Homogeneous (μ, ν) specialization: bra side entirely in the μ basis, ket
/// side in ν. The kernel is the two-sided kernel at the x/y/z angle
/// dictionary, which is what the general formula specializes to under the
/// rotation convention used by the oracle.
pub fn kernel_special(
    mu: &str,
    nu: &str,
    bd: &BlockDecomposition,
    pair: &SignPair,
    bra: &[i8],
    ket: &[i8],
) -> Result<KernelMatrix> {
    let mu_angles = vec![SiteAngles::from_label(mu)?; bd.l];
    let nu_angles = vec![SiteAngles::from_label(nu)?; bd.l];
    KernelMatrix::new(kernel_two_sided(bd, pair, bra, ket, &mu_angles, &nu_angles))
}

/// Generating function g(λ) = prefactor × pf(Σ∘𝒜 + Σ′ λλᵀ-pattern); λ index
/// m ≤ L weights bra mode m, m > L weights ket mode m−L.
pub fn generating_function(
    bd: &BlockDecomposition,
    pair: &SignPair,
    lambda: &[C64],
) -> Result<C64> {
    let n = 2 * bd.l;
    if lambda.len() != n {
        return Err(Error::BadLength {
            what: "lambda",
            expected: n,
            got: lambda.len(),
        });
    }
    let mut k = ComplexMatrix::zeros(n, n);
    for m in 0..n {
        for q in (m + 1)..n {
            let v = c64(pair.sigma.get(m, q) as f64, 0.0) * bd.kernel_a[(m, q)]
                + c64(pair.sigma_prime.get(m, q) as f64, 0.0) * lambda[m] * lambda[q];
            k[(m, q)] = v;
            k[(q, m)] = -v;
        }
    }
    let pf = pfaffian(&k, ANTISYMMETRY_TOL)?;
    Ok(bd.element_prefactor() * pf)
}

/// Diagonal probability of a real Gaussian mixed state:
/// det[(I − I_𝓘 G)/2] with I_𝓘 = diag(−1 at occupied sites, +1 elsewhere).
/// `config` uses the spin dictionary (+1 = occupied).
pub fn diagonal_probability(corr: &CorrelationMatrix, config: &[i8]) -> Result<f64> {
    let l = corr.sites();
    if config.len() != l {
        return Err(Error::BadLength {
            what: "occupation config",
            expected: l,
            got: config.len(),
        });
    }
    let g = corr.matrix();
    let m = ComplexMatrix::from_fn(l, l, |i, j| {
        let sign = if config[i] == 1 { -1.0 } else { 1.0 };
        let id = if i == j { ONE } else { ZERO };
        (id - c64(sign, 0.0) * g[(i, j)]) * c64(0.5, 0.0)
    });
    Ok(m.det()?.re)
}
