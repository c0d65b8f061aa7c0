//! Gaussian operators defined by a 2L×2L matrix, their structural validation,
//! and the Balian–Brezin block decomposition that feeds every Pfaffian formula.

use crate::error::{Error, Result};
use crate::expm::matrix_exp;
use crate::logm::{matrix_log_principal, matrix_log_principal_with_tol};
use crate::matrix::{c64, ComplexMatrix, C64, ONE};
use rand::Rng;

/// Default tolerance for structural residuals (scaled by matrix magnitude).
pub const STRUCT_TOL: f64 = 1e-10;
/// T22 blocks beyond this 1-norm condition estimate are rejected.
pub const COND_LIMIT: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaussianKind {
    Generic,
    MixedHermitian,
    ParticleConserving,
}

impl GaussianKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            GaussianKind::Generic => "generic",
            GaussianKind::MixedHermitian => "mixed_hermitian",
            GaussianKind::ParticleConserving => "particle_conserving",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "generic" => Ok(GaussianKind::Generic),
            "mixed_hermitian" => Ok(GaussianKind::MixedHermitian),
            "particle_conserving" => Ok(GaussianKind::ParticleConserving),
            other => Err(Error::Validation {
                reason: format!("unknown kind {other:?}"),
            }),
        }
    }
}

/// A Gaussian operator exp[½ (c†,c) M (c;c†)], or exp[c†Ac] in the
/// particle-conserving case (which embeds as M = diag(A, −Aᵀ) together with a
/// scalar amplitude factor exp(tr A / 2)).
#[derive(Debug, Clone)]
pub struct GaussianSpec {
    l: usize,
    m: ComplexMatrix,
    kind: GaussianKind,
    a_small: Option<ComplexMatrix>,
}

/// Structural residuals from [`GaussianSpec::validate`].
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub xi_violation: f64,
    pub hermiticity_violation: Option<f64>,
    pub tol: f64,
    pub pass: bool,
}

impl GaussianSpec {
    pub fn new(kind: GaussianKind, m: ComplexMatrix) -> Result<Self> {
        let n = m.require_square()?;
        if n % 2 != 0 {
            return Err(Error::Validation {
                reason: format!("defining matrix must be 2Lx2L, got {n}x{n}"),
            });
        }
        if kind == GaussianKind::ParticleConserving {
            return Err(Error::Validation {
                reason: "particle-conserving specs are constructed from the LxL matrix A".into(),
            });
        }
        let spec = Self {
            l: n / 2,
            m,
            kind,
            a_small: None,
        };
        let report = spec.validate(STRUCT_TOL);
        if !report.pass {
            return Err(Error::Validation {
                reason: format!(
                    "constraint residuals exceed tolerance: xi {:.3e}, hermiticity {:?}",
                    report.xi_violation, report.hermiticity_violation
                ),
            });
        }
        Ok(spec)
    }

    /// exp[c† A c] for an arbitrary LxL matrix A.
    pub fn particle_conserving(a: ComplexMatrix) -> Result<Self> {
        let l = a.require_square()?;
        let mut m = ComplexMatrix::zeros(2 * l, 2 * l);
        m.set_block(0, 0, &a);
        m.set_block(l, l, &a.transpose().neg());
        Ok(Self {
            l,
            m,
            kind: GaussianKind::ParticleConserving,
            a_small: Some(a),
        })
    }

    pub fn sites(&self) -> usize {
        self.l
    }

    pub fn kind(&self) -> GaussianKind {
        self.kind
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn a_small(&self) -> Option<&ComplexMatrix> {
        self.a_small.as_ref()
    }

    /// Scalar relating the represented operator to the normalized
    /// Balian–Brezin form: exp(tr A / 2) for particle-conserving specs, 1
    /// otherwise.
    pub fn amplitude_scale(&self) -> C64 {
        match &self.a_small {
            Some(a) => (a.trace() / 2.0).exp(),
            None => ONE,
        }
    }

    /// Residuals of Ξℳ + (Ξℳ)ᵀ = 0 and, for mixed specs, ℳ† = ℳ.
    pub fn validate(&self, tol: f64) -> ValidationReport {
        let l = self.l;
        let xi = ComplexMatrix::from_fn(2 * l, 2 * l, |i, j| {
            if (i < l && j == i + l) || (i >= l && j == i - l) {
                ONE
            } else {
                c64(0.0, 0.0)
            }
        });
        let xm = xi.matmul(&self.m);
        let xi_violation = xm.antisymmetry_violation();
        let hermiticity_violation = if self.kind == GaussianKind::MixedHermitian {
            Some(self.m.max_abs_diff(&self.m.conj_transpose()))
        } else {
            None
        };
        let scaled = tol * self.m.max_abs().max(1.0);
        let pass = xi_violation <= scaled && hermiticity_violation.is_none_or(|h| h <= scaled);
        ValidationReport {
            xi_violation,
            hermiticity_violation,
            tol: scaled,
            pass,
        }
    }

    /// Balian–Brezin decomposition of e^ℳ with the antisymmetric kernel 𝒜.
    pub fn decompose(&self) -> Result<BlockDecomposition> {
        let l = self.l;
        let t = matrix_exp(&self.m)?;
        let t11 = t.block(0, 0, l, l);
        let t12 = t.block(0, l, l, l);
        let t21 = t.block(l, 0, l, l);
        let t22 = t.block(l, l, l, l);

        let cond = t22.cond_1().map_err(|_| Error::Singular)?;
        if cond > COND_LIMIT {
            return Err(Error::IllConditioned {
                cond,
                limit: COND_LIMIT,
            });
        }
        let t22_inv = t22.inverse()?;
        let x = t12.matmul(&t22_inv);
        let z = t22_inv.matmul(&t21);
        let y = matrix_log_principal(&t22.transpose())?.neg();
        let e_y = matrix_exp(&y)?;
        let e_yt = matrix_exp(&y.transpose())?;
        let prefactor = (-y.trace() / 2.0).exp();

        let mut kernel = ComplexMatrix::zeros(2 * l, 2 * l);
        kernel.set_block(0, 0, &x);
        kernel.set_block(0, l, &e_y);
        kernel.set_block(l, 0, &e_yt.neg());
        kernel.set_block(l, l, &z);

        Ok(BlockDecomposition {
            l,
            t11,
            t12,
            t21,
            t22,
            x,
            y,
            z,
            prefactor,
            scale: self.amplitude_scale(),
            kernel_a: kernel,
        })
    }

    /// det(I + e^ℳ)^{1/2} with the branch fixed through the principal log,
    /// times the particle-conserving amplitude scale where applicable. Equals
    /// the trace of the represented operator for Hermitian specs.
    pub fn normalization(&self) -> Result<C64> {
        let n = 2 * self.l;
        let e_m = matrix_exp(&self.m)?;
        let sum = &ComplexMatrix::identity(n) + &e_m;
        let log = matrix_log_principal_with_tol(&sum, 1e-12).map_err(|e| match e {
            Error::BranchCut { .. } | Error::Singular => Error::Singular,
            other => other,
        })?;
        Ok(self.amplitude_scale() * (log.trace() / 2.0).exp())
    }

    /// Random valid spec ℳ = Ξ·W with W antisymmetric; Hermitian kinds are
    /// additionally symmetrized, which stays on the constraint surface.
    pub fn random<R: Rng>(l: usize, kind: GaussianKind, rng: &mut R) -> Self {
        Self::random_scaled(l, kind, rng, 0.5, false)
    }

    /// Random real-valued mixed spec (used by correlation-matrix paths).
    pub fn random_real_mixed<R: Rng>(l: usize, rng: &mut R) -> Self {
        Self::random_scaled(l, GaussianKind::MixedHermitian, rng, 0.5, true)
    }

    fn random_scaled<R: Rng>(
        l: usize,
        kind: GaussianKind,
        rng: &mut R,
        scale: f64,
        real: bool,
    ) -> Self {
        loop {
            let n = 2 * l;
            let w0 = ComplexMatrix::from_fn(n, n, |_, _| {
                if real {
                    c64(rng.gen_range(-scale..scale), 0.0)
                } else {
                    c64(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
                }
            });
            let w = &w0 - &w0.transpose();
            let mut xi_w = ComplexMatrix::zeros(n, n);
            xi_w.set_block(0, 0, &w.block(l, 0, l, l));
            xi_w.set_block(0, l, &w.block(l, l, l, l));
            xi_w.set_block(l, 0, &w.block(0, 0, l, l));
            xi_w.set_block(l, l, &w.block(0, l, l, l));
            let m = match kind {
                GaussianKind::MixedHermitian => {
                    (&xi_w + &xi_w.conj_transpose()).scale(c64(0.5, 0.0))
                }
                _ => xi_w,
            };
            if let Ok(spec) = Self::new(
                if kind == GaussianKind::ParticleConserving {
                    GaussianKind::Generic
                } else {
                    kind
                },
                m,
            ) {
                // reject draws whose decomposition is borderline
                if spec.decompose().is_ok() {
                    return spec;
                }
            }
        }
    }

    /// Deterministic random spec from a bare seed.
    pub fn random_seeded(l: usize, kind: GaussianKind, seed: u64) -> Self {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        match kind {
            GaussianKind::ParticleConserving => Self::random_particle_conserving(l, &mut rng),
            _ => Self::random(l, kind, &mut rng),
        }
    }

    /// Random particle-conserving spec exp[c†Ac].
    pub fn random_particle_conserving<R: Rng>(l: usize, rng: &mut R) -> Self {
        loop {
            let a = ComplexMatrix::from_fn(l, l, |_, _| {
                c64(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5))
            });
            let spec = Self::particle_conserving(a).expect("square");
            if spec.decompose().is_ok() {
                return spec;
            }
        }
    }
}

/// T-blocks of e^ℳ, the X/Y/Z matrices, the scalar amplitude prefactor
/// exp(−tr Y / 2), and the antisymmetric kernel 𝒜 = [[X, e^Y], [−e^{Yᵀ}, Z]].
#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    pub l: usize,
    pub t11: ComplexMatrix,
    pub t12: ComplexMatrix,
    pub t21: ComplexMatrix,
    pub t22: ComplexMatrix,
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
    pub z: ComplexMatrix,
    /// exp(−tr Y / 2) = det(T22)^{1/2} on the principal branch.
    pub prefactor: C64,
    /// Particle-conserving amplitude factor (1 for generic/mixed specs).
    pub scale: C64,
    pub kernel_a: ComplexMatrix,
}

impl BlockDecomposition {
    /// Prefactor actually multiplying every matrix element.
    pub fn element_prefactor(&self) -> C64 {
        self.prefactor * self.scale
    }

    /// Reassembles the T-blocks into e^ℳ.
    pub fn assemble_exp(&self) -> ComplexMatrix {
        let l = self.l;
        let mut t = ComplexMatrix::zeros(2 * l, 2 * l);
        t.set_block(0, 0, &self.t11);
        t.set_block(0, l, &self.t12);
        t.set_block(l, 0, &self.t21);
        t.set_block(l, l, &self.t22);
        t
    }
}

/// Real correlation matrix G_jk = tr[ρ (c†_j − c_j)(c†_k + c_k)].
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    g: ComplexMatrix,
}

impl CorrelationMatrix {
    pub fn new(g: ComplexMatrix) -> Result<Self> {
        g.require_square()?;
        Ok(Self { g })
    }

    pub fn from_real(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real(rows))
    }

    pub fn sites(&self) -> usize {
        self.g.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.g
    }

    pub fn max_imag(&self) -> f64 {
        self.g.data().iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

/// Kernel 𝒜 = [[F_a, F_s], [−F_s, −F_a]] from F = (I+G)(I−G)⁻¹ for real
/// Hermitian specs; identical to the general kernel from `decompose`.
pub fn kernel_real_case(corr: &CorrelationMatrix) -> Result<ComplexMatrix> {
    let l = corr.sites();
    let id = ComplexMatrix::identity(l);
    let g = corr.matrix();
    let denom = &id - g;
    let f = denom.solve(&(&id + g)).map_err(|_| Error::Singular)?;
    // F computed as (I-G)^{-1}(I+G); (I+G) and (I-G)^{-1} commute
    let fs = (&f + &f.transpose()).scale(c64(0.5, 0.0));
    let fa = (&f - &f.transpose()).scale(c64(0.5, 0.0));
    let mut kernel = ComplexMatrix::zeros(2 * l, 2 * l);
    kernel.set_block(0, 0, &fa);
    kernel.set_block(0, l, &fs);
    kernel.set_block(l, 0, &fs.neg());
    kernel.set_block(l, l, &fa.neg());
    Ok(kernel)
}

/// Mixed-state structure residuals: X = Z†, Y = Y†.
#[derive(Debug, Clone)]
pub struct MixedStateReport {
    pub x_vs_z_dag: f64,
    pub y_hermiticity: f64,
    pub tol: f64,
    pub pass: bool,
}

pub fn mixed_state_checks(bd: &BlockDecomposition) -> MixedStateReport {
    let x_vs_z_dag = bd.x.max_abs_diff(&bd.z.conj_transpose());
    let y_hermiticity = bd.y.max_abs_diff(&bd.y.conj_transpose());
    let tol = STRUCT_TOL * bd.kernel_a.max_abs().max(1.0);
    MixedStateReport {
        x_vs_z_dag,
        y_hermiticity,
        tol,
        pass: x_vs_z_dag <= tol && y_hermiticity <= tol,
    }
}
