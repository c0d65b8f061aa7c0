//! Seeded end-to-end verification: random specs × bases × configurations,
//! Pfaffian formulas against the dense Fock oracle, max-deviation reduction.

use crate::elements::{element_pauli, SiteAngles, SpinConfiguration};
use crate::error::Result;
use crate::gaussian::{GaussianKind, GaussianSpec};
use crate::io::spins_to_string;
use crate::oracle::element_oracle;
use crate::signs::{canonical_pair, SignPair};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

pub const VERIFY_GUARD: usize = 6;

#[derive(Debug, Clone, Serialize)]
pub struct WorstCase {
    pub spec_index: usize,
    pub basis: String,
    pub bra: String,
    pub ket: String,
    pub formula: [f64; 2],
    pub oracle: [f64; 2],
    pub deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    #[serde(rename = "L")]
    pub l: usize,
    pub specs: usize,
    pub elements: usize,
    pub max_dev: f64,
    pub tol: f64,
    pub pass: bool,
    pub worst: Option<WorstCase>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisChoice {
    SigmaZ,
    Random,
}

pub struct VerifyConfig {
    pub l: usize,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub basis: BasisChoice,
    /// Elements sampled per spec; all 4^L when None.
    pub samples_per_spec: Option<usize>,
    pub threads: usize,
}

fn random_angles(rng: &mut StdRng, l: usize) -> Vec<SiteAngles> {
    (0..l)
        .map(|_| SiteAngles {
            phi: rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
            theta: rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
            alpha: rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
        })
        .collect()
}

fn spins_from_bits(bits: usize, l: usize) -> Vec<i8> {
    (0..l)
        .map(|i| if (bits >> i) & 1 == 1 { 1 } else { -1 })
        .collect()
}

/// One spec's worth of comparisons; deterministic in (seed, index).
fn run_one(
    cfg: &VerifyConfig,
    pair: &SignPair,
    index: usize,
) -> Result<(usize, Option<WorstCase>)> {
    let l = cfg.l;
    let mut rng =
        StdRng::seed_from_u64(cfg.seed ^ (0x9e3779b97f4a7c15u64.wrapping_mul(index as u64 + 1)));
    let kind = if index.is_multiple_of(2) {
        GaussianKind::Generic
    } else {
        GaussianKind::MixedHermitian
    };
    let spec = GaussianSpec::random(l, kind, &mut rng);
    let bd = spec.decompose()?;
    let angles = match cfg.basis {
        BasisChoice::SigmaZ => vec![SiteAngles::Z; l],
        BasisChoice::Random => random_angles(&mut rng, l),
    };
    let basis_label = match cfg.basis {
        BasisChoice::SigmaZ => "z".to_string(),
        BasisChoice::Random => "random".to_string(),
    };
    let total = 1usize << (2 * l);
    let picks: Vec<usize> = match cfg.samples_per_spec {
        None => (0..total).collect(),
        Some(k) => (0..k).map(|_| rng.gen_range(0..total)).collect(),
    };
    let mut worst: Option<WorstCase> = None;
    let mut count = 0usize;
    for idx in picks {
        let bra = spins_from_bits(idx >> l, l);
        let ket = spins_from_bits(idx & ((1 << l) - 1), l);
        let cfg_spin = SpinConfiguration::new(l, bra.clone(), ket.clone(), angles.clone())?;
        let formula = element_pauli(&bd, pair, &cfg_spin)?;
        let reference = element_oracle(&spec, &angles, &bra, &ket)?;
        let dev = (formula - reference).norm();
        count += 1;
        if worst.as_ref().is_none_or(|w| dev > w.deviation) {
            worst = Some(WorstCase {
                spec_index: index,
                basis: basis_label.clone(),
                bra: spins_to_string(&bra),
                ket: spins_to_string(&ket),
                formula: [formula.re, formula.im],
                oracle: [reference.re, reference.im],
                deviation: dev,
            });
        }
    }
    Ok((count, worst))
}

/// Runs `trials` seeded specs with the given pair and reduces the worst case;
/// the reduction is a max, so thread partitioning does not affect the report.
pub fn run_verification(cfg: &VerifyConfig, pair: &SignPair) -> Result<VerifyReport> {
    if cfg.l > VERIFY_GUARD {
        return Err(crate::error::Error::Guard {
            what: "verify L",
            got: cfg.l,
            limit: VERIFY_GUARD,
        });
    }
    let indices: Vec<usize> = (0..cfg.trials).collect();
    let threads = cfg.threads.max(1).min(indices.len().max(1));
    let chunks: Vec<Vec<usize>> = indices
        .chunks(indices.len().div_ceil(threads).max(1))
        .map(<[usize]>::to_vec)
        .collect();
    let mut results: Vec<Result<(usize, Option<WorstCase>)>> = Vec::new();
    std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .iter()
            .map(|chunk| {
                scope.spawn(move || {
                    let mut local_count = 0usize;
                    let mut local_worst: Option<WorstCase> = None;
                    for &i in chunk {
                        let (count, worst) = run_one(cfg, pair, i)?;
                        local_count += count;
                        if let Some(w) = worst {
                            if local_worst
                                .as_ref()
                                .is_none_or(|lw| w.deviation > lw.deviation)
                            {
                                local_worst = Some(w);
                            }
                        }
                    }
                    Ok((local_count, local_worst))
                })
            })
            .collect();
        for h in handles {
            results.push(h.join().expect("verification thread panicked"));
        }
    });
    let mut elements = 0usize;
    let mut worst: Option<WorstCase> = None;
    for r in results {
        let (count, w) = r?;
        elements += count;
        if let Some(w) = w {
            if worst.as_ref().is_none_or(|cw| w.deviation > cw.deviation) {
                worst = Some(w);
            }
        }
    }
    let max_dev = worst.as_ref().map_or(0.0, |w| w.deviation);
    Ok(VerifyReport {
        l: cfg.l,
        specs: cfg.trials,
        elements,
        max_dev,
        tol: cfg.tol,
        pass: max_dev <= cfg.tol,
        worst,
    })
}

/// Default pair for an L: the canonical pair.
pub fn default_pair(l: usize) -> SignPair {
    canonical_pair(l)
}
