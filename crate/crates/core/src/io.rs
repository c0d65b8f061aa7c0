//! JSON schemas for spec, basis, correlation-matrix, and sign-pair files.
//! Complex numbers are serialized as [re, im] pairs throughout.

use crate::elements::SiteAngles;
use crate::error::{Error, Result};
use crate::gaussian::{CorrelationMatrix, GaussianKind, GaussianSpec};
use crate::matrix::{c64, ComplexMatrix};
use crate::signs::SignPair;
use serde::{Deserialize, Serialize};

pub type CxPair = [f64; 2];

pub fn to_pair(z: crate::matrix::C64) -> CxPair {
    [z.re, z.im]
}

pub fn matrix_to_pairs(m: &ComplexMatrix) -> Vec<Vec<CxPair>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| to_pair(m[(i, j)])).collect())
        .collect()
}

pub fn matrix_from_pairs(rows: &[Vec<CxPair>]) -> Result<ComplexMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    for row in rows {
        if row.len() != c {
            return Err(Error::Validation {
                reason: "ragged matrix rows".into(),
            });
        }
    }
    Ok(ComplexMatrix::from_fn(r, c, |i, j| {
        c64(rows[i][j][0], rows[i][j][1])
    }))
}

/// On-disk Gaussian spec: {"L", "kind", "M"} with 2L×2L nested [re,im]
/// arrays, or the particle-conserving alternative {"L", "kind", "A"} with an
/// L×L matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpecFile {
    #[serde(rename = "L")]
    pub l: usize,
    pub kind: String,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<Vec<CxPair>>>,
    #[serde(rename = "A", skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Vec<CxPair>>>,
}

impl SpecFile {
    pub fn from_spec(spec: &GaussianSpec) -> Self {
        match spec.a_small() {
            Some(a) => SpecFile {
                l: spec.sites(),
                kind: spec.kind().as_str().to_string(),
                m: None,
                a: Some(matrix_to_pairs(a)),
            },
            None => SpecFile {
                l: spec.sites(),
                kind: spec.kind().as_str().to_string(),
                m: Some(matrix_to_pairs(spec.matrix())),
                a: None,
            },
        }
    }

    pub fn into_spec(self) -> Result<GaussianSpec> {
        let kind = GaussianKind::parse(&self.kind)?;
        match kind {
            GaussianKind::ParticleConserving => {
                let a = self.a.ok_or_else(|| Error::Validation {
                    reason: "particle_conserving spec requires \"A\"".into(),
                })?;
                let a = matrix_from_pairs(&a)?;
                if a.rows() != self.l {
                    return Err(Error::Validation {
                        reason: format!("\"A\" must be {0}x{0}", self.l),
                    });
                }
                GaussianSpec::particle_conserving(a)
            }
            _ => {
                let m = self.m.ok_or_else(|| Error::Validation {
                    reason: "spec requires \"M\"".into(),
                })?;
                let m = matrix_from_pairs(&m)?;
                if m.rows() != 2 * self.l {
                    return Err(Error::Validation {
                        reason: format!("\"M\" must be {0}x{0}", 2 * self.l),
                    });
                }
                GaussianSpec::new(kind, m)
            }
        }
    }
}

/// Basis file: {"sites": [...]} where each entry is either an angle object
/// or an "x"/"y"/"z" shorthand string.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisFile {
    pub sites: Vec<BasisSite>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BasisSite {
    Label(String),
    Angles { phi: f64, theta: f64, alpha: f64 },
}

impl BasisSite {
    pub fn to_angles(&self) -> Result<SiteAngles> {
        match self {
            BasisSite::Label(s) => SiteAngles::from_label(s),
            BasisSite::Angles { phi, theta, alpha } => Ok(SiteAngles {
                phi: *phi,
                theta: *theta,
                alpha: *alpha,
            }),
        }
    }
}

impl BasisFile {
    pub fn to_angles(&self, l: usize) -> Result<Vec<SiteAngles>> {
        if self.sites.len() == 1 && l > 1 {
            let a = self.sites[0].to_angles()?;
            return Ok(vec![a; l]);
        }
        if self.sites.len() != l {
            return Err(Error::BadLength {
                what: "basis sites",
                expected: l,
                got: self.sites.len(),
            });
        }
        self.sites.iter().map(BasisSite::to_angles).collect()
    }
}

/// Inline basis syntax: comma-separated site tokens, each either a label or
/// "phi:theta:alpha". A single token is replicated to all sites.
pub fn parse_inline_basis(text: &str, l: usize) -> Result<Vec<SiteAngles>> {
    let tokens: Vec<&str> = text.split(',').map(str::trim).collect();
    let parse_one = |tok: &str| -> Result<SiteAngles> {
        if let Ok(a) = SiteAngles::from_label(tok) {
            return Ok(a);
        }
        let parts: Vec<&str> = tok.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::BadBasisLabel(tok.to_string()));
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| {
                p.parse::<f64>()
                    .map_err(|_| Error::BadBasisLabel(tok.to_string()))
            })
            .collect::<Result<_>>()?;
        Ok(SiteAngles {
            phi: nums[0],
            theta: nums[1],
            alpha: nums[2],
        })
    };
    if tokens.len() == 1 {
        let a = parse_one(tokens[0])?;
        return Ok(vec![a; l]);
    }
    if tokens.len() != l {
        return Err(Error::BadLength {
            what: "basis tokens",
            expected: l,
            got: tokens.len(),
        });
    }
    tokens.into_iter().map(parse_one).collect()
}

/// Spin strings use '+'/'-' per site, site 1 leftmost.
pub fn parse_spins(text: &str, l: usize) -> Result<Vec<i8>> {
    let spins: Vec<i8> = text
        .chars()
        .map(|c| match c {
            '+' => Ok(1),
            '-' => Ok(-1),
            other => Err(Error::Validation {
                reason: format!("spin characters must be '+' or '-', got {other:?}"),
            }),
        })
        .collect::<Result<_>>()?;
    if spins.len() != l {
        return Err(Error::BadLength {
            what: "spin string",
            expected: l,
            got: spins.len(),
        });
    }
    Ok(spins)
}

pub fn spins_to_string(spins: &[i8]) -> String {
    spins
        .iter()
        .map(|&s| if s == 1 { '+' } else { '-' })
        .collect()
}

/// Correlation-matrix file: {"G": [[...]]} with real entries.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrelationFile {
    #[serde(rename = "G")]
    pub g: Vec<Vec<f64>>,
}

impl CorrelationFile {
    pub fn into_matrix(self) -> Result<CorrelationMatrix> {
        CorrelationMatrix::from_real(&self.g)
    }
}

/// Sign-pair export: {"L", "p", "sigma", "sigma_prime"} plus the branch tag.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignPairFile {
    #[serde(rename = "L")]
    pub l: usize,
    pub p: Option<Vec<i8>>,
    pub sigma: Vec<Vec<i8>>,
    pub sigma_prime: Vec<Vec<i8>>,
    pub branch: i8,
}

impl SignPairFile {
    pub fn from_pair(pair: &SignPair) -> Self {
        SignPairFile {
            l: pair.l,
            p: pair.p.clone(),
            sigma: pair.sigma.rows(),
            sigma_prime: pair.sigma_prime.rows(),
            branch: pair.branch,
        }
    }
}

/// FNV-1a hash of canonical spec bytes; used as provenance metadata.
pub fn fnv1a_hex(bytes: &[u8]) -> String {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("{hash:016x}")
}

pub fn spec_hash(spec: &GaussianSpec) -> String {
    let file = SpecFile::from_spec(spec);
    let json = serde_json::to_string(&file).expect("spec serialization");
    fnv1a_hex(json.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn spec_round_trip() {
        let mut rng = StdRng::seed_from_u64(7);
        let spec = GaussianSpec::random(2, GaussianKind::MixedHermitian, &mut rng);
        let json = serde_json::to_string(&SpecFile::from_spec(&spec)).unwrap();
        let back: SpecFile = serde_json::from_str(&json).unwrap();
        let spec2 = back.into_spec().unwrap();
        assert_eq!(spec2.kind(), spec.kind());
        assert!(spec2.matrix().max_abs_diff(spec.matrix()) < 1e-15);
        assert_eq!(spec_hash(&spec), spec_hash(&spec2));
    }

    #[test]
    fn particle_conserving_file() {
        let json = r#"{"L": 1, "kind": "particle_conserving", "A": [[[0.5, 0.0]]]}"#;
        let file: SpecFile = serde_json::from_str(json).unwrap();
        let spec = file.into_spec().unwrap();
        assert!(spec.a_small().is_some());
    }

    #[test]
    fn basis_parsing() {
        let file: BasisFile = serde_json::from_str(
            r#"{"sites": ["x", {"phi": 0.1, "theta": 0.2, "alpha": 0.3}, "z"]}"#,
        )
        .unwrap();
        let angles = file.to_angles(3).unwrap();
        assert_eq!(angles[0], SiteAngles::x());
        assert!((angles[1].phi - 0.1).abs() < 1e-15);
        assert_eq!(angles[2], SiteAngles::Z);

        let inline = parse_inline_basis("y", 2).unwrap();
        assert_eq!(inline, vec![SiteAngles::y(); 2]);
        let inline = parse_inline_basis("z, 0.1:0.2:0.3", 2).unwrap();
        assert_eq!(inline[0], SiteAngles::Z);
        assert!((inline[1].theta - 0.2).abs() < 1e-15);
        assert!(parse_inline_basis("w", 1).is_err());
    }

    #[test]
    fn spin_strings() {
        assert_eq!(parse_spins("+-+", 3).unwrap(), vec![1, -1, 1]);
        assert!(parse_spins("+-", 3).is_err());
        assert!(parse_spins("+x", 2).is_err());
        assert_eq!(spins_to_string(&[1, -1]), "+-");
    }
}
