//! Subcommand implementations.

use crate::output::{emit, read_file, to_json};
use crate::EXIT_VERIFY;
use gausspf::io::{
    parse_inline_basis, parse_spins, spec_hash, spins_to_string, BasisFile, CorrelationFile,
    SignPairFile, SpecFile,
};
use gausspf::lie::{
    closure_dimension, l2_commutator_table_check, root_overlaps, spectrum_check, OrthogonalFrame,
};
use gausspf::signs::required_matching_sign;
use gausspf::verify::{run_verification, BasisChoice, VerifyConfig};
use gausspf::{
    canonical_pair, diagonal_probability, element_pauli, enumerate_pairs, validate_pair, Error,
    GaussianKind, GaussianSpec, Result, SiteAngles, SpinConfiguration, C64,
};
use serde::Serialize;

const TABLE_GUARD: usize = 7;

fn load_spec(path: &str) -> Result<GaussianSpec> {
    let text = read_file(path)?;
    let file: SpecFile = serde_json::from_str(&text).map_err(|e| Error::Validation {
        reason: format!("invalid spec JSON in {path}: {e}"),
    })?;
    file.into_spec()
}

fn load_basis(arg: &str, l: usize) -> Result<Vec<SiteAngles>> {
    if std::path::Path::new(arg).exists() {
        let text = read_file(arg)?;
        let file: BasisFile = serde_json::from_str(&text).map_err(|e| Error::Validation {
            reason: format!("invalid basis JSON in {arg}: {e}"),
        })?;
        file.to_angles(l)
    } else {
        parse_inline_basis(arg, l)
    }
}

fn threads_from_env() -> usize {
    std::env::var("GP_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(std::num::NonZeroUsize::get)
                .unwrap_or(1)
        })
}

#[derive(Serialize)]
struct ElementOutput {
    bra: String,
    ket: String,
    value: [f64; 2],
    spec_hash: String,
    sign_pair: String,
    tol: f64,
}

pub fn element(
    spec_path: &str,
    basis: &str,
    bra: &str,
    ket: &str,
    tol: f64,
    out: Option<&str>,
) -> Result<u8> {
    if tol <= 0.0 {
        return Err(Error::Validation {
            reason: "tolerance must be positive".into(),
        });
    }
    let spec = load_spec(spec_path)?;
    let l = spec.sites();
    let angles = load_basis(basis, l)?;
    let bra = parse_spins(bra, l)?;
    let ket = parse_spins(ket, l)?;
    let bd = spec.decompose()?;
    let pair = canonical_pair(l);
    let cfg = SpinConfiguration::new(l, bra.clone(), ket.clone(), angles)?;
    let value = element_pauli(&bd, &pair, &cfg)?;
    let payload = ElementOutput {
        bra: spins_to_string(&bra),
        ket: spins_to_string(&ket),
        value: [value.re, value.im],
        spec_hash: spec_hash(&spec),
        sign_pair: format!("canonical(L={l})"),
        tol,
    };
    emit(&to_json(&payload)?, out)?;
    Ok(0)
}

fn config_label(bits: usize, l: usize) -> String {
    let spins: Vec<i8> = (0..l)
        .map(|i| if (bits >> i) & 1 == 1 { 1 } else { -1 })
        .collect();
    spins_to_string(&spins)
}

#[derive(Serialize)]
struct TableOutput {
    #[serde(rename = "L")]
    l: usize,
    spec_hash: String,
    bra_labels: Vec<String>,
    ket_labels: Vec<String>,
    values: Vec<Vec<[f64; 2]>>,
    hermitian: Option<bool>,
    max_asymmetry: Option<f64>,
}

pub fn table(spec_path: &str, basis: &str, format: &str, out: Option<&str>) -> Result<u8> {
    let spec = load_spec(spec_path)?;
    let l = spec.sites();
    if l > TABLE_GUARD {
        return Err(Error::Guard {
            what: "table L",
            got: l,
            limit: TABLE_GUARD,
        });
    }
    let angles = load_basis(basis, l)?;
    let bd = spec.decompose()?;
    let pair = canonical_pair(l);
    let dim = 1usize << l;
    let mut values: Vec<Vec<C64>> = Vec::with_capacity(dim);
    // bra-major, rows and columns in binary order of the configuration index
    for b in 0..dim {
        let bra: Vec<i8> = (0..l)
            .map(|i| if (b >> i) & 1 == 1 { 1 } else { -1 })
            .collect();
        let mut row = Vec::with_capacity(dim);
        for k in 0..dim {
            let ket: Vec<i8> = (0..l)
                .map(|i| if (k >> i) & 1 == 1 { 1 } else { -1 })
                .collect();
            let cfg = SpinConfiguration::new(l, bra.clone(), ket.clone(), angles.clone())?;
            row.push(element_pauli(&bd, &pair, &cfg)?);
        }
        values.push(row);
    }
    let (hermitian, max_asymmetry) = if spec.kind() == GaussianKind::MixedHermitian {
        let mut worst = 0.0f64;
        for (b, row) in values.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                worst = worst.max((v - values[k][b].conj()).norm());
            }
        }
        (Some(worst <= 1e-9), Some(worst))
    } else {
        (None, None)
    };

    let labels: Vec<String> = (0..dim).map(|bits| config_label(bits, l)).collect();
    let text = match format {
        "json" => to_json(&TableOutput {
            l,
            spec_hash: spec_hash(&spec),
            bra_labels: labels.clone(),
            ket_labels: labels,
            values: values
                .iter()
                .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            hermitian,
            max_asymmetry,
        })?,
        "csv" => {
            let mut text = String::from("bra");
            for label in &labels {
                text.push_str(&format!(",{label}_re,{label}_im"));
            }
            text.push('\n');
            for (b, row) in values.iter().enumerate() {
                text.push_str(&labels[b]);
                for z in row {
                    text.push_str(&format!(",{:e},{:e}", z.re, z.im));
                }
                text.push('\n');
            }
            if let (Some(h), Some(dev)) = (hermitian, max_asymmetry) {
                text.push_str(&format!("# hermitian={h} max_asymmetry={dev:e}\n"));
            }
            text.trim_end().to_string()
        }
        other => {
            return Err(Error::Validation {
                reason: format!("unknown format {other:?}, expected csv or json"),
            })
        }
    };
    emit(&text, out)?;
    Ok(0)
}

#[derive(Serialize)]
struct SignsOutput {
    #[serde(rename = "L")]
    l: usize,
    count: usize,
    required_matching_sign: i8,
    checked: bool,
    pairs: Vec<SignPairFile>,
}

pub fn signs(sites: usize, check: bool, seed: u64, tol: f64, out: Option<&str>) -> Result<u8> {
    let pairs = enumerate_pairs(sites)?;
    let mut all_ok = true;
    if check {
        let spec = GaussianSpec::random_seeded(sites, GaussianKind::Generic, seed);
        for pair in &pairs {
            let report = validate_pair(pair, &spec, 64, tol)?;
            if !report.pass {
                eprintln!(
                    "pair failed functional validation: branch {} dev {:.3e}",
                    report.branch, report.functional_dev
                );
                all_ok = false;
            }
        }
    }
    let payload = SignsOutput {
        l: sites,
        count: pairs.len(),
        required_matching_sign: required_matching_sign(sites),
        checked: check,
        pairs: pairs.iter().map(SignPairFile::from_pair).collect(),
    };
    emit(&to_json(&payload)?, out)?;
    Ok(if all_ok { 0 } else { EXIT_VERIFY })
}

#[derive(Serialize)]
struct VerifyOutput {
    sigma_z: gausspf::verify::VerifyReport,
    rotated: gausspf::verify::VerifyReport,
    pass: bool,
}

pub fn verify(sites: usize, trials: usize, seed: u64, tol: f64, out: Option<&str>) -> Result<u8> {
    if tol <= 0.0 {
        return Err(Error::Validation {
            reason: "tolerance must be positive".into(),
        });
    }
    let threads = threads_from_env();
    let pair = canonical_pair(sites);
    let sigma_z = run_verification(
        &VerifyConfig {
            l: sites,
            trials,
            seed,
            tol,
            basis: BasisChoice::SigmaZ,
            samples_per_spec: None,
            threads,
        },
        &pair,
    )?;
    let rotated = run_verification(
        &VerifyConfig {
            l: sites,
            trials,
            seed: seed ^ 0xabcd_ef01,
            tol,
            basis: BasisChoice::Random,
            samples_per_spec: if sites >= 4 { Some(200) } else { None },
            threads,
        },
        &pair,
    )?;
    let pass = sigma_z.pass && rotated.pass;
    let payload = VerifyOutput {
        sigma_z,
        rotated,
        pass,
    };
    emit(&to_json(&payload)?, out)?;
    Ok(if pass { 0 } else { EXIT_VERIFY })
}

#[derive(Serialize)]
struct AlgebraOutput {
    #[serde(rename = "L")]
    l: usize,
    /// Absent above the closure guard (L > 8).
    closure_dim: Option<usize>,
    expected: usize,
    spectrum_max_dev: f64,
    frame_orthogonality: f64,
    overlaps: Vec<[f64; 2]>,
    overlap_closed_form_dev: f64,
    min_overlap_magnitude: f64,
    l2_table_max_dev: f64,
    pass: bool,
}

pub fn algebra(sites: usize, out: Option<&str>) -> Result<u8> {
    const CLOSURE_GUARD: usize = 8;
    const FRAME_GUARD: usize = 16;
    if !(1..=FRAME_GUARD).contains(&sites) {
        return Err(Error::Guard {
            what: "algebra L",
            got: sites,
            limit: FRAME_GUARD,
        });
    }
    let expected = sites * (2 * sites - 1);
    // closure and overlaps are the expensive parts; frame and spectrum
    // checks stay available for larger L
    let closure_dim = if sites <= CLOSURE_GUARD {
        let pair = canonical_pair(sites);
        Some(closure_dimension(&[
            pair.sigma.to_complex(),
            pair.sigma_prime.to_complex(),
        ])?)
    } else {
        None
    };

    // spectrum on a p-form pair sharing the census branch
    let mut p = vec![1i8; 2 * sites];
    if required_matching_sign(sites) == -1 {
        p[0] = -1;
    }
    let p_pair = gausspf::from_p_vector(&p, sites)?;
    let spectrum = spectrum_check(&p_pair.sigma, &p, sites)?;
    let frame = OrthogonalFrame::new(sites).orthogonality_residual();

    let (overlaps, overlap_dev, min_overlap) = if (2..=CLOSURE_GUARD).contains(&sites) {
        let os = root_overlaps(sites)?;
        let dev = os
            .iter()
            .map(|o| (o.direct - o.closed_form).norm())
            .fold(0.0, f64::max);
        let min = os
            .iter()
            .map(|o| o.direct.norm())
            .fold(f64::INFINITY, f64::min);
        (
            os.iter().map(|o| [o.direct.re, o.direct.im]).collect(),
            dev,
            min,
        )
    } else {
        (Vec::new(), 0.0, f64::INFINITY)
    };

    let l2 = {
        let c2 = canonical_pair(2);
        l2_commutator_table_check(&c2.sigma, &c2.sigma_prime)?
    };

    let spectrum_max_dev = spectrum.max_eigenvalue_dev.max(spectrum.max_block_dev);
    let pass = closure_dim.is_none_or(|d| d == expected)
        && spectrum.pass
        && frame <= 1e-12
        && overlap_dev <= 1e-10
        && min_overlap > 1e-8
        && l2.pass;
    let payload = AlgebraOutput {
        l: sites,
        closure_dim,
        expected,
        spectrum_max_dev,
        frame_orthogonality: frame,
        overlaps,
        overlap_closed_form_dev: overlap_dev,
        min_overlap_magnitude: min_overlap,
        l2_table_max_dev: l2.max_dev,
        pass,
    };
    emit(&to_json(&payload)?, out)?;
    Ok(if pass { 0 } else { EXIT_VERIFY })
}

#[derive(Serialize)]
struct ProbabilityOutput {
    #[serde(rename = "L")]
    l: usize,
    config: String,
    probability: f64,
}

pub fn probability(g_path: &str, ket: &str, out: Option<&str>) -> Result<u8> {
    let text = read_file(g_path)?;
    let file: CorrelationFile = serde_json::from_str(&text).map_err(|e| Error::Validation {
        reason: format!("invalid correlation JSON in {g_path}: {e}"),
    })?;
    let corr = file.into_matrix()?;
    let l = corr.sites();
    let config = parse_spins(ket, l)?;
    let p = diagonal_probability(&corr, &config)?;
    let payload = ProbabilityOutput {
        l,
        config: spins_to_string(&config),
        probability: p,
    };
    emit(&to_json(&payload)?, out)?;
    Ok(0)
}
