//! Python bindings: Gaussian specs, Pfaffian element evaluation, the dense
//! oracle, sign-pair enumeration, and diagonal probabilities.

use gausspf::io::{parse_spins, SpecFile};
use gausspf::matrix::ComplexMatrix;
use gausspf::signs::SignPair;
use gausspf::verify::{run_verification, BasisChoice, VerifyConfig};
use gausspf::{
    canonical_pair, diagonal_probability, element_computational, element_pauli, enumerate_pairs,
    CorrelationMatrix, GaussianKind, GaussianSpec, OccupationSets, SiteAngles, SpinConfiguration,
};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: gausspf::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn matrix_from_py(rows: Vec<Vec<Complex64>>) -> PyResult<ComplexMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(PyValueError::new_err("ragged matrix rows"));
    }
    Ok(ComplexMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

fn matrix_to_py(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)]).collect())
        .collect()
}

#[derive(FromPyObject)]
enum BasisArg {
    Label(String),
    Angles(f64, f64, f64),
}

fn angles_from_py(basis: Option<Vec<BasisArg>>, l: usize) -> PyResult<Vec<SiteAngles>> {
    let Some(items) = basis else {
        return Ok(vec![SiteAngles::Z; l]);
    };
    let parse = |item: &BasisArg| -> PyResult<SiteAngles> {
        match item {
            BasisArg::Label(s) => SiteAngles::from_label(s).map_err(err),
            BasisArg::Angles(phi, theta, alpha) => Ok(SiteAngles {
                phi: *phi,
                theta: *theta,
                alpha: *alpha,
            }),
        }
    };
    if items.len() == 1 && l > 1 {
        let a = parse(&items[0])?;
        return Ok(vec![a; l]);
    }
    if items.len() != l {
        return Err(PyValueError::new_err(format!(
            "basis must have {l} sites, got {}",
            items.len()
        )));
    }
    items.iter().map(parse).collect()
}

/// A fermionic Gaussian operator defined by its 2L x 2L matrix, or by the
/// L x L particle-conserving generator.
#[pyclass(name = "GaussianSpec", frozen)]
struct PySpec {
    inner: GaussianSpec,
}

#[pymethods]
impl PySpec {
    /// Build from a 2L x 2L defining matrix; kind is "generic" or
    /// "mixed_hermitian".
    #[new]
    fn new(kind: &str, m: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let kind = GaussianKind::parse(kind).map_err(err)?;
        Ok(Self {
            inner: GaussianSpec::new(kind, matrix_from_py(m)?).map_err(err)?,
        })
    }

    /// exp[c†Ac] for an arbitrary L x L matrix A.
    #[staticmethod]
    fn particle_conserving(a: Vec<Vec<Complex64>>) -> PyResult<Self> {
        Ok(Self {
            inner: GaussianSpec::particle_conserving(matrix_from_py(a)?).map_err(err)?,
        })
    }

    /// Deterministic random valid spec.
    #[staticmethod]
    fn random(sites: usize, kind: &str, seed: u64) -> PyResult<Self> {
        let kind = GaussianKind::parse(kind).map_err(err)?;
        Ok(Self {
            inner: GaussianSpec::random_seeded(sites, kind, seed),
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let file: SpecFile = serde_json::from_str(text)
            .map_err(|e| PyValueError::new_err(format!("invalid spec JSON: {e}")))?;
        Ok(Self {
            inner: file.into_spec().map_err(err)?,
        })
    }

    #[getter]
    fn sites(&self) -> usize {
        self.inner.sites()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind().as_str()
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        matrix_to_py(self.inner.matrix())
    }

    /// det(I + e^M)^{1/2} (times the particle-conserving amplitude factor);
    /// equals the trace for Hermitian specs.
    fn normalization(&self) -> PyResult<Complex64> {
        self.inner.normalization().map_err(err)
    }

    /// <bra|G|ket> through the Pfaffian formulas. Spins are '+'/'-' strings,
    /// site 1 leftmost; basis entries are "x"/"y"/"z" or (phi, theta, alpha).
    #[pyo3(signature = (bra, ket, basis=None))]
    fn element(&self, bra: &str, ket: &str, basis: Option<Vec<BasisArg>>) -> PyResult<Complex64> {
        let l = self.inner.sites();
        let bra = parse_spins(bra, l).map_err(err)?;
        let ket = parse_spins(ket, l).map_err(err)?;
        let angles = angles_from_py(basis, l)?;
        let bd = self.inner.decompose().map_err(err)?;
        let pair = canonical_pair(l);
        let cfg = SpinConfiguration::new(l, bra, ket, angles).map_err(err)?;
        element_pauli(&bd, &pair, &cfg).map_err(err)
    }

    /// Same element through the dense Fock-space oracle (L <= 8).
    #[pyo3(signature = (bra, ket, basis=None))]
    fn element_oracle(
        &self,
        bra: &str,
        ket: &str,
        basis: Option<Vec<BasisArg>>,
    ) -> PyResult<Complex64> {
        let l = self.inner.sites();
        let bra = parse_spins(bra, l).map_err(err)?;
        let ket = parse_spins(ket, l).map_err(err)?;
        let angles = angles_from_py(basis, l)?;
        gausspf::oracle::element_oracle(&self.inner, &angles, &bra, &ket).map_err(err)
    }

    /// Computational-basis element from occupied mode lists (1-based).
    fn element_occupation(
        &self,
        bra_occupied: Vec<usize>,
        ket_occupied: Vec<usize>,
    ) -> PyResult<Complex64> {
        let bd = self.inner.decompose().map_err(err)?;
        let occ =
            OccupationSets::new(self.inner.sites(), bra_occupied, ket_occupied).map_err(err)?;
        element_computational(&bd, &occ).map_err(err)
    }
}

/// One validated (Sigma, Sigma') pair.
#[pyclass(name = "SignPair", frozen)]
struct PySignPair {
    inner: SignPair,
}

#[pymethods]
impl PySignPair {
    #[getter]
    fn sites(&self) -> usize {
        self.inner.l
    }

    #[getter]
    fn sigma(&self) -> Vec<Vec<i8>> {
        self.inner.sigma.rows()
    }

    #[getter]
    fn sigma_prime(&self) -> Vec<Vec<i8>> {
        self.inner.sigma_prime.rows()
    }

    #[getter]
    fn p(&self) -> Option<Vec<i8>> {
        self.inner.p.clone()
    }

    /// +1 when the pair reproduces the computational formula on the
    /// principal square-root branch, -1 on the conjugate branch.
    #[getter]
    fn branch(&self) -> i8 {
        self.inner.branch
    }
}

/// Pfaffian of a complex antisymmetric matrix.
#[pyfunction]
fn pfaffian(m: Vec<Vec<Complex64>>) -> PyResult<Complex64> {
    gausspf::pfaffian_default(&matrix_from_py(m)?).map_err(err)
}

/// The canonical (Table-derived) sign pair for L sites.
#[pyfunction]
fn canonical_sign_pair(sites: usize) -> PySignPair {
    PySignPair {
        inner: canonical_pair(sites),
    }
}

/// All 2^(2L-1) sign pairs (guarded at L = 6).
#[pyfunction]
fn enumerate_sign_pairs(sites: usize) -> PyResult<Vec<PySignPair>> {
    Ok(enumerate_pairs(sites)
        .map_err(err)?
        .into_iter()
        .map(|inner| PySignPair { inner })
        .collect())
}

/// det[(I - I_config G)/2] for a real correlation matrix; '+' = occupied.
#[pyfunction]
fn diagonal_probability_py(g: Vec<Vec<f64>>, config: &str) -> PyResult<f64> {
    let corr = CorrelationMatrix::from_real(&g).map_err(err)?;
    let spins = parse_spins(config, corr.sites()).map_err(err)?;
    diagonal_probability(&corr, &spins).map_err(err)
}

/// Dimension of the commutator closure of the canonical pair: L(2L-1).
#[pyfunction]
fn closure_dimension(sites: usize) -> PyResult<usize> {
    let pair = canonical_pair(sites);
    gausspf::lie::closure_dimension(&[pair.sigma.to_complex(), pair.sigma_prime.to_complex()])
        .map_err(err)
}

/// Seeded formula-vs-oracle verification; returns (max_dev, pass).
#[pyfunction]
#[pyo3(signature = (sites, trials=5, seed=42, tol=1e-8))]
fn verify(sites: usize, trials: usize, seed: u64, tol: f64) -> PyResult<(f64, bool)> {
    let report = run_verification(
        &VerifyConfig {
            l: sites,
            trials,
            seed,
            tol,
            basis: BasisChoice::Random,
            samples_per_spec: if sites >= 4 { Some(100) } else { None },
            threads: 1,
        },
        &canonical_pair(sites),
    )
    .map_err(err)?;
    Ok((report.max_dev, report.pass))
}

#[pymodule]
fn _gausspf(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpec>()?;
    m.add_class::<PySignPair>()?;
    m.add_function(wrap_pyfunction!(pfaffian, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_sign_pair, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_sign_pairs, m)?)?;
    m.add_function(wrap_pyfunction!(diagonal_probability_py, m)?)?;
    m.add_function(wrap_pyfunction!(closure_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
