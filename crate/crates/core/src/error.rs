use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },

    #[error("shape mismatch: {lhs_rows}x{lhs_cols} vs {rhs_rows}x{rhs_cols}")]
    ShapeMismatch {
        lhs_rows: usize,
        lhs_cols: usize,
        rhs_rows: usize,
        rhs_cols: usize,
    },

    #[error("antisymmetry violation {violation:.3e} exceeds tolerance {tol:.3e}")]
    NotAntisymmetric { violation: f64, tol: f64 },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("index set is not strictly ascending at position {position}")]
    IndexNotAscending { position: usize },

    #[error("matrix is singular")]
    Singular,

    #[error(
        "matrix is ill-conditioned (1-norm condition estimate {cond:.3e} exceeds {limit:.3e})"
    )]
    IllConditioned { cond: f64, limit: f64 },

    #[error(
        "eigenvalue {re:.6e}{im:+.6e}i lies within {dist:.3e} of the negative real axis; \
         principal logarithm branch (and the amplitude prefactor sign) is ambiguous"
    )]
    BranchCut { re: f64, im: f64, dist: f64 },

    #[error("matrix exponential overflowed (norm {norm:.3e})")]
    Overflow { norm: f64 },

    #[error("eigenvalue iteration failed to converge after {iters} sweeps")]
    EigNoConvergence { iters: usize },

    #[error("spec validation failed: {reason}")]
    Validation { reason: String },

    #[error("guard exceeded: {what} = {got} is limited to {limit}")]
    Guard {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    #[error("p-vector parity {got} violates the L mod 4 = {l_mod_4} rule (expected {expected})")]
    PVectorParity {
        got: i32,
        expected: i32,
        l_mod_4: usize,
    },

    #[error("{what} must have length {expected}, got {got}")]
    BadLength {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("unsupported basis label {0:?}, expected one of \"x\", \"y\", \"z\"")]
    BadBasisLabel(String),
}

pub type Result<T> = std::result::Result<T, Error>;
