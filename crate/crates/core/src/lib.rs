//! Matrix elements of fermionic Gaussian operators in arbitrary Pauli
//! product bases, through closed-form Pfaffian kernels.
//!
//! A Gaussian operator exp[½ (c†,c) ℳ (c;c†)] is fully determined by its
//! 2L×2L defining matrix. This crate decomposes e^ℳ into Balian–Brezin
//! blocks, builds the antisymmetric kernel 𝒜, and evaluates
//! ⟨S|𝒢|S′⟩ for any pair of product-basis spin configurations as a single
//! Pfaffian — in the computational basis, in the σ^z basis through a pair of
//! sign-encoding matrices (Σ, Σ′), and in arbitrary local bases through
//! per-site rotation weights. A dense Jordan–Wigner oracle provides ground
//! truth at small L, and the Lie-algebra module verifies that the sign pairs
//! generate so(2L).
//!
//! Everything is a pure function of immutable inputs; all operations are
//! safe to call from many threads at once.

pub mod eig;
pub mod elements;
pub mod error;
pub mod expm;
pub mod gaussian;
pub mod io;
pub mod lie;
pub mod logm;
pub mod matrix;
pub mod oracle;
pub mod pfaffian;
pub mod signs;
pub mod verify;

pub use elements::{
    diagonal_probability, element_computational, element_particle_conserving, element_pauli,
    element_pauli_two_sided, element_sigma_z, generating_function, kernel_special, KernelMatrix,
    OccupationSets, ParticleConservingOperator, SiteAngles, SpinConfiguration,
};
pub use error::{Error, Result};
pub use expm::matrix_exp;
pub use gaussian::{
    kernel_real_case, mixed_state_checks, BlockDecomposition, CorrelationMatrix, GaussianKind,
    GaussianSpec,
};
pub use logm::matrix_log_principal;
pub use matrix::{c64, commutator, ComplexMatrix, C64};
pub use pfaffian::{pfaffian, pfaffian_default};
pub use signs::{canonical_pair, enumerate_pairs, from_p_vector, validate_pair, SignPair};
