//! Encoding-unitary families for two-qudit deterministic dense coding.
//!
//! A pure state with squared Schmidt coefficients `λ_0 ≥ … ≥ λ_{d−1}` can carry `K`
//! perfectly distinguishable messages when Alice holds `K` local unitaries with
//! `tr(Λ U_a† U_b) = δ_ab`. This crate
//!
//! - verifies such families and builds the augmented `d² × d²` message matrix
//!   ([`coding`]),
//! - evaluates the closed-form limits on `λ_0` ([`bounds`]),
//! - provides the Weyl-operator family and recovers the last member of a `d² − 1`
//!   family ([`constructions`]),
//! - searches numerically for families on the unitary group and sweeps the simplex
//!   ([`search`]).
//!
//! Numerics are generic over [`Real`] (`f32`/`f64`); the `*64` aliases below fix `f64`,
//! which is what the file formats and default tolerances assume.

pub mod bounds;
pub mod coding;
pub mod constructions;
pub mod error;
pub mod io;
pub mod linalg;
pub mod scalar;
pub mod search;

pub use coding::{
    augment, build_message_columns, flat_index, foeq_check, lambda_gram, message_state, pair_overlaps, verify_family,
    wcsg_feasible, AugmentedMessageMatrix, EncodingFamily, FamilyCheck, FoeqTerm, MessageState, PairOverlap,
    SchmidtSpectrum,
};
pub use error::{Error, Result};
pub use linalg::{adjoint, check_unitary, matmul, orthonormal_complete, ComplexMatrix, UnitarityCheck, UnitaryMatrix};
pub use scalar::Real;

pub type ComplexMatrix64 = ComplexMatrix<f64>;
pub type UnitaryMatrix64 = UnitaryMatrix<f64>;
pub type SchmidtSpectrum64 = SchmidtSpectrum<f64>;
pub type EncodingFamily64 = EncodingFamily<f64>;
pub type AugmentedMessageMatrix64 = AugmentedMessageMatrix<f64>;
pub type SearchConfig64 = search::SearchConfig<f64>;
pub type SearchReport64 = search::SearchReport<f64>;

pub type ComplexMatrix32 = ComplexMatrix<f32>;
pub type UnitaryMatrix32 = UnitaryMatrix<f32>;
pub type SchmidtSpectrum32 = SchmidtSpectrum<f32>;
pub type EncodingFamily32 = EncodingFamily<f32>;
