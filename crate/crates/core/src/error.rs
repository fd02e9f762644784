use thiserror::Error;

/// Errors raised by the dense-coding library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not unitary (defect {defect:e})")]
    NotUnitary { defect: f64 },

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("input vectors are not orthonormal (Gram defect {defect:e})")]
    InputNotOrthonormal { defect: f64 },

    #[error("invalid Schmidt spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("invalid encoding family: {0}")]
    InvalidFamily(String),

    #[error("family is not Lambda-orthogonal (worst pair residual {residual:e})")]
    FamilyNotOrthogonal { residual: f64 },

    #[error("spectrum contains a zero Schmidt coefficient")]
    SpectrumHasZero,

    #[error("spectrum is not uniform (max deviation from 1/d is {deviation:e})")]
    SpectrumNotUniform { deviation: f64 },

    #[error("completion matrix is not unitary (defect {defect:e})")]
    CompletionNotUnitary { defect: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("pinned members are not Lambda-orthogonal (worst pair residual {residual:e})")]
    PinnedNotOrthogonal { residual: f64 },

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
