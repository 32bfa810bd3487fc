//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("Koranyi inversion at the origin")]
    InversionAtOrigin,
    #[error("point at infinity has no planar coordinates")]
    PointAtInfinity,
    #[error("scalar backends do not match")]
    BackendMismatch,
    #[error("not a lattice point: {0}")]
    NonLatticePoint(String),
    #[error("matrix does not satisfy M^dagger J M = J")]
    NotUnitary,
    #[error("conjugation is not available for this scalar")]
    ConjugationUnavailable,
    #[error("precision cap of {bits} bits exhausted without a decision")]
    PrecisionExhausted { bits: u32 },
    #[error("ball value is indeterminate: {0}")]
    Indeterminate(String),
    #[error("matrix is a root of unity (order {order})")]
    TorsionMatrix { order: u64 },
    #[error("degenerate orbit: intermediate point has v = 0 at step {step}")]
    DegenerateOrbit { step: usize },
    #[error("certification failed: {0}")]
    CertificationFailed(String),
    #[error("no suitable eigenvector: {0}")]
    SelectionError(String),
    #[error("no period found within {steps} steps")]
    NotFound { steps: usize },
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
