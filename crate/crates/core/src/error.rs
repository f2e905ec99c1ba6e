use thiserror::Error;

use crate::halfint::HalfInt;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("negative spin {0}")]
    NegativeSpin(HalfInt),

    #[error("axis is not a unit vector (norm {norm})")]
    NonUnitAxis { norm: f64 },

    #[error("spin {j} is not contained in {a} ⊗ {b}")]
    Triangle { a: HalfInt, b: HalfInt, j: HalfInt },

    #[error("representation {name}: {reason}")]
    InvalidRep { name: String, reason: String },

    #[error("spin {j} occurs with multiplicity {found} in {rep} (exactly one required)")]
    Multiplicity { rep: String, j: HalfInt, found: usize },

    #[error("momentum {p:?} is off the mass shell for m = {m} (defect {defect:.3e})")]
    OffShell { p: [f64; 4], m: f64, defect: f64 },

    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),

    #[error("Casimir eigenvalue {value} does not match any K(K+1) within tolerance")]
    CasimirCluster { value: f64 },

    #[error("Casimir eigenvalue K = {k} appears {count} times among invariant matrices")]
    DegenerateCasimir { k: HalfInt, count: usize },

    #[error("invariant K values {found:?} differ from the predicted range {expected:?}")]
    KRange { expected: Vec<HalfInt>, found: Vec<HalfInt> },

    #[error("K = {0} is not an invariant-seed value for this pair")]
    NoSeed(HalfInt),

    #[error("tensor fit failed: {0}")]
    Fit(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("representation {0} has no (A, B) label")]
    Unlabeled(String),

    #[error("inconsistent parity: {0}")]
    Parity(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("singular matrix")]
    Singular,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
