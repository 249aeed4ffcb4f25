use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("length scale must be positive and finite, got {0}")]
    InvalidLength(f64),
    #[error("wave function is not balanced (not block-diagonal in total occupation)")]
    Unbalanced,
    #[error("operands live on different bases or length scales")]
    BasisMismatch,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid angular labels j={j}, m={m}: {reason}")]
    InvalidWaveSpec { j: f64, m: f64, reason: String },
    #[error("fock level {level} outside 0..={nmax}")]
    LevelOutOfRange { level: usize, nmax: usize },
    #[error("principal quantum number must be at least 1")]
    ZeroPrincipal,
    #[error("branch {branch} has no bound states for q = {q}")]
    NoBoundBranch { branch: &'static str, q: f64 },
    #[error("hypergeometric lower parameter {0} is a non-positive integer")]
    InvalidHypergeometric(f64),
    #[error("log-gamma pole at {re}+{im}i")]
    GammaPole { re: f64, im: f64 },
    #[error("energy {energy} outside the {window} window")]
    EnergyOutOfWindow { energy: f64, window: &'static str },
    #[error("truncation too small: tail estimate {tail:e} exceeds {tolerance:e} (need nmax >= {required})")]
    InadequateTruncation { tail: f64, tolerance: f64, required: usize },
    #[error("radial block is not hermitian: asymmetry {0:e}")]
    NonHermitianBlock(f64),
    #[error("radial block is not tridiagonal: coupling {value:e} between levels {a} and {b}")]
    NotBanded { a: usize, b: usize, value: f64 },
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unbound index '{0}'")]
    UnboundIndex(String),
    #[error("{0}")]
    Symbolic(String),
}

pub type Result<T> = std::result::Result<T, Error>;
