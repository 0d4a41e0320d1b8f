use alloc::string::String;

/// Errors raised by the numerical and measure-theoretic routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("transform size {0} is not a power of two >= 4")]
    Size(usize),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("target {y} is outside the bracket [{lo}, {hi}]")]
    Bracket { y: f64, lo: f64, hi: f64 },
    #[error("evaluation at the singular point t = 0")]
    Singularity,
    #[error("point {0} lies outside the closed unit disc")]
    Domain(f64),
    #[error("principal branch violated: {0}")]
    Branch(String),
    #[error("degenerate profile: {0}")]
    DegenerateProfile(String),
    #[error("method not applicable: {0}")]
    Inapplicable(String),
    #[error("unresolved discretization: {msg} (suggested size {suggested})")]
    Resolution { msg: String, suggested: usize },
    #[error("node {index} has unit modulus")]
    SingularNode { index: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = core::result::Result<T, Error>;
