use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("outside the domain: {0}")]
    Domain(String),

    #[error("pole of Tan_kappa at x = {x} (|Cos_kappa| = {cos:e})")]
    Pole { x: f64, cos: f64 },

    #[error("singular barrier: {0}")]
    Singularity(String),

    #[error("polar chart undefined at the origin")]
    Origin,

    #[error("state kind mismatch: expected {expected}, got {found}")]
    KindMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("trajectory left the domain at t = {t} (1 + lambda r^2 = {metric:e})")]
    DomainExit { t: f64, metric: f64 },

    #[error("integration stopped after {0} steps before reaching t_end")]
    MaxStepsExceeded(usize),

    #[error("only {found} velocity zero crossings, need at least {needed}")]
    InsufficientCycles { found: usize, needed: usize },

    #[error("grid too coarse: truncation estimate {estimate:e} exceeds {tolerance:e}")]
    GridTooCoarse { estimate: f64, tolerance: f64 },

    #[error("level {n} is not a bound state (largest admitted index {max})")]
    NotBoundState { n: u64, max: u64 },

    #[error("state not normalizable (beta = {beta}, lambda = {lambda})")]
    NotNormalizable { beta: f64, lambda: f64 },

    #[error("G is not real: radicand {0:e} < 0")]
    ImaginaryG(f64),

    #[error("recursion degenerates at degree {degree} before reaching {target}")]
    DegenerateRecursion { degree: usize, target: usize },

    #[error("two-grid discrepancy {difference:e} for level {level} exceeds {tolerance:e}")]
    Convergence {
        level: usize,
        difference: f64,
        tolerance: f64,
    },

    #[error("chart {0} has no separable integrals")]
    UnsupportedChart(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Short machine-readable tag, used by the CLI on stderr.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Pole { .. } => "pole",
            Error::Singularity(_) => "singularity",
            Error::Origin => "origin",
            Error::KindMismatch { .. } => "kind_mismatch",
            Error::DomainExit { .. } => "domain_exit",
            Error::MaxStepsExceeded(_) => "max_steps_exceeded",
            Error::InsufficientCycles { .. } => "insufficient_cycles",
            Error::GridTooCoarse { .. } => "grid_too_coarse",
            Error::NotBoundState { .. } => "not_bound_state",
            Error::NotNormalizable { .. } => "not_normalizable",
            Error::ImaginaryG(_) => "imaginary_g",
            Error::DegenerateRecursion { .. } => "degenerate_recursion",
            Error::Convergence { .. } => "convergence",
            Error::UnsupportedChart(_) => "unsupported_chart",
            Error::InvalidArgument(_) => "invalid_argument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

/// `1 + lambda r^2`, rejected when not strictly positive.
pub(crate) fn metric_factor(lambda: f64, r2: f64) -> Result<f64> {
    let c = 1.0 + lambda * r2;
    if c > 0.0 && c.is_finite() {
        Ok(c)
    } else {
        Err(domain(format!(
            "1 + lambda r^2 = {c} with lambda = {lambda}, r^2 = {r2}"
        )))
    }
}
