use thiserror::Error;

/// Errors shared by all solver and grid modules.
#[derive(Debug, Error)]
pub enum HenonError {
    #[error("dimension N={n} too small: {context}")]
    DimensionTooSmall { n: i32, context: String },

    #[error("weight exponent {a} out of range (must be > -N = {min})")]
    WeightOutOfRange { a: f64, min: f64 },

    #[error("weight |x|^{a} is not integrable on the unit ball (need a > -N = {min})")]
    WeightNotIntegrable { a: f64, min: f64 },

    #[error("grid too coarse: {context}")]
    GridTooCoarse { context: String },

    #[error("weighted denominator underflows to zero")]
    ZeroDenominator,

    #[error("exponent p={p} is supercritical: p+1 must stay below {limit}")]
    SupercriticalExponent { p: f64, limit: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("ratio never exceeded the symmetry-breaking threshold on [{lo}, {hi}]")]
    NotBracketed { lo: f64, hi: f64 },

    #[error("-Laplacian of u dips below -{tol} (min value {min}); iterate is not superharmonic")]
    NegativeLaplacianBeyondTol { min: f64, tol: f64 },

    #[error("pair does not solve the Euler-Lagrange system: relative residual {residual} > {tol}")]
    NotASolution { residual: f64, tol: f64 },

    #[error("degenerate exponent: q+1 coincides with (N+beta)/(N-2)")]
    DegenerateExponent,

    #[error("log-log fit requires positive data with at least 4 points: {context}")]
    NonPositiveData { context: String },

    #[error("invalid problem specification: {0}")]
    InvalidSpec(String),

    #[error("file format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, HenonError>;
