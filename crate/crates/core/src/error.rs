use thiserror::Error;

/// Errors produced by construction, evaluation and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed scalar literal `{0}`")]
    MalformedScalar(String),

    #[error("zero denominator in rational literal `{0}`")]
    ZeroDenominator(String),

    #[error("complex literal `{0}` is not representable in the exact backend")]
    ComplexInExactBackend(String),

    #[error("division by a zero scalar")]
    DivisionByZero,

    #[error("floating-point operation produced a non-finite value")]
    NonFinite,

    #[error("`{0}` is only available in the floating-point backend")]
    ExactBackendUnsupported(&'static str),

    #[error("q must not be 0, 1 or -1")]
    InvalidQ,

    #[error("eigenvalue collision: h[{j}] = h[{k}]")]
    HCollision { j: i64, k: i64 },

    #[error("step value g[{k}] is zero; the requested operation divides by it")]
    GZero { k: usize },

    #[error("repeated node: x[{i}] = x[{j}]")]
    RepeatedNode { i: usize, j: usize },

    #[error("explicit sequence has {have} terms, index {index} requested")]
    SequenceTooShort { index: i64, have: usize },

    #[error("degenerate linear system: {0}")]
    DegenerateSystem(String),

    #[error(
        "closed-form denominator vanished at n = {n}; \
         fall back to the matrix route (extract_recurrence)"
    )]
    ClosedFormDenominatorZero { n: usize },

    #[error("the differential-equation check requires b0 = b1 = b2 = 0")]
    RequiresMonomialNodes,

    #[error("moment sequence too short: need {needed} values, have {have}")]
    InsufficientMoments { needed: usize, have: usize },

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("family `{family}` is missing parameter `{slot}`")]
    MissingFamilyValue { family: String, slot: String },

    #[error("family `{family}` does not take a parameter named `{slot}`")]
    UnknownFamilyValue { family: String, slot: String },

    #[error("scale parameter must be nonzero")]
    ZeroScale,

    #[error("invalid parameter file: {0}")]
    InvalidParamFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
