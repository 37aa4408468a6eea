use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("parameter `{param}` of `{family}` is outside {domain}")]
    ParamOutOfDomain { family: String, param: String, domain: String },
    #[error("affine scale must be nonzero")]
    DegenerateScale,
    #[error("mixture weights must be nonnegative and sum to 1 (sum = {0})")]
    WeightSumError(f64),
    #[error("cannot combine continuous and lattice components")]
    MixedKinds,
    #[error("conditioning event has zero probability")]
    EmptyTail,
    #[error("operation not supported for this kind of law: {0}")]
    UnsupportedKind(String),
    #[error("point {0} lies outside the support")]
    OutsideSupport(f64),
    #[error("survival function vanishes at {0}")]
    TailExhausted(f64),
    #[error("distribution function vanishes at {0}")]
    HeadExhausted(f64),
    #[error("tail integral diverges")]
    DivergentTail,
    #[error("scan grid is empty")]
    GridEmpty,
    #[error("required moment is infinite")]
    DivergentMoment,
    #[error("|X - X'| has no mass above {0}")]
    DegenerateY(f64),
    #[error("operation requires a lattice law")]
    ContinuousInput,
    #[error("certificate `{basis}` contradicts numeric SD - GMD = {diff}")]
    ConsistencyViolation { basis: String, diff: f64 },
    #[error("criterion never holds on the scanned range")]
    CriterionNeverHolds,
    #[error("no sampler available: {0}")]
    SamplingUnavailable(String),
    #[error("lattice support has {0} points, above the brute-force limit")]
    SupportTooLarge(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable short name, echoed by the command-line tool.
    pub fn name(&self) -> &'static str {
        match self {
            Error::UnknownFamily(_) => "UnknownFamily",
            Error::ParamOutOfDomain { .. } => "ParamOutOfDomain",
            Error::DegenerateScale => "DegenerateScale",
            Error::WeightSumError(_) => "WeightSumError",
            Error::MixedKinds => "MixedKinds",
            Error::EmptyTail => "EmptyTail",
            Error::UnsupportedKind(_) => "UnsupportedKind",
            Error::OutsideSupport(_) => "OutsideSupport",
            Error::TailExhausted(_) => "TailExhausted",
            Error::HeadExhausted(_) => "HeadExhausted",
            Error::DivergentTail => "DivergentTail",
            Error::GridEmpty => "GridEmpty",
            Error::DivergentMoment => "DivergentMoment",
            Error::DegenerateY(_) => "DegenerateY",
            Error::ContinuousInput => "ContinuousInput",
            Error::ConsistencyViolation { .. } => "ConsistencyViolation",
            Error::CriterionNeverHolds => "CriterionNeverHolds",
            Error::SamplingUnavailable(_) => "SamplingUnavailable",
            Error::SupportTooLarge(_) => "SupportTooLarge",
            Error::Parse(_) => "ParseError",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
