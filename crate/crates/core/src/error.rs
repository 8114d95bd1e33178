use thiserror::Error;

use crate::network::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("at least {needed} points required, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("coordinate is not finite")]
    NonFinite,
    #[error("cannot parse number `{0}`")]
    Parse(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("zero-length segment")]
    ZeroLengthSegment,
    #[error("unknown edge {0}")]
    UnknownEdge(usize),
    #[error("unknown vertex id {0}")]
    UnknownVertex(u64),
    #[error("duplicate vertex id {0}")]
    DuplicateVertexId(u64),
    #[error("parameter {0} outside [0,1]")]
    ParameterOutOfRange(f64),
    #[error("invalid network: {0:?}")]
    InvalidNetwork(Vec<Violation>),
    #[error("segment endpoint ({x}, {y}) is not on the locus")]
    EndpointOffLocus { x: f64, y: f64 },
    #[error("segment overlaps an edge collinearly")]
    DegenerateOverlap,
    #[error("segment {index} is not anchored on the locus or on earlier segments")]
    ChainingViolation { index: usize },
    #[error("network is disconnected")]
    Disconnected,
    #[error("network is connected")]
    Connected,
    #[error("network admits no shortcut set")]
    NoShortcutSet,
    #[error("verification failed after {attempts} attempts: {detail}")]
    VerificationExhausted { attempts: usize, detail: String },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("network is not a simple cycle")]
    NotACycle,
    #[error("polygon is convex")]
    NotNonConvex,
    #[error("network is not a plane K4")]
    NotK4,
    #[error("malformed CNF: {0}")]
    MalformedCnf(String),
    #[error("no valid gadget placement after {attempts} attempts (seed {seed})")]
    RetryBudgetExhausted { attempts: usize, seed: u64 },
    #[error("instance too large: {0}")]
    TooLarge(String),
}

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyInput => "EmptyInput",
            Error::TooFewPoints { .. } => "TooFewPoints",
            Error::NonFinite => "NonFinite",
            Error::Parse(_) => "Parse",
            Error::Malformed(_) => "Malformed",
            Error::ZeroLengthSegment => "ZeroLengthSegment",
            Error::UnknownEdge(_) => "UnknownEdge",
            Error::UnknownVertex(_) => "UnknownVertex",
            Error::DuplicateVertexId(_) => "DuplicateVertexId",
            Error::ParameterOutOfRange(_) => "ParameterOutOfRange",
            Error::InvalidNetwork(_) => "InvalidNetwork",
            Error::EndpointOffLocus { .. } => "EndpointOffLocus",
            Error::DegenerateOverlap => "DegenerateOverlap",
            Error::ChainingViolation { .. } => "ChainingViolation",
            Error::Disconnected => "Disconnected",
            Error::Connected => "Connected",
            Error::NoShortcutSet => "NoShortcutSet",
            Error::VerificationExhausted { .. } => "VerificationExhausted",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::NotACycle => "NotACycle",
            Error::NotNonConvex => "NotNonConvex",
            Error::NotK4 => "NotK4",
            Error::MalformedCnf(_) => "MalformedCnf",
            Error::RetryBudgetExhausted { .. } => "RetryBudgetExhausted",
            Error::TooLarge(_) => "TooLarge",
        }
    }

    /// True for failures caused by the caller's input rather than by this library.
    pub fn is_user_error(&self) -> bool {
        !matches!(self, Error::VerificationExhausted { .. })
    }
}
