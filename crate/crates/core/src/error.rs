use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid Pauli character {0:?}")]
    InvalidPauliChar(char),

    #[error("empty Pauli string")]
    EmptyPauli,

    #[error("index {index} out of range for {len} qubits")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("positions must be distinct, got ({0}, {0})")]
    RepeatedPosition(usize),

    #[error("graph parse error on line {line}: {message}")]
    GraphParse { line: usize, message: String },

    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("coloring is not proper: edge ({0}, {1}) is monochromatic")]
    ImproperColoring(usize, usize),

    #[error("coloring uses {0} colors, at most 4 are supported by the nine-basis table")]
    TooManyColors(usize),

    #[error("coloring covers {found} vertices, graph has {expected}")]
    ColoringSize { expected: usize, found: usize },

    #[error("complete-graph construction needs n >= 4 (got {0}); use the nine-basis table for smaller cliques")]
    KnTooSmall(usize),

    #[error("graph has no edges, nothing to cover")]
    EdgelessGraph,

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("negative rate {0}")]
    NegativeRate(f64),

    #[error("invalid rate range [{lo}, {hi}]")]
    InvalidRateRange { lo: f64, hi: f64 },

    #[error("term {0} has weight 0")]
    IdentityTerm(String),

    #[error("duplicate term {0}")]
    DuplicateTerm(String),

    #[error("dense oracle supports at most 4 qubits, got {0}")]
    OracleTooLarge(usize),

    #[error("fidelity {value} for {pauli} outside (0, 1]")]
    FidelityOutOfRange { pauli: String, value: f64 },

    #[error("empty fidelity table")]
    EmptyFidelities,

    #[error("empty term list")]
    EmptyTerms,

    #[error("decay curve for {0} has fewer than two usable points")]
    CurveUnusable(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("json: {0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
