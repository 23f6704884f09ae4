use thiserror::Error;

/// Errors raised by toolkit operations. Verdicts (a check that ran and
/// failed) are reported in result structs, never as errors.
#[derive(Debug, Error)]
pub enum GeomError {
    #[error("schema error at line {line}, column {column}: {message}")]
    Schema {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unknown point {0}")]
    UnknownPoint(String),
    #[error("points {0} and {1} lie in different components")]
    Disconnected(usize, usize),
    #[error("requested slack {requested} is below the net resolution floor {floor}")]
    BelowResolution { requested: f64, floor: f64 },
    #[error("inadmissible: {0}")]
    Inadmissible(String),
    #[error("{what} = {value} is out of range [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("horizon too short: {0}")]
    Horizon(String),
    #[error("exact enumeration needs {needed} labelings, above the guard of {limit}")]
    TooLarge { needed: u128, limit: u128 },
    #[error("space has no points")]
    Empty,
    #[error("unknown {kind} `{name}`; available: {available}")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },
    #[error("net resolution gate failed: {0}")]
    Resolution(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl GeomError {
    pub(crate) fn schema(err: serde_json::Error) -> Self {
        GeomError::Schema {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, GeomError>;
