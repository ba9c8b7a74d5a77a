use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("network needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),

    #[error("mean degree {z} is out of range for {n} nodes (admissible: 0 <= z <= {max})")]
    MeanDegreeOutOfRange { z: f64, n: usize, max: f64 },

    #[error("mean degree {z} is unreachable under degree cutoff {cutoff} (supremum {supremum:.4})")]
    UnreachableMeanDegree { z: f64, cutoff: usize, supremum: f64 },

    #[error("tail exponent must exceed 2, got {0}")]
    InvalidExponent(f64),

    #[error("edge ({debtor}, {creditor}) is invalid: {reason}")]
    InvalidEdge {
        debtor: usize,
        creditor: usize,
        reason: &'static str,
    },

    #[error("rewiring needs at least 2 edges, network has {0}")]
    TooFewEdges(usize),

    #[error("sweeps must be at least 1")]
    ZeroSweeps,

    #[error("degree assortativity is undefined: endpoint degrees have zero variance")]
    ZeroVariance,

    #[error("invalid sheet scheme: {0}")]
    InvalidScheme(String),

    #[error("capital buffer fraction must be positive, got {0}")]
    InvalidBuffer(f64),

    #[error("fraction must lie in (0, 1], got {0}")]
    InvalidFraction(f64),

    #[error("bank index {index} out of range for {n} banks")]
    BankOutOfRange { index: usize, n: usize },

    #[error("balance sheets describe {sheets_banks} banks / {sheets_edges} edges, network has {net_banks} / {net_edges}")]
    SizeMismatch {
        sheets_banks: usize,
        sheets_edges: usize,
        net_banks: usize,
        net_edges: usize,
    },

    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),

    #[error("at least one trial record is required")]
    NoRecords,

    #[error("specs differ in more than the policy: {0}")]
    MismatchedSpecs(String),

    #[error("edge list line {line}: {message}")]
    EdgeListParse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
