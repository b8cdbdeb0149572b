use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: expected two node tokens, found {found}")]
    Parse { line: usize, found: usize },

    #[error("no edges")]
    NoEdges,

    #[error("node id {id} out of range for graph with {n} nodes")]
    NodeOutOfRange { id: usize, n: usize },

    #[error("invalid node pair ({0}, {0}): endpoints must differ")]
    SelfPair(usize),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{m} edges exceed the {universe} node pairs of a {n}-node graph")]
    TooManyEdges { n: u64, m: u64, universe: u64 },

    #[error("graph has no unobserved links")]
    NoUnobservedLinks,

    #[error("requested {requested} unobserved links but only {available} exist")]
    SampleTooLarge { requested: u64, available: u64 },

    #[error("pair ({x}, {y}) at index {index} is an edge of the scoring graph")]
    PairIsEdge { index: usize, x: usize, y: usize },

    #[error("test set overlap: pair ({x}, {y}) {reason}")]
    Overlap {
        x: usize,
        y: usize,
        reason: &'static str,
    },

    #[error("empty score list: {0}")]
    EmptyScores(&'static str),

    #[error("non-finite score")]
    NonFiniteScore,

    #[error("unknown predictor `{0}`")]
    UnknownPredictor(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
