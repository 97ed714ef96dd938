use thiserror::Error;

/// Everything that can go wrong across the library.
///
/// Graph validation errors name the offending element so the CLI can report
/// them verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("vertex `{0}` has no incident edge")]
    IsolatedVertex(String),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(String, String),
    #[error("duplicate vertex label `{0}`")]
    DuplicateLabel(String),
    #[error("edge refers to unknown vertex `{0}`")]
    UnknownLabel(String),
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("{what} is {size}, above the cap of {cap}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("graph is not unmixed")]
    NotUnmixed,
    #[error("graph is not Cohen-Macaulay")]
    NotCohenMacaulay,
    #[error("directed graph is not transitively closed")]
    NotTransitivelyClosed,
    #[error("directed graph is not a poset: {0}")]
    NotAPoset(String),
    #[error("poset does not embed in the plane: {0}")]
    NotTwoDimensional(Obstruction),
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("vertices {0} and {1} share the same point")]
    CoordinateTie(usize, usize),
    #[error("bad weights: {0}")]
    BadWeights(String),
    #[error("time budget of {budget_millis} ms exhausted")]
    Timeout { budget_millis: u64 },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Witness that the incomparability graph of a poset has no transitive
/// orientation: the incomparable pair on which every orientation choice
/// led to a forcing conflict, together with the full incomparability edge
/// list the search ran on.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Obstruction {
    pub conflict_pair: (usize, usize),
    pub incomparable_pairs: Vec<(usize, usize)>,
}

impl std::fmt::Display for Obstruction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "incomparability graph ({} edges) has no transitive orientation; both orientations of {{{}, {}}} conflict",
            self.incomparable_pairs.len(),
            self.conflict_pair.0,
            self.conflict_pair.1
        )
    }
}

pub(crate) fn violation(msg: impl Into<String>) -> Error {
    Error::InvariantViolation(msg.into())
}
