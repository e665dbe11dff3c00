use std::fmt;

use thiserror::Error;

/// Position in a source document. Lines and columns are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("transition {0} is not enabled")]
    NotEnabled(String),
    #[error("unknown transition {0}")]
    UnknownTransition(String),
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("node id {0} is already used")]
    DuplicateNode(String),
    #[error("marking refers to unknown place {0}")]
    UnknownPlace(String),
    #[error("explored more than {0} distinct markings")]
    StateSpaceExceeded(usize),
    #[error("prefix grew beyond {0} events")]
    EventBoundExceeded(usize),

    #[error("parse error at {location}: {message}")]
    Parse { location: Location, message: String },
    #[error("arc {from} -> {to} at {location} does not connect a place and a transition")]
    BipartiteViolation {
        from: String,
        to: String,
        location: Location,
    },
    #[error("arc {from} -> {to} does not connect a place and a transition")]
    NotBipartite { from: String, to: String },
    #[error("duplicate id {id} at {location}")]
    DuplicateId { id: String, location: Location },

    #[error("net is not connected")]
    DisconnectedNet,
    #[error("net has no nodes")]
    EmptyNet,

    #[error("segment {segment} fails token replay: {witness}")]
    ReplayViolation { segment: String, witness: String },
    #[error("segments are not linkable: exits {exits:?} do not cover entries {entries:?}")]
    NotLinkable {
        exits: Vec<String>,
        entries: Vec<String>,
    },

    #[error("empty label")]
    EmptyLabel,
    #[error("label of {transition}: {source}")]
    Label {
        transition: String,
        #[source]
        source: Box<Error>,
    },
    #[error("lexicon line {line}: {message}")]
    Lexicon { line: usize, message: String },

    #[error("no template for {0}")]
    NoTemplate(String),
    #[error("template catalog: {0}")]
    Catalog(String),
    #[error("incomplete deep-syntactic tree at {0}")]
    IncompleteDsynt(String),

    #[error("distribution has zero variance")]
    ZeroVariance,
    #[error("need at least two activities, got {0}")]
    TooFewActivities(usize),
    #[error("distributions differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("generated document lacks provenance: {0}")]
    MissingProvenance(String),

    #[error("unknown stage {0}")]
    UnknownStage(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("recursion into simplified components exceeded depth {0}")]
    RecursionLimit(usize),
    #[error("{phase}: {source}")]
    Phase {
        phase: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            location: Location { line, column },
            message: message.into(),
        }
    }

    pub(crate) fn in_phase(self, phase: &'static str) -> Self {
        match self {
            e @ Error::Phase { .. } => e,
            e => Error::Phase {
                phase,
                source: Box::new(e),
            },
        }
    }

    /// The innermost error, skipping phase wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Phase { source, .. } => source.root(),
            e => e,
        }
    }

    /// True for errors caused by the input document rather than by the
    /// pipeline itself.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self.root(),
            Error::Parse { .. }
                | Error::BipartiteViolation { .. }
                | Error::NotBipartite { .. }
                | Error::DuplicateId { .. }
                | Error::DuplicateNode(_)
                | Error::UnknownNode(_)
                | Error::UnknownPlace(_)
                | Error::UnknownTransition(_)
                | Error::DisconnectedNet
                | Error::EmptyNet
                | Error::EmptyLabel
                | Error::Label { .. }
                | Error::Lexicon { .. }
                | Error::Catalog(_)
                | Error::StateSpaceExceeded(_)
                | Error::EventBoundExceeded(_)
                | Error::UnknownStage(_)
                | Error::InvalidConfig(_)
                | Error::MissingProvenance(_)
                | Error::Io(_)
                | Error::Json(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
