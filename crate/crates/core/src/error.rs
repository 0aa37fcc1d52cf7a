use thiserror::Error;

use crate::graph::{NodeId, ValidationReport};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(ValidationReport),

    #[error("edge set is not a tree: {0}")]
    NotATree(String),

    #[error("unknown edge id {0}")]
    UnknownEdge(usize),

    #[error("terminal {0} is not covered by the tree")]
    MissingTerminal(NodeId),

    #[error("invalid terminal set: {0}")]
    InvalidTerminals(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("arithmetic overflow while aggregating costs")]
    Overflow,

    #[error("instance exceeds enumeration cap ({what}: {actual} > {cap})")]
    CapExceeded {
        what: &'static str,
        actual: usize,
        cap: usize,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, Error::Infeasible(_))
    }
}
