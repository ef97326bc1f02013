use thiserror::Error;

use crate::model::Violation;
use crate::syntax::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("unknown agent `{0}`")]
    UnknownAgent(String),

    #[error("{0}")]
    Syntax(#[from] ParseError),

    #[error("invalid model: {}", join_violations(.0))]
    InvalidModel(Vec<Violation>),

    #[error("announcement of `{0}` leaves no states")]
    EmptyAnnouncement(String),

    #[error("formula `{formula}` is outside the fragment {fragment}")]
    OutsideFragment { formula: String, fragment: String },

    #[error("models have different agent sets: {left:?} vs {right:?}")]
    AgentMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },

    #[error("state pair ({0}, {1}) does not belong to the models")]
    BadPair(String, String),

    #[error("definable-pair family exceeded the cap of {cap} pairs")]
    FamilyCap { cap: usize },

    #[error("malformed model document: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Resource exhaustion, as opposed to bad input.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::FamilyCap { .. })
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
