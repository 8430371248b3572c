use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("operator `{op}` is not available in logic `{logic}`")]
    LogicMismatch { op: String, logic: String },
    #[error("unknown logic `{0}`")]
    UnknownLogic(String),
    #[error("atom `{0}` has no sign")]
    MissingAtom(String),
    #[error("`{0}` is not a letter of the carrier alphabet")]
    UnknownLetter(String),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("strategies disagree on `{0}`")]
    StrategyDisagreement(String),
    #[error("malformed model: {0}")]
    MalformedModel(String),
    #[error("witness schema: {0}")]
    Schema(String),
    #[error("frame condition violated: {0}")]
    FrameCondition(String),
    #[error("internal error: {0}")]
    Internal(String),
}
