use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A numeric argument fell outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("duplicate element `{0}`")]
    DuplicateElement(String),

    #[error("element `{0}` cannot observe itself")]
    SelfObservation(String),

    #[error("observation {observer} -> {observed} already present")]
    DuplicateEdge { observer: String, observed: String },

    #[error("observation order index {0} used twice")]
    DuplicateOrder(u32),

    #[error("network does not have the gate shape: {0}")]
    NotAGateNetwork(String),

    #[error("unsupported size: {0}")]
    Unsupported(String),

    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("invalid netlist: {0}")]
    Netlist(String),

    #[error("missing assignment for input `{0}`")]
    MissingAssignment(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
