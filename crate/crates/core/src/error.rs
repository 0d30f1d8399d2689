use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown index symbol `{0}`")]
    UnknownIndex(String),

    #[error("index `{0}` is not interpreted in the frame")]
    UninterpretedIndex(String),

    #[error("{what} exceeds the configured cap ({required} > {cap})")]
    CapExceeded {
        what: &'static str,
        required: u64,
        cap: u64,
    },

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("alphabet clash on index `{0}`")]
    AlphabetClash(String),

    #[error("world count mismatch: expected {expected}, found {found}")]
    WorldCountMismatch { expected: usize, found: usize },

    #[error("partition does not respect Γ: class {class} disagrees on `{formula}`")]
    PartitionDoesNotRespectGamma { class: usize, formula: String },

    #[error("recipe violation: {0}")]
    RecipeViolation(String),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("induced equivalence of component {component} differs from the Γ-equivalence")]
    EquivalenceMismatch { component: usize },

    #[error("recipe mismatch: {0}")]
    RecipeMismatch(String),

    #[error("unsupported logic: {0}")]
    UnsupportedLogic(String),

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("unknown relation symbol `{0}`")]
    UnknownRelationSymbol(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

impl Error {
    pub(crate) fn syntax(position: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            position,
            message: message.into(),
        }
    }

    pub fn is_cap_exceeded(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}
