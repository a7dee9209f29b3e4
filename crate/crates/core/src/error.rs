use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("undeclared relation symbol `{0}`")]
    Undeclared(String),
    #[error("invalid vocabulary: {0}")]
    Vocabulary(String),
    #[error("expected a 0-ary term, found arity {0}")]
    NotSentence(usize),
    #[error("operator set {found} is outside {expected}")]
    Fragment { found: String, expected: String },
    #[error("similarity is not characterized for operator set {0}")]
    UnsupportedSimilarity(String),
    #[error("unbound free variable v{0}")]
    Unbound(usize),
    #[error("not an ordered-logic formula: {0}")]
    NotOrdered(String),
    #[error("invalid structure: {0}")]
    Structure(String),
    #[error("normal form: {0}")]
    NormalForm(String),
    #[error("no bounded-model theorem covers {0}")]
    NoBound(String),
    #[error("{0}")]
    Input(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
