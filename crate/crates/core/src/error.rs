use thiserror::Error;

/// Errors raised by series, transducer and order operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("letter '{letter}' is not in the alphabet {alphabet}")]
    UnknownLetter { letter: char, alphabet: String },

    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: String, right: String },

    #[error("non-integer value {value} on word {word}")]
    NonInteger { value: String, word: String },

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// No decision procedure exists for the requested (alphabet, level, class).
    #[error("membership oracle unavailable: {0}")]
    OracleUnavailable(String),

    #[error("invalid transducer: {0}")]
    InvalidTransducer(String),

    #[error("formula parse error at offset {offset}: {message}")]
    FormulaParse { offset: usize, message: String },

    #[error("malformed spec: {0}")]
    Spec(String),

    #[error("unknown gallery entry '{0}'")]
    UnknownEntry(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
