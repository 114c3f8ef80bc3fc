use thiserror::Error;

/// Unified error type for every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("value out of range: {0}")]
    Range(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("unsupported hash algorithm id {0}")]
    UnsupportedHash(u8),

    #[error("unsupported signature algorithm id {0}")]
    UnsupportedSignature(u8),

    #[error("statement unsatisfiable at slot {slot}: {detail}")]
    UnsatisfiableStatement { slot: usize, detail: String },

    #[error("witness does not satisfy the constraint system (first failing constraint: {0})")]
    UnsatisfiedConstraints(String),

    #[error("key does not match inputs: {0}")]
    KeyMismatch(String),

    #[error("missing attribute for slot \"{0}\"")]
    MissingAttribute(String),

    #[error("unknown slot \"{0}\"")]
    UnknownSlot(String),

    #[error("duplicate clause for slot {0}")]
    DuplicateClause(usize),

    #[error("predicates on the nonce slot are not allowed")]
    NoncePredicateForbidden,

    #[error("record blob too large: {size} bytes exceeds cap of {cap}")]
    OversizeBlob { size: usize, cap: usize },

    #[error("not found: {0}")]
    NotFound(String),

    #[error("record signature invalid: {0}")]
    InvalidRecordSignature(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("proof backend failure: {0}")]
    Backend(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Malformed(format!("json: {e}"))
    }
}

impl From<ark_relations::r1cs::SynthesisError> for Error {
    fn from(e: ark_relations::r1cs::SynthesisError) -> Self {
        Error::Backend(format!("synthesis: {e}"))
    }
}

impl From<ark_serialize::SerializationError> for Error {
    fn from(e: ark_serialize::SerializationError) -> Self {
        Error::Malformed(format!("serialization: {e}"))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
