use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what}: requested {requested}, cap is {cap}")]
    SizeLimit {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("cannot compose: {0}")]
    Composition(String),

    #[error("space mismatch: expected {expected}, found {found}")]
    SpaceMismatch { expected: String, found: String },

    #[error("cannot invert: arity-1 component is not declared to be the identity")]
    NotUnital,

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("malformed space: {0}")]
    MalformedSpace(String),

    #[error("element is not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("a symmetric word needs at least one entry")]
    EmptyWord,

    #[error("value {index} is not closed: d = {image}")]
    NotClosed { index: usize, image: String },

    #[error("not an L-infinity morphism: {0}")]
    NotMorphism(String),

    #[error("arity out of range: {0}")]
    Arity(String),

    #[error("invalid homotopy: {0}")]
    Shape(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
