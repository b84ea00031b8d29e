use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("character has a pole at this point: {0}")]
    PoleAtCharacter(String),
    #[error("J is not a subset of N(t)")]
    JNotSubsetOfN,
    #[error("character is not regular")]
    IrregularCharacter,
    #[error("denominator vanishes: {0}")]
    DenominatorVanishes(String),
    #[error("module is not calibratable: {0}")]
    NotCalibratable(String),
    #[error("F_J(t) is empty")]
    EmptyF,
    #[error("invalid one-dimensional character: {0}")]
    InvalidOneDimCharacter(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("quadrature node hits a singularity")]
    SingularNode,
    #[error("parameters sit on an uncovered boundary: {0}")]
    BoundaryParameters(String),
    #[error("syntax error at byte {offset}: {msg}")]
    Syntax { offset: usize, msg: String },
    #[error("unknown generator at byte {offset}: {name}")]
    UnknownGenerator { offset: usize, name: String },
    #[error("bad exponent vector at byte {offset}: expected {expected} entries, got {got}")]
    BadExponentVector {
        offset: usize,
        expected: usize,
        got: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
