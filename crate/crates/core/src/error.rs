use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("not a partial order: {a} and {b} lie on a cycle")]
    NotAPoset { a: String, b: String },

    #[error("not a lattice: {a} and {b} have no {kind}")]
    NotALattice {
        a: String,
        b: String,
        kind: &'static str,
    },

    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),

    #[error("catalog parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("map is not join-preserving: {0}")]
    NotLinear(String),

    #[error("enumeration would exceed the cap of {0} maps")]
    CapExceeded(usize),

    #[error("no Foulis endomap value exists for element {0}")]
    NotFoulis(String),

    #[error("ambiguous Foulis endomap value for {s}: both {p} and {q} qualify")]
    AmbiguousSai { s: String, p: String, q: String },

    #[error("structure violation in {formula}: {witness}")]
    StructureViolation { formula: String, witness: String },

    #[error("prerequisite failed: {0}")]
    Gate(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
