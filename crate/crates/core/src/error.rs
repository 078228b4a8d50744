use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p = {p} and q = {q} are not coprime")]
    NonCoprime { p: u64, q: u64 },
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("digit {digit} is not below the base {base}")]
    DigitOutOfRange { digit: u64, base: u64 },
    #[error("empty word")]
    EmptyWord,
    #[error("{value} does not fit in {len} digits")]
    Overflow { value: String, len: usize },
    #[error("{0} has no terminating expansion in this base")]
    NonTerminating(String),
    #[error("negative value {0}")]
    Negative(String),
    #[error("non-positive value {0}")]
    NonPositive(String),
    #[error("word of length {got} is too short, need at least {need}")]
    TooShort { need: usize, got: usize },
    #[error("requested trace leaves the light cone of the window")]
    OutOfCone,
    #[error("determination conflict at key {key:?}: digits {first} and {second}")]
    ConsistencyViolation {
        key: (u32, u32, u32),
        first: u32,
        second: u32,
    },
    #[error("no configuration realizes the key {0:?}")]
    Unrealizable((u32, u32, u32)),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("work limit of {limit} exceeded (need {needed})")]
    Infeasible { limit: u64, needed: String },
    #[error("search exceeded its work limit of {0} nodes")]
    WorkLimit(u64),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
