use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid cyclotomic order {0}: order must be positive")]
    InvalidOrder(u32),

    #[error("cyclotomic context mismatch: order {left} vs order {right}")]
    ContextMismatch { left: u32, right: u32 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("polynomials live in different variable spaces")]
    SpaceMismatch,

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("incompatible target space: {0}")]
    IncompatibleTarget(String),

    #[error("invalid variable space: {0}")]
    InvalidSpace(String),

    #[error("grid is incomplete: no value for point {0}")]
    IncompleteGrid(String),

    #[error("duplicate node in grid set for variable {0}")]
    DuplicateNode(usize),

    #[error("empty grid set for variable {0}")]
    EmptyGridSet(usize),

    #[error("polynomial is not an adjacency polynomial: value {value} at grid point ({i}, {j})")]
    NotAdjacency { i: usize, j: usize, value: String },

    #[error("vector has a repeated entry at positions {0} and {1}")]
    RepeatedEntry(usize, usize),

    #[error("entry {0} is not an n-th root of unity")]
    NotRootOfUnity(usize),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("size guard exceeded for {what}: {actual} > {limit}")]
    GuardExceeded {
        what: &'static str,
        limit: u64,
        actual: u64,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal soundness failure: {0}")]
    SoundnessFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
