use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    Singular,
    #[error("expected rank {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("system is trivially infeasible (0 <= {0})")]
    TriviallyInfeasible(String),
    #[error("system has no solution")]
    Infeasible,
    #[error("coefficient matrix is not of full column rank (rank {rank} < {dim})")]
    NotPointed { rank: usize, dim: usize },
    #[error("rays do not span a full-dimensional pointed cone")]
    NotFullDim,
    #[error("vector is not in the cone")]
    NotInCone,
    #[error("vector is not an extreme ray of the cone")]
    NotExtreme,
    #[error("system has a nonzero right-hand side; a cone was expected")]
    NotACone,
    #[error("combination needs a positive and a negative coefficient on variable {0}")]
    SignPrecondition(usize),
    #[error("block of variables to eliminate is empty")]
    EmptyBlock,
    #[error("variable index {0} out of range")]
    VariableOutOfRange(usize),
    #[error("variable {0} has already been eliminated")]
    AlreadyEliminated(usize),
    #[error("inequality has a zero coefficient vector")]
    TrivialInequality,
    #[error("inequality mentions eliminated variable {0}")]
    StaleVariable(usize),
    #[error("internal contradiction: {0}")]
    InternalContradiction(String),
    #[error("objective vector is zero")]
    ZeroObjective,
    #[error("problem is unbounded below")]
    Unbounded,
    #[error("index {index} out of range (max {max})")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported number type `{0}`")]
    UnsupportedNumberType(String),
    #[error("{0}")]
    Io(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
