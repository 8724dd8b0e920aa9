use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not a prime")]
    NotPrime(u32),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index ({row}, {col}) out of range for a {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("monomial degrees differ: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("unknown generator label `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator label `{0}`")]
    DuplicateGenerator(String),
    #[error("cannot parse monomial `{0}`")]
    MonomialSyntax(String),
    #[error("relation is not quadratic: `{0}`")]
    NotQuadratic(String),
    #[error("degree {requested} exceeds the truncation degree {n_max}")]
    DegreeOverflow { requested: usize, n_max: usize },
    #[error("generator lists differ")]
    GeneratorMismatch,
    #[error("the ideal generator is zero")]
    ZeroElement,
    #[error("invalid algebra data: {0}")]
    InvalidAlgebra(String),
    #[error("invalid module data: {0}")]
    InvalidModule(String),
    #[error("graph precondition violated: {0}")]
    GraphPrecondition(String),
    #[error("subspace is not Lagrangian")]
    NotLagrangian,
    #[error("summand {0} is not symplectic")]
    NotSymplectic(usize),
    #[error("invalid bilinear space: {0}")]
    InvalidForm(String),
    #[error("inconsistent model parameters: {0}")]
    InvalidParameters(String),
    #[error("invalid symbol datum: {0}")]
    InvalidDatum(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
