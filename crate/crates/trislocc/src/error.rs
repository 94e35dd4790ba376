use thiserror::Error;

use crate::exact::BinaryForm;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("singular Alice map: alpha*delta - beta*gamma = 0")]
    SingularMap,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invariant polynomial does not split over Q(i); residual factors {0:?}")]
    NonSplitting(Vec<BinaryForm>),
    #[error("state is not fully entangled: local ranks {ranks:?} for shape 2x{m}x{n}")]
    NotFullyEntangled { ranks: (usize, usize, usize), m: usize, n: usize },
    #[error("eigenvalues must be pairwise distinct")]
    DuplicateEigenvalues,
    #[error("block redistribution condition violated: {0}")]
    ConditionViolated(String),
    #[error("insufficient blocks: {0}")]
    InsufficientBlocks(String),
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("obstruction predicates do not apply here: {0}")]
    ScopeViolation(String),
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("state is identically zero")]
    ZeroState,
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable code used by the command line tool.
    pub fn code(&self) -> &'static str {
        match self {
            Error::SingularMap => "singular_map",
            Error::ShapeMismatch(_) => "shape_mismatch",
            Error::NonSplitting(_) => "non_splitting",
            Error::NotFullyEntangled { .. } => "not_fully_entangled",
            Error::DuplicateEigenvalues => "duplicate_eigenvalues",
            Error::ConditionViolated(_) => "condition_violated",
            Error::InsufficientBlocks(_) => "insufficient_blocks",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::ScopeViolation(_) => "scope_violation",
            Error::InvalidStructure(_) => "invalid_structure",
            Error::ZeroState => "zero_state",
            Error::Parse(_) => "parse_error",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
