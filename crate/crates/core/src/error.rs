use thiserror::Error;

use crate::poly::VarId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, determinant needs a square matrix")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix size {size} exceeds determinant limit {limit}")]
    MatrixTooLarge { size: usize, limit: usize },
    #[error("variable {0} is neither mapped nor fixed")]
    UnmappedVariable(VarId),
    #[error("variable {0} carries no grading")]
    UngradedVariable(VarId),
    #[error("no value assigned to {0}")]
    UnassignedVariable(VarId),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("values are not nondecreasing at position {position}")]
    NotNondecreasing { position: usize },
    #[error("h({j}) = {value} lies below the diagonal")]
    BelowDiagonal { j: usize, value: usize },
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("unsupported generator flavor: {0}")]
    UnsupportedFlavor(String),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("degree {degree} exceeds the truncation bound {bound}")]
    DegreeBoundExceeded { degree: u32, bound: u32 },
    #[error("term count {terms} exceeds the ceiling {limit}")]
    ResourceLimit { terms: usize, limit: usize },
    #[error("sampler failed {attempts} consecutive draws")]
    SamplerStuck { attempts: usize },
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
