use thiserror::Error;

use crate::covolumes::DiscCase;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("incompatible field parameters: sqrt({left}) and sqrt({right})")]
    IncompatibleField { left: u64, right: u64 },

    #[error("incompatible terms for addition: {left} and {right}")]
    IncompatibleTerms { left: String, right: String },

    #[error("division by zero")]
    DivisionByZero,

    #[error("not rational: value carries pi^{pi_exp} * sqrt(d)^{sqrt_d_exp}")]
    NotRational { pi_exp: i32, sqrt_d_exp: u8 },

    #[error("{0} is not a positive squarefree integer")]
    NotSquarefree(u64),

    #[error("{0} is not a negative fundamental discriminant")]
    InvalidDiscriminant(i64),

    #[error("no closed form in scope for argument {0}")]
    NoClosedForm(u32),

    #[error("unsupported field d = {0}; supported: 3, 7, 11, 19, 43, 67, 163")]
    UnsupportedField(u64),

    #[error("James requires dimension >= 3 (got n = {0}, need n >= 2)")]
    DimensionTooSmall(u32),

    #[error("lattice rank must be at least 1 (got n = {0})")]
    InvalidRank(u32),

    #[error("discriminant case {case:?} does not apply to d = {d}")]
    DiscCaseMismatch { d: u64, case: DiscCase },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
