//! Exact symbolic expressions over `x1..xd`: parsing, printing, canonical
//! simplification, differentiation, evaluation, Jacobian determinants and
//! identical-vanishing tests.

mod diff;
mod eval;
mod expr;
mod jacobian;
mod parse;
mod poly;
mod print;
#[cfg(test)]
pub(crate) mod props;

use thiserror::Error;

pub use diff::{diff, gradient};
pub use eval::{eval, CompiledExpr, Point};
pub use expr::{make_add, make_cos, make_exp, make_mul, make_neg, make_pow, make_sin, make_sub, Expr};
pub use jacobian::{determinant, jacobian_det};
pub use parse::{parse, parse_raw};
pub use poly::{expand, zero_test, Poly, ZeroVerdict, SAMPLED_ZERO_TOLERANCE};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymbolicError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier '{name}' at offset {pos}")]
    UnknownIdentifier { pos: usize, name: String },
    #[error("variable x{index} exceeds dimension {dim}")]
    VariableOutOfRange { index: usize, dim: usize },
    #[error("exponent must be an integer literal at offset {pos}, found '{text}'")]
    NonIntegerExponent { pos: usize, text: String },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("evaluation at {point:?} produced {value}")]
    Evaluation { point: Vec<f64>, value: f64 },
}
