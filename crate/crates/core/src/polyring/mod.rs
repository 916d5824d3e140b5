//! Polynomials in `T` over a finite field, rational functions in `T`, and
//! polynomials in `X` with rational-function coefficients.

mod arith;
mod parse;
mod ratfunc;
mod tpoly;
mod xpoly;

pub use parse::{parse_ratfunc, parse_tpoly, parse_xpoly, ParseError};
pub use ratfunc::RationalFunc;
pub use tpoly::TPoly;
pub use xpoly::XPoly;

pub(crate) use arith::mul_coeffs;

use thiserror::Error;

use crate::ffield::FieldError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error(transparent)]
    Field(#[from] FieldError),
}
