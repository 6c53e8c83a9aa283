//! Exact algebra: integer polynomials, gcd, canonical rational functions,
//! and a quadratic extension for metrics carrying one square root.

mod gcd;
mod parse;
mod poly;
mod ratexpr;
mod surd;

pub use gcd::{content_in, gcd, pseudo_rem};
pub use parse::{parse_expr, parse_ratexpr_text};
pub use poly::{Monomial, Poly, Var, MAX_COEF_INDEX, NVARS};
pub use ratexpr::RatExpr;
pub use surd::SurdExpr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator vanishes at the evaluation point")]
    Pole,
    #[error("expression is not polynomial in s")]
    NotPolynomialInS,
    #[error("expression contains a symbol with no value at evaluation")]
    UnboundSymbol,
    #[error("second b²-derivative of generic coefficient c{0} is not representable")]
    SecondDerivativeSymbol(u8),
    #[error("operands carry different radicands")]
    RadicandMismatch,
    #[error("parse error: {0}")]
    Parse(String),
}
