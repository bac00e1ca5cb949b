//! Exact polynomial kernel: sparse Laurent polynomials in the variables
//! `w[i,r]`, `u[i,r]`, `z`, and reduced rational functions over them.

mod factored;
mod gcd;
mod monomial;
mod mpoly;
mod parse;
mod ratfunc;

pub use factored::{expand, factor_linear, Factor, FactorImage, FactorPowers};
pub use gcd::{gcd, gcd_cofactors};
pub use monomial::{Monomial, Var};
pub use mpoly::MPoly;
pub use parse::{parse_poly, parse_ratfunc};
pub use ratfunc::RatFunc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
