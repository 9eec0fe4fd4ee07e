//! Exact symbolic substrate: rationals, sparse Laurent polynomials, trig
//! polynomials, ε-series and closed-form integration of mixed trig terms.

mod compiled;
mod mixed;
mod parse;
mod poly;
mod rational;
mod trig;
mod var;

pub use compiled::CompiledPoly;
pub use mixed::{period_value, primitive, MixedTrigPoly, TrigKey};
pub use parse::{parse_poly, parse_poly_at, ParseError};
pub use poly::{Exp, Monomial, ParamPoly, Poly};
pub use rational::Rational;
pub use trig::{is_trig_reduced, series_quotient, trig_reduce, EpsSeries, TrigPoly, TrigRational};
pub use var::Var;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot divide by non-monomial `{0}`")]
    NonMonomialDivisor(String),
    #[error("leading denominator of the series is zero")]
    ZeroLeadingDenominator,
}
