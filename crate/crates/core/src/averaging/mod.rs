//! Averaged functions `f_k(z) = y_k(2π, z)/k!` via the Bell-polynomial
//! recursion: exactly for the linear center, numerically otherwise.

mod bell;
mod exact;
mod numeric;
pub mod ode;
mod substitution;
mod template;

pub use bell::{factorial, index_tuples, BellPolynomial};
pub use exact::{averaged_exact, ExactAveraging};
pub use numeric::{compile_derivatives, CompiledRational, NumericAveraging, NumericValue};
pub use substitution::{solve_for, Substitution};
pub use template::{integrand_formula, IntegrandTemplate, TemplateTerm};

use crate::expr::ExprError;
use crate::normal_form::NormalFormError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AveragingError {
    #[error("F0 is not identically zero; use the numeric path")]
    NonzeroUnperturbed,
    #[error("F{0} has a non-constant denominator")]
    NonPolynomialCoefficient(usize),
    #[error("y{0} was not retained")]
    MissingY(usize),
    #[error("order exceeds the normal form order {0}")]
    OrderExceeded(usize),
    #[error("parameter `{0}` must be bound to a value")]
    UnboundParameter(String),
    #[error("z = {0} lies outside the domain")]
    OutsideDomain(f64),
    #[error("integrator failed: {0}")]
    StiffnessFailure(String),
    #[error("Bell polynomial expects {expected} arguments, got {got}")]
    BadArity { expected: usize, got: usize },
    #[error("cannot solve: {0}")]
    Solve(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    NormalForm(#[from] NormalFormError),
}
