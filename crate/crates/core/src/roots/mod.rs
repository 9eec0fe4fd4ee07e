//! Counting simple zeros of averaged functions.
//!
//! Polynomial averaged functions (linear center) are handled exactly with
//! Sturm sequences; numeric ones by a sign scan with bisection and Newton
//! refinement.

mod realize;
mod scan;
mod univariate;

use serde::Serialize;

use crate::expr::{Monomial, Poly, Rational, Var};
use crate::unperturbed::{Bound, Domain};

pub use realize::{fit_to_polynomial, solve_affine};
pub use scan::{numeric_zero_scan, ScanOptions};
pub use univariate::{isolate_roots, sturm_count, Point, SturmSequence, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("the zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("empty interval")]
    EmptyInterval,
    #[error("parameter `{0}` must be bound to a value")]
    UnboundParameter(String),
    #[error("not of the form pi^a*z^b*P(z): {0}")]
    NotPolynomial(String),
    #[error("max degree N = {0} must be at least 3")]
    BadDegrees(u32),
    #[error("linear system: {0}")]
    Linear(String),
}

/// A located zero of an averaged function.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Zero {
    pub z: f64,
    /// `|f'(z)|` cleared the simplicity threshold.
    pub simple: bool,
    pub derivative: f64,
    pub residual: f64,
}

/// Zeros of the first nonvanishing averaged function inside `D`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroReport {
    /// Order of the analysed averaged function.
    pub order: Option<usize>,
    pub identically_zero: bool,
    /// Number of simple zeros.
    pub count: usize,
    pub zeros: Vec<Zero>,
    /// Multiple roots or near-tangencies; never counted.
    pub tangencies: Vec<f64>,
    /// Theoretical maximum, when one is known.
    pub bound: Option<u64>,
}

impl ZeroReport {
    pub fn empty(order: Option<usize>) -> ZeroReport {
        ZeroReport { order, identically_zero: true, count: 0, zeros: Vec::new(), tangencies: Vec::new(), bound: None }
    }
}

/// Splits `f = c·πᵃ·z^b·P(z)` with `P(0) ≠ 0` and returns `P` times `c`,
/// i.e. the polynomial whose positive roots are those of `f`.
pub fn polynomial_part(f: &Poly) -> Result<UniPoly, RootError> {
    let mut pi_exp = None;
    for (m, _) in f.terms() {
        let a = m.exp(Var::PI);
        if *pi_exp.get_or_insert(a) != a {
            return Err(RootError::NotPolynomial(format!("{f} mixes powers of pi")));
        }
    }
    let shift = f.degree_range(Var::Z).0;
    let norm = Monomial::from_pairs([(Var::PI, -pi_exp.unwrap_or(0)), (Var::Z, -shift)]);
    UniPoly::from_poly(&f.mul_monomial(&norm, &Rational::one()), Var::Z)
}

fn bound_point(b: &Bound, upper: bool) -> Point {
    match b {
        Bound::Infinite if upper => Point::PosInf,
        Bound::Infinite => Point::NegInf,
        _ => Point::At(b.as_rational().or_else(|| Rational::from_f64_exact(b.value())).expect("finite domain bound")),
    }
}

/// Exact simple-zero count of a polynomial averaged function on `D`.
///
/// `f` must have every parameter bound; irrational domain ends are replaced
/// by their nearest double.
pub fn count_simple_positive(f: &Poly, domain: &Domain) -> Result<ZeroReport, RootError> {
    if f.is_zero() {
        return Ok(ZeroReport::empty(None));
    }
    let p = polynomial_part(f)?;
    let lo = bound_point(&domain.lo, false);
    let hi = bound_point(&domain.hi, true);
    let open_count = |q: &UniPoly| -> Result<usize, RootError> {
        if q.degree() == Some(0) {
            return Ok(0);
        }
        let mut n = sturm_count(q, &lo, &hi)?;
        if let Point::At(h) = &hi {
            if q.eval(h).is_zero() {
                n -= 1;
            }
        }
        Ok(n)
    };
    let distinct = open_count(&p)?;
    let dp = p.derivative();
    let repeated = p.gcd(&dp);
    let multiple = open_count(&repeated)?;

    // locate roots for the report
    let lo_r = match &lo {
        Point::At(r) => r.clone(),
        _ => -cauchy_bound(&p),
    };
    let hi_r = match &hi {
        Point::At(r) => r.clone(),
        _ => cauchy_bound(&p),
    };
    let width = Rational::new(1, 1 << 50);
    let mut zeros = Vec::new();
    let mut tangencies = Vec::new();
    if lo_r < hi_r {
        for (a, b) in isolate_roots(&p, &lo_r, &hi_r, &width)? {
            let mid = ((&a + &b) / Rational::from_int(2)).to_f64();
            let is_multiple = if a == b {
                repeated.eval(&a).is_zero()
            } else {
                repeated.degree() > Some(0) && sturm_count(&repeated, &Point::At(a.clone()), &Point::At(b.clone()))? > 0
            };
            if is_multiple {
                tangencies.push(mid);
                continue;
            }
            zeros.push(Zero {
                z: mid,
                simple: true,
                derivative: derivative_at(f, &dp, mid),
                residual: f.eval_f64(|v| if v == Var::Z { mid } else { std::f64::consts::PI }),
            });
        }
    }
    debug_assert_eq!(zeros.len(), distinct - multiple);
    Ok(ZeroReport { order: None, identically_zero: false, count: distinct - multiple, zeros, tangencies, bound: None })
}

/// `f'(z)` at a root of `P`, where `f = c πᵃ z^b P`.
fn derivative_at(f: &Poly, dp: &UniPoly, z: f64) -> f64 {
    let pi_exp = f.terms().next().map(|(m, _)| m.exp(Var::PI)).unwrap_or(0);
    let shift = f.degree_range(Var::Z).0;
    std::f64::consts::PI.powi(pi_exp as i32) * z.powi(shift as i32) * dp.eval_f64(z)
}

/// `1 + max |aᵢ/aₙ|`, an upper bound on root moduli.
fn cauchy_bound(p: &UniPoly) -> Rational {
    let lead = p.leading();
    let mut m = Rational::zero();
    for c in p.coeffs() {
        let q = (c / &lead).abs();
        if q > m {
            m = q;
        }
    }
    m + Rational::one()
}

/// Lemma-style bound `⌊k(N−1)/2⌋` for Kukles-type perturbations of degrees
/// `(m, n₁, n₂, n₃)`, with `N = max(m, n₁, n₂+1, n₃+2)`.
pub fn kukles_bound(m: u32, n1: u32, n2: u32, n3: u32, k: u32) -> Result<u64, RootError> {
    let n = m.max(n1).max(n2 + 1).max(n3 + 2);
    if n < 3 || k == 0 {
        return Err(RootError::BadDegrees(n));
    }
    Ok(k as u64 * (n as u64 - 1) / 2)
}
