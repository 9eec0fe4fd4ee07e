//! Closed-form periodic solutions of `dr/dθ = g(θ) rᵐ`.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::expr::{CompiledPoly, MixedTrigPoly, Monomial, Poly, Rational, TrigRational, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UnperturbedError {
    #[error("F0 is not of the form g(theta)*r^m: {0}")]
    NotSeparable(String),
    #[error("no 2*pi-periodic family: G(2*pi) = {0} != 0")]
    NotPeriodic(String),
    #[error("parameter `{0}` must be bound to a value")]
    UnboundParameter(String),
}

/// `F₀ = g(θ) rᵐ` together with `G = ∫₀^θ g`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparableUnperturbed {
    pub m: u32,
    pub g: Poly,
    pub big_g: MixedTrigPoly,
}

pub fn classify_separable(f0: &TrigRational) -> Result<SeparableUnperturbed, UnperturbedError> {
    if !f0.is_polynomial() {
        return Err(UnperturbedError::NotSeparable(format!("nontrivial denominator in {f0}")));
    }
    let f = f0.numer.as_poly();
    if f.is_zero() {
        return Ok(SeparableUnperturbed { m: 0, g: Poly::zero(), big_g: MixedTrigPoly::zero() });
    }
    let (lo, hi) = f.degree_range(Var::R);
    if lo != hi {
        return Err(UnperturbedError::NotSeparable(format!("F0 = {f} mixes powers of r")));
    }
    if lo < 0 {
        return Err(UnperturbedError::NotSeparable(format!("F0 = {f} has a negative power of r")));
    }
    if let Some(v) = f.vars().into_iter().find(|v| *v == Var::THETA || *v == Var::Z) {
        return Err(UnperturbedError::NotSeparable(format!("F0 depends on {v}")));
    }
    let g = f.coeff_of(Var::R, lo);
    let big_g = MixedTrigPoly::new(&g).antiderivative();
    Ok(SeparableUnperturbed { m: lo as u32, g, big_g })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SolutionForm {
    /// `r = z + G`, `Y = 1` (m = 0)
    Additive,
    /// `r = z e^G`, `Y = e^G` (m = 1)
    Exponential,
    /// `r = z R^(−1/(m−1))`, `Y = R^(−m/(m−1))`, `R = 1 − (m−1) z^(m−1) G` (m ≥ 2)
    Radical,
}

/// Endpoint of the admissible interval of initial radii.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Bound {
    Infinite,
    /// `base^exponent`
    Exact {
        base: Rational,
        exponent: Rational,
    },
    Approx(f64),
}

impl Bound {
    pub fn value(&self) -> f64 {
        match self {
            Bound::Infinite => f64::INFINITY,
            Bound::Exact { base, exponent } => base.to_f64().powf(exponent.to_f64()),
            Bound::Approx(v) => *v,
        }
    }

    pub fn exact_rational(r: Rational) -> Bound {
        Bound::Exact { base: r, exponent: Rational::one() }
    }

    /// Exact value as a rational when it is one.
    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Bound::Exact { base, exponent } if exponent.is_one() || base.is_one() => {
                Some(if exponent.is_one() { base.clone() } else { Rational::one() })
            }
            Bound::Exact { base, exponent } if base.is_zero() && !exponent.is_negative() => Some(Rational::zero()),
            _ => None,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Infinite => f.write_str("inf"),
            Bound::Exact { base, exponent } => {
                if exponent.is_one() || base.is_one() || base.is_zero() {
                    let v = if exponent.is_one() {
                        base.clone()
                    } else if base.is_one() {
                        Rational::one()
                    } else {
                        Rational::zero()
                    };
                    write!(f, "{v}")
                } else {
                    write!(f, "{base}^({exponent})")
                }
            }
            Bound::Approx(v) => write!(f, "{v:.15e}"),
        }
    }
}

/// Open interval `(lo, hi)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Domain {
    pub lo: Bound,
    pub hi: Bound,
}

impl Domain {
    pub fn positive() -> Domain {
        Domain { lo: Bound::exact_rational(Rational::zero()), hi: Bound::Infinite }
    }

    pub fn contains(&self, z: f64) -> bool {
        z > self.lo.value() && z < self.hi.value()
    }

    pub fn width(&self) -> f64 {
        self.hi.value() - self.lo.value()
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// Closed-form `r(θ, z)` and `Y(θ, z) = ∂r/∂z`.
#[derive(Clone, Debug)]
pub struct PeriodicSolution {
    pub form: SolutionForm,
    pub sep: SeparableUnperturbed,
}

pub fn solve_unperturbed(sep: &SeparableUnperturbed) -> Result<PeriodicSolution, UnperturbedError> {
    let at_end = sep.big_g.at_two_pi();
    if !at_end.is_zero() {
        return Err(UnperturbedError::NotPeriodic(at_end.to_string()));
    }
    let form = match sep.m {
        0 => SolutionForm::Additive,
        1 => SolutionForm::Exponential,
        _ => SolutionForm::Radical,
    };
    Ok(PeriodicSolution { form, sep: sep.clone() })
}

impl PeriodicSolution {
    pub fn m(&self) -> u32 {
        self.sep.m
    }

    pub fn is_trivial(&self) -> bool {
        self.sep.g.is_zero()
    }

    /// `1 − (m−1) z^(m−1) G(θ)` for the radical form.
    pub fn radicand(&self) -> Option<Poly> {
        if self.form != SolutionForm::Radical {
            return None;
        }
        let k = self.sep.m as i64 - 1;
        let zk = Poly::term(Monomial::var(Var::Z, k as i16), Rational::from_int(k));
        Some(Poly::one() - zk.mul_ref(self.sep.big_g.as_poly()))
    }

    /// Exponents `(−1/(m−1), −m/(m−1))` of the radicand in `r/z` and `Y`.
    pub fn radical_exponents(&self) -> Option<(Rational, Rational)> {
        let m = self.sep.m as i64;
        (self.form == SolutionForm::Radical).then(|| (Rational::new(-1, m - 1), Rational::new(-m, m - 1)))
    }

    pub fn r_template(&self) -> String {
        let g = self.sep.big_g.as_poly();
        match self.form {
            SolutionForm::Additive if g.is_zero() => "z".to_string(),
            SolutionForm::Additive => format!("z + ({g})"),
            SolutionForm::Exponential => format!("z*exp({g})"),
            SolutionForm::Radical => {
                let (e, _) = self.radical_exponents().unwrap();
                format!("z*({})^({e})", self.radicand().unwrap())
            }
        }
    }

    pub fn y_template(&self) -> String {
        match self.form {
            SolutionForm::Additive => "1".to_string(),
            SolutionForm::Exponential => format!("exp({})", self.sep.big_g.as_poly()),
            SolutionForm::Radical => {
                let (_, e) = self.radical_exponents().unwrap();
                format!("({})^({e})", self.radicand().unwrap())
            }
        }
    }

    /// Binds the parameters of `g`; the result evaluates numerically.
    pub fn bind(&self, values: &HashMap<Var, Rational>) -> Result<BoundSolution, UnperturbedError> {
        let g = self.sep.g.bind(values).expect("binding rationals");
        let big_g = self.sep.big_g.as_poly().bind(values).expect("binding rationals");
        let slots = [Var::THETA, Var::COS, Var::SIN];
        let compile = |p: &Poly| CompiledPoly::new(p, &slots).map_err(|v| UnperturbedError::UnboundParameter(v.name()));
        Ok(BoundSolution {
            form: self.form,
            m: self.sep.m,
            g_exact: g.clone(),
            big_g_exact: big_g.clone(),
            g: compile(&g)?,
            big_g: compile(&big_g)?,
        })
    }
}

/// Periodic solution with every parameter bound.
#[derive(Clone, Debug)]
pub struct BoundSolution {
    pub form: SolutionForm,
    pub m: u32,
    pub g_exact: Poly,
    pub big_g_exact: Poly,
    g: CompiledPoly,
    big_g: CompiledPoly,
}

fn trig_slots(theta: f64) -> [f64; 3] {
    [theta, theta.cos(), theta.sin()]
}

impl BoundSolution {
    pub fn g_at(&self, theta: f64) -> f64 {
        self.g.eval(&trig_slots(theta))
    }

    pub fn big_g_at(&self, theta: f64) -> f64 {
        self.big_g.eval(&trig_slots(theta))
    }

    /// `(r, Y)` at `(θ, z)`; NaN outside the domain.
    pub fn eval(&self, theta: f64, z: f64) -> (f64, f64) {
        let gv = self.big_g_at(theta);
        match self.form {
            SolutionForm::Additive => (z + gv, 1.0),
            SolutionForm::Exponential => {
                let e = gv.exp();
                (z * e, e)
            }
            SolutionForm::Radical => {
                let k = self.m as f64 - 1.0;
                let rad = 1.0 - k * z.powf(k) * gv;
                if rad <= 0.0 {
                    return (f64::NAN, f64::NAN);
                }
                (z * rad.powf(-1.0 / k), rad.powf(-(self.m as f64) / k))
            }
        }
    }

    /// Closed-form `∂r/∂θ = g(θ) r^m` at the solution.
    pub fn dr_dtheta(&self, theta: f64, z: f64) -> f64 {
        let (r, _) = self.eval(theta, z);
        self.g_at(theta) * r.powi(self.m as i32)
    }

    /// Extremes of `G` over one period, from a sign scan of `g` refined by
    /// bisection.
    pub fn g_extremes(&self) -> (f64, f64) {
        const GRID: usize = 4096;
        let two_pi = std::f64::consts::TAU;
        let h = two_pi / GRID as f64;
        let mut candidates = vec![0.0, two_pi];
        let crit: Vec<f64> = (0..GRID)
            .into_par_iter()
            .filter_map(|i| {
                let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
                let (ga, gb) = (self.g_at(a), self.g_at(b));
                if ga == 0.0 {
                    return Some(a);
                }
                if ga * gb < 0.0 {
                    Some(bisect(|t| self.g_at(t), a, b, 1e-14))
                } else {
                    None
                }
            })
            .collect();
        candidates.extend(crit);
        let values: Vec<f64> = candidates.iter().map(|t| self.big_g_at(*t)).collect();
        let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
        (min, max)
    }

    /// Admissible initial radii: `r(θ, z)` stays positive and finite on a period.
    pub fn domain(&self) -> Domain {
        if self.g_exact.is_zero() {
            return Domain::positive();
        }
        let (gmin, gmax) = self.g_extremes();
        match self.form {
            SolutionForm::Exponential => Domain::positive(),
            SolutionForm::Additive => {
                // z + G(θ) > 0 for all θ
                let lo = if gmin < 0.0 {
                    recognize(&self.big_g_exact, -gmin, true)
                } else {
                    Bound::exact_rational(Rational::zero())
                };
                Domain { lo, hi: Bound::Infinite }
            }
            SolutionForm::Radical => {
                let k = self.m as i64 - 1;
                let hi = if gmax <= 1e-15 {
                    Bound::Infinite
                } else {
                    match recognize(&self.big_g_exact, gmax, false) {
                        Bound::Exact { base, .. } => {
                            let base = base * Rational::from_int(k);
                            if base.is_one() {
                                Bound::exact_rational(Rational::one())
                            } else {
                                Bound::Exact { base, exponent: Rational::new(-1, k) }
                            }
                        }
                        _ => Bound::Approx((k as f64 * gmax).powf(-1.0 / k as f64)),
                    }
                };
                Domain { lo: Bound::exact_rational(Rational::zero()), hi }
            }
        }
    }
}

/// Recognizes an extreme value of `G` as a rational: either an exact value
/// of `G` at a multiple of π/2 or a small-denominator fraction.
fn recognize(big_g: &Poly, value: f64, negate: bool) -> Bound {
    for (c, s, t) in [(1, 0, 0), (0, 1, 1), (-1, 0, 2), (0, -1, 3)] {
        let theta = Poly::term(Monomial::var(Var::PI, 1), Rational::new(t, 2));
        let exact = big_g
            .substitute(Var::COS, &Poly::int(c))
            .and_then(|p| p.substitute(Var::SIN, &Poly::int(s)))
            .and_then(|p| p.substitute(Var::THETA, &theta))
            .ok()
            .and_then(|p| p.as_constant());
        if let Some(v) = exact {
            let v = if negate { -v } else { v };
            if (v.to_f64() - value).abs() < 1e-12 {
                return Bound::exact_rational(v);
            }
        }
    }
    match Rational::approximate(value, 1000) {
        Some(r) if (r.to_f64() - value).abs() < 1e-12 => Bound::exact_rational(r),
        _ => Bound::Approx(value),
    }
}

pub(crate) fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_poly, TrigPoly};

    fn f0(s: &str) -> TrigRational {
        TrigRational::polynomial(TrigPoly::reduce(&parse_poly(s).unwrap()))
    }

    #[test]
    fn classifies_examples() {
        let sep = classify_separable(&f0("r^5*C*S")).unwrap();
        assert_eq!(sep.m, 5);
        assert_eq!(sep.big_g.as_poly(), &parse_poly("1/2 - 1/2*C^2").unwrap());
        let sep = classify_separable(&f0("-2*r*C*S")).unwrap();
        assert_eq!(sep.big_g.as_poly(), &parse_poly("C^2 - 1").unwrap());
        assert!(matches!(classify_separable(&f0("A*r^3*C*S + r^2*C")), Err(UnperturbedError::NotSeparable(_))));
    }

    #[test]
    fn aperiodic_additive_form_is_rejected() {
        let sep = classify_separable(&f0("C^2")).unwrap();
        assert!(matches!(solve_unperturbed(&sep), Err(UnperturbedError::NotPeriodic(_))));
    }

    #[test]
    fn quintic_domain_is_exact() {
        let sep = classify_separable(&f0("r^5*C*S")).unwrap();
        let sol = solve_unperturbed(&sep).unwrap().bind(&HashMap::new()).unwrap();
        let d = sol.domain();
        assert_eq!(d.hi, Bound::Exact { base: Rational::from_int(2), exponent: Rational::new(-1, 4) });
        assert_eq!(d.to_string(), "(0, 2^(-1/4))");
    }
}
