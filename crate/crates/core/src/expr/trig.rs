//! Trigonometric polynomials in `C = cos θ`, `S = sin θ` and their quotients.

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;

use rustc_hash::FxHashMap;

use super::poly::{push_sin_reduced, Poly};
use super::rational::Rational;
use super::var::Var;
use super::ExprError;

/// Rewrites every `S^e` with `e ≥ 2` using `S² = 1 − C²`.
pub fn trig_reduce(p: &Poly) -> Poly {
    if p.degree(Var::SIN) < 2 {
        return p.clone();
    }
    let mut map = FxHashMap::default();
    for (m, c) in p.terms() {
        push_sin_reduced(&mut map, m.clone(), c.clone());
    }
    Poly::from_terms(map)
}

pub fn is_trig_reduced(p: &Poly) -> bool {
    p.degree(Var::SIN) <= 1
}

/// Polynomial in `C`, `S`, `r` and parameters with sin-degree at most one.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TrigPoly(Poly);

impl TrigPoly {
    pub fn reduce(p: &Poly) -> TrigPoly {
        TrigPoly(trig_reduce(p))
    }

    pub fn zero() -> TrigPoly {
        TrigPoly(Poly::zero())
    }

    pub fn one() -> TrigPoly {
        TrigPoly(Poly::one())
    }

    pub fn as_poly(&self) -> &Poly {
        &self.0
    }

    pub fn into_poly(self) -> Poly {
        self.0
    }

    pub fn mul(&self, other: &TrigPoly) -> TrigPoly {
        TrigPoly(self.0.mul_trig(&other.0))
    }

    pub fn add(&self, other: &TrigPoly) -> TrigPoly {
        TrigPoly(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &TrigPoly) -> TrigPoly {
        TrigPoly(&self.0 - &other.0)
    }

    pub fn derivative_r(&self) -> TrigPoly {
        TrigPoly(self.0.derivative(Var::R))
    }

    pub fn map(&self, f: impl FnOnce(&Poly) -> Result<Poly, ExprError>) -> Result<TrigPoly, ExprError> {
        Ok(TrigPoly::reduce(&f(&self.0)?))
    }
}

impl Deref for TrigPoly {
    type Target = Poly;
    fn deref(&self) -> &Poly {
        &self.0
    }
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// `numer / base^power` with trig-reduced numerator and base.
#[derive(Clone, PartialEq, Eq)]
pub struct TrigRational {
    pub numer: TrigPoly,
    pub base: TrigPoly,
    pub power: u32,
}

impl TrigRational {
    pub fn polynomial(p: TrigPoly) -> TrigRational {
        TrigRational { numer: p, base: TrigPoly::one(), power: 0 }
    }

    pub fn zero() -> TrigRational {
        TrigRational::polynomial(TrigPoly::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.power == 0 || self.base.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn denom(&self) -> TrigPoly {
        TrigPoly(trig_reduce(&self.base.pow(self.power)))
    }

    /// `∂/∂r` via `(N/B^p)' = (N'B − pNB')/B^(p+1)`.
    pub fn derivative_r(&self) -> TrigRational {
        if self.is_polynomial() {
            return TrigRational::polynomial(self.numer.derivative_r());
        }
        let dn = self.numer.derivative_r();
        let db = self.base.derivative_r();
        if db.is_zero() {
            return TrigRational { numer: dn, base: self.base.clone(), power: self.power };
        }
        let p = Rational::from_int(self.power as i64);
        let numer = dn.mul(&self.base).sub(&TrigPoly(self.numer.mul(&db).scale(&p)));
        TrigRational { numer, base: self.base.clone(), power: self.power + 1 }
    }

    pub fn substitute(&self, v: Var, value: &Poly) -> Result<TrigRational, ExprError> {
        Ok(TrigRational {
            numer: self.numer.map(|p| p.substitute(v, value))?,
            base: self.base.map(|p| p.substitute(v, value))?,
            power: self.power,
        })
    }

    pub fn bind(&self, values: &HashMap<Var, Rational>) -> Result<TrigRational, ExprError> {
        Ok(TrigRational {
            numer: self.numer.map(|p| p.bind(values))?,
            base: self.base.map(|p| p.bind(values))?,
            power: self.power,
        })
    }

    pub fn eval_f64(&self, value: impl Fn(Var) -> f64 + Copy) -> f64 {
        let n = self.numer.eval_f64(value);
        if self.is_polynomial() {
            n
        } else {
            n / self.base.eval_f64(value).powi(self.power as i32)
        }
    }
}

impl fmt::Display for TrigRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            return write!(f, "{}", self.numer);
        }
        if self.power == 1 {
            write!(f, "({})/({})", self.numer, self.base)
        } else {
            write!(f, "({})/({})^{}", self.numer, self.base, self.power)
        }
    }
}

impl fmt::Debug for TrigRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Truncated series `Σ εⁱ F_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsSeries {
    pub coeffs: Vec<TrigRational>,
}

impl EpsSeries {
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

/// Expands `numer / denom` in ε through order `k`.
///
/// Coefficient `i` of the result is `n_i / D₀^(i+1)` with
/// `n_i = N_i D₀^i − Σ_{j<i} n_j D_{i−j} D₀^(i−j−1)`. A single-term `D₀` is
/// divided out up front so that all coefficients stay polynomial.
pub fn series_quotient(numer: &[Poly], denom: &[Poly], k: usize) -> Result<EpsSeries, ExprError> {
    let get = |s: &[Poly], i: usize| s.get(i).cloned().unwrap_or_default();
    let d0 = get(denom, 0);
    if d0.is_zero() {
        return Err(ExprError::ZeroLeadingDenominator);
    }
    let (numer, denom): (Vec<Poly>, Vec<Poly>) = if d0.as_monomial().is_some() {
        let inv = d0.monomial_inverse()?;
        (
            (0..=k).map(|i| trig_reduce(&get(numer, i).mul_ref(&inv))).collect(),
            (0..=k).map(|i| trig_reduce(&get(denom, i).mul_ref(&inv))).collect(),
        )
    } else {
        ((0..=k).map(|i| trig_reduce(&get(numer, i))).collect(), (0..=k).map(|i| trig_reduce(&get(denom, i))).collect())
    };
    let d0 = denom[0].clone();
    let unit = d0.as_constant().is_some_and(|c| c.is_one());
    let mut d0_pows = vec![Poly::one()];
    for i in 1..=k {
        let next = d0_pows[i - 1].mul_trig(&d0);
        d0_pows.push(next);
    }
    let mut ns: Vec<Poly> = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let mut n = numer[i].mul_trig(&d0_pows[i]);
        for (j, nj) in ns.iter().enumerate() {
            let d = &denom[i - j];
            if d.is_zero() || nj.is_zero() {
                continue;
            }
            let t = nj.mul_trig(d).mul_trig(&d0_pows[i - j - 1]);
            n = n - t;
        }
        ns.push(n);
    }
    let coeffs = ns
        .into_iter()
        .enumerate()
        .map(|(i, n)| TrigRational {
            numer: TrigPoly(n),
            base: if unit { TrigPoly::one() } else { TrigPoly(d0.clone()) },
            power: if unit { 0 } else { i as u32 + 1 },
        })
        .collect();
    Ok(EpsSeries { coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly;

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn reduces_sin_powers() {
        assert_eq!(trig_reduce(&p("S^2")), p("1 - C^2"));
        assert_eq!(trig_reduce(&p("S^3*C")), p("S*C - S*C^3"));
        let q = p("S^4*r + S^5*a");
        assert_eq!(trig_reduce(&trig_reduce(&q)), trig_reduce(&q));
    }

    #[test]
    fn first_order_geometric_expansion() {
        let (a, b, c) = (p("a"), p("b"), p("c"));
        let s = series_quotient(&[a.clone(), b.clone()], &[Poly::one(), c.clone()], 1).unwrap();
        assert_eq!(s.coeffs[0].numer.as_poly(), &a);
        assert_eq!(s.coeffs[1].numer.as_poly(), &(&b - &a.mul_ref(&c)));
        assert!(series_quotient(&[a], &[Poly::zero()], 0).is_err());
    }

    #[test]
    fn monomial_leading_denominator_is_folded() {
        // -2 r^3 C S / r^2
        let s = series_quotient(&[p("-2*r^3*C*S")], &[p("r^2")], 0).unwrap();
        assert!(s.coeffs[0].is_polynomial());
        assert_eq!(s.coeffs[0].numer.as_poly(), &p("-2*r*C*S"));
    }

    #[test]
    fn quotient_rule_derivative() {
        let f = TrigRational { numer: TrigPoly::reduce(&p("r^2")), base: TrigPoly::reduce(&p("1 + r*C")), power: 1 };
        let d = f.derivative_r();
        let at = |v: Var| match v {
            Var::R => 0.7,
            Var::COS => 0.3,
            _ => 0.0,
        };
        let h = 1e-6;
        let fd = (f.eval_f64(|v| if v == Var::R { 0.7 + h } else { at(v) })
            - f.eval_f64(|v| if v == Var::R { 0.7 - h } else { at(v) }))
            / (2.0 * h);
        assert!((d.eval_f64(at) - fd).abs() < 1e-8);
    }
}
