//! Integrands of the Bell-form recursion for `y_k`.
//!
//! `y_k = Y ∫₀^θ Y⁻¹ (k! F_k + Σ_{m=2}^{k} ∂ᵐF₀ B_{k,m}(y)
//!        + Σ_{ℓ=1}^{k−1} Σ_{m=1}^{ℓ} k!/ℓ! ∂ᵐF_{k−ℓ} B_{ℓ,m}(y)) ds`

use std::fmt;

use super::bell::{factorial, BellPolynomial};

/// `coef · ∂ᵐF_j · Π y_i^{b_i}`
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TemplateTerm {
    pub coef: u128,
    pub deriv: u32,
    pub f_index: usize,
    /// `y_powers[i]` is the exponent of `y_{i+1}`.
    pub y_powers: Vec<u32>,
}

impl TemplateTerm {
    pub fn y_degree(&self) -> u32 {
        self.y_powers.iter().sum()
    }
}

impl fmt::Display for TemplateTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.coef != 1 {
            parts.push(self.coef.to_string());
        }
        if self.deriv == 0 {
            parts.push(format!("F{}", self.f_index));
        } else {
            parts.push(format!("D{}F{}", self.deriv, self.f_index));
        }
        for (i, &e) in self.y_powers.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("y{}", i + 1)),
                _ => parts.push(format!("y{}^{}", i + 1, e)),
            }
        }
        f.write_str(&parts.join("*"))
    }
}

/// The integrand of `y_k` with Bell nodes expanded and like terms merged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegrandTemplate {
    pub order: usize,
    pub terms: Vec<TemplateTerm>,
}

fn push(terms: &mut Vec<TemplateTerm>, t: TemplateTerm) {
    if let Some(existing) =
        terms.iter_mut().find(|e| e.deriv == t.deriv && e.f_index == t.f_index && e.y_powers == t.y_powers)
    {
        existing.coef += t.coef;
    } else {
        terms.push(t);
    }
}

fn bell_terms(terms: &mut Vec<TemplateTerm>, k: usize, scale: u128, deriv: u32, f_index: usize, l: u32) {
    let bell = BellPolynomial::new(l, deriv);
    for (c, b) in bell.terms {
        let mut y_powers = vec![0; k.saturating_sub(1)];
        for (i, e) in b.into_iter().enumerate() {
            if e > 0 {
                y_powers[i] = e;
            }
        }
        push(terms, TemplateTerm { coef: scale * c, deriv, f_index, y_powers });
    }
}

/// Panics if `k == 0` or `k > 30`.
pub fn integrand_formula(k: usize) -> IntegrandTemplate {
    assert!((1..=30).contains(&k), "order must be in 1..=30");
    let kf = factorial(k as u32);
    let mut terms = vec![TemplateTerm { coef: kf, deriv: 0, f_index: k, y_powers: vec![0; k - 1] }];
    for m in 2..=k as u32 {
        bell_terms(&mut terms, k, 1, m, 0, k as u32);
    }
    for l in 1..k {
        let scale = kf / factorial(l as u32);
        for m in 1..=l as u32 {
            bell_terms(&mut terms, k, scale, m, k - l, l as u32);
        }
    }
    IntegrandTemplate { order: k, terms }
}

impl IntegrandTemplate {
    /// Terms that survive when `F₀ ≡ 0`.
    pub fn without_f0(&self) -> impl Iterator<Item = &TemplateTerm> {
        self.terms.iter().filter(|t| t.f_index != 0)
    }
}

impl fmt::Display for IntegrandTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        write!(f, "y{} = Y*int(Y^-1*({}), s=0..theta)", self.order, body.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_orders() {
        assert_eq!(integrand_formula(1).to_string(), "y1 = Y*int(Y^-1*(F1), s=0..theta)");
        assert_eq!(integrand_formula(2).to_string(), "y2 = Y*int(Y^-1*(2*F2 + D2F0*y1^2 + 2*D1F1*y1), s=0..theta)");
    }

    #[test]
    fn fifth_order_size() {
        let t = integrand_formula(5);
        assert_eq!(t.terms.len(), 18);
        assert!(t.terms.iter().any(|x| x.to_string() == "5*D4F1*y1^4"));
    }
}
