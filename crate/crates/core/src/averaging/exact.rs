//! Exact averaged functions for the linear center (`F₀ ≡ 0`, `r = z`, `Y = 1`).

use std::collections::HashMap;

use crate::expr::{MixedTrigPoly, Poly, Rational, Var};
use crate::normal_form::LazyNormalForm;

use super::bell::factorial;
use super::template::integrand_formula;
use super::AveragingError;

/// Incremental computation of `y_1, y_2, …` and `f_1, f_2, …`.
///
/// Parameter substitutions can be applied between orders; they are pushed
/// through the normal form and every cached `y_j`, which is valid because
/// substitution is a ring homomorphism.
pub struct ExactAveraging {
    nf: LazyNormalForm,
    ys: Vec<Option<MixedTrigPoly>>,
    fs: Vec<Poly>,
    derivs: HashMap<(usize, u32), MixedTrigPoly>,
}

impl ExactAveraging {
    pub fn new(mut nf: LazyNormalForm) -> Result<ExactAveraging, AveragingError> {
        if !nf.coeff(0)?.is_zero() {
            return Err(AveragingError::NonzeroUnperturbed);
        }
        Ok(ExactAveraging { nf, ys: Vec::new(), fs: Vec::new(), derivs: HashMap::new() })
    }

    /// Number of averaged functions computed so far.
    pub fn computed(&self) -> usize {
        self.fs.len()
    }

    pub fn max_order(&self) -> usize {
        self.nf.order()
    }

    pub fn f(&self, i: usize) -> Option<&Poly> {
        self.fs.get(i.checked_sub(1)?)
    }

    pub fn fs(&self) -> &[Poly] {
        &self.fs
    }

    pub fn y(&self, i: usize) -> Option<&MixedTrigPoly> {
        self.ys.get(i.checked_sub(1)?)?.as_ref()
    }

    pub fn normal_form(&mut self) -> &mut LazyNormalForm {
        &mut self.nf
    }

    /// `∂ᵐF_j` at `r = z`.
    fn deriv(&mut self, j: usize, m: u32) -> Result<MixedTrigPoly, AveragingError> {
        if let Some(d) = self.derivs.get(&(j, m)) {
            return Ok(d.clone());
        }
        let fj = self.nf.coeff(j)?;
        if !fj.is_polynomial() {
            return Err(AveragingError::NonPolynomialCoefficient(j));
        }
        let mut p = fj.numer.as_poly().clone();
        for _ in 0..m {
            p = p.derivative(Var::R);
        }
        let d = MixedTrigPoly::new(&p.substitute(Var::R, &Poly::var(Var::Z))?);
        self.derivs.insert((j, m), d.clone());
        Ok(d)
    }

    /// Computes the next order. `keep_y` retains `y_i(θ, z)` for later
    /// orders; without it only the period integral is formed.
    pub fn step(&mut self, keep_y: bool) -> Result<&Poly, AveragingError> {
        let i = self.fs.len() + 1;
        if i > self.max_order() {
            return Err(AveragingError::OrderExceeded(self.max_order()));
        }
        let template = integrand_formula(i);
        let mut y_cache: HashMap<Vec<u32>, MixedTrigPoly> = HashMap::new();
        let mut integrand = Poly::zero();
        for term in template.without_f0() {
            let d = self.deriv(term.f_index, term.deriv)?;
            if d.is_zero() {
                continue;
            }
            let ym = self.y_monomial(&term.y_powers, &mut y_cache)?;
            if ym.is_zero() {
                continue;
            }
            let prod = d.mul(&ym);
            integrand.add_scaled(prod.as_poly(), &Rational::from_bigint((term.coef as i128).into()));
        }
        let integrand = MixedTrigPoly::new(&integrand);
        let scale = Rational::new(1, factorial(i as u32) as i64);
        let f = if keep_y {
            let y = integrand.antiderivative();
            let f = y.at_two_pi().scale(&scale);
            self.ys.push(Some(y));
            f
        } else {
            self.ys.push(None);
            integrand.period_integral().scale(&scale)
        };
        self.fs.push(f);
        Ok(self.fs.last().unwrap())
    }

    fn y_monomial(
        &self,
        powers: &[u32],
        cache: &mut HashMap<Vec<u32>, MixedTrigPoly>,
    ) -> Result<MixedTrigPoly, AveragingError> {
        if let Some(p) = cache.get(powers) {
            return Ok(p.clone());
        }
        // peel one factor off the highest-index y to reuse smaller products
        let result = match powers.iter().rposition(|&e| e > 0) {
            None => MixedTrigPoly::new(&Poly::one()),
            Some(idx) => {
                let mut lower = powers.to_vec();
                lower[idx] -= 1;
                let rest = self.y_monomial(&lower, cache)?;
                let y = self.ys[idx].as_ref().ok_or(AveragingError::MissingY(idx + 1))?;
                rest.mul(y)
            }
        };
        cache.insert(powers.to_vec(), result.clone());
        Ok(result)
    }

    pub fn substitute(&mut self, v: Var, value: &Poly) -> Result<(), AveragingError> {
        self.nf.substitute(v, value)?;
        self.derivs.clear();
        for y in self.ys.iter_mut().flatten() {
            *y = MixedTrigPoly::new(&y.as_poly().substitute(v, value)?);
        }
        for f in &mut self.fs {
            *f = f.substitute(v, value)?;
        }
        Ok(())
    }

    pub fn bind(&mut self, values: &HashMap<Var, Rational>) -> Result<(), AveragingError> {
        self.nf.bind(values)?;
        self.derivs.clear();
        for y in self.ys.iter_mut().flatten() {
            *y = MixedTrigPoly::new(&y.as_poly().bind(values)?);
        }
        for f in &mut self.fs {
            *f = f.bind(values)?;
        }
        Ok(())
    }
}

/// `f_1, …, f_k` for a linear-center normal form with no substitutions.
pub fn averaged_exact(nf: LazyNormalForm, k: usize) -> Result<Vec<Poly>, AveragingError> {
    let mut engine = ExactAveraging::new(nf)?;
    for i in 1..=k {
        engine.step(i < k)?;
    }
    Ok(engine.fs)
}
