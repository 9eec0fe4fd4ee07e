//! Polar normal form `dr/dθ = Σ εⁱ Fᵢ(θ, r)` of a perturbed planar system.

use std::collections::HashMap;

use crate::expr::{series_quotient, trig_reduce, EpsSeries, ExprError, Poly, Rational, TrigRational, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NormalFormError {
    #[error("the origin is not a singular point: {0}(0,0) != 0")]
    NotSingular(&'static str),
    #[error("{what} uses reserved symbol `{var}`; only x, y and parameters are allowed")]
    ReservedSymbol { what: String, var: String },
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Perturbed system `ẋ = P + Σ εᵏ p_k`, `ẏ = Q + Σ εᵏ q_k`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SystemSpec {
    pub p: Poly,
    pub q: Poly,
    /// `(p_k, q_k)` for k = 1, 2, …
    pub perturbations: Vec<(Poly, Poly)>,
    pub bindings: HashMap<Var, Rational>,
}

impl SystemSpec {
    pub fn new(p: Poly, q: Poly) -> SystemSpec {
        SystemSpec { p, q, ..Default::default() }
    }

    pub fn with_perturbation(mut self, p: Poly, q: Poly) -> SystemSpec {
        self.perturbations.push((p, q));
        self
    }

    /// `(p_k, q_k)`, zero beyond the listed orders.
    pub fn perturbation(&self, k: usize) -> (Poly, Poly) {
        if k == 0 {
            return (Poly::zero(), Poly::zero());
        }
        self.perturbations.get(k - 1).cloned().unwrap_or((Poly::zero(), Poly::zero()))
    }

    pub fn validate(&self) -> Result<(), NormalFormError> {
        let origin = |p: &Poly| {
            p.substitute(Var::X, &Poly::zero()).and_then(|p| p.substitute(Var::Y, &Poly::zero())).map(|p| p.is_zero())
        };
        if !origin(&self.p)? {
            return Err(NormalFormError::NotSingular("P"));
        }
        if !origin(&self.q)? {
            return Err(NormalFormError::NotSingular("Q"));
        }
        let mut named: Vec<(String, &Poly)> = vec![("P".into(), &self.p), ("Q".into(), &self.q)];
        for (k, (p, q)) in self.perturbations.iter().enumerate() {
            named.push((format!("p_{}", k + 1), p));
            named.push((format!("q_{}", k + 1), q));
        }
        for (what, poly) in named {
            if let Some(v) = poly.vars().into_iter().find(|v| v.is_reserved() && *v != Var::X && *v != Var::Y) {
                return Err(NormalFormError::ReservedSymbol { what, var: v.name() });
            }
            if poly.degree_range(Var::X).0 < 0 || poly.degree_range(Var::Y).0 < 0 {
                return Err(NormalFormError::ReservedSymbol { what, var: "negative power of x or y".into() });
            }
        }
        Ok(())
    }
}

fn polar(p: &Poly) -> Result<Poly, ExprError> {
    let x = Poly::var(Var::R).mul_ref(&Poly::var(Var::COS));
    let y = Poly::var(Var::R).mul_ref(&Poly::var(Var::SIN));
    Ok(trig_reduce(&p.substitute(Var::X, &x)?.substitute(Var::Y, &y)?))
}

/// ε-coefficients of `ṙ = (xẋ + yẏ)/r` and `θ̇ = (xẏ − yẋ)/r²` in polar form.
pub fn polar_substitute(spec: &SystemSpec, k: usize) -> Result<(Vec<Poly>, Vec<Poly>), NormalFormError> {
    spec.validate()?;
    let c = Poly::var(Var::COS);
    let s = Poly::var(Var::SIN);
    let r_inv = Poly::var_pow(Var::R, -1);
    let mut d1 = Vec::with_capacity(k + 1);
    let mut d2 = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let (p, q) = if i == 0 { (spec.p.clone(), spec.q.clone()) } else { spec.perturbation(i) };
        let (pp, qp) = (polar(&p)?, polar(&q)?);
        // x·p/r = C·p, y·q/r = S·q
        d1.push(trig_reduce(&(c.mul_trig(&pp) + s.mul_trig(&qp))));
        d2.push(trig_reduce(&(c.mul_trig(&qp) - s.mul_trig(&pp)).mul_ref(&r_inv)));
    }
    Ok((d1, d2))
}

/// The normal form through order `k`.
pub fn normal_form(spec: &SystemSpec, k: usize) -> Result<EpsSeries, NormalFormError> {
    let (d1, d2) = polar_substitute(spec, k)?;
    Ok(series_quotient(&d1, &d2, k)?)
}

/// Normal form whose coefficients are computed on demand, so that parameter
/// substitutions made between averaging orders only touch what is needed.
#[derive(Clone, Debug)]
pub struct LazyNormalForm {
    d1: Vec<Poly>,
    d2: Vec<Poly>,
    cache: Vec<Option<TrigRational>>,
}

impl LazyNormalForm {
    pub fn new(spec: &SystemSpec, k: usize) -> Result<LazyNormalForm, NormalFormError> {
        let (d1, d2) = polar_substitute(spec, k)?;
        if d2[0].is_zero() {
            return Err(ExprError::ZeroLeadingDenominator.into());
        }
        Ok(LazyNormalForm { d1, d2, cache: vec![None; k + 1] })
    }

    pub fn order(&self) -> usize {
        self.d1.len() - 1
    }

    /// `F_i`; computing it fills the cache for all lower orders.
    pub fn coeff(&mut self, i: usize) -> Result<&TrigRational, NormalFormError> {
        if self.cache[i].is_none() {
            let series = series_quotient(&self.d1[..=i], &self.d2[..=i], i)?;
            for (j, f) in series.coeffs.into_iter().enumerate() {
                if self.cache[j].is_none() {
                    self.cache[j] = Some(f);
                }
            }
        }
        Ok(self.cache[i].as_ref().unwrap())
    }

    pub fn series(&mut self) -> Result<EpsSeries, NormalFormError> {
        let k = self.order();
        self.coeff(k)?;
        Ok(EpsSeries { coeffs: self.cache.iter().map(|c| c.clone().unwrap()).collect() })
    }

    pub fn substitute(&mut self, v: Var, value: &Poly) -> Result<(), ExprError> {
        for p in self.d1.iter_mut().chain(self.d2.iter_mut()) {
            *p = trig_reduce(&p.substitute(v, value)?);
        }
        for c in self.cache.iter_mut().flatten() {
            *c = c.substitute(v, value)?;
        }
        Ok(())
    }

    pub fn bind(&mut self, values: &HashMap<Var, Rational>) -> Result<(), ExprError> {
        for p in self.d1.iter_mut().chain(self.d2.iter_mut()) {
            *p = p.bind(values)?;
        }
        for c in self.cache.iter_mut().flatten() {
            *c = c.bind(values)?;
        }
        Ok(())
    }
}
