//! Averaged functions of nonlinear separable centers by integrating the
//! variational system `y_i' = ∂F₀ y_i + h_i(θ, y_1, …, y_{i−1})`.

use rayon::prelude::*;

use crate::expr::{CompiledPoly, EpsSeries, TrigRational, Var};
use crate::unperturbed::{BoundSolution, Domain};

use super::bell::factorial;
use super::ode::{integrate, Tolerances};
use super::template::{integrand_formula, IntegrandTemplate};
use super::AveragingError;

const SLOTS: [Var; 3] = [Var::COS, Var::SIN, Var::R];

/// `numer / base^power` compiled over `(C, S, r)`.
#[derive(Clone, Debug)]
pub struct CompiledRational {
    numer: CompiledPoly,
    base: Option<(CompiledPoly, i32)>,
}

impl CompiledRational {
    pub fn new(f: &TrigRational) -> Result<CompiledRational, AveragingError> {
        let compile = |p: &crate::expr::Poly| {
            CompiledPoly::new(p, &SLOTS).map_err(|v| AveragingError::UnboundParameter(v.name()))
        };
        let numer = compile(f.numer.as_poly())?;
        let base = if f.is_polynomial() { None } else { Some((compile(f.base.as_poly())?, f.power as i32)) };
        Ok(CompiledRational { numer, base })
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    /// Value at `(cos θ, sin θ, r)`.
    pub fn eval(&self, c: f64, s: f64, r: f64) -> f64 {
        let vals = [c, s, r];
        let n = self.numer.eval(&vals);
        match &self.base {
            None => n,
            Some((b, p)) => n / b.eval(&vals).powi(*p),
        }
    }
}

/// `∂ᵐF_j` for `j, m ≤ k`, compiled.
pub fn compile_derivatives(series: &EpsSeries, k: usize) -> Result<Vec<Vec<CompiledRational>>, AveragingError> {
    let mut out = Vec::with_capacity(k + 1);
    for j in 0..=k {
        let mut f = series.coeffs.get(j).cloned().unwrap_or_else(TrigRational::zero);
        let mut row = Vec::with_capacity(k + 1);
        for _ in 0..=k {
            row.push(CompiledRational::new(&f)?);
            f = f.derivative_r();
        }
        out.push(row);
    }
    Ok(out)
}

/// `(f_1(z), …, f_k(z))` with a per-component error estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericValue {
    pub f: Vec<f64>,
    pub err: Vec<f64>,
}

/// Numeric evaluator for a normal form whose parameters are all bound.
pub struct NumericAveraging {
    pub order: usize,
    pub solution: BoundSolution,
    pub domain: Domain,
    pub tol: Tolerances,
    derivs: Vec<Vec<CompiledRational>>,
    templates: Vec<IntegrandTemplate>,
}

impl NumericAveraging {
    pub fn new(series: &EpsSeries, solution: BoundSolution, k: usize) -> Result<NumericAveraging, AveragingError> {
        let derivs = compile_derivatives(series, k)?;
        let domain = solution.domain();
        Ok(NumericAveraging {
            order: k,
            solution,
            domain,
            tol: Tolerances::default(),
            derivs,
            templates: (1..=k).map(integrand_formula).collect(),
        })
    }

    /// `∂ᵐF_j(θ, r)` for every `j, m ≤ k`.
    pub fn derivative_values(&self, theta: f64, r: f64) -> Vec<Vec<f64>> {
        let (c, s) = (theta.cos(), theta.sin());
        self.derivs
            .iter()
            .map(|row| row.iter().map(|d| if d.is_zero() { 0.0 } else { d.eval(c, s, r) }).collect())
            .collect()
    }

    fn rhs(&self, theta: f64, z: f64, y: &[f64], dy: &mut [f64]) {
        let (r, _) = self.solution.eval(theta, z);
        let d = self.derivative_values(theta, r);
        for (i, tpl) in self.templates.iter().enumerate() {
            let mut acc = d[0][1] * y[i];
            for t in &tpl.terms {
                let dv = d[t.f_index][t.deriv as usize];
                if dv == 0.0 {
                    continue;
                }
                let mut prod = t.coef as f64 * dv;
                for (j, &e) in t.y_powers.iter().enumerate() {
                    if e > 0 {
                        prod *= y[j].powi(e as i32);
                    }
                }
                acc += prod;
            }
            dy[i] = acc;
        }
    }

    fn run(&self, z: f64, tol: Tolerances) -> Result<Vec<f64>, AveragingError> {
        let y0 = vec![0.0; self.order];
        let (y, _) = integrate(|t, y, dy| self.rhs(t, z, y, dy), 0.0, std::f64::consts::TAU, &y0, tol)
            .map_err(|e| AveragingError::StiffnessFailure(format!("z = {z}: {e}")))?;
        if y.iter().any(|v| !v.is_finite()) {
            return Err(AveragingError::StiffnessFailure(format!("z = {z}: non-finite result")));
        }
        Ok(y.iter().enumerate().map(|(i, v)| v / factorial(i as u32 + 1) as f64).collect())
    }

    /// Evaluates at `z`; the error estimate is the difference to a run at
    /// hundredfold looser tolerances.
    pub fn eval(&self, z: f64) -> Result<NumericValue, AveragingError> {
        if !self.domain.contains(z) {
            return Err(AveragingError::OutsideDomain(z));
        }
        let f = self.run(z, self.tol)?;
        let loose = Tolerances { atol: self.tol.atol * 100.0, rtol: self.tol.rtol * 100.0, ..self.tol };
        let g = self.run(z, loose)?;
        let err = f.iter().zip(&g).map(|(a, b)| (a - b).abs()).collect();
        Ok(NumericValue { f, err })
    }

    /// Single-run value of `f_j`, for root finding.
    pub fn eval_component(&self, j: usize, z: f64) -> Result<f64, AveragingError> {
        if !self.domain.contains(z) {
            return Err(AveragingError::OutsideDomain(z));
        }
        Ok(self.run(z, self.tol)?[j - 1])
    }

    pub fn eval_many(&self, zs: &[f64]) -> Vec<Result<NumericValue, AveragingError>> {
        zs.par_iter().map(|&z| self.eval(z)).collect()
    }
}
