//! Independent computations of averaged functions used as cross-checks.

use std::collections::HashMap;

use avgcycles::averaging::{compile_derivatives, factorial, index_tuples, ExactAveraging};
use avgcycles::expr::{Poly, Rational, Var};
use avgcycles::normal_form::{normal_form, LazyNormalForm, SystemSpec};
use avgcycles::unperturbed::{classify_separable, solve_unperturbed};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{bind_series, numeric, p, quartic_uic};

pub fn random_poly(rng: &mut ChaCha8Rng, max_deg: u32, terms: usize) -> Poly {
    let mut out = Poly::zero();
    for _ in 0..terms {
        let i = rng.random_range(0..=max_deg);
        let j = rng.random_range(0..=max_deg - i);
        let c = Rational::new(rng.random_range(-6i64..=6), rng.random_range(1i64..=4));
        out = out + p(&format!("x^{i}*y^{j}")).scale(&c);
    }
    out
}

/// Multi-indices `(b_1, …, b_ℓ)` with `Σ j b_j = ℓ`.
pub fn s_ell(l: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for m in 1..=l {
        for mut b in index_tuples(l, m) {
            b.resize(l as usize, 0);
            out.push(b);
        }
    }
    out
}

/// `y_i' = i! (F_i + Σ_ℓ Σ_{S_ℓ} ∂^L F_{i−ℓ} Π y_j^{b_j} / Π b_j! j!^{b_j})`
/// integrated with classical RK4 on a fixed grid.
pub fn original_recursion(spec: &SystemSpec, values: &HashMap<Var, Rational>, k: usize, z: f64) -> Vec<f64> {
    let series = bind_series(&normal_form(spec, k).unwrap(), values);
    let sol = solve_unperturbed(&classify_separable(&series.coeffs[0]).unwrap()).unwrap().bind(values).unwrap();
    let derivs = compile_derivatives(&series, k).unwrap();
    let terms: Vec<Vec<(f64, Vec<u32>)>> = (1..=k as u32)
        .map(|l| {
            s_ell(l)
                .into_iter()
                .map(|b| {
                    let w: f64 = b
                        .iter()
                        .enumerate()
                        .map(|(j, &bj)| factorial(bj) as f64 * (factorial(j as u32 + 1) as f64).powi(bj as i32))
                        .product();
                    (1.0 / w, b)
                })
                .collect()
        })
        .collect();
    let rhs = |theta: f64, y: &[f64]| -> Vec<f64> {
        let (r, _) = sol.eval(theta, z);
        let (c, s) = (theta.cos(), theta.sin());
        (1..=k)
            .map(|i| {
                let mut acc = derivs[i][0].eval(c, s, r);
                for l in 1..=i {
                    for (w, b) in &terms[l - 1] {
                        let big_l: u32 = b.iter().sum();
                        let mut t = w * derivs[i - l][big_l as usize].eval(c, s, r);
                        for (j, &bj) in b.iter().enumerate() {
                            t *= y[j].powi(bj as i32);
                        }
                        acc += t;
                    }
                }
                factorial(i as u32) as f64 * acc
            })
            .collect()
    };
    let n = 6000;
    let h = std::f64::consts::TAU / n as f64;
    let mut y = vec![0.0; k];
    for step in 0..n {
        let t = step as f64 * h;
        let add = |a: &[f64], b: &[f64], s: f64| a.iter().zip(b).map(|(x, y)| x + s * y).collect::<Vec<_>>();
        let k1 = rhs(t, &y);
        let k2 = rhs(t + h / 2.0, &add(&y, &k1, h / 2.0));
        let k3 = rhs(t + h / 2.0, &add(&y, &k2, h / 2.0));
        let k4 = rhs(t + h, &add(&y, &k3, h));
        for i in 0..k {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    y.iter().enumerate().map(|(i, v)| v / factorial(i as u32 + 1) as f64).collect()
}

/// Worst deviation `|exact − numeric| / max(|exact|, scale)` over random
/// linear-center perturbations with `k ≤ 4`.
pub fn exact_vs_numeric(rng: &mut ChaCha8Rng, cases: usize) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for case in 0..cases {
        let k = 1 + case % 4;
        let mut spec = SystemSpec::new(p("-y"), p("x"));
        for _ in 0..k {
            spec = spec.with_perturbation(random_poly(rng, 4, 4), random_poly(rng, 4, 4));
        }
        let mut exact = ExactAveraging::new(LazyNormalForm::new(&spec, k).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        for _ in 0..k {
            exact.step(true).map_err(|e| e.to_string())?;
        }
        let num = numeric(&spec, k, &HashMap::new());
        let zs: Vec<f64> = (0..20).map(|_| rng.random_range(0.01..1.0)).collect();
        let mut values = Vec::new();
        for &z in &zs {
            values.push(num.eval(z).map_err(|e| e.to_string())?.f);
        }
        for j in 0..k {
            let scale = values.iter().fold(1e-3f64, |m, v| m.max(v[j].abs()));
            for (z, v) in zs.iter().zip(&values) {
                let want = exact.f(j + 1).unwrap().eval_f64(|var| match var {
                    Var::Z => *z,
                    Var::PI => std::f64::consts::PI,
                    _ => f64::NAN,
                });
                worst = worst.max((v[j] - want).abs() / want.abs().max(scale));
            }
        }
    }
    Ok(worst)
}

/// Centers with closed-form solutions and a sample radius inside `D`.
pub fn oracle_centers() -> Vec<(SystemSpec, f64)> {
    vec![
        (SystemSpec::new(p("-y"), p("x")), 0.7),
        (SystemSpec::new(p("-y + x^2*y"), p("x + x*y^2")), 0.6),
        (quartic_uic("1", 0), 0.5),
        (SystemSpec::new(p("-y*(3*x^2 + y^2)"), p("x*(x^2 - y^2)")), 0.8),
    ]
}

/// Worst deviation `|bell − original| / max(|original|, 1)` for random
/// perturbations of each oracle center with `k ≤ 3`.
pub fn bell_vs_original(rng: &mut ChaCha8Rng) -> f64 {
    let mut worst = 0.0f64;
    for (center, z) in oracle_centers() {
        for k in 1..=3 {
            let mut spec = center.clone();
            for _ in 0..k {
                spec = spec.with_perturbation(random_poly(rng, 3, 3), random_poly(rng, 3, 3));
            }
            let bell = numeric(&spec, k, &HashMap::new()).eval(z).unwrap().f;
            let orig = original_recursion(&spec, &HashMap::new(), k, z);
            for j in 0..k {
                worst = worst.max((bell[j] - orig[j]).abs() / orig[j].abs().max(1.0));
            }
        }
    }
    worst
}

/// Worst relative gap between `Y` and a central difference of `r` in `z`.
pub fn fundamental_solution_gap(spec: &SystemSpec) -> f64 {
    let nf = normal_form(spec, 0).unwrap();
    let sol = solve_unperturbed(&classify_separable(&nf.coeffs[0]).unwrap()).unwrap().bind(&HashMap::new()).unwrap();
    let hi = sol.domain().hi.value().min(2.0);
    let mut worst = 0.0f64;
    for i in 1..8 {
        let z = hi * i as f64 / 8.0;
        for j in 0..12 {
            let theta = std::f64::consts::TAU * j as f64 / 12.0 + 0.1;
            let h = 1e-5 * z;
            let fd = (sol.eval(theta, z + h).0 - sol.eval(theta, z - h).0) / (2.0 * h);
            let (_, y) = sol.eval(theta, z);
            worst = worst.max((fd - y).abs() / y.abs());
        }
    }
    worst
}

/// Centers whose fundamental solution is checked against finite differences.
pub fn solved_centers() -> Vec<SystemSpec> {
    vec![
        SystemSpec::new(p("-y + x^2*y*(x^2 + y^2)"), p("x + x*y^2*(x^2 + y^2)")),
        SystemSpec::new(p("-y + x^2*y"), p("x + x*y^2")),
        quartic_uic("1", 0),
        SystemSpec::new(p("-y*(3*x^2 + y^2)"), p("x*(x^2 - y^2)")),
    ]
}
