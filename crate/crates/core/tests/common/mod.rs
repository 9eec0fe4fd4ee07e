#![allow(dead_code)]

pub mod oracle;
pub mod realize;

use avgcycles::averaging::Substitution;
use avgcycles::expr::{parse_poly, Poly};
use avgcycles::normal_form::SystemSpec;

pub fn p(s: &str) -> Poly {
    parse_poly(s).unwrap()
}

/// Kukles family with cubic x-perturbations up to order `k`.
pub fn kukles(k: usize) -> SystemSpec {
    let mut spec = SystemSpec::new(p("-y"), p("x"));
    for i in 1..=k {
        let pk = p(&format!("e_{i}_0 + e_{i}_1*x + e_{i}_2*x^2 + e_{i}_3*x^3"));
        let qk = p(&format!(
            "-(a_{i}_0 + a_{i}_1*x + a_{i}_2*x^2 + a_{i}_3*x^3 + (b_{i}_0 + b_{i}_1*x + b_{i}_2*x^2)*y \
             + (c_{i}_0 + c_{i}_1*x)*y^2 + d_{i}_0*y^3)"
        ));
        spec = spec.with_perturbation(pk, qk);
    }
    spec
}

/// Substitutions that make f_1, …, f_4 vanish (case 5 b_1_2 + 12 d_1_0 = 0).
pub fn kukles_script(order: usize) -> Vec<Substitution> {
    let lines: &[&str] = match order {
        1 => &["e_1_3 = d_1_0 + b_1_2/3", "e_1_1 = b_1_0"],
        2 => &["solve z^1 for e_2_1", "solve z^3 for e_2_3", "solve z^5 for a_1_3"],
        3 => &["solve z^1 for e_3_1", "solve z^3 for e_3_3", "solve z^5 for a_2_3", "b_1_2 = -12*d_1_0/5"],
        4 => &["c_1_1 = 0", "solve z^1 for e_4_1", "solve z^3 for e_4_3", "solve z^5 for a_3_3", "solve z^7 for b_2_2"],
        _ => &[],
    };
    lines.iter().enumerate().map(|(i, l)| Substitution::parse(l, i + 1).unwrap()).collect()
}

use std::collections::HashMap;

use avgcycles::averaging::NumericAveraging;
use avgcycles::expr::{EpsSeries, Rational, Var};
use avgcycles::normal_form::normal_form;
use avgcycles::unperturbed::{classify_separable, solve_unperturbed};

pub fn bindings(pairs: &[(&str, Rational)]) -> HashMap<Var, Rational> {
    pairs.iter().map(|(n, v)| (Var::named(n), v.clone())).collect()
}

pub fn bind_series(series: &EpsSeries, values: &HashMap<Var, Rational>) -> EpsSeries {
    EpsSeries { coeffs: series.coeffs.iter().map(|c| c.bind(values).unwrap()).collect() }
}

/// Numeric averaged functions through order `k` with every parameter bound.
pub fn numeric(spec: &SystemSpec, k: usize, values: &HashMap<Var, Rational>) -> NumericAveraging {
    let series = bind_series(&normal_form(spec, k).unwrap(), values);
    let sep = classify_separable(&series.coeffs[0]).unwrap();
    let sol = solve_unperturbed(&sep).unwrap().bind(values).unwrap();
    NumericAveraging::new(&series, sol, k).unwrap()
}

/// Collins first form with a general cubic perturbation `Σ a_i_j xⁱyʲ`, `Σ b_i_j xⁱyʲ`.
pub fn collins() -> SystemSpec {
    let mut pp = Vec::new();
    let mut qq = Vec::new();
    for i in 0..=3 {
        for j in 0..=(3 - i) {
            pp.push(format!("a_{i}_{j}*x^{i}*y^{j}"));
            qq.push(format!("b_{i}_{j}*x^{i}*y^{j}"));
        }
    }
    SystemSpec::new(p("-y + x^2*y"), p("x + x*y^2")).with_perturbation(p(&pp.join(" + ")), p(&qq.join(" + ")))
}

/// Quartic uniform isochronous center with homogeneous quartic perturbations
/// up to order `k`.
pub fn quartic_uic(alpha: &str, k: usize) -> SystemSpec {
    let mut spec =
        SystemSpec::new(p(&format!("-y + x*(({alpha})*x^3 + x*y^2)")), p(&format!("x + y*(({alpha})*x^3 + x*y^2)")));
    for n in 1..=k {
        let mut pp = vec![format!("lambda_{n}*x")];
        let mut qq = vec![format!("lambda_{n}*y")];
        for i in 0..=4 {
            let j = 4 - i;
            pp.push(format!("a_{n}_{i}_{j}*x^{i}*y^{j}"));
            qq.push(format!("b_{n}_{i}_{j}*x^{i}*y^{j}"));
        }
        spec = spec.with_perturbation(p(&pp.join(" + ")), p(&qq.join(" + ")));
    }
    spec
}
