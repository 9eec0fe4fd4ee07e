//! Closed-form periodic solutions of the unperturbed example centers.

mod common;

use std::collections::HashMap;

use avgcycles::expr::{Rational, Var};
use avgcycles::normal_form::{normal_form, SystemSpec};
use avgcycles::unperturbed::{classify_separable, solve_unperturbed, Bound, PeriodicSolution, SolutionForm};
use common::*;

fn solve(spec: &SystemSpec) -> PeriodicSolution {
    let nf = normal_form(spec, 0).unwrap();
    solve_unperturbed(&classify_separable(&nf.coeffs[0]).unwrap()).unwrap()
}

#[test]
fn quintic_center() {
    let sol = solve(&SystemSpec::new(p("-y + x^2*y*(x^2 + y^2)"), p("x + x*y^2*(x^2 + y^2)")));
    assert_eq!(sol.form, SolutionForm::Radical);
    assert_eq!(sol.m(), 5);
    assert_eq!(sol.radicand().unwrap(), p("2*z^4*(C^2 - 1) + 1"));
    assert_eq!(sol.radical_exponents().unwrap(), (Rational::new(-1, 4), Rational::new(-5, 4)));
    assert_eq!(sol.r_template(), "z*(2*C^2*z^4 - 2*z^4 + 1)^(-1/4)");
    assert_eq!(sol.y_template(), "(2*C^2*z^4 - 2*z^4 + 1)^(-5/4)");
    let d = sol.bind(&HashMap::new()).unwrap().domain();
    assert_eq!(d.lo, Bound::exact_rational(Rational::zero()));
    assert_eq!(d.hi, Bound::Exact { base: Rational::from_int(2), exponent: Rational::new(-1, 4) });
}

#[test]
fn exponential_center() {
    let sol = solve(&SystemSpec::new(p("-y*(3*x^2 + y^2)"), p("x*(x^2 - y^2)")));
    assert_eq!(sol.form, SolutionForm::Exponential);
    assert_eq!(sol.sep.big_g.as_poly(), &p("C^2 - 1"));
    assert_eq!(sol.r_template(), "z*exp(C^2 - 1)");
    assert_eq!(sol.y_template(), "exp(C^2 - 1)");
    let d = sol.bind(&HashMap::new()).unwrap().domain();
    assert_eq!(d.hi, Bound::Infinite);
}

#[test]
fn collins_center() {
    let sol = solve(&SystemSpec::new(p("-y + x^2*y"), p("x + x*y^2")));
    assert_eq!(sol.radicand().unwrap(), p("z^2*(C^2 - 1) + 1"));
    assert_eq!(sol.bind(&HashMap::new()).unwrap().domain().to_string(), "(0, 1)");
}

#[test]
fn uic_center_general_alpha() {
    let sol = solve(&quartic_uic("alpha", 0));
    let r = sol.radicand().unwrap();
    // 1 − (α−1) z³ C² S − (2α+1) z³ S, up to the S² = 1 − C² reduction
    assert_eq!(r, p("1 - (alpha - 1)*z^3*C^2*S - (2*alpha + 1)*z^3*S"));
    for (alpha, hi) in [(1, 3f64.powf(-1.0 / 3.0)), (0, 1.0), (4, 9f64.powf(-1.0 / 3.0))] {
        let b: HashMap<Var, Rational> = [(Var::named("alpha"), Rational::from_int(alpha))].into();
        let d = sol.bind(&b).unwrap().domain();
        assert!((d.hi.value() - hi).abs() < 1e-12, "alpha = {alpha}: {}", d.hi);
    }
}

/// `Y = ∂r/∂z` by central differences.
#[test]
fn fundamental_solution_is_radius_derivative() {
    for spec in common::oracle::solved_centers() {
        let gap = common::oracle::fundamental_solution_gap(&spec);
        assert!(gap <= 1e-6, "{gap:e}");
    }
}

/// `r(θ, z)` solves `dr/dθ = F₀(θ, r)` with `r(0, z) = z`.
#[test]
fn radius_solves_unperturbed_equation() {
    let sol = solve(&quartic_uic("1", 0)).bind(&HashMap::new()).unwrap();
    let z = 0.6;
    assert!((sol.eval(0.0, z).0 - z).abs() < 1e-15);
    for j in 0..24 {
        let t = std::f64::consts::TAU * j as f64 / 24.0;
        let h = 1e-6;
        let fd = (sol.eval(t + h, z).0 - sol.eval(t - h, z).0) / (2.0 * h);
        assert!((fd - sol.dr_dtheta(t, z)).abs() < 1e-7);
    }
}
