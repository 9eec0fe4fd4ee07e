//! First-order averaging of the perturbed Collins first form.

mod common;

use std::collections::HashMap;
use std::time::Instant;

use avgcycles::expr::{Rational, Var};
use avgcycles::roots::{numeric_zero_scan, ScanOptions};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn closed_form(v: &HashMap<Var, Rational>, z: f64) -> f64 {
    let g = |n: &str| v.get(&Var::named(n)).map(|r| r.to_f64()).unwrap_or(0.0);
    let (a10, a12, a30) = (g("a_1_0"), g("a_1_2"), g("a_3_0"));
    let (b01, b03, b21) = (g("b_0_1"), g("b_0_3"), g("b_2_1"));
    let poly = (b01 - b03 - b21) * z.powi(4)
        + (-a10 - 3.0 * a30 - b01 - b03 + a12 + 3.0 * b21) * z * z
        + 2.0 * a30
        + 2.0 * b03
        - 2.0 * a12
        - 2.0 * b21;
    let root = 2.0 * (1.0 - z * z).sqrt() * ((a30 - b21) * z * z - a30 - b03 + a12 + b21);
    -std::f64::consts::PI / z * (poly + root)
}

fn random_bindings(rng: &mut ChaCha8Rng) -> HashMap<Var, Rational> {
    let mut out = HashMap::new();
    for i in 0..=3 {
        for j in 0..=(3 - i) {
            for c in ["a", "b"] {
                let v = Rational::new(rng.random_range(-30i64..=30), rng.random_range(1i64..=6));
                out.insert(Var::named(&format!("{c}_{i}_{j}")), v);
            }
        }
    }
    out
}

#[test]
fn numeric_first_order_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let spec = collins();
    for _ in 0..5 {
        let b = random_bindings(&mut rng);
        let num = numeric(&spec, 1, &b);
        assert_eq!(num.domain.to_string(), "(0, 1)");
        for z in [0.05, 0.3, 0.6, 0.9, 0.99] {
            let got = num.eval_component(1, z).unwrap();
            let want = closed_form(&b, z);
            assert!((got - want).abs() <= 1e-9 * want.abs().max(1.0), "z = {z}: {got} vs {want}");
        }
    }
}

#[test]
fn three_limit_cycles() {
    let start = Instant::now();
    let spec = SystemSpec::new(p("-y + x^2*y"), p("x + x*y^2"))
        .with_perturbation(p("-26*x + 61/2*x^3 - 11/2*x*y^2"), p("30*y"));
    let num = numeric(&spec, 1, &HashMap::new());
    let report = numeric_zero_scan(|z| num.eval_component(1, z).unwrap_or(f64::NAN), 0.0, 1.0, ScanOptions::default());
    let expected = [3f64.sqrt() / 2.0, 2.0 * 2f64.sqrt() / 3.0, 2.0 * 6f64.sqrt() / 5.0];
    assert_eq!(report.count, 3);
    for (z, e) in report.zeros.iter().zip(expected) {
        assert!(z.simple);
        assert!((z.z - e).abs() < 1e-10, "{} vs {e}", z.z);
    }
    assert!(start.elapsed().as_secs_f64() < 10.0);
}

use avgcycles::normal_form::SystemSpec;
