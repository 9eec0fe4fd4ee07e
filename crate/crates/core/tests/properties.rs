//! Property tests for the exact substrate, root counting and Bell polynomials.

use avgcycles::averaging::BellPolynomial;
use avgcycles::expr::{is_trig_reduced, parse_poly, series_quotient, trig_reduce, MixedTrigPoly, Poly, Rational, Var};
use avgcycles::roots::{sturm_count, Point, UniPoly};
use proptest::prelude::*;

fn monomial(vars: &[Var], exps: &[u8]) -> Poly {
    vars.iter().zip(exps).fold(Poly::one(), |acc, (v, &e)| acc * Poly::var_pow(*v, e.into()))
}

/// Sparse polynomial over `vars` with small exponents and coefficients.
fn poly_in(vars: &'static [Var], max_exp: u8) -> impl Strategy<Value = Poly> {
    prop::collection::vec((-9i64..=9, 1i64..=5, prop::collection::vec(0..=max_exp, vars.len())), 0..6).prop_map(
        move |terms| {
            terms
                .into_iter()
                .fold(Poly::zero(), |acc, (n, d, exps)| acc + monomial(vars, &exps).scale(&Rational::new(n, d)))
        },
    )
}

const XYA: &[Var] = &[Var::X, Var::Y];
const TRIG: &[Var] = &[Var::THETA, Var::COS, Var::SIN];
const CSR: &[Var] = &[Var::COS, Var::SIN, Var::R];

fn with_param(p: Poly) -> Poly {
    // mixes in a free parameter so that coefficients are not just numbers
    p.clone() + p.mul_ref(&parse_poly("a").unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(p in poly_in(XYA, 3), q in poly_in(XYA, 3), r in poly_in(XYA, 3).prop_map(with_param)) {
        prop_assert_eq!((p.clone() + q.clone()) + r.clone(), p.clone() + (q.clone() + r.clone()));
        prop_assert_eq!(p.mul_ref(&q), q.mul_ref(&p));
        prop_assert_eq!(p.mul_ref(&q).mul_ref(&r), p.mul_ref(&q.mul_ref(&r)));
        prop_assert_eq!(p.mul_ref(&(q.clone() + r.clone())), p.mul_ref(&q) + p.mul_ref(&r));
        prop_assert!((p.clone() - p.clone()).is_zero());
        prop_assert_eq!(p.mul_ref(&Poly::one()), p);
    }

    #[test]
    fn display_round_trips(p in poly_in(XYA, 4).prop_map(with_param)) {
        prop_assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn trig_reduce_is_idempotent_and_value_preserving(p in poly_in(TRIG, 4), theta in -3.0f64..3.0) {
        let q = trig_reduce(&p);
        prop_assert!(is_trig_reduced(&q));
        prop_assert_eq!(trig_reduce(&q), q.clone());
        let at = |p: &Poly| p.eval_f64(|v| match v {
            Var::THETA => theta,
            Var::COS => theta.cos(),
            Var::SIN => theta.sin(),
            _ => f64::NAN,
        });
        let (a, b) = (at(&p), at(&q));
        prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{} vs {}", a, b);
    }

    #[test]
    fn antiderivative_differentiates_back(p in poly_in(TRIG, 3).prop_map(with_param)) {
        let f = MixedTrigPoly::new(&p);
        let g = f.antiderivative();
        prop_assert_eq!(g.derivative_theta(), f);
        prop_assert!(g.eval_f64(0.0, |_| 0.7).abs() < 1e-12);
    }

    #[test]
    fn period_integral_matches_quadrature(p in poly_in(TRIG, 3)) {
        let f = MixedTrigPoly::new(&p);
        let exact = f.period_integral().eval_f64(|v| {
            assert_eq!(v, Var::PI);
            std::f64::consts::PI
        });
        // composite Simpson
        let n = 4000;
        let h = std::f64::consts::TAU / n as f64;
        let mut sum = f.eval_f64(0.0, |_| 0.0) + f.eval_f64(std::f64::consts::TAU, |_| 0.0);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * f.eval_f64(i as f64 * h, |_| 0.0);
        }
        let quad = sum * h / 3.0;
        prop_assert!((exact - quad).abs() <= 1e-7 * exact.abs().max(1.0), "{} vs {}", exact, quad);
    }

    #[test]
    fn series_quotient_multiplies_back(
        numer in prop::collection::vec(poly_in(CSR, 2), 4),
        tail in prop::collection::vec(poly_in(CSR, 2), 3),
        lead in prop::sample::select(vec!["2 + C^2*r", "r^2", "3"]),
        theta in -3.0f64..3.0,
        r in 0.2f64..2.0,
    ) {
        let mut denom = vec![parse_poly(lead).unwrap()];
        denom.extend(tail);
        let series = series_quotient(&numer, &denom, 3).unwrap();
        let at = |v: Var| match v {
            Var::COS => theta.cos(),
            Var::SIN => theta.sin(),
            Var::R => r,
            _ => f64::NAN,
        };
        let f: Vec<f64> = series.coeffs.iter().map(|c| c.eval_f64(at)).collect();
        for i in 0..=3 {
            let back: f64 = (0..=i).map(|j| f[j] * denom[i - j].eval_f64(at)).sum();
            let want = numer[i].eval_f64(at);
            prop_assert!((back - want).abs() <= 1e-9 * want.abs().max(1.0), "order {}: {} vs {}", i, back, want);
        }
    }

    #[test]
    fn bell_recurrence(n in 1u32..9, k in 1u32..9, xs in prop::collection::vec(-2.0f64..2.0, 10)) {
        prop_assume!(k <= n);
        let lhs = BellPolynomial::new(n + 1, k + 1);
        let lhs = lhs.eval_f64(&xs[..lhs.arity()]).unwrap();
        let mut rhs = 0.0;
        let mut binom = 1.0;
        for i in 0..=(n - k) {
            let b = BellPolynomial::new(n - i, k);
            rhs += binom * xs[i as usize] * b.eval_f64(&xs[..b.arity()]).unwrap();
            binom = binom * (n - i) as f64 / (i + 1) as f64;
        }
        prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0), "{} vs {}", lhs, rhs);
    }
}

#[test]
fn bell_numbers() {
    let bell = [1u128, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975];
    for l in 1..=10u32 {
        let total: u128 = (1..=l).map(|m| BellPolynomial::new(l, m).terms.iter().map(|(c, _)| c).sum::<u128>()).sum();
        assert_eq!(total, bell[l as usize], "l = {l}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    /// Roots are half-integers in [−5, 5], possibly repeated, times an
    /// optional factor without real roots; degree ≤ 10.
    #[test]
    fn sturm_agrees_with_dense_sampling(
        roots in prop::collection::vec(-10i64..=10, 0..=8),
        complex in any::<bool>(),
        lo in -12i64..12,
        width in 1i64..24,
        scale in -5i64..=5,
    ) {
        prop_assume!(scale != 0);
        let rs: Vec<Rational> = roots.iter().map(|&r| Rational::new(r, 2)).collect();
        let mut p = UniPoly::from_roots(&rs).scale(&Rational::from_int(scale));
        if complex {
            p = p.mul(&UniPoly::from_ints(&[1, 0, 1]));
        }
        // open interval ends at quarter-integers so no root sits on them
        let (a, b) = (Rational::new(4 * lo + 1, 8), Rational::new(4 * (lo + width) + 1, 8));
        let count = sturm_count(&p, &Point::At(a.clone()), &Point::At(b.clone())).unwrap();
        let mut distinct: Vec<i64> = roots.clone();
        distinct.sort();
        distinct.dedup();
        let known = distinct.iter().filter(|&&r| {
            let r = Rational::new(r, 2);
            r > a && r < b
        }).count();
        prop_assert_eq!(count, known);
        let sf = p.square_free();
        let (fa, fb) = (a.to_f64(), b.to_f64());
        let n = 4000;
        let mut changes = 0;
        let mut last = sf.eval_f64(fa).signum();
        for i in 1..=n {
            let s = sf.eval_f64(fa + (fb - fa) * i as f64 / n as f64).signum();
            if s != last {
                changes += 1;
            }
            last = s;
        }
        prop_assert_eq!(changes, count);
    }
}
