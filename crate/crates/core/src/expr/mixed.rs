//! Sums of `θᵃ cosⁱθ sinʲθ` terms and their exact integration.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Deref;
use std::sync::{OnceLock, RwLock};

use rustc_hash::FxHashMap;

use super::poly::{Exp, Monomial, Poly};
use super::rational::Rational;
use super::trig::trig_reduce;
use super::var::Var;

/// Key of a primitive trig term: (θ-power, cos-power, sin-power).
pub type TrigKey = (Exp, Exp, Exp);

const BASIS: [Var; 3] = [Var::THETA, Var::COS, Var::SIN];

/// Polynomial that may contain `θ`, `C`, `S` (sin-degree ≤ 1) and any other
/// variable; the other variables act as coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MixedTrigPoly(Poly);

impl MixedTrigPoly {
    pub fn new(p: &Poly) -> MixedTrigPoly {
        MixedTrigPoly(trig_reduce(p))
    }

    pub fn zero() -> MixedTrigPoly {
        MixedTrigPoly(Poly::zero())
    }

    pub fn as_poly(&self) -> &Poly {
        &self.0
    }

    pub fn into_poly(self) -> Poly {
        self.0
    }

    /// Groups by primitive trig term.
    pub fn split(&self) -> BTreeMap<TrigKey, Poly> {
        self.0.collect(&BASIS).into_iter().map(|(k, v)| ((k[0], k[1], k[2]), v)).collect()
    }

    pub fn mul(&self, other: &MixedTrigPoly) -> MixedTrigPoly {
        MixedTrigPoly(self.0.mul_trig(&other.0))
    }

    pub fn derivative_theta(&self) -> MixedTrigPoly {
        let p = &self.0;
        let d = p.derivative(Var::THETA)
            + p.derivative(Var::COS).mul_trig(&-Poly::var(Var::SIN))
            + p.derivative(Var::SIN).mul_trig(&Poly::var(Var::COS));
        MixedTrigPoly(trig_reduce(&d))
    }

    /// Antiderivative in θ vanishing at θ = 0.
    pub fn antiderivative(&self) -> MixedTrigPoly {
        let mut acc: FxHashMap<Monomial, Rational> = FxHashMap::default();
        for (key, coef) in self.split() {
            let prim = primitive(key);
            for (m, c) in prim.terms() {
                for (cm, cc) in coef.terms() {
                    let e = acc.entry(m.mul(cm)).or_insert_with(Rational::zero);
                    *e += &(c * cc);
                }
            }
        }
        MixedTrigPoly(Poly::from_terms(acc))
    }

    /// `∫₀^{2π}` as a polynomial in the remaining variables and `pi`.
    pub fn period_integral(&self) -> Poly {
        let mut out = Poly::zero();
        for (key, coef) in self.split() {
            let v = period_value(key);
            if !v.is_zero() {
                out = out + coef.mul_ref(&v);
            }
        }
        out
    }

    /// Value at θ = 2π.
    pub fn at_two_pi(&self) -> Poly {
        eval_two_pi(&self.0)
    }

    pub fn eval_f64(&self, theta: f64, value: impl Fn(Var) -> f64) -> f64 {
        let (c, s) = (theta.cos(), theta.sin());
        self.0.eval_f64(|v| match v {
            Var::THETA => theta,
            Var::COS => c,
            Var::SIN => s,
            Var::PI => std::f64::consts::PI,
            other => value(other),
        })
    }
}

impl Deref for MixedTrigPoly {
    type Target = Poly;
    fn deref(&self) -> &Poly {
        &self.0
    }
}

impl fmt::Display for MixedTrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for MixedTrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// θ → 2π, C → 1, S → 0.
fn eval_two_pi(p: &Poly) -> Poly {
    let two_pi = Poly::term(Monomial::var(Var::PI, 1), Rational::from_int(2));
    let q = p
        .substitute(Var::COS, &Poly::one())
        .and_then(|q| q.substitute(Var::SIN, &Poly::zero()))
        .and_then(|q| q.substitute(Var::THETA, &two_pi));
    q.expect("nonnegative trig exponents")
}

struct Tables {
    primitive: RwLock<FxHashMap<TrigKey, Poly>>,
    period: RwLock<FxHashMap<TrigKey, Poly>>,
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| Tables { primitive: RwLock::new(FxHashMap::default()), period: RwLock::new(FxHashMap::default()) })
}

fn basis_poly(a: Exp, i: Exp, j: Exp) -> Poly {
    Poly::term(Monomial::from_pairs([(Var::THETA, a), (Var::COS, i), (Var::SIN, j)]), Rational::one())
}

/// Antiderivative of `θᵃ Cⁱ Sʲ` (`j ≤ 1`) vanishing at 0, memoized.
pub fn primitive(key: TrigKey) -> Poly {
    if let Some(p) = tables().primitive.read().unwrap().get(&key) {
        return p.clone();
    }
    let p = compute_primitive(key);
    tables().primitive.write().unwrap().insert(key, p.clone());
    p
}

fn compute_primitive((a, i, j): TrigKey) -> Poly {
    assert!(a >= 0 && i >= 0 && (0..=1).contains(&j), "bad trig key");
    if a == 0 {
        if j == 1 {
            // ∫ Cⁱ S = (1 − C^(i+1)) / (i+1)
            let inv = Rational::new(1, i as i64 + 1);
            return (Poly::one() - basis_poly(0, i + 1, 0)).scale(&inv);
        }
        return match i {
            0 => basis_poly(1, 0, 0),
            1 => basis_poly(0, 0, 1),
            _ => {
                // Iᵢ = C^(i−1) S / i + (i−1)/i · I_(i−2)
                let head = basis_poly(0, i - 1, 1).scale(&Rational::new(1, i as i64));
                head + primitive((0, i - 2, 0)).scale(&Rational::new(i as i64 - 1, i as i64))
            }
        };
    }
    if i == 0 && j == 0 {
        return basis_poly(a + 1, 0, 0).scale(&Rational::new(1, a as i64 + 1));
    }
    // ∫ θᵃ g = θᵃ G − a ∫ θ^(a−1) G
    let g = primitive((0, i, j));
    let first = g.mul_ref(&basis_poly(a, 0, 0));
    let lowered = MixedTrigPoly::new(&g.mul_ref(&basis_poly(a - 1, 0, 0)));
    first - lowered.antiderivative().0.scale(&Rational::from_int(a as i64))
}

/// `∫₀^{2π} θᵃ Cⁱ Sʲ dθ` as a polynomial in `pi`, memoized.
pub fn period_value(key: TrigKey) -> Poly {
    if let Some(p) = tables().period.read().unwrap().get(&key) {
        return p.clone();
    }
    let (a, i, j) = key;
    let p = if a == 0 && (j == 1 || i % 2 == 1) { Poly::zero() } else { eval_two_pi(&primitive(key)) };
    tables().period.write().unwrap().insert(key, p.clone());
    p
}
