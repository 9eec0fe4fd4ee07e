//! Kukles averaged functions after the vanishing scripts, and parameter
//! values giving them a prescribed number of simple zeros.

use std::collections::HashMap;

use avgcycles::averaging::{solve_for, ExactAveraging, Substitution};
use avgcycles::expr::{Poly, Rational, Var};
use avgcycles::normal_form::LazyNormalForm;
use avgcycles::roots::{fit_to_polynomial, UniPoly};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{kukles, kukles_script};

fn apply(engine: &mut ExactAveraging, order: usize) {
    for s in kukles_script(order) {
        let value = match &s {
            Substitution::Assign { value, .. } => value.clone(),
            Substitution::Solve { z_power, var } => solve_for(engine.f(order).unwrap(), *z_power, *var).unwrap(),
        };
        engine.substitute(s.var(), &value).unwrap();
    }
    assert!(engine.f(order).unwrap().is_zero(), "f{order} survives its script");
}

/// `f_1 … f_k`, each computed after the scripts of all lower orders.
pub fn chain(k: usize) -> Vec<Poly> {
    let nf = LazyNormalForm::new(&kukles(k), k).unwrap();
    let mut engine = ExactAveraging::new(nf).unwrap();
    let mut out = Vec::new();
    for j in 1..=k {
        out.push(engine.step(j < k).unwrap().clone());
        if j < k {
            apply(&mut engine, j);
        }
    }
    out
}

/// Parameters solved for at order `k`, one per power `z^1, z^3, …`.
pub fn adjustable(k: usize) -> Vec<Var> {
    let names = [
        format!("e_{k}_1"),
        format!("e_{k}_3"),
        format!("a_{}_3", k as i64 - 1),
        format!("b_{}_2", k as i64 - 2),
        format!("c_{}_1", k as i64 - 3),
    ];
    names[..k].iter().map(|n| Var::named(n)).collect()
}

/// Random nonzero rationals for every parameter of `f` outside `skip`.
pub fn background(f: &Poly, skip: &[Var], rng: &mut ChaCha8Rng) -> HashMap<Var, Rational> {
    f.parameters()
        .into_iter()
        .filter(|v| !skip.contains(v))
        .map(|v| {
            let mut n = rng.random_range(-9i64..=9);
            if n == 0 {
                n = 1;
            }
            (v, Rational::new(n, rng.random_range(1i64..=4)))
        })
        .collect()
}

/// Values for every parameter of `f_k` making it a multiple of
/// `Π_{w=1..k} (z² − w)`, so its positive zeros are `√1, …, √k`.
pub fn realize(f: &Poly, k: usize, rng: &mut ChaCha8Rng) -> HashMap<Var, Rational> {
    let unknowns = adjustable(k);
    let mut values = background(f, &unknowns, rng);
    let partial = f.bind(&values).unwrap();
    let roots: Vec<Rational> = (1..=k as i64).map(Rational::from_int).collect();
    let target = UniPoly::from_roots(&roots).compose_power(2);
    values.extend(fit_to_polynomial(&partial, &unknowns, &target).unwrap());
    values
}
