//! Floating-point evaluation of polynomials over a fixed variable layout.

use smallvec::SmallVec;

use super::poly::Poly;
use super::var::Var;

/// A polynomial whose variables are mapped to slots of an `f64` array.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(f64, SmallVec<[(u8, i32); 4]>)>,
}

impl CompiledPoly {
    /// Fails with the first variable of `p` that has no slot.
    pub fn new(p: &Poly, slots: &[Var]) -> Result<CompiledPoly, Var> {
        let mut terms = Vec::with_capacity(p.len());
        for (m, c) in p.sorted_terms() {
            let mut exps = SmallVec::new();
            for &(v, e) in m.iter() {
                match slots.iter().position(|s| *s == v) {
                    Some(i) => exps.push((i as u8, e as i32)),
                    None => return Err(v),
                }
            }
            terms.push((c.to_f64(), exps));
        }
        Ok(CompiledPoly { terms })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, vals: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (c, exps) in &self.terms {
            let mut t = *c;
            for &(i, e) in exps {
                t *= vals[i as usize].powi(e);
            }
            acc += t;
        }
        acc
    }
}
