//! Partial Bell polynomials `B_{ℓ,m}(x₁, …, x_{ℓ−m+1})`.

use std::fmt;

use super::AveragingError;

/// `B_{ℓ,m}` as a list of `(coefficient, [b₁, …, b_{ℓ−m+1}])` with
/// `Σ j·b_j = ℓ` and `Σ b_j = m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BellPolynomial {
    pub l: u32,
    pub m: u32,
    pub terms: Vec<(u128, Vec<u32>)>,
}

pub fn factorial(n: u32) -> u128 {
    (1..=n as u128).product()
}

/// All tuples of `S̃_{ℓ,m}` in lexicographically decreasing order of `b₁`.
pub fn index_tuples(l: u32, m: u32) -> Vec<Vec<u32>> {
    let width = (l + 1).saturating_sub(m) as usize;
    let mut out = Vec::new();
    let mut cur = vec![0u32; width];
    fn rec(j: usize, rem_sum: u32, rem_count: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if j == cur.len() {
            if rem_sum == 0 && rem_count == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let weight = j as u32 + 1;
        let max_b = (rem_sum / weight).min(rem_count);
        for b in (0..=max_b).rev() {
            cur[j] = b;
            rec(j + 1, rem_sum - b * weight, rem_count - b, cur, out);
        }
        cur[j] = 0;
    }
    if width > 0 {
        rec(0, l, m, &mut cur, &mut out);
    }
    out
}

impl BellPolynomial {
    /// Panics unless `1 ≤ m ≤ ℓ ≤ 30`.
    pub fn new(l: u32, m: u32) -> BellPolynomial {
        assert!(m >= 1 && m <= l && l <= 30, "need 1 <= m <= l <= 30");
        let lf = factorial(l);
        let terms = index_tuples(l, m)
            .into_iter()
            .map(|b| {
                let denom: u128 =
                    b.iter().enumerate().map(|(j, &bj)| factorial(bj) * factorial(j as u32 + 1).pow(bj)).product();
                (lf / denom, b)
            })
            .collect();
        BellPolynomial { l, m, terms }
    }

    pub fn arity(&self) -> usize {
        (self.l - self.m + 1) as usize
    }

    /// Evaluates over any commutative ring given by `one`, `mul`, `add` and
    /// integer scaling.
    pub fn eval<T: Clone>(
        &self,
        args: &[T],
        one: T,
        mul: impl Fn(&T, &T) -> T,
        add: impl Fn(T, T) -> T,
        scale: impl Fn(&T, u128) -> T,
    ) -> Result<Option<T>, AveragingError> {
        if args.len() != self.arity() {
            return Err(AveragingError::BadArity { expected: self.arity(), got: args.len() });
        }
        let mut acc: Option<T> = None;
        for (c, b) in &self.terms {
            let mut t = one.clone();
            for (j, &bj) in b.iter().enumerate() {
                for _ in 0..bj {
                    t = mul(&t, &args[j]);
                }
            }
            let t = scale(&t, *c);
            acc = Some(match acc {
                None => t,
                Some(a) => add(a, t),
            });
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, args: &[f64]) -> Result<f64, AveragingError> {
        Ok(self.eval(args, 1.0, |a, b| a * b, |a, b| a + b, |a, c| a * c as f64)?.unwrap_or(0.0))
    }
}

impl fmt::Display for BellPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, b)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let factors: Vec<String> = b
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| if e == 1 { format!("x{}", j + 1) } else { format!("x{}^{}", j + 1, e) })
                .collect();
            if *c != 1 {
                write!(f, "{c}*")?;
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}
