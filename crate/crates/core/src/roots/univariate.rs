//! Dense univariate polynomials over ℚ and Sturm sequences.

use std::fmt;

use crate::expr::{Poly, Rational, Var};

use super::RootError;

/// `Σ coeffs[i] xⁱ`, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> UniPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> UniPoly {
        UniPoly::new(coeffs.iter().map(|&c| Rational::from_int(c)).collect())
    }

    /// `Π (x − rᵢ)`.
    pub fn from_roots(roots: &[Rational]) -> UniPoly {
        roots.iter().fold(UniPoly::from_ints(&[1]), |acc, r| acc.mul(&UniPoly::new(vec![-r.clone(), Rational::one()])))
    }

    /// Reads a polynomial in `v` whose coefficients are plain rationals.
    pub fn from_poly(p: &Poly, v: Var) -> Result<UniPoly, RootError> {
        let mut coeffs = Vec::new();
        for (m, c) in p.terms() {
            if let Some((other, _)) = m.iter().find(|(w, _)| *w != v) {
                return Err(RootError::UnboundParameter(other.name()));
            }
            let e = m.exp(v);
            if e < 0 {
                return Err(RootError::NotPolynomial(p.to_string()));
            }
            let e = e as usize;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, Rational::zero());
            }
            coeffs[e] = c.clone();
        }
        Ok(UniPoly::new(coeffs))
    }

    pub fn to_poly(&self, v: Var) -> Poly {
        let mut out = Poly::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            out.add_term(crate::expr::Monomial::var(v, i as i16), c);
        }
        out
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * &Rational::from_int(i as i64)).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::default();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        UniPoly::new(out)
    }

    pub fn scale(&self, c: &Rational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Quotient and remainder of Euclidean division.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.leading().recip().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let c = rem[top].clone() * &lead_inv;
            if !c.is_zero() {
                for (i, b) in d.coeffs.iter().enumerate() {
                    let t = &c * b;
                    rem[top - dd + i] -= &t;
                }
                quot[top - dd] = c;
            }
            rem.pop();
        }
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading().recip() {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    /// `self / gcd(self, self')`: same roots, all simple.
    pub fn square_free(&self) -> UniPoly {
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.clone();
        }
        self.div_rem(&g).0
    }

    /// Substitutes `x → x^k`.
    pub fn compose_power(&self, k: usize) -> UniPoly {
        let mut out = vec![Rational::zero(); (self.coeffs.len().max(1) - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * k] = c.clone();
        }
        UniPoly::new(out)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_poly(Var::Z), f)
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Point at which a Sturm sequence is evaluated.
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    NegInf,
    At(Rational),
    PosInf,
}

/// Canonical Sturm sequence `p₀ = p, p₁ = p', pᵢ₊₁ = −rem(pᵢ₋₁, pᵢ)`.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    seq: Vec<UniPoly>,
}

impl SturmSequence {
    pub fn new(p: &UniPoly) -> Result<SturmSequence, RootError> {
        if p.is_zero() {
            return Err(RootError::ZeroPolynomial);
        }
        // Working with the square-free part keeps the count of distinct roots
        // exact at points where p itself vanishes.
        let p = p.square_free();
        let mut seq = vec![p.clone(), p.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            seq.push(r.scale(&Rational::from_int(-1)));
        }
        seq.pop();
        Ok(SturmSequence { seq })
    }

    /// Sign variations at `x`, zeros skipped.
    pub fn variations(&self, x: &Point) -> usize {
        let signs = self.seq.iter().map(|p| match x {
            Point::At(x) => p.eval(x).signum(),
            Point::PosInf => p.leading().signum(),
            Point::NegInf => {
                let s = p.leading().signum();
                if p.degree().unwrap_or(0) % 2 == 1 {
                    -s
                } else {
                    s
                }
            }
        });
        let mut last = 0;
        let mut count = 0;
        for s in signs.filter(|s| *s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Distinct real roots in `(lo, hi]`.
    pub fn count(&self, lo: &Point, hi: &Point) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }
}

/// Number of distinct real roots of `p` in `(lo, hi]`.
pub fn sturm_count(p: &UniPoly, lo: &Point, hi: &Point) -> Result<usize, RootError> {
    if let (Point::At(a), Point::At(b)) = (lo, hi) {
        if a >= b {
            return Err(RootError::EmptyInterval);
        }
    }
    Ok(SturmSequence::new(p)?.count(lo, hi))
}

/// Disjoint rational intervals `(a, b]` each holding exactly one distinct
/// root of `p` inside `(lo, hi)`, refined until narrower than `width`.
pub fn isolate_roots(
    p: &UniPoly,
    lo: &Rational,
    hi: &Rational,
    width: &Rational,
) -> Result<Vec<(Rational, Rational)>, RootError> {
    let sturm = SturmSequence::new(p)?;
    let sq = p.square_free();
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone())];
    let two = Rational::from_int(2);
    while let Some((a, b)) = stack.pop() {
        let n = sturm.count(&Point::At(a.clone()), &Point::At(b.clone()));
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(refine(&sq, a, b, width));
            continue;
        }
        let mid = (&a + &b) / &two;
        stack.push((mid.clone(), b));
        stack.push((a, mid));
    }
    // drop a root sitting exactly on the open upper end
    out.retain(|(_, b)| b != hi || !sq.eval(hi).is_zero());
    out.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(out)
}

/// Bisects `(a, b]` holding a single simple root of the square-free `p`.
fn refine(p: &UniPoly, mut a: Rational, mut b: Rational, width: &Rational) -> (Rational, Rational) {
    let two = Rational::from_int(2);
    if p.eval(&b).is_zero() {
        return (b.clone(), b);
    }
    let sb = p.eval(&b).signum();
    while &(&b - &a) > width {
        let mid = (&a + &b) / &two;
        let sm = p.eval(&mid).signum();
        if sm == 0 {
            return (mid.clone(), mid);
        }
        if sm == sb {
            b = mid;
        } else {
            a = mid;
        }
    }
    (a, b)
}
