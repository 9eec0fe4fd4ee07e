//! Arbitrary-precision rationals used as coefficients on the exact path.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Reduced fraction with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Rational(BigRational::new(num, den))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn signum(&self) -> i32 {
        match self.0.numer().sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Returns `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    /// Integer power; negative exponents invert (panics on `0^-n`).
    pub fn pow(&self, e: i32) -> Self {
        if e >= 0 {
            Rational(num_traits::pow(self.0.clone(), e as usize))
        } else {
            let inv = self.recip().expect("zero raised to a negative power");
            Rational(num_traits::pow(inv.0, (-e) as usize))
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self.0.to_f64() {
            Some(v) if v.is_finite() => v,
            _ => {
                // numerator/denominator overflow f64 individually
                let n = self.0.numer();
                let d = self.0.denom();
                let shift = n.bits().max(d.bits()) as i64 - 900;
                if shift > 0 {
                    let n2 = n >> shift as usize;
                    let d2 = d >> shift as usize;
                    n2.to_f64().unwrap_or(f64::NAN) / d2.to_f64().unwrap_or(f64::NAN)
                } else {
                    f64::NAN
                }
            }
        }
    }

    /// Closest fraction with denominator at most `max_den` (continued fractions).
    pub fn approximate(x: f64, max_den: i64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
        let mut v = x;
        for _ in 0..64 {
            let a = v.floor();
            if a.abs() > 1e15 {
                break;
            }
            let ai = a as i128;
            let p2 = ai * p1 + p0;
            let q2 = ai * q1 + q0;
            if q2 > max_den as i128 {
                break;
            }
            p0 = p1;
            q0 = q1;
            p1 = p2;
            q1 = q2;
            let frac = v - a;
            if frac.abs() < 1e-15 {
                break;
            }
            v = 1.0 / frac;
        }
        if q1 == 0 {
            return None;
        }
        Some(Rational::from_big(BigInt::from(p1), BigInt::from(q1)))
    }

    /// The exact binary value of a finite float.
    pub fn from_f64_exact(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Rational)
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for Rational {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let parse_int = |t: &str| -> Result<BigInt, String> {
            t.trim().parse::<BigInt>().map_err(|_| format!("invalid rational `{s}`"))
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let d = parse_int(d)?;
                if d.is_zero() {
                    return Err(format!("zero denominator in `{s}`"));
                }
                Ok(Rational::from_big(parse_int(n)?, d))
            }
            None => {
                if let Some((int, frac)) = s.split_once('.') {
                    // finite decimal, kept exact
                    let digits = frac.len() as u32;
                    let sign = if int.trim_start().starts_with('-') { -1 } else { 1 };
                    let ip =
                        if int.is_empty() || int == "-" || int == "+" { BigInt::zero() } else { parse_int(int)?.abs() };
                    let fp = if frac.is_empty() { BigInt::zero() } else { parse_int(frac)? };
                    let den = num_traits::pow(BigInt::from(10), digits as usize);
                    let num = (ip * &den + fp) * sign;
                    Ok(Rational::from_big(num, den))
                } else {
                    Ok(Rational::from_bigint(parse_int(s)?))
                }
            }
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.0 == BigRational::from_integer(BigInt::from(*other))
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(&BigRational::from_integer(BigInt::from(*other)))
    }
}
