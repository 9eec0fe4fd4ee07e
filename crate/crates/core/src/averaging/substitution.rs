//! Parameter substitution scripts applied between averaging orders.

use std::fmt;

use crate::expr::{parse_poly_at, ParseError, Poly, Var};

use super::AveragingError;

#[derive(Clone, Debug, PartialEq)]
pub enum Substitution {
    /// `name = expr`
    Assign { var: Var, value: Poly },
    /// `solve z^n for name`: makes the `zⁿ` coefficient of the current
    /// averaged function vanish by shifting `name`.
    Solve { z_power: i16, var: Var },
}

impl Substitution {
    pub fn var(&self) -> Var {
        match self {
            Substitution::Assign { var, .. } | Substitution::Solve { var, .. } => *var,
        }
    }

    /// Parses one script line; `line` is used for error positions.
    pub fn parse(text: &str, line: usize) -> Result<Substitution, ParseError> {
        let err = |col: usize, msg: &str| ParseError { line, col, msg: msg.to_string() };
        let trimmed = text.trim();
        let indent = text.len() - text.trim_start().len();
        if let Some(rest) = trimmed.strip_prefix("solve ") {
            let words: Vec<&str> = rest.split_whitespace().collect();
            if words.len() != 3 || words[1] != "for" {
                return Err(err(indent + 1, "expected `solve z^<n> for <parameter>`"));
            }
            let power = words[0]
                .strip_prefix("z^")
                .or_else(|| (words[0] == "z").then_some("1"))
                .and_then(|n| n.parse::<i16>().ok())
                .ok_or_else(|| err(indent + 7, "expected `z^<n>`"))?;
            let var = parameter(words[2]).ok_or_else(|| err(indent + 1, "invalid parameter name"))?;
            return Ok(Substitution::Solve { z_power: power, var });
        }
        let Some((lhs, rhs)) = text.split_once('=') else {
            return Err(err(indent + 1, "expected `<parameter> = <expression>`"));
        };
        let var = parameter(lhs.trim()).ok_or_else(|| err(indent + 1, "invalid parameter name"))?;
        let value = parse_poly_at(rhs, line, lhs.len() + 2)?;
        Ok(Substitution::Assign { var, value })
    }
}

fn parameter(name: &str) -> Option<Var> {
    let mut chars = name.chars();
    let ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !Var::is_reserved_name(name);
    ok.then(|| Var::named(name))
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Substitution::Assign { var, value } => write!(f, "{var} = {value}"),
            Substitution::Solve { z_power, var } => write!(f, "solve z^{z_power} for {var}"),
        }
    }
}

/// Value for `var` that annihilates the `z^power` coefficient of `f`.
///
/// The coefficient must be affine in `var` with a single-term slope; the
/// returned value is `var − coeff/slope`.
pub fn solve_for(f: &Poly, z_power: i16, var: Var) -> Result<Poly, AveragingError> {
    let coeff = f.coeff_of(Var::Z, z_power);
    let (lo, hi) = coeff.degree_range(var);
    if coeff.is_zero() || hi == 0 {
        return Err(AveragingError::Solve(format!("coefficient of z^{z_power} does not depend on {var}")));
    }
    if lo < 0 || hi > 1 {
        return Err(AveragingError::Solve(format!("coefficient of z^{z_power} is not affine in {var}")));
    }
    let slope = coeff.coeff_of(var, 1);
    let inv = slope.monomial_inverse().map_err(|_| {
        AveragingError::Solve(format!("slope of z^{z_power} coefficient in {var} is not a single term: {slope}"))
    })?;
    Ok(Poly::var(var) - coeff.mul_ref(&inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly;

    #[test]
    fn parses_both_forms() {
        let s = Substitution::parse("e_1_3 = d_1_0 + b_1_2/3", 3).unwrap();
        assert_eq!(s.to_string(), "e_1_3 = 1/3*b_1_2 + d_1_0");
        let s = Substitution::parse("solve z^5 for a_1_3", 4).unwrap();
        assert_eq!(s, Substitution::Solve { z_power: 5, var: Var::named("a_1_3") });
        assert!(Substitution::parse("solve z^x for a", 1).is_err());
        assert!(Substitution::parse("z = 3", 1).is_err());
    }

    #[test]
    fn solve_annihilates_coefficient() {
        let f = parse_poly("pi*z^3*(2*d*a + b) + pi*z*c").unwrap();
        let a = Var::named("a");
        let value = solve_for(&f, 3, a).unwrap();
        let g = f.substitute(a, &value).unwrap();
        assert!(g.coeff_of(Var::Z, 3).is_zero());
        assert_eq!(g.coeff_of(Var::Z, 1), parse_poly("pi*c").unwrap());
        assert!(solve_for(&f, 1, a).is_err());
    }
}
