//! Exact solves used to build parameter values with prescribed zeros.

use std::collections::HashMap;

use crate::expr::{Poly, Rational, Var};

use super::{polynomial_part, RootError, UniPoly};

/// Solves `eqs = 0` where each equation is affine in `unknowns` with
/// rational coefficients. Extra consistent equations are allowed.
pub fn solve_affine(eqs: &[Poly], unknowns: &[Var]) -> Result<HashMap<Var, Rational>, RootError> {
    let n = unknowns.len();
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(eqs.len());
    for eq in eqs {
        let mut row = vec![Rational::zero(); n + 1];
        for (m, c) in eq.terms() {
            let mut slot = n;
            for (v, e) in m.iter() {
                match unknowns.iter().position(|u| u == v) {
                    Some(j) if *e == 1 && slot == n => slot = j,
                    Some(_) => return Err(RootError::Linear(format!("not affine: {eq}"))),
                    None => return Err(RootError::UnboundParameter(v.name())),
                }
            }
            if slot == n {
                row[n] = -c.clone();
            } else {
                row[slot] = c.clone();
            }
        }
        rows.push(row);
    }
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..n {
        let Some(p) = (pivot_row..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, p);
        let inv = rows[pivot_row][col].recip().unwrap();
        for x in rows[pivot_row].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != pivot_row && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for j in 0..=n {
                    let t = &factor * &rows[pivot_row][j];
                    rows[i][j] -= &t;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if pivots.len() < n {
        return Err(RootError::Linear("singular system".into()));
    }
    if rows[pivot_row..].iter().any(|r| !r[n].is_zero()) {
        return Err(RootError::Linear("inconsistent system".into()));
    }
    Ok(pivots.into_iter().enumerate().map(|(i, col)| (unknowns[col], rows[i][n].clone())).collect())
}

/// Values of `unknowns` that make `f`'s polynomial part (see
/// [`polynomial_part`]) proportional to `target`.
///
/// The leading coefficient of `f` in `z` must not involve the unknowns; the
/// remaining coefficients give one equation each. Equations that are linear
/// in a single remaining unknown are eliminated first, so systems that are
/// only triangularly affine can still be solved; what is left must be affine.
pub fn fit_to_polynomial(f: &Poly, unknowns: &[Var], target: &UniPoly) -> Result<HashMap<Var, Rational>, RootError> {
    let pi_exp = f.terms().next().map(|(m, _)| m.exp(Var::PI)).unwrap_or(0);
    let shift = f.degree_range(Var::Z).0;
    let norm = crate::expr::Monomial::from_pairs([(Var::PI, -pi_exp), (Var::Z, -shift)]);
    let g = f.mul_monomial(&norm, &Rational::one());
    let deg = target.degree().ok_or(RootError::ZeroPolynomial)?;
    if g.degree(Var::Z) as usize != deg {
        return Err(RootError::Linear(format!("degree {} in z, target has degree {deg}", g.degree(Var::Z))));
    }
    let lead = UniPoly::from_poly(&g.coeff_of(Var::Z, deg as i16).coeff_of(Var::PI, 0), Var::Z)
        .map_err(|_| RootError::Linear("leading coefficient depends on unknowns".into()))?
        .leading();
    if lead.is_zero() {
        return Err(RootError::Linear("vanishing leading coefficient".into()));
    }
    let lambda = lead / target.leading();
    let eqs: Vec<Poly> = (0..deg)
        .map(|i| {
            let c = g.coeff_of(Var::Z, i as i16);
            c - Poly::constant(&lambda * &target.coeffs().get(i).cloned().unwrap_or_else(Rational::zero))
        })
        .collect();
    let sol = solve_triangular(eqs, unknowns)?;
    let check = polynomial_part(&f.bind(&sol).map_err(|e| RootError::Linear(e.to_string()))?)?;
    debug_assert_eq!(check.monic(), target.monic());
    Ok(sol)
}

fn solve_triangular(mut eqs: Vec<Poly>, unknowns: &[Var]) -> Result<HashMap<Var, Rational>, RootError> {
    let mut sol: HashMap<Var, Rational> = HashMap::new();
    loop {
        let remaining: Vec<Var> = unknowns.iter().copied().filter(|u| !sol.contains_key(u)).collect();
        let mut next = Vec::new();
        for eq in eqs {
            let eq = eq.bind(&sol).map_err(|e| RootError::Linear(e.to_string()))?;
            if eq.is_zero() {
                continue;
            }
            if eq.as_constant().is_some() {
                return Err(RootError::Linear("inconsistent system".into()));
            }
            next.push(eq);
        }
        eqs = next;
        if eqs.is_empty() {
            break;
        }
        let single = eqs.iter().find_map(|eq| {
            let present: Vec<Var> = remaining.iter().copied().filter(|u| eq.contains(*u)).collect();
            match present[..] {
                [u] if eq.degree(u) == 1 => {
                    let slope = eq.coeff_of(u, 1).as_constant()?;
                    let rest = eq.coeff_of(u, 0).as_constant()?;
                    Some((u, -rest / slope))
                }
                _ => None,
            }
        });
        match single {
            Some((u, v)) => {
                sol.insert(u, v);
            }
            None => {
                sol.extend(solve_affine(&eqs, &remaining)?);
                break;
            }
        }
    }
    if let Some(u) = unknowns.iter().find(|u| !sol.contains_key(u)) {
        return Err(RootError::Linear(format!("`{}` is not determined", u.name())));
    }
    Ok(sol)
}
