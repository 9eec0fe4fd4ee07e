//! Normal form, unperturbed solution, averaged functions and zeros, in order.

use std::collections::{BTreeSet, HashMap};

use crate::averaging::{solve_for, ExactAveraging, NumericAveraging, Substitution};
use crate::expr::{EpsSeries, Poly, Rational, TrigRational, Var};
use crate::normal_form::{normal_form, LazyNormalForm, SystemSpec};
use crate::roots::{count_simple_positive, kukles_bound, numeric_zero_scan, ScanOptions, ZeroReport};
use crate::unperturbed::{classify_separable, solve_unperturbed, BoundSolution, Domain, UnperturbedError};

use super::config::{Mode, RunOptions, SystemFile};
use super::report::{AveragedEntry, LimitCycle, Report, SampleTable, SolutionSummary, StageFailure};

pub const DEFAULT_GRID: usize = 2048;
pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_Z_MAX: f64 = 1.0;
/// θ-samples per limit cycle, endpoints included.
const CYCLE_POINTS: usize = 65;
/// Interior points used to decide numerically whether `f_j` vanishes.
const CHECK_POINTS: usize = 32;

struct Settings {
    order: usize,
    mode: Mode,
    grid: usize,
    tol: f64,
    samples: usize,
    z_max: f64,
}

impl Settings {
    fn new(file: &SystemFile, overrides: &RunOptions) -> Settings {
        let o = file.run.overridden_by(overrides);
        Settings {
            order: o.order.unwrap_or(file.spec.perturbations.len().max(1)),
            mode: o.mode.unwrap_or(Mode::Auto),
            grid: o.grid.unwrap_or(DEFAULT_GRID),
            tol: o.tol.unwrap_or(DEFAULT_TOL),
            samples: o.samples.unwrap_or(0),
            z_max: o.z_max.unwrap_or(DEFAULT_Z_MAX),
        }
    }

    /// Finite interval used for scans and samples.
    fn window(&self, d: &Domain) -> (f64, f64) {
        let hi = d.hi.value();
        (d.lo.value(), if hi.is_finite() { hi } else { self.z_max.max(d.lo.value() + 1e-6) })
    }
}

/// `i`-th of `n` interior points `lo + i(hi − lo)/(n + 1)`.
pub fn interior_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|i| lo + i as f64 * (hi - lo) / (n + 1) as f64).collect()
}

fn fail(report: &mut Report, stage: &'static str, message: impl ToString) {
    report.failure = Some(StageFailure { stage, message: message.to_string() });
}

fn free_parameters(p: &Poly) -> BTreeSet<String> {
    p.parameters().into_iter().map(|v| v.name()).collect()
}

/// Runs every stage; a failing stage is recorded and the later ones skipped.
pub fn run_pipeline(file: &SystemFile, overrides: &RunOptions) -> Report {
    let st = Settings::new(file, overrides);
    let mut report = Report::new(file.to_string(), st.order);
    let values: HashMap<Var, Rational> = file.bindings.iter().cloned().collect();
    report.kukles_bound =
        kukles_template(&file.spec).and_then(|(m, n1, n2, n3)| kukles_bound(m, n1, n2, n3, st.order as u32).ok());

    let series = match normal_form(&file.spec, st.order) {
        Ok(s) => s,
        Err(e) => {
            fail(&mut report, "normal-form", e);
            return report;
        }
    };
    report.normal_form = series.coeffs.iter().map(|c| c.to_string()).collect();

    let f0 = match series.coeffs[0].bind(&values) {
        Ok(f0) => f0,
        Err(e) => {
            fail(&mut report, "unperturbed-solver", e);
            return report;
        }
    };
    let mode = match st.mode {
        Mode::Auto if f0.is_zero() => Mode::Exact,
        Mode::Auto => Mode::Numeric,
        m => m,
    };
    report.mode = Some(mode);

    let bound = match solve_stage(&f0, &values, &mut report) {
        Some(b) => b,
        None => return report,
    };
    if st.order == 0 {
        return report;
    }
    match mode {
        Mode::Exact => exact_path(file, &st, &values, &mut report),
        _ => numeric_path(file, &st, series, bound, &values, &mut report),
    }
    if let Some(zeros) = &mut report.zeros {
        zeros.bound = report.kukles_bound;
    }
    report
}

/// Classifies and solves the unperturbed equation; `None` after a failure.
fn solve_stage(
    f0: &TrigRational,
    values: &HashMap<Var, Rational>,
    report: &mut Report,
) -> Option<Result<BoundSolution, UnperturbedError>> {
    let stage = "unperturbed-solver";
    let sep = match classify_separable(f0) {
        Ok(s) => s,
        Err(e) => {
            fail(report, stage, e);
            return None;
        }
    };
    let sol = match solve_unperturbed(&sep) {
        Ok(s) => s,
        Err(e) => {
            fail(report, stage, e);
            return None;
        }
    };
    let bound = sol.bind(values);
    report.solution = Some(SolutionSummary {
        m: sep.m,
        g: sep.g.to_string(),
        big_g: sep.big_g.as_poly().to_string(),
        form: sol.form,
        r: sol.r_template(),
        y: sol.y_template(),
        domain: bound.as_ref().ok().map(|b| b.domain()),
    });
    Some(bound)
}

fn exact_path(file: &SystemFile, st: &Settings, values: &HashMap<Var, Rational>, report: &mut Report) {
    let k = st.order;
    let mut engine = match LazyNormalForm::new(&file.spec, k)
        .map_err(crate::averaging::AveragingError::from)
        .and_then(ExactAveraging::new)
    {
        Ok(e) => e,
        Err(e) => return fail(report, "averaging", e),
    };
    for j in 1..=k {
        if let Err(e) = engine.step(j < k) {
            return fail(report, "averaging", format!("f{j}: {e}"));
        }
        if j == k {
            break;
        }
        for s in file.substitutions.get(&j).into_iter().flatten() {
            let value = match s {
                Substitution::Assign { value, .. } => Ok(value.clone()),
                Substitution::Solve { z_power, var } => solve_for(engine.f(j).unwrap(), *z_power, *var),
            };
            if let Err(e) = value.and_then(|v| engine.substitute(s.var(), &v)) {
                return fail(report, "averaging", format!("order-{j} substitution `{s}`: {e}"));
            }
        }
        if !engine.f(j).unwrap().is_zero() {
            report.warnings.push(format!("f{j} is not identically zero after the order-{j} substitutions"));
        }
    }
    report.averaged = engine
        .fs()
        .iter()
        .enumerate()
        .map(|(i, f)| AveragedEntry { order: i + 1, exact: Some(f.to_string()) })
        .collect();

    // root analysis on the bound functions
    let bound: Vec<Poly> = match engine.fs().iter().map(|f| f.bind(values)).collect() {
        Ok(b) => b,
        Err(e) => return fail(report, "root-analysis", e),
    };
    let domain = Domain::positive();
    let (lo, hi) = st.window(&domain);
    let free: BTreeSet<String> = bound.iter().flat_map(free_parameters).collect();
    if free.is_empty() && st.samples >= 2 {
        let zs = interior_points(lo, hi, st.samples);
        report.samples = Some(SampleTable {
            columns: columns(k),
            rows: zs
                .iter()
                .map(|&z| {
                    let mut row = vec![z];
                    row.extend(bound.iter().map(|f| eval_z(f, z)));
                    row
                })
                .collect(),
        });
    }
    let Some(j) = bound.iter().position(|f| !f.is_zero()) else {
        report.zeros = Some(ZeroReport::empty(None));
        return;
    };
    let f = &bound[j];
    if !free_parameters(f).is_empty() {
        report.warnings.push(format!(
            "root analysis skipped: f{} depends on unbound parameters {}",
            j + 1,
            free_parameters(f).into_iter().collect::<Vec<_>>().join(", ")
        ));
        return;
    }
    match count_simple_positive(f, &domain) {
        Ok(mut z) => {
            z.order = Some(j + 1);
            report.limit_cycles = z.zeros.iter().map(|zero| cycle(zero.z, |_, z| z)).collect();
            report.zeros = Some(z);
        }
        Err(e) => fail(report, "root-analysis", e),
    }
}

fn numeric_path(
    file: &SystemFile,
    st: &Settings,
    mut series: EpsSeries,
    bound: Result<BoundSolution, UnperturbedError>,
    values: &HashMap<Var, Rational>,
    report: &mut Report,
) {
    let k = st.order;
    let sol = match bound {
        Ok(s) => s,
        Err(e) => return fail(report, "unperturbed-solver", e),
    };
    // parameter assignments are symbolic and can be pushed into the normal form
    for (j, subs) in file.substitutions.range(..k) {
        for s in subs {
            let Substitution::Assign { var, value } = s else {
                return fail(report, "averaging", format!("order-{j} `{s}` needs exact mode"));
            };
            for c in &mut series.coeffs {
                match c.substitute(*var, value) {
                    Ok(n) => *c = n,
                    Err(e) => return fail(report, "averaging", e),
                }
            }
        }
    }
    let series = EpsSeries {
        coeffs: match series.coeffs.iter().map(|c| c.bind(values)).collect() {
            Ok(c) => c,
            Err(e) => return fail(report, "averaging", e),
        },
    };
    let num = match NumericAveraging::new(&series, sol, k) {
        Ok(n) => n,
        Err(e) => return fail(report, "averaging", e),
    };
    report.averaged = (1..=k).map(|order| AveragedEntry { order, exact: None }).collect();
    let (lo, hi) = st.window(&num.domain);
    if hi.partial_cmp(&lo) != Some(std::cmp::Ordering::Greater) {
        return fail(report, "averaging", format!("empty domain {}", num.domain));
    }

    let probe = interior_points(lo, hi, CHECK_POINTS);
    let mut max_abs = vec![0.0f64; k];
    for v in num.eval_many(&probe) {
        match v {
            Ok(v) => {
                for (m, x) in max_abs.iter_mut().zip(&v.f) {
                    *m = m.max(x.abs());
                }
            }
            Err(e) => return fail(report, "averaging", e),
        }
    }
    for (j, m) in max_abs.iter().enumerate().take(k - 1) {
        if *m > st.tol {
            report.warnings.push(format!("f{} does not vanish numerically (max |f{}| = {m:.3e} on D)", j + 1, j + 1));
        }
    }

    if st.samples >= 2 {
        let zs = interior_points(lo, hi, st.samples);
        let mut rows = Vec::with_capacity(zs.len());
        for (z, v) in zs.iter().zip(num.eval_many(&zs)) {
            match v {
                Ok(v) => {
                    let mut row = vec![*z];
                    row.extend(v.f);
                    rows.push(row);
                }
                Err(e) => return fail(report, "averaging", e),
            }
        }
        report.samples = Some(SampleTable { columns: columns(k), rows });
    }

    let Some(j) = max_abs.iter().position(|m| *m > st.tol) else {
        report.zeros = Some(ZeroReport::empty(None));
        return;
    };
    let opts = ScanOptions { grid: st.grid, tol: st.tol, ..ScanOptions::default() };
    let mut zeros = numeric_zero_scan(|z| num.eval_component(j + 1, z).unwrap_or(f64::NAN), lo, hi, opts);
    zeros.order = Some(j + 1);
    report.limit_cycles = zeros.zeros.iter().map(|zero| cycle(zero.z, |t, z| num.solution.eval(t, z).0)).collect();
    report.zeros = Some(zeros);
}

fn columns(k: usize) -> Vec<String> {
    std::iter::once("z".to_string()).chain((1..=k).map(|j| format!("f{j}"))).collect()
}

fn eval_z(f: &Poly, z: f64) -> f64 {
    f.eval_f64(|v| match v {
        Var::Z => z,
        Var::PI => std::f64::consts::PI,
        _ => f64::NAN,
    })
}

fn cycle(z: f64, r: impl Fn(f64, f64) -> f64) -> LimitCycle {
    let theta: Vec<f64> =
        (0..CYCLE_POINTS).map(|i| std::f64::consts::TAU * i as f64 / (CYCLE_POINTS - 1) as f64).collect();
    let r = theta.iter().map(|&t| r(t, z)).collect();
    LimitCycle { z, theta, r }
}

/// Degrees `(m, n₁, n₂, n₃)` when the system is `ẋ = −y + Σ εᵏ l(x)`,
/// `ẏ = x − Σ εᵏ (f(x) + g(x) y + h(x) y² + d y³)`.
pub fn kukles_template(spec: &SystemSpec) -> Option<(u32, u32, u32, u32)> {
    let (x, y) = (Poly::var(Var::X), Poly::var(Var::Y));
    if spec.p != -y || spec.q != x || spec.perturbations.is_empty() {
        return None;
    }
    let deg = |p: &Poly| p.degree(Var::X).max(0) as u32;
    let mut d = [0u32; 4];
    for (p, q) in &spec.perturbations {
        if p.contains(Var::Y) || p.degree_range(Var::X).0 < 0 || q.degree_range(Var::X).0 < 0 {
            return None;
        }
        let (lo, hi) = q.degree_range(Var::Y);
        if q.is_zero() {
            d[0] = d[0].max(deg(p));
            continue;
        }
        if lo < 0 || hi > 3 || q.coeff_of(Var::Y, 3).contains(Var::X) {
            return None;
        }
        d[0] = d[0].max(deg(p));
        for i in 0..3 {
            d[i + 1] = d[i + 1].max(deg(&q.coeff_of(Var::Y, i as i16)));
        }
    }
    Some((d[0], d[1], d[2], d[3]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly;

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn interior_thirds() {
        let z = interior_points(0.0, 1.0, 2);
        assert!((z[0] - 1.0 / 3.0).abs() < 1e-15 && (z[1] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn detects_kukles_degrees() {
        let spec = SystemSpec::new(p("-y"), p("x"))
            .with_perturbation(p("e*x^3 + x"), p("-(a*x^3 + b*x^2*y + c*x*y^2 + d*y^3)"));
        assert_eq!(kukles_template(&spec), Some((3, 3, 2, 1)));
        let not = SystemSpec::new(p("-y"), p("x")).with_perturbation(p("y"), p("0"));
        assert_eq!(kukles_template(&not), None);
        let not = SystemSpec::new(p("-y"), p("x")).with_perturbation(p("x"), p("x*y^3"));
        assert_eq!(kukles_template(&not), None);
    }
}
