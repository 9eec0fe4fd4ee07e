//! Pipeline results and their text, JSON and CSV renderings.

use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::roots::ZeroReport;
use crate::unperturbed::{Domain, SolutionForm};

use super::config::Mode;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageFailure {
    pub stage: &'static str,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolutionSummary {
    pub m: u32,
    pub g: String,
    pub big_g: String,
    pub form: SolutionForm,
    pub r: String,
    pub y: String,
    pub domain: Option<Domain>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AveragedEntry {
    pub order: usize,
    /// Exact expression in `z`, `pi` and parameters; absent on the numeric path.
    pub exact: Option<String>,
}

/// `(z, f_1(z), …, f_k(z))` rows at interior points of `D`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Unperturbed orbit `r(θ, z*)` through a zero `z*`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitCycle {
    pub z: f64,
    pub theta: Vec<f64>,
    pub r: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub input: String,
    pub order: usize,
    pub mode: Option<Mode>,
    pub normal_form: Vec<String>,
    pub solution: Option<SolutionSummary>,
    pub averaged: Vec<AveragedEntry>,
    pub samples: Option<SampleTable>,
    pub zeros: Option<ZeroReport>,
    pub limit_cycles: Vec<LimitCycle>,
    pub kukles_bound: Option<u64>,
    pub warnings: Vec<String>,
    pub failure: Option<StageFailure>,
}

impl Report {
    pub fn new(input: String, order: usize) -> Report {
        Report {
            input,
            order,
            mode: None,
            normal_form: Vec::new(),
            solution: None,
            averaged: Vec::new(),
            samples: None,
            zeros: None,
            limit_cycles: Vec::new(),
            kukles_bound: None,
            warnings: Vec::new(),
            failure: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// CSV with a header row; values carry 15 significant digits.
    pub fn samples_csv(&self) -> Option<String> {
        let table = self.samples.as_ref()?;
        let mut out = table.columns.join(",");
        out.push('\n');
        for row in &table.rows {
            let cells: Vec<String> = row.iter().map(|v| format_sig(*v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        Some(out)
    }
}

/// Scientific notation with 15 significant digits.
pub fn format_sig(v: f64) -> String {
    format!("{v:.14e}")
}

/// Longest expression printed in full by the text report.
const TEXT_LIMIT: usize = 4000;

fn clip(expr: &str) -> String {
    if expr.len() <= TEXT_LIMIT {
        expr.to_string()
    } else {
        format!("<{} characters, see the JSON report>", expr.len())
    }
}

fn section(out: &mut String, title: &str) {
    if !out.is_empty() {
        out.push('\n');
    }
    out.push_str(title);
    out.push('\n');
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        section(&mut out, "input");
        for line in self.input.lines().filter(|l| !l.is_empty()) {
            let _ = writeln!(out, "  {line}");
        }
        section(&mut out, "run");
        let _ = writeln!(out, "  order = {}", self.order);
        if let Some(mode) = self.mode {
            let _ = writeln!(out, "  mode = {mode}");
        }
        if !self.normal_form.is_empty() {
            section(&mut out, "normal form dr/dtheta = sum eps^i F_i");
            for (i, fi) in self.normal_form.iter().enumerate() {
                let _ = writeln!(out, "  F{i} = {}", clip(fi));
            }
        }
        if let Some(s) = &self.solution {
            section(&mut out, "unperturbed solution");
            let _ = writeln!(out, "  F0 = g*r^m with m = {}, g = {}", s.m, s.g);
            let _ = writeln!(out, "  G = {}", s.big_g);
            let _ = writeln!(out, "  form = {:?}", s.form);
            let _ = writeln!(out, "  r(theta, z) = {}", s.r);
            let _ = writeln!(out, "  Y(theta, z) = {}", s.y);
            if let Some(d) = &s.domain {
                let _ = writeln!(out, "  D = {d}");
            }
        }
        if !self.averaged.is_empty() {
            section(&mut out, "averaged functions");
            for a in &self.averaged {
                match &a.exact {
                    Some(e) => {
                        let _ = writeln!(out, "  f{}(z) = {}", a.order, clip(e));
                    }
                    None => {
                        let _ = writeln!(out, "  f{}(z): numeric", a.order);
                    }
                }
            }
        }
        if let Some(z) = &self.zeros {
            match z.order {
                Some(j) => section(&mut out, &format!("zeros of f{j} on D")),
                None => section(&mut out, "zeros"),
            }
            if z.identically_zero {
                let _ = writeln!(out, "  all averaged functions vanish identically");
            } else {
                let _ = writeln!(out, "  simple zeros: {}", z.count);
                for zero in &z.zeros {
                    let _ = writeln!(
                        out,
                        "  z = {}  f'(z) = {}  residual = {:.3e}",
                        format_sig(zero.z),
                        format_sig(zero.derivative),
                        zero.residual
                    );
                }
                for t in &z.tangencies {
                    let _ = writeln!(out, "  tangency candidate z = {}", format_sig(*t));
                }
            }
        }
        if let Some(b) = self.kukles_bound {
            section(&mut out, "Kukles template");
            let _ = writeln!(out, "  at most {b} limit cycles at order {}", self.order);
        }
        if !self.limit_cycles.is_empty() {
            section(&mut out, "limit cycles r(theta, z*) at theta = 0, pi/4, ..., 7pi/4");
            for c in &self.limit_cycles {
                let step = (c.theta.len() - 1) / 8;
                let vals: Vec<String> = (0..8).map(|i| format!("{:.6}", c.r[i * step])).collect();
                let _ = writeln!(out, "  z* = {:.12}: {}", c.z, vals.join(" "));
            }
        }
        if let Some(t) = &self.samples {
            let _ = writeln!(out, "\nsamples: {} rows of {}", t.rows.len(), t.columns.join(", "));
        }
        if !self.warnings.is_empty() {
            section(&mut out, "warnings");
            for w in &self.warnings {
                let _ = writeln!(out, "  {w}");
            }
        }
        if let Some(fail) = &self.failure {
            section(&mut out, "failure");
            let _ = writeln!(out, "  stage {}: {}", fail.stage, fail.message);
        }
        f.write_str(&out)
    }
}
