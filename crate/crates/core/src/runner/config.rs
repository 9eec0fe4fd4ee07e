//! Text format for perturbed systems and run options.
//!
//! ```text
//! # comment
//! [center]
//! P = -y + x^2*y
//! Q = x + x*y^2
//! [perturbation.1]
//! p = a*x + b*y^3
//! q = 0
//! [bindings]
//! a = 3/2
//! [substitutions.order_1]
//! a = 2*b
//! solve z^3 for b
//! [run]
//! order = 1
//! mode = auto
//! ```
//!
//! A line starting with whitespace continues the value of the previous key.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::averaging::Substitution;
use crate::expr::{parse_poly, ParseError, Poly, Rational, Var};
use crate::normal_form::SystemSpec;

/// Largest total degree in `x, y` accepted in a system file.
pub const MAX_DEGREE: i32 = 12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{line}:1: {what} has total degree {degree} > {MAX_DEGREE}")]
    DegreeOverflow { line: usize, what: String, degree: i32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Numeric,
    Auto,
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Mode, String> {
        match s {
            "exact" => Ok(Mode::Exact),
            "numeric" => Ok(Mode::Numeric),
            "auto" => Ok(Mode::Auto),
            _ => Err(format!("unknown mode `{s}` (expected exact, numeric or auto)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Numeric => "numeric",
            Mode::Auto => "auto",
        })
    }
}

/// `[run]` options; unset fields fall back to command-line flags or defaults.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunOptions {
    pub order: Option<usize>,
    pub mode: Option<Mode>,
    pub grid: Option<usize>,
    pub tol: Option<f64>,
    pub samples: Option<usize>,
    /// Upper end used for scans and samples when `D` is unbounded.
    pub z_max: Option<f64>,
}

impl RunOptions {
    /// Fields of `other` take precedence.
    pub fn overridden_by(&self, other: &RunOptions) -> RunOptions {
        RunOptions {
            order: other.order.or(self.order),
            mode: other.mode.or(self.mode),
            grid: other.grid.or(self.grid),
            tol: other.tol.or(self.tol),
            samples: other.samples.or(self.samples),
            z_max: other.z_max.or(self.z_max),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemFile {
    pub spec: SystemSpec,
    /// Parameter values in file order.
    pub bindings: Vec<(Var, Rational)>,
    /// Scripts keyed by the order whose averaged function they annihilate.
    pub substitutions: BTreeMap<usize, Vec<Substitution>>,
    pub run: RunOptions,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Section {
    None,
    Center,
    Perturbation(usize),
    Bindings,
    Substitutions(usize),
    Run,
}

/// A logical line: a key line plus its continuations, with a map from byte
/// offsets in the joined text back to file positions.
struct Entry {
    text: String,
    spans: Vec<(usize, usize, usize)>,
}

impl Entry {
    fn position(&self, offset: usize) -> (usize, usize) {
        let (start, line, col) =
            self.spans.iter().rev().find(|(s, _, _)| *s <= offset).copied().unwrap_or(self.spans[0]);
        (line, col + offset - start)
    }

    fn line(&self) -> usize {
        self.spans[0].1
    }

    /// Re-anchors an error whose column counts from 1 within `self.text`.
    fn relocate(&self, mut e: ParseError, base: usize) -> ParseError {
        let (line, col) = self.position(base + e.col.saturating_sub(1));
        e.line = line;
        e.col = col;
        e
    }

    fn error(&self, offset: usize, msg: impl Into<String>) -> ParseError {
        let (line, col) = self.position(offset);
        ParseError { line, col, msg: msg.into() }
    }
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    ParseError { line, col, msg: msg.into() }
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(a, _)| a)
}

fn parse_section(name: &str, line: usize) -> Result<Section, ParseError> {
    let index = |s: &str| {
        s.parse::<usize>()
            .ok()
            .filter(|k| *k >= 1)
            .ok_or_else(|| err(line, 2, format!("invalid order in section `[{name}]`")))
    };
    match name {
        "center" => Ok(Section::Center),
        "bindings" => Ok(Section::Bindings),
        "run" => Ok(Section::Run),
        _ => {
            if let Some(k) = name.strip_prefix("perturbation.") {
                Ok(Section::Perturbation(index(k)?))
            } else if let Some(k) = name.strip_prefix("substitutions.order_") {
                Ok(Section::Substitutions(index(k)?))
            } else {
                Err(err(line, 2, format!("unknown section `[{name}]`")))
            }
        }
    }
}

/// Groups lines into sections and logical entries.
fn logical_lines(src: &str) -> Result<Vec<(Section, Entry)>, ParseError> {
    let mut out: Vec<(Section, Entry)> = Vec::new();
    let mut section = Section::None;
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw);
        if body.trim().is_empty() {
            continue;
        }
        let indent = body.len() - body.trim_start().len();
        if indent > 0 {
            if let Some((_, entry)) = out.last_mut().filter(|(s, _)| *s == section) {
                entry.text.push(' ');
                entry.spans.push((entry.text.len(), line, indent + 1));
                entry.text.push_str(body.trim());
                continue;
            }
            return Err(err(line, indent + 1, "continuation line without a preceding entry"));
        }
        let trimmed = body.trim_end();
        if let Some(rest) = trimmed.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| err(line, trimmed.len() + 1, "expected `]`"))?;
            section = parse_section(name.trim(), line)?;
            continue;
        }
        if section == Section::None {
            return Err(err(line, 1, "entry outside of any section"));
        }
        out.push((section, Entry { text: trimmed.to_string(), spans: vec![(0, line, 1)] }));
    }
    Ok(out)
}

/// Splits `key = value`, returning the key and the value's byte offset.
fn key_value(entry: &Entry) -> Result<(&str, &str, usize), ParseError> {
    let (k, v) = entry.text.split_once('=').ok_or_else(|| entry.error(0, "expected `<key> = <value>`"))?;
    let offset = k.len() + 1;
    if v.trim().is_empty() {
        return Err(entry.error(offset, "missing value"));
    }
    Ok((k.trim(), v, offset))
}

fn total_degree(p: &Poly) -> i32 {
    p.terms().map(|(m, _)| (m.exp(Var::X) + m.exp(Var::Y)) as i32).max().unwrap_or(0)
}

fn parse_value<T: FromStr>(entry: &Entry, value: &str, offset: usize) -> Result<T, ParseError>
where
    T::Err: fmt::Display,
{
    value
        .trim()
        .parse::<T>()
        .map_err(|e| entry.error(offset + (value.len() - value.trim_start().len()), format!("invalid value: {e}")))
}

pub fn parse_system(src: &str) -> Result<SystemFile, ConfigError> {
    let mut center: [Option<Poly>; 2] = [None, None];
    let mut perturbations: BTreeMap<usize, [Option<Poly>; 2]> = BTreeMap::new();
    let mut bindings: Vec<(Var, Rational)> = Vec::new();
    let mut substitutions: BTreeMap<usize, Vec<Substitution>> = BTreeMap::new();
    let mut run = RunOptions::default();
    let mut seen_run: Vec<String> = Vec::new();

    let poly_entry = |entry: &Entry, value: &str, offset: usize, what: String| -> Result<Poly, ConfigError> {
        let p = parse_poly(value).map_err(|e| entry.relocate(e, offset))?;
        let degree = total_degree(&p);
        if degree > MAX_DEGREE {
            return Err(ConfigError::DegreeOverflow { line: entry.line(), what, degree });
        }
        Ok(p)
    };

    for (section, entry) in logical_lines(src)? {
        match section {
            Section::None => unreachable!("rejected while grouping"),
            Section::Center | Section::Perturbation(_) => {
                let (key, value, offset) = key_value(&entry)?;
                let (slot, what) = match (section, key) {
                    (Section::Center, "P") => (&mut center[0], "P".to_string()),
                    (Section::Center, "Q") => (&mut center[1], "Q".to_string()),
                    (Section::Perturbation(k), "p") => (&mut perturbations.entry(k).or_default()[0], format!("p_{k}")),
                    (Section::Perturbation(k), "q") => (&mut perturbations.entry(k).or_default()[1], format!("q_{k}")),
                    _ => return Err(entry.error(0, format!("unknown key `{key}`")).into()),
                };
                if slot.is_some() {
                    return Err(entry.error(0, format!("duplicate key `{key}`")).into());
                }
                *slot = Some(poly_entry(&entry, value, offset, what)?);
            }
            Section::Bindings => {
                let (key, value, offset) = key_value(&entry)?;
                if !is_parameter_name(key) {
                    return Err(entry.error(0, format!("`{key}` is not a parameter name")).into());
                }
                let var = Var::named(key);
                if bindings.iter().any(|(v, _)| *v == var) {
                    return Err(entry.error(0, format!("duplicate binding for `{key}`")).into());
                }
                let p = parse_poly(value).map_err(|e| entry.relocate(e, offset))?;
                let c = p.as_constant().ok_or_else(|| entry.error(offset, "binding must be a rational constant"))?;
                bindings.push((var, c));
            }
            Section::Substitutions(j) => {
                let s = Substitution::parse(&entry.text, entry.line()).map_err(|e| entry.relocate(e, 0))?;
                if Var::is_reserved_name(&s.var().name()) {
                    return Err(entry.error(0, "cannot substitute a structural variable").into());
                }
                substitutions.entry(j).or_default().push(s);
            }
            Section::Run => {
                let (key, value, offset) = key_value(&entry)?;
                if seen_run.iter().any(|k| k == key) {
                    return Err(entry.error(0, format!("duplicate key `{key}`")).into());
                }
                seen_run.push(key.to_string());
                match key {
                    "order" => run.order = Some(parse_value(&entry, value, offset)?),
                    "mode" => run.mode = Some(parse_value(&entry, value, offset)?),
                    "grid" => run.grid = Some(parse_value(&entry, value, offset)?),
                    "tol" => run.tol = Some(parse_value(&entry, value, offset)?),
                    "samples" => run.samples = Some(parse_value(&entry, value, offset)?),
                    "z_max" => run.z_max = Some(parse_value(&entry, value, offset)?),
                    _ => return Err(entry.error(0, format!("unknown key `{key}`")).into()),
                }
            }
        }
    }

    let [p, q] = center;
    let (p, q) = match (p, q) {
        (Some(p), Some(q)) => (p, q),
        _ => return Err(err(1, 1, "`[center]` must define both P and Q").into()),
    };
    let mut spec = SystemSpec::new(p, q);
    let top = perturbations.keys().next_back().copied().unwrap_or(0);
    for k in 1..=top {
        let [pk, qk] = perturbations.remove(&k).unwrap_or_default();
        spec = spec.with_perturbation(pk.unwrap_or_default(), qk.unwrap_or_default());
    }
    Ok(SystemFile { spec, bindings, substitutions, run })
}

fn is_parameter_name(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !Var::is_reserved_name(name)
}

impl fmt::Display for SystemFile {
    /// Canonical text; `parse_system` reads it back unchanged.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[center]")?;
        writeln!(f, "P = {}", self.spec.p)?;
        writeln!(f, "Q = {}", self.spec.q)?;
        for (k, (p, q)) in self.spec.perturbations.iter().enumerate() {
            writeln!(f, "\n[perturbation.{}]", k + 1)?;
            writeln!(f, "p = {p}")?;
            writeln!(f, "q = {q}")?;
        }
        if !self.bindings.is_empty() {
            writeln!(f, "\n[bindings]")?;
            for (v, c) in &self.bindings {
                writeln!(f, "{v} = {c}")?;
            }
        }
        for (j, subs) in &self.substitutions {
            writeln!(f, "\n[substitutions.order_{j}]")?;
            for s in subs {
                writeln!(f, "{s}")?;
            }
        }
        let run = &self.run;
        let fields: [(&str, Option<String>); 6] = [
            ("order", run.order.map(|v| v.to_string())),
            ("mode", run.mode.map(|v| v.to_string())),
            ("grid", run.grid.map(|v| v.to_string())),
            ("tol", run.tol.map(|v| format!("{v:e}"))),
            ("samples", run.samples.map(|v| v.to_string())),
            ("z_max", run.z_max.map(|v| format!("{v:e}"))),
        ];
        if fields.iter().any(|(_, v)| v.is_some()) {
            writeln!(f, "\n[run]")?;
            for (k, v) in fields {
                if let Some(v) = v {
                    writeln!(f, "{k} = {v}")?;
                }
            }
        }
        Ok(())
    }
}
