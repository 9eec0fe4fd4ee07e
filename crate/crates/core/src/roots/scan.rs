//! Sign-change scan for zeros of numerically evaluated functions.

use rayon::prelude::*;

use super::{Zero, ZeroReport};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanOptions {
    pub grid: usize,
    /// Residual tolerance; the simplicity threshold is `1e3·tol`.
    pub tol: f64,
    /// Bisection stops below this bracket width.
    pub width: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { grid: 2048, tol: 1e-9, width: 1e-12 }
    }
}

/// Scans `[lo + δ, hi − δ]`, `δ = 10⁻³(hi − lo)`, for sign changes of `f`.
///
/// Each bracket is bisected and Newton-polished; a zero is kept when its
/// residual is within `tol` (relative to the largest sampled `|f|` when that
/// exceeds one). Local minima of `|f|` without a sign change that come close
/// to zero are listed as tangencies. The grid is doubled once when two
/// brackets share an endpoint.
pub fn numeric_zero_scan<F>(f: F, lo: f64, hi: f64, opts: ScanOptions) -> ZeroReport
where
    F: Fn(f64) -> f64 + Sync,
{
    let first = scan_once(&f, lo, hi, opts.grid, opts);
    if !first.1 {
        return first.0;
    }
    scan_once(&f, lo, hi, opts.grid * 2, opts).0
}

fn scan_once<F>(f: &F, lo: f64, hi: f64, grid: usize, opts: ScanOptions) -> (ZeroReport, bool)
where
    F: Fn(f64) -> f64 + Sync,
{
    let delta = 1e-3 * (hi - lo);
    let (a, b) = (lo + delta, hi - delta);
    let n = grid.max(2);
    let zs: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
    let fs: Vec<f64> = zs.par_iter().map(|&z| f(z)).collect();
    let scale = fs.iter().filter(|v| v.is_finite()).fold(0.0f64, |m, v| m.max(v.abs()));
    let mut report = ZeroReport::empty(None);
    if scale <= opts.tol {
        return (report, false);
    }
    report.identically_zero = false;
    let accept = opts.tol * scale.max(1.0);

    let sign = |v: f64| {
        if v.is_nan() {
            0
        } else if v > 0.0 {
            1
        } else if v < 0.0 {
            -1
        } else {
            0
        }
    };
    let mut brackets = Vec::new();
    for i in 0..n {
        let (s0, s1) = (sign(fs[i]), sign(fs[i + 1]));
        let crossing = s0 != 0 && s1 != 0 && s0 != s1;
        let exact_hit = s1 == 0 && fs[i + 1] == 0.0 && i + 2 <= n && s0 * sign(fs[i + 2]) < 0;
        if crossing || exact_hit {
            brackets.push(i);
        }
    }
    let touching = brackets.windows(2).any(|w| w[1] == w[0] + 1);

    let zeros: Vec<Option<Zero>> = brackets
        .par_iter()
        .map(|&i| {
            let hi_i = if fs[i + 1] == 0.0 { (i + 2).min(n) } else { i + 1 };
            refine(f, zs[i], zs[hi_i], fs[i], opts, accept)
        })
        .collect();
    report.zeros = zeros.into_iter().flatten().collect();
    report.count = report.zeros.iter().filter(|z| z.simple).count();

    for i in 1..n {
        let (l, c, r) = (fs[i - 1].abs(), fs[i].abs(), fs[i + 1].abs());
        if !(c <= l && c <= r) || sign(fs[i - 1]) != sign(fs[i]) || sign(fs[i]) != sign(fs[i + 1]) {
            continue;
        }
        let (zm, vm) = golden_min(|z| f(z).abs(), zs[i - 1], zs[i + 1]);
        if vm <= 1e-6 * scale {
            report.tangencies.push(zm);
        }
    }
    (report, touching)
}

fn refine<F>(f: &F, mut a: f64, mut b: f64, fa: f64, opts: ScanOptions, accept: f64) -> Option<Zero>
where
    F: Fn(f64) -> f64,
{
    let sa = fa.signum();
    while b - a > opts.width {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            a = m;
            b = m;
            break;
        }
        if fm.is_nan() {
            return None;
        }
        if fm.signum() == sa {
            a = m;
        } else {
            b = m;
        }
    }
    let mut z = 0.5 * (a + b);
    let mut fz = f(z);
    let h = 1e-6 * z.abs().max(1e-3);
    let deriv = |z: f64| (f(z + h) - f(z - h)) / (2.0 * h);
    for _ in 0..3 {
        let d = deriv(z);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let next = z - fz / d;
        if !(next >= a - opts.width && next <= b + opts.width) {
            break;
        }
        let fnext = f(next);
        if fnext.abs() >= fz.abs() {
            break;
        }
        z = next;
        fz = fnext;
    }
    if fz.abs() > accept {
        // sign change across a pole or jump
        return None;
    }
    let d = deriv(z);
    Some(Zero { z, simple: d.abs() > 1e3 * opts.tol, derivative: d, residual: fz })
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let z = 0.5 * (a + b);
    (z, f(z))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_three_simple_zeros() {
        let roots = [0.75f64.sqrt(), 8f64.sqrt() / 3.0, 24f64.sqrt() / 5.0];
        let f = |z: f64| roots.iter().map(|r| z - r).product::<f64>();
        let rep = numeric_zero_scan(f, 0.0, 1.0, ScanOptions::default());
        assert_eq!(rep.count, 3);
        for (z, r) in rep.zeros.iter().zip(roots) {
            assert!((z.z - r).abs() < 1e-12, "{} vs {r}", z.z);
        }
    }

    #[test]
    fn zero_function_gives_empty_report() {
        let rep = numeric_zero_scan(|_| 0.0, 0.0, 1.0, ScanOptions::default());
        assert!(rep.identically_zero);
        assert_eq!(rep.count, 0);
    }

    #[test]
    fn tangency_is_flagged_not_counted() {
        let rep = numeric_zero_scan(|z| (z - 0.4).powi(2) * (z - 0.8), 0.0, 1.0, ScanOptions::default());
        assert_eq!(rep.count, 1);
        assert_eq!(rep.tangencies.len(), 1);
        assert!((rep.tangencies[0] - 0.4).abs() < 1e-4);
    }

    #[test]
    fn pole_sign_change_is_rejected() {
        let rep = numeric_zero_scan(|z| 1.0 / (z - 0.3), 0.0, 1.0, ScanOptions::default());
        assert_eq!(rep.count, 0);
    }
}
