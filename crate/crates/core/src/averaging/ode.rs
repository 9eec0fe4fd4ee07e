//! Adaptive eighth-order Runge–Kutta–Fehlberg integrator for small systems.
//!
//! The local error comes from step doubling rather than Fehlberg's embedded
//! seventh-order estimate, which vanishes identically whenever `f` does not
//! depend on `y` and then lets the step size grow without bound.

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub atol: f64,
    pub rtol: f64,
    pub max_steps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { atol: 1e-13, rtol: 1e-12, max_steps: 1_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OdeError {
    #[error("step size underflow at t = {0}")]
    StepUnderflow(f64),
    #[error("exceeded {0} steps")]
    TooManySteps(usize),
    #[error("non-finite state at t = {0}")]
    NonFinite(f64),
}

const STAGES: usize = 13;

const C: [f64; STAGES] =
    [0.0, 2.0 / 27.0, 1.0 / 9.0, 1.0 / 6.0, 5.0 / 12.0, 0.5, 5.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0, 1.0 / 3.0, 1.0, 0.0, 1.0];

const A: [[f64; 12]; STAGES] = [
    [0.0; 12],
    [2.0 / 27.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 36.0, 1.0 / 12.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 24.0, 0.0, 1.0 / 8.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [5.0 / 12.0, 0.0, -25.0 / 16.0, 25.0 / 16.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 20.0, 0.0, 0.0, 1.0 / 4.0, 1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [-25.0 / 108.0, 0.0, 0.0, 125.0 / 108.0, -65.0 / 27.0, 125.0 / 54.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [31.0 / 300.0, 0.0, 0.0, 0.0, 61.0 / 225.0, -2.0 / 9.0, 13.0 / 900.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [2.0, 0.0, 0.0, -53.0 / 6.0, 704.0 / 45.0, -107.0 / 9.0, 67.0 / 90.0, 3.0, 0.0, 0.0, 0.0, 0.0],
    [
        -91.0 / 108.0,
        0.0,
        0.0,
        23.0 / 108.0,
        -976.0 / 135.0,
        311.0 / 54.0,
        -19.0 / 60.0,
        17.0 / 6.0,
        -1.0 / 12.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        2383.0 / 4100.0,
        0.0,
        0.0,
        -341.0 / 164.0,
        4496.0 / 1025.0,
        -301.0 / 82.0,
        2133.0 / 4100.0,
        45.0 / 82.0,
        45.0 / 164.0,
        18.0 / 41.0,
        0.0,
        0.0,
    ],
    [3.0 / 205.0, 0.0, 0.0, 0.0, 0.0, -6.0 / 41.0, -3.0 / 205.0, -3.0 / 41.0, 3.0 / 41.0, 6.0 / 41.0, 0.0, 0.0],
    [
        -1777.0 / 4100.0,
        0.0,
        0.0,
        -341.0 / 164.0,
        4496.0 / 1025.0,
        -289.0 / 82.0,
        2193.0 / 4100.0,
        51.0 / 82.0,
        33.0 / 164.0,
        12.0 / 41.0,
        0.0,
        1.0,
    ],
];

const B8: [f64; STAGES] = [
    0.0,
    0.0,
    0.0,
    0.0,
    0.0,
    34.0 / 105.0,
    9.0 / 35.0,
    9.0 / 35.0,
    9.0 / 280.0,
    9.0 / 280.0,
    0.0,
    41.0 / 840.0,
    41.0 / 840.0,
];

struct Stepper {
    k: Vec<Vec<f64>>,
    tmp: Vec<f64>,
}

impl Stepper {
    /// One eighth-order step; `k0 = f(t, y)` must already be in `self.k[0]`.
    fn step(&mut self, f: &mut impl FnMut(f64, &[f64], &mut [f64]), t: f64, y: &[f64], h: f64, out: &mut [f64]) {
        let n = y.len();
        for s in 1..STAGES {
            for i in 0..n {
                let mut acc = y[i];
                for j in 0..s {
                    acc += h * A[s][j] * self.k[j][i];
                }
                self.tmp[i] = acc;
            }
            f(t + C[s] * h, &self.tmp, &mut self.k[s]);
        }
        for i in 0..n {
            let mut acc = y[i];
            for s in 0..STAGES {
                acc += h * B8[s] * self.k[s][i];
            }
            out[i] = acc;
        }
    }
}

/// Integrates `y' = f(t, y)` from `t0` to `t1` and returns `y(t1)` and the
/// number of accepted steps.
pub fn integrate(
    mut f: impl FnMut(f64, &[f64], &mut [f64]),
    t0: f64,
    t1: f64,
    y0: &[f64],
    tol: Tolerances,
) -> Result<(Vec<f64>, usize), OdeError> {
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut t = t0;
    let span = t1 - t0;
    let dir = span.signum();
    let mut h = span / 16.0;
    let mut st = Stepper { k: vec![vec![0.0; n]; STAGES], tmp: vec![0.0; n] };
    let mut f0 = vec![0.0; n];
    let (mut full, mut half, mut two) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut accepted = 0;
    let mut attempts = 0;
    f(t, &y, &mut f0);
    while (t1 - t) * dir > 0.0 {
        attempts += 1;
        if attempts > tol.max_steps {
            return Err(OdeError::TooManySteps(tol.max_steps));
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        st.k[0].copy_from_slice(&f0);
        st.step(&mut f, t, &y, h, &mut full);
        st.k[0].copy_from_slice(&f0);
        st.step(&mut f, t, &y, 0.5 * h, &mut half);
        f(t + 0.5 * h, &half, &mut st.k[0]);
        st.step(&mut f, t + 0.5 * h, &half, 0.5 * h, &mut two);

        let mut err_ratio: f64 = 0.0;
        for i in 0..n {
            let e = (two[i] - full[i]).abs() / 255.0;
            let scale = tol.atol + tol.rtol * y[i].abs().max(two[i].abs());
            err_ratio = err_ratio.max(e / scale);
        }
        if !err_ratio.is_finite() {
            if h.abs() < 1e-14 * span.abs() {
                return Err(OdeError::NonFinite(t));
            }
            h *= 0.25;
            continue;
        }
        if err_ratio <= 1.0 {
            t += h;
            // local Richardson extrapolation
            for i in 0..n {
                y[i] = two[i] + (two[i] - full[i]) / 255.0;
            }
            accepted += 1;
            f(t, &y, &mut f0);
        }
        let factor = if err_ratio == 0.0 { 4.0 } else { (0.9 * err_ratio.powf(-1.0 / 9.0)).clamp(0.2, 4.0) };
        h *= factor;
        if h.abs() < 1e-13 * span.abs() && (t1 - t) * dir > 0.0 {
            return Err(OdeError::StepUnderflow(t));
        }
    }
    Ok((y, accepted))
}
