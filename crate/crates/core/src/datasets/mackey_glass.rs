//! Mackey-Glass delay-differential generator and tap/horizon embedding.
//!
//! The series solves `dx/dt = a·x(t−τ)/(1 + x(t−τ)¹⁰) − b·x(t)` with the
//! canonical chaotic parameters a = 0.2, b = 0.1, τ = 17 at timestep 0.1,
//! by classical 4th-order Runge-Kutta.
//!
//! Delay handling: history for `t ≤ 0` is the constant `x0`; the delayed
//! value needed at the two half-stages of each RK4 step falls midway
//! between stored grid points, and is reconstructed by cubic Hermite
//! interpolation from the bracketing grid values and their stored
//! derivatives (`H(½) = (x_j + x_{j+1})/2 + dt·(x'_j − x'_{j+1})/8`).
//! Piecewise-linear interpolation there would be simpler but caps the whole
//! scheme at global order 2 — measured error ratios of ~4 when halving dt —
//! whereas the Hermite midpoint preserves genuine 4th-order convergence
//! (ratio ~16); the convergence test pins that. When the delayed interval
//! still lies inside the constant history the midpoint is exactly `x0`, and
//! using the right-sided derivative there would silently degrade the order.

use crate::error::{Error, Result};

/// Steps discarded before a series is used for training, removing the
/// constant-history startup artifact.
pub const TRANSIENT_DISCARD: usize = 2000;

/// Divergence guard: the canonical attractor lives well inside |x| < 2, so
/// anything past this bound is a blow-up, not dynamics.
const DIVERGENCE_LIMIT: f64 = 10.0;

/// A generated trajectory with the parameters that produced it.
#[derive(Debug, Clone)]
pub struct MgSeries {
    values: Vec<f64>,
    dt: f64,
    a: f64,
    b: f64,
    tau: f64,
    x0: f64,
}

impl MgSeries {
    /// Sampled values, one per timestep starting at t = 0.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of stored steps.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True if the series is empty (never produced by the generator).
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Timestep between samples.
    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Feedback gain `a`.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Decay rate `b`.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Feedback delay `τ`.
    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Constant history value for t ≤ 0.
    pub fn history_init(&self) -> f64 {
        self.x0
    }

    /// Renders the series as CSV with header `step,t,x`. Values are printed
    /// at full round-trip precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,t,x\n");
        for (i, &x) in self.values.iter().enumerate() {
            let t = i as f64 * self.dt;
            out.push_str(&format!("{i},{t},{x}\n"));
        }
        out
    }

    /// Copy of the series with the first `steps` values dropped (parameters
    /// preserved); used to cut the startup transient before embedding.
    ///
    /// # Errors
    /// `Error::Argument` if nothing would remain.
    pub fn discard(&self, steps: usize) -> Result<MgSeries> {
        if steps >= self.values.len() {
            return Err(Error::Argument(format!(
                "cannot discard {steps} of {} steps",
                self.values.len()
            )));
        }
        let mut copy = self.clone();
        copy.values.drain(..steps);
        Ok(copy)
    }
}

/// Integrates the Mackey-Glass equation for `n_steps` samples (the value at
/// t = 0 is the first) from constant history `x0`.
///
/// # Errors
/// `Error::Argument` if `n_steps` is zero, `dt` is not positive and finite,
/// `τ/dt` is not a positive integer, or any parameter is non-finite;
/// `Error::Numeric` if the trajectory diverges (|x| > 10).
pub fn mackey_glass(
    n_steps: usize,
    dt: f64,
    a: f64,
    b: f64,
    tau: f64,
    x0: f64,
) -> Result<MgSeries> {
    if n_steps == 0 {
        return Err(Error::Argument("n_steps must be at least 1".into()));
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Argument(format!("dt must be positive and finite, got {dt}")));
    }
    for (name, v) in [("a", a), ("b", b), ("tau", tau), ("x0", x0)] {
        if !v.is_finite() {
            return Err(Error::Argument(format!("parameter {name} must be finite, got {v}")));
        }
    }
    let ratio = tau / dt;
    let delay_steps = ratio.round();
    if (ratio - delay_steps).abs() > 1e-9 || delay_steps < 1.0 {
        return Err(Error::Argument(format!(
            "tau/dt must be a positive integer, got {tau}/{dt} = {ratio}"
        )));
    }
    // A delay of n_steps or more never leaves the constant history, so the
    // clamp changes nothing semantically — but it keeps the cast in range
    // when τ/dt is astronomically large (or infinite, which sails through
    // the integer check above because inf − inf is NaN).
    let delay = delay_steps.min(n_steps as f64) as usize;

    let f = |x_now: f64, x_delayed: f64| a * x_delayed / (1.0 + x_delayed.powi(10)) - b * x_now;

    let mut x = vec![0.0; n_steps];
    // Derivative at each stored point, kept for the Hermite reconstruction.
    let mut dx = vec![0.0; n_steps];
    x[0] = x0;
    dx[0] = f(x0, x0);

    for i in 0..n_steps - 1 {
        // Index of the grid point at t_i − τ (negative while inside the
        // constant history).
        let j = i as i64 - delay as i64;
        let grid = |idx: i64| if idx < 0 { x0 } else { x[idx as usize] };

        let xd_start = grid(j);
        let xd_end = grid(j + 1);
        // Delayed value at the half-stage, t_i − τ + dt/2.
        let xd_half = if j < 0 {
            // The bracketing interval lies wholly in the constant history.
            x0
        } else {
            let ju = j as usize;
            0.5 * (x[ju] + x[ju + 1]) + dt * (dx[ju] - dx[ju + 1]) / 8.0
        };

        let xi = x[i];
        let k1 = f(xi, xd_start);
        let k2 = f(xi + 0.5 * dt * k1, xd_half);
        let k3 = f(xi + 0.5 * dt * k2, xd_half);
        let k4 = f(xi + dt * k3, xd_end);
        let next = xi + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !next.is_finite() || next.abs() > DIVERGENCE_LIMIT {
            return Err(Error::Numeric(format!(
                "series diverged to {next} at step {}",
                i + 1
            )));
        }
        x[i + 1] = next;
        dx[i + 1] = f(next, xd_end);
    }

    Ok(MgSeries { values: x, dt, a, b, tau, x0 })
}

/// [`mackey_glass`] with the canonical parameters: dt = 0.1, a = 0.2,
/// b = 0.1, τ = 17.
pub fn mackey_glass_default(n_steps: usize, x0: f64) -> Result<MgSeries> {
    mackey_glass(n_steps, 0.1, 0.2, 0.1, 17.0, x0)
}

/// One lagged input/target pair cut from a series.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedSample {
    /// Lagged values `(x[t − tap₁], …, x[t − tap_T])`.
    pub input: Vec<f64>,
    /// The value `horizon` steps ahead, `x[t + horizon]` (a 1-vector).
    pub target: f64,
    /// Source position `t` in the series.
    pub index: usize,
}

/// Cuts a series into delay-embedded samples: for every position `t` with
/// all taps and the horizon in range, input `(x[t − tap₁], …, x[t − tap_T])`
/// and target `x[t + horizon]`. Yields exactly
/// `len − max(taps) − horizon` samples.
///
/// # Errors
/// `Error::Argument` if `taps` is empty, not strictly ascending, contains
/// zero, `horizon` is zero, or the series is too short to produce a single
/// sample.
pub fn delay_embed(
    series: &MgSeries,
    taps: &[usize],
    horizon: usize,
) -> Result<Vec<EmbeddedSample>> {
    if taps.is_empty() {
        return Err(Error::Argument("taps must not be empty".into()));
    }
    if taps[0] == 0 {
        return Err(Error::Argument("taps must be positive".into()));
    }
    if taps.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Argument(format!("taps must be strictly ascending, got {taps:?}")));
    }
    if horizon == 0 {
        return Err(Error::Argument("horizon must be at least 1".into()));
    }
    let max_tap = *taps.last().expect("taps checked non-empty");
    let len = series.len();
    if max_tap + horizon >= len {
        return Err(Error::Argument(format!(
            "series of length {len} too short for max tap {max_tap} and horizon {horizon}"
        )));
    }
    let x = series.values();
    Ok((max_tap..len - horizon)
        .map(|t| EmbeddedSample {
            input: taps.iter().map(|&tap| x[t - tap]).collect(),
            target: x[t + horizon],
            index: t,
        })
        .collect())
}
