//! The online pseudoinverse (OLP) learner.
//!
//! State is the output weight matrix `W` (N×M) and the inhibition matrix
//! `θ` (M×M), initialized to `I/M`. Each sample `(a, y)` — hidden
//! activations and target — is folded in by a rank-1 update:
//!
//! ```text
//! denom = 1 + aᵀ θ a
//! b     = (θ a)ᵀ / denom            gain row
//! W    += (y − W a) · b             weight update
//! θ    −= (θ a) · b                 static inhibition update
//! ```
//!
//! The adaptive variant adds a forgetting term to the diagonal of `θ`,
//! `I · (1 − e^{−‖E‖}) / M` with `E = (y − W a)/denom`, which pushes the
//! inhibition matrix back toward its initial value whenever errors are
//! large. That trades the exact least-squares fixed point for the ability
//! to track non-stationary streams.
//!
//! After `k` static updates the state satisfies a closed-form identity:
//! `Wᵀ = (M·I + AᵀA)⁻¹ AᵀY` and `θ = (M·I + AᵀA)⁻¹` over the rows seen so
//! far — ridge regression with regularizer `λ = M`, approaching the
//! pseudoinverse solution as samples accumulate. The test suite pins the
//! learner to that identity.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::numerics::mat::{dot, Mat};

/// Magnitude bound on entries of `W` and `θ`; beyond it an update reports
/// numeric overflow instead of continuing. The adaptive recursion shares
/// with IIR filters the potential for instability, and failure must be
/// observable rather than silent.
pub const OVERFLOW_LIMIT: f64 = 1e12;

/// Update rule selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Exact recursive ridge solution; converges to the batch answer.
    Static,
    /// Forgetting-term variant for non-stationary streams.
    Adaptive,
}

/// Learner state: `(W, θ, mode, k)`.
///
/// Memory is exactly `N·M + M²` reals plus a few words of bookkeeping,
/// independent of how many samples have been folded in — that constant
/// footprint is the method's reason to exist.
///
/// Updates take `&mut self`; if an update returns an error the state may be
/// partially modified and must be discarded. Callers that need transactional
/// behavior can clone first (copy-update-swap).
#[derive(Debug, Clone)]
pub struct OlpState {
    m: usize,
    n: usize,
    w: Mat,
    theta: Mat,
    mode: Mode,
    k: u64,
}

impl OlpState {
    /// Fresh learner: `θ = I/m`, `W = 0`, `k = 0`.
    ///
    /// # Errors
    /// `Error::Argument` if `m` or `n` is zero.
    pub fn init(m: usize, n: usize, mode: Mode) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Argument(format!(
                "state dimensions must be positive, got m={m}, n={n}"
            )));
        }
        Ok(OlpState {
            m,
            n,
            w: Mat::zeros(n, m),
            theta: Mat::scaled_identity(m, 1.0 / m as f64),
            mode,
            k: 0,
        })
    }

    /// Hidden dimension M.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Output dimension N.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of samples folded in so far.
    pub fn k(&self) -> u64 {
        self.k
    }

    /// Update rule this state was created with.
    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Output weights `W` (N×M).
    pub fn weights(&self) -> &Mat {
        &self.w
    }

    /// Inhibition matrix `θ` (M×M).
    pub fn theta(&self) -> &Mat {
        &self.theta
    }

    /// Trace of `θ`; non-increasing under static updates.
    pub fn theta_trace(&self) -> f64 {
        (0..self.m).map(|i| self.theta.get(i, i)).sum()
    }

    /// Gain row `b = (θa)ᵀ/denom` and `denom = 1 + aᵀθa`.
    ///
    /// `θ` is symmetric, so `aᵀθᵀ` and `(θa)ᵀ` coincide; no transpose is
    /// materialized. The state is not modified.
    ///
    /// # Errors
    /// `Error::Dimension` if `a.len() != m`.
    pub fn gain(&self, a: &[f64]) -> Result<(Vec<f64>, f64)> {
        let (ta, denom) = self.theta_apply(a)?;
        let b = ta.iter().map(|v| v / denom).collect();
        Ok((b, denom))
    }

    /// Prediction `W·a`. The state is not modified.
    ///
    /// # Errors
    /// `Error::Dimension` if `a.len() != m`.
    pub fn predict(&self, a: &[f64]) -> Result<Vec<f64>> {
        self.w.mul_vec(a)
    }

    /// Normalized error `E = (y − W·a)/(1 + aᵀθa)`. The state is not
    /// modified.
    ///
    /// # Errors
    /// `Error::Dimension` on mismatched lengths.
    pub fn normalized_error(&self, a: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        self.check_target(y)?;
        let (_, denom) = self.theta_apply(a)?;
        let pred = self.predict(a)?;
        Ok(y.iter().zip(&pred).map(|(t, p)| (t - p) / denom).collect())
    }

    /// Folds in one sample with the static rule.
    ///
    /// A zero activation vector leaves `W` and `θ` untouched (the gain row
    /// is zero) and only advances `k`.
    ///
    /// # Errors
    /// `Error::Argument` if the state is not in static mode;
    /// `Error::Dimension` on mismatched lengths; `Error::Numeric` if any
    /// updated entry exceeds [`OVERFLOW_LIMIT`] or turns non-finite.
    pub fn update_static(&mut self, a: &[f64], y: &[f64]) -> Result<()> {
        if self.mode != Mode::Static {
            return Err(Error::Argument(
                "update_static requires a state in static mode".into(),
            ));
        }
        self.update_inner(a, y, false)
    }

    /// Folds in one sample with the adaptive (forgetting) rule: the weight
    /// update is unchanged, and `θ` additionally gains
    /// `I·(1 − e^{−‖E‖})/M` on its diagonal.
    ///
    /// A zero activation vector is a complete no-op (forgetting included);
    /// see [`OlpState::update_static`].
    ///
    /// # Errors
    /// As [`OlpState::update_static`], but requiring adaptive mode.
    pub fn update_adaptive(&mut self, a: &[f64], y: &[f64]) -> Result<()> {
        if self.mode != Mode::Adaptive {
            return Err(Error::Argument(
                "update_adaptive requires a state in adaptive mode".into(),
            ));
        }
        self.update_inner(a, y, true)
    }

    /// Folds in one sample using the rule the state was created with.
    pub fn update(&mut self, a: &[f64], y: &[f64]) -> Result<()> {
        match self.mode {
            Mode::Static => self.update_inner(a, y, false),
            Mode::Adaptive => self.update_inner(a, y, true),
        }
    }

    fn check_target(&self, y: &[f64]) -> Result<()> {
        if y.len() != self.n {
            return Err(Error::Dimension(format!(
                "target has length {}, state expects {}",
                y.len(),
                self.n
            )));
        }
        Ok(())
    }

    /// Computes `θ·a` and `1 + aᵀθa` in one pass over `θ`.
    fn theta_apply(&self, a: &[f64]) -> Result<(Vec<f64>, f64)> {
        if a.len() != self.m {
            return Err(Error::Dimension(format!(
                "activation has length {}, state expects {}",
                a.len(),
                self.m
            )));
        }
        let mut ta = vec![0.0; self.m];
        for (taj, row) in ta.iter_mut().zip(self.theta.as_slice().chunks_exact(self.m)) {
            *taj = dot(row, a);
        }
        let denom = 1.0 + dot(a, &ta);
        if !denom.is_finite() || denom <= 0.0 {
            return Err(Error::Numeric(format!(
                "gain denominator {denom} is not a positive finite value"
            )));
        }
        Ok((ta, denom))
    }

    fn update_inner(&mut self, a: &[f64], y: &[f64], adaptive: bool) -> Result<()> {
        self.check_target(y)?;
        if a.len() != self.m {
            return Err(Error::Dimension(format!(
                "activation has length {}, state expects {}",
                a.len(),
                self.m
            )));
        }
        // A zero activation vector carries no signal: the gain row is zero,
        // so the rank-1 terms cannot move W or θ. The forgetting diagonal is
        // suppressed too — no event, no decay — keeping the zero-activation
        // no-op exact in both modes. Sigmoid activations are never exactly
        // zero, so real streams never reach this branch.
        if a.iter().all(|&v| v == 0.0) {
            self.k += 1;
            return Ok(());
        }
        let (ta, denom) = self.theta_apply(a)?;

        // e = y − W·a, computed before W changes.
        let mut err = vec![0.0; self.n];
        for ((e, t), row) in err
            .iter_mut()
            .zip(y)
            .zip(self.w.as_slice().chunks_exact(self.m))
        {
            *e = t - dot(row, a);
        }

        // Forgetting magnitude from the normalized error ‖E‖ = ‖e‖/denom.
        let forget = if adaptive {
            let e_norm = err.iter().map(|v| v * v).sum::<f64>().sqrt() / denom;
            (1.0 - (-e_norm).exp()) / self.m as f64
        } else {
            0.0
        };

        // W += e · b. The gain row b = ta/denom is folded into the scalar.
        let mut max_mag: f64 = 0.0;
        for (row, &e) in self.w.as_mut_slice().chunks_exact_mut(self.m).zip(&err) {
            let scale = e / denom;
            for (wv, &tav) in row.iter_mut().zip(&ta) {
                *wv += scale * tav;
                max_mag = max_mag.max(wv.abs());
            }
        }

        // θ −= (θa)·b, i.e. row j loses (ta[j]/denom)·ta; the adaptive
        // diagonal addend rides along in the same pass.
        for (j, (row, &taj)) in self
            .theta
            .as_mut_slice()
            .chunks_exact_mut(self.m)
            .zip(&ta)
            .enumerate()
        {
            let scale = taj / denom;
            for (tv, &tav) in row.iter_mut().zip(&ta) {
                *tv -= scale * tav;
            }
            if adaptive {
                row[j] += forget;
            }
            for tv in row.iter() {
                max_mag = max_mag.max(tv.abs());
            }
        }

        if !max_mag.is_finite() || max_mag > OVERFLOW_LIMIT {
            return Err(Error::Numeric(format!(
                "update pushed an entry to magnitude {max_mag:.3e} (limit {OVERFLOW_LIMIT:.0e}); \
                 state must be discarded"
            )));
        }
        self.k += 1;
        Ok(())
    }

    /// Serializes the state: header `{m, n, mode, k}` as little-endian
    /// `u64` (mode: 0 static, 1 adaptive), then `W` row-major, then `θ`
    /// row-major, as little-endian 64-bit floats.
    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        let mode_tag: u64 = match self.mode {
            Mode::Static => 0,
            Mode::Adaptive => 1,
        };
        for header in [self.m as u64, self.n as u64, mode_tag, self.k] {
            out.write_all(&header.to_le_bytes())?;
        }
        for &v in self.w.as_slice().iter().chain(self.theta.as_slice()) {
            out.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    /// Reads a state previously produced by [`OlpState::write_to`].
    ///
    /// # Errors
    /// `Error::Data` on a malformed header, unknown mode tag, or non-finite
    /// payload; `Error::Io` on truncation.
    pub fn read_from<R: Read>(mut input: R) -> Result<Self> {
        let mut word = [0u8; 8];
        let mut header = [0u64; 4];
        for h in &mut header {
            input.read_exact(&mut word)?;
            *h = u64::from_le_bytes(word);
        }
        let [m64, n64, mode_tag, k] = header;
        let m = m64 as usize;
        let n = n64 as usize;
        if m == 0 || n == 0 {
            return Err(Error::Data(format!(
                "state header has zero dimension (m={m}, n={n})"
            )));
        }
        let mode = match mode_tag {
            0 => Mode::Static,
            1 => Mode::Adaptive,
            other => return Err(Error::Data(format!("unknown mode tag {other}"))),
        };
        let mut read_mat = |rows: usize, cols: usize| -> Result<Mat> {
            let mut data = vec![0.0; rows * cols];
            for v in &mut data {
                input.read_exact(&mut word)?;
                *v = f64::from_le_bytes(word);
                if !v.is_finite() {
                    return Err(Error::Data("state payload contains a non-finite value".into()));
                }
            }
            Mat::from_vec(rows, cols, data)
        };
        let w = read_mat(n, m)?;
        let theta = read_mat(m, m)?;
        Ok(OlpState { m, n, w, theta, mode, k })
    }
}
