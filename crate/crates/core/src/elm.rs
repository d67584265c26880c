//! The random-projection network around the learner: a frozen random input
//! layer with sigmoid activations, the full forward pass, and the
//! closed-form batch solver used as ground truth for the recursion.

use crate::error::{Error, Result};
use crate::numerics::mat::Mat;
use crate::numerics::prng::Prng;
use crate::numerics::solve::solve_linear;
use crate::olp::OlpState;

/// Frozen random input layer: `W_in` (M×d), biases (M), sigmoid
/// activation. Immutable after construction; the network never trains it.
///
/// The hidden bias is an addition to the bare formulation, which has none:
/// without it a sigmoid layer centers every activation at 0.5 for zero
/// input and measurably hurts digit-classification accuracy. Construct via
/// [`RandomLayer::without_bias`] for the literal bias-free form, which the
/// equation-level tests use.
#[derive(Debug, Clone)]
pub struct RandomLayer {
    d: usize,
    m: usize,
    w_in: Mat,
    bias: Vec<f64>,
}

impl RandomLayer {
    /// Draws a layer with weights and biases uniform in `[−scale, scale)`,
    /// deterministically from `seed`. Draw order is `w_in` row-major, then
    /// the biases.
    ///
    /// # Errors
    /// `Error::Argument` if a dimension is zero or `scale` is negative or
    /// non-finite. `scale = 0` is permitted and yields the degenerate
    /// all-zero layer (every activation 0.5).
    pub fn init(d: usize, m: usize, seed: u64, scale: f64) -> Result<Self> {
        Self::build(d, m, seed, scale, true)
    }

    /// Bias-free variant (the literal bare form): same weight draws, biases
    /// pinned to zero, no draws consumed for them.
    pub fn without_bias(d: usize, m: usize, seed: u64, scale: f64) -> Result<Self> {
        Self::build(d, m, seed, scale, false)
    }

    fn build(d: usize, m: usize, seed: u64, scale: f64, with_bias: bool) -> Result<Self> {
        if d == 0 || m == 0 {
            return Err(Error::Argument(format!(
                "layer dimensions must be positive, got d={d}, m={m}"
            )));
        }
        if !scale.is_finite() || scale < 0.0 {
            return Err(Error::Argument(format!("scale must be finite and ≥ 0, got {scale}")));
        }
        if m <= d {
            // Legal but almost certainly not what the caller wants: the whole
            // approach rests on projecting into a much larger hidden space.
            eprintln!(
                "warning: hidden dimension m={m} does not exceed input dimension d={d}; \
                 the random projection adds no capacity"
            );
        }
        let mut w_in = Mat::zeros(m, d);
        let mut bias = vec![0.0; m];
        if scale > 0.0 {
            let mut rng = Prng::new(seed);
            rng.fill_uniform(w_in.as_mut_slice(), -scale, scale)?;
            if with_bias {
                rng.fill_uniform(&mut bias, -scale, scale)?;
            }
        }
        Ok(RandomLayer { d, m, w_in, bias })
    }

    /// Input dimension d.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Hidden dimension M.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Input weights `W_in` (M×d).
    pub fn w_in(&self) -> &Mat {
        &self.w_in
    }

    /// Bias vector (length M; all zeros for a bias-free layer).
    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    /// Hidden activations `a_j = g(Σᵢ w_ji x_i + bias_j)` with the logistic
    /// sigmoid `g`. Outputs lie in the open interval (0, 1) for any
    /// pre-activation magnitude below the double-precision saturation
    /// thresholds (≈ 36.7 above, ≈ 745 below), which covers every layer and
    /// input range used here; beyond them the value rounds to exactly 1 or 0.
    ///
    /// # Errors
    /// `Error::Dimension` if `x.len() != d`.
    pub fn hidden(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.d {
            return Err(Error::Dimension(format!(
                "input has length {}, layer expects {}",
                x.len(),
                self.d
            )));
        }
        Ok(self
            .w_in
            .as_slice()
            .chunks_exact(self.d)
            .zip(&self.bias)
            .map(|(row, &b)| {
                let z = row.iter().zip(x).map(|(w, xi)| w * xi).sum::<f64>() + b;
                sigmoid(z)
            })
            .collect())
    }

    /// Full forward pass: `predict(state, hidden(x))`, exactly that
    /// composition.
    ///
    /// # Errors
    /// `Error::Dimension` if the layer and state disagree on M or
    /// `x.len() != d`.
    pub fn forward(&self, state: &OlpState, x: &[f64]) -> Result<Vec<f64>> {
        if state.m() != self.m {
            return Err(Error::Dimension(format!(
                "layer has m={}, state has m={}",
                self.m,
                state.m()
            )));
        }
        state.predict(&self.hidden(x)?)
    }
}

/// Numerically stable logistic sigmoid: both branches evaluate
/// `1/(1 + e^{−z})` without overflowing for any finite `z`.
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Closed-form regularized least squares over row-stacked data: returns the
/// N×M weights `W` with `Wᵀ = (λI + AᵀA)⁻¹ AᵀY`, minimizing
/// `‖AWᵀ − Y‖² + λ‖W‖²`.
///
/// With `λ = M` this is the exact batch form of the online recursion, which
/// makes it the verification oracle; with `λ = 0` it is plain least
/// squares, valid only when `AᵀA` is nonsingular.
///
/// # Errors
/// `Error::Argument` for an empty `A`, negative/non-finite `λ`, or
/// mismatched row counts; `Error::Singular` (advising `λ > 0`) when the
/// normal matrix has no usable pivot.
pub fn batch_solve(a_rows: &Mat, y_rows: &Mat, lambda: f64) -> Result<Mat> {
    if a_rows.rows() == 0 {
        return Err(Error::Argument("batch_solve needs at least one sample row".into()));
    }
    if y_rows.rows() != a_rows.rows() {
        return Err(Error::Dimension(format!(
            "A has {} rows but Y has {}",
            a_rows.rows(),
            y_rows.rows()
        )));
    }
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::Argument(format!(
            "lambda must be finite and ≥ 0, got {lambda}"
        )));
    }

    let m = a_rows.cols();
    // Normal matrix G = λI + AᵀA, accumulated row by row so A is read once.
    let mut gram = Mat::scaled_identity(m, lambda);
    for r in 0..a_rows.rows() {
        let row = a_rows.row(r);
        let g = gram.as_mut_slice();
        for (i, &vi) in row.iter().enumerate() {
            let out = &mut g[i * m..(i + 1) * m];
            for (o, &vj) in out.iter_mut().zip(row) {
                *o += vi * vj;
            }
        }
    }

    // Right-hand side AᵀY (M×N).
    let rhs = a_rows.transpose().matmul(y_rows)?;

    let wt = solve_linear(&gram, &rhs).map_err(|e| match e {
        Error::Singular(msg) => Error::Singular(format!(
            "{msg}; the normal matrix is singular — use lambda > 0"
        )),
        other => other,
    })?;
    Ok(wt.transpose())
}
