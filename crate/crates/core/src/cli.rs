//! Experiment harness. Four commands, all deterministic given `--seed`:
//!
//! * `mnist` — stream training digits through the learner in seeded-random
//!   order, evaluating on the held-out set at log-spaced checkpoints;
//!   writes the learning curve as CSV.
//! * `mg` — generate a Mackey-Glass series, delay-embed it, and run the
//!   static and adaptive learners over the same stream; writes per-step
//!   predictions as CSV and reports the NRMSE of each.
//! * `verify` — the oracle-equivalence suite: the online recursion against
//!   the closed-form ridge solution over a grid of small instances.
//! * `bench` — the memory argument as a table: constant learner footprint
//!   versus the growing batch alternative, plus per-update timing.
//!
//! The environment variable `OLP_THREADS` caps internal parallelism (the
//! test-set evaluation fans out across samples; training itself is
//! sequential by algorithmic necessity).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, ValueEnum};
use rayon::prelude::*;

use crate::datasets::mackey_glass::{
    delay_embed, mackey_glass_default, EmbeddedSample, TRANSIENT_DISCARD,
};
use crate::datasets::mnist::{one_hot, MnistSet, INPUT_DIM};
use crate::elm::{batch_solve, RandomLayer};
use crate::error::{Error, Result};
use crate::numerics::mat::Mat;
use crate::numerics::prng::Prng;
use crate::numerics::solve::solve_linear;
use crate::olp::{Mode, OlpState};

/// Embedded samples excluded from the NRMSE window while the learners warm
/// up, so the metric reflects tracking rather than cold start.
pub const MG_WARMUP: usize = 500;

/// Canonical file names of the held-out set, expected alongside the
/// training files.
const TEST_IMAGES_NAME: &str = "t10k-images-idx3-ubyte";
const TEST_LABELS_NAME: &str = "t10k-labels-idx1-ubyte";

/// Command-line arguments. Defaults reproduce the reference experiments.
#[derive(Debug, Parser)]
#[command(name = "olp", about = "Online pseudoinverse learning experiments")]
pub struct Args {
    /// Experiment to run.
    #[arg(long, value_enum)]
    pub command: CommandArg,

    /// Seed for every random choice (weights, shuffles, verification grid).
    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Hidden layer size M (default: 5760 for mnist, 100 for mg).
    #[arg(long)]
    pub hidden: Option<usize>,

    /// Update rule for the mnist command (mg always runs both).
    #[arg(long, value_enum, default_value_t = ModeArg::Static)]
    pub mode: ModeArg,

    /// Path to the IDX training images (mnist). The held-out
    /// t10k-images/t10k-labels files must sit in the same directory.
    #[arg(long)]
    pub images: Option<PathBuf>,

    /// Path to the IDX training labels (mnist).
    #[arg(long)]
    pub labels: Option<PathBuf>,

    /// Comma-separated delay taps (mg).
    #[arg(long, value_delimiter = ',', default_value = "1,34,67,100")]
    pub taps: Vec<usize>,

    /// Prediction horizon in steps (mg).
    #[arg(long, default_value_t = 10)]
    pub horizon: usize,

    /// Series length in integration steps, including the discarded
    /// transient (mg).
    #[arg(long, default_value_t = 12000)]
    pub steps: usize,

    /// Sample limit: training digits to stream (mnist; default all), or the
    /// hypothetical batch length K (bench).
    #[arg(long)]
    pub limit: Option<usize>,

    /// Output CSV path (default: mnist_curve.csv / mg_predictions.csv /
    /// bench.csv).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Which experiment to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CommandArg {
    /// Digit classification learning curve.
    Mnist,
    /// Mackey-Glass prediction, static vs adaptive.
    Mg,
    /// Oracle-equivalence verification suite.
    Verify,
    /// Memory footprint and update-timing table.
    Bench,
}

/// CLI flavor of [`Mode`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Exact recursive ridge updates.
    Static,
    /// Forgetting-term updates.
    Adaptive,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Static => Mode::Static,
            ModeArg::Adaptive => Mode::Adaptive,
        }
    }
}

/// Fully validated run configuration; every command checks its inputs here,
/// before any file or compute work starts.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Experiment selector.
    pub command: CommandArg,
    /// Master seed.
    pub seed: u64,
    /// Hidden layer size M.
    pub m: usize,
    /// Update rule (mnist only; mg runs both).
    pub mode: Mode,
    /// Training images path (mnist).
    pub images: Option<PathBuf>,
    /// Training labels path (mnist).
    pub labels: Option<PathBuf>,
    /// Delay taps (mg).
    pub taps: Vec<usize>,
    /// Prediction horizon (mg).
    pub horizon: usize,
    /// MG series length in steps (mg).
    pub steps: usize,
    /// Training-digit limit (mnist) or batch length K (bench).
    pub limit: Option<usize>,
    /// CSV output path; `None` only for verify.
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// Validates raw arguments into a runnable configuration.
    ///
    /// # Errors
    /// `Error::Argument` describing the first offending field.
    pub fn from_args(args: Args) -> Result<RunConfig> {
        let command = args.command;
        let m = args.hidden.unwrap_or(match command {
            CommandArg::Mnist => 5760,
            CommandArg::Mg => 100,
            // Unused by verify; bench takes its own M list.
            CommandArg::Verify | CommandArg::Bench => 100,
        });
        if m == 0 {
            return Err(Error::Argument("--hidden must be at least 1".into()));
        }
        if command == CommandArg::Mnist {
            if args.images.is_none() || args.labels.is_none() {
                return Err(Error::Argument(
                    "mnist requires --images and --labels (IDX training files)".into(),
                ));
            }
        }
        if command == CommandArg::Mg {
            if args.taps.is_empty() {
                return Err(Error::Argument("--taps must not be empty".into()));
            }
            if args.taps[0] == 0 {
                return Err(Error::Argument("--taps must be positive".into()));
            }
            if args.taps.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Argument(format!(
                    "--taps must be strictly ascending, got {:?}",
                    args.taps
                )));
            }
            if args.horizon == 0 {
                return Err(Error::Argument("--horizon must be at least 1".into()));
            }
            if args.steps == 0 {
                return Err(Error::Argument("--steps must be at least 1".into()));
            }
        }
        if command == CommandArg::Bench {
            if args.limit == Some(0) {
                return Err(Error::Argument("--limit must be at least 1 for bench".into()));
            }
        }
        let out = args.out.or_else(|| {
            match command {
                CommandArg::Mnist => Some("mnist_curve.csv".into()),
                CommandArg::Mg => Some("mg_predictions.csv".into()),
                CommandArg::Bench => Some("bench.csv".into()),
                CommandArg::Verify => None,
            }
        });
        Ok(RunConfig {
            command,
            seed: args.seed,
            m,
            mode: args.mode.into(),
            images: args.images,
            labels: args.labels,
            taps: args.taps,
            horizon: args.horizon,
            steps: args.steps,
            limit: args.limit,
            out,
        })
    }

    /// Dispatches to the selected command.
    pub fn run(&self) -> Result<()> {
        match self.command {
            CommandArg::Mnist => run_mnist(self),
            CommandArg::Mg => run_mg(self).map(|_| ()),
            CommandArg::Verify => run_verify(self),
            CommandArg::Bench => run_bench(self),
        }
    }
}

// ---------------------------------------------------------------------------
// mnist
// ---------------------------------------------------------------------------

/// One evaluation checkpoint of a learning curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    /// Training digits folded in when the row was measured.
    pub samples_seen: usize,
    /// Error rate on the held-out set, in `[0, 1]`.
    pub test_error_rate: f64,
    /// Error rate per true class (0 for classes absent from the set).
    pub per_class_error: [f64; 10],
}

/// Learning curve: rows at strictly increasing sample counts.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LearningCurve {
    /// Checkpoint rows in measurement order.
    pub rows: Vec<CurveRow>,
}

impl LearningCurve {
    /// Renders the curve as CSV with a header row, full round-trip
    /// precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "samples_seen,test_error_rate,err_0,err_1,err_2,err_3,err_4,err_5,err_6,err_7,err_8,err_9\n",
        );
        for row in &self.rows {
            write!(out, "{},{}", row.samples_seen, row.test_error_rate).expect("string write");
            for e in row.per_class_error {
                write!(out, ",{e}").expect("string write");
            }
            out.push('\n');
        }
        out
    }
}

/// Log-spaced checkpoint schedule 1, 2, 5, 10, 20, 50, … up to and always
/// including `limit`; a bare `[0]` when no training is requested.
pub fn log_checkpoints(limit: usize) -> Vec<usize> {
    if limit == 0 {
        return vec![0];
    }
    let mut points = Vec::new();
    let mut decade = 1usize;
    'outer: loop {
        for mult in [1, 2, 5] {
            let p = decade.saturating_mul(mult);
            if p >= limit {
                break 'outer;
            }
            points.push(p);
        }
        decade = decade.saturating_mul(10);
    }
    points.push(limit);
    points
}

/// Precomputed hidden activations of an evaluation set, row per digit.
/// Computing these once and reusing them across checkpoints is what keeps
/// the curve affordable.
pub struct EvalCache {
    activations: Mat,
    labels: Vec<u8>,
}

impl EvalCache {
    /// Runs every digit of `set` through the layer (in parallel).
    pub fn build(layer: &RandomLayer, set: &MnistSet) -> Result<Self> {
        let m = layer.m();
        let mut activations = Mat::zeros(set.len(), m);
        activations
            .as_mut_slice()
            .par_chunks_exact_mut(m)
            .zip(set.images().par_iter())
            .try_for_each(|(row, image)| -> Result<()> {
                row.copy_from_slice(&layer.hidden(image)?);
                Ok(())
            })?;
        Ok(EvalCache { activations, labels: set.labels().to_vec() })
    }

    /// Classifies every cached digit with the given state and tallies
    /// errors. Classification is argmax over the 10 outputs, ties broken by
    /// the lowest class index.
    pub fn evaluate(&self, state: &OlpState) -> Result<CurveRow> {
        let m = state.m();
        if self.activations.cols() != m {
            return Err(Error::Dimension(format!(
                "evaluation cache has m={}, state has m={m}",
                self.activations.cols()
            )));
        }
        let w = state.weights();
        let (wrong, wrong_by_class, count_by_class) = self
            .activations
            .as_slice()
            .par_chunks_exact(m)
            .zip(self.labels.par_iter())
            .map(|(a, &label)| {
                let mut best = 0usize;
                let mut best_v = f64::NEG_INFINITY;
                for class in 0..w.rows() {
                    let v = crate::numerics::mat::dot(w.row(class), a);
                    if v > best_v {
                        best_v = v;
                        best = class;
                    }
                }
                let miss = usize::from(best != label as usize);
                let mut wrong_c = [0usize; 10];
                let mut count_c = [0usize; 10];
                wrong_c[label as usize] = miss;
                count_c[label as usize] = 1;
                (miss, wrong_c, count_c)
            })
            .reduce(
                || (0usize, [0usize; 10], [0usize; 10]),
                |mut acc, item| {
                    acc.0 += item.0;
                    for i in 0..10 {
                        acc.1[i] += item.1[i];
                        acc.2[i] += item.2[i];
                    }
                    acc
                },
            );
        let total = self.labels.len().max(1);
        let mut per_class_error = [0.0; 10];
        for i in 0..10 {
            if count_by_class[i] > 0 {
                per_class_error[i] = wrong_by_class[i] as f64 / count_by_class[i] as f64;
            }
        }
        Ok(CurveRow {
            samples_seen: 0,
            test_error_rate: wrong as f64 / total as f64,
            per_class_error,
        })
    }
}

/// Streams `limit` training digits (seeded shuffle order) through a fresh
/// learner, evaluating against `cache` at each checkpoint.
///
/// The layer is built from `seed`; the shuffle uses `seed + 1` so the two
/// streams stay decorrelated. Checkpoints must be ascending; a leading `0`
/// row evaluates the untrained state.
pub fn mnist_curve(
    train: &MnistSet,
    layer: &RandomLayer,
    cache: &EvalCache,
    mode: Mode,
    seed: u64,
    checkpoints: &[usize],
) -> Result<LearningCurve> {
    let limit = checkpoints.last().copied().unwrap_or(0);
    if limit > train.len() {
        return Err(Error::Argument(format!(
            "requested {limit} training digits but the set has {}",
            train.len()
        )));
    }
    let mut order: Vec<usize> = (0..train.len()).collect();
    Prng::new(seed.wrapping_add(1)).shuffle(&mut order);

    let mut state = OlpState::init(layer.m(), 10, mode)?;
    let mut curve = LearningCurve::default();
    let mut next_checkpoint = 0usize;

    let record = |state: &OlpState, seen: usize, curve: &mut LearningCurve| -> Result<()> {
        let mut row = cache.evaluate(state)?;
        row.samples_seen = seen;
        curve.rows.push(row);
        Ok(())
    };

    if checkpoints.first() == Some(&0) {
        record(&state, 0, &mut curve)?;
        next_checkpoint = 1;
    }
    for (seen, &idx) in order[..limit].iter().enumerate() {
        let a = layer.hidden(&train.images()[idx])?;
        let y = one_hot(train.labels()[idx])?;
        state.update(&a, &y)?;
        if checkpoints.get(next_checkpoint) == Some(&(seen + 1)) {
            record(&state, seen + 1, &mut curve)?;
            next_checkpoint += 1;
        }
    }
    Ok(curve)
}

fn sibling(path: &Path, name: &str) -> PathBuf {
    path.parent().map(|p| p.join(name)).unwrap_or_else(|| name.into())
}

fn run_mnist(cfg: &RunConfig) -> Result<()> {
    let images = cfg.images.as_ref().expect("validated by from_args");
    let labels = cfg.labels.as_ref().expect("validated by from_args");
    let train = MnistSet::load(images, labels)?;
    let test_images = sibling(images, TEST_IMAGES_NAME);
    let test_labels = sibling(images, TEST_LABELS_NAME);
    if !test_images.exists() || !test_labels.exists() {
        return Err(Error::Data(format!(
            "held-out files {TEST_IMAGES_NAME}/{TEST_LABELS_NAME} not found next to {}",
            images.display()
        )));
    }
    let test = MnistSet::load(&test_images, &test_labels)?;

    let limit = cfg.limit.unwrap_or(train.len()).min(train.len());
    let layer = RandomLayer::init(INPUT_DIM, cfg.m, cfg.seed, 1.0)?;
    let cache = EvalCache::build(&layer, &test)?;
    let curve = mnist_curve(&train, &layer, &cache, cfg.mode, cfg.seed, &log_checkpoints(limit))?;

    let out = cfg.out.as_ref().expect("mnist always has an output path");
    fs::write(out, curve.to_csv())?;
    let last = curve.rows.last().expect("curve has at least one row");
    println!(
        "mnist: m={} mode={:?} seed={} — test error {:.4} after {} digits ({} checkpoints, curve in {})",
        cfg.m,
        cfg.mode,
        cfg.seed,
        last.test_error_rate,
        last.samples_seen,
        curve.rows.len(),
        out.display()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// mg
// ---------------------------------------------------------------------------

/// Outcome of the Mackey-Glass comparison run.
#[derive(Debug, Clone)]
pub struct MgRun {
    /// Per-sample rows: (time of predicted value, truth, static prediction,
    /// adaptive prediction).
    pub rows: Vec<(f64, f64, f64, f64)>,
    /// NRMSE of the static learner over the evaluation window.
    pub nrmse_static: f64,
    /// NRMSE of the adaptive learner over the evaluation window.
    pub nrmse_adaptive: f64,
}

impl MgRun {
    /// Renders the per-sample table as CSV with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,truth,pred_static,pred_adaptive\n");
        for (t, truth, ps, pa) in &self.rows {
            writeln!(out, "{t},{truth},{ps},{pa}").expect("string write");
        }
        out
    }
}

/// Runs the static and adaptive learners over the same embedded stream,
/// predicting each sample before training on it, and measures both NRMSEs
/// over the post-warm-up window.
///
/// `samples` must be longer than the warm-up window. Reported times are
/// `(index_offset + index + horizon)·dt` — the moment of the predicted
/// value, with `index_offset` restoring what the transient cut removed.
pub fn mg_compare(
    samples: &[EmbeddedSample],
    m: usize,
    seed: u64,
    horizon: usize,
    dt: f64,
    index_offset: usize,
) -> Result<MgRun> {
    if samples.len() <= MG_WARMUP {
        return Err(Error::Argument(format!(
            "embedding yields {} samples, need more than the {MG_WARMUP}-sample warm-up",
            samples.len()
        )));
    }
    let d = samples[0].input.len();
    let layer = RandomLayer::init(d, m, seed, 1.0)?;
    let mut state_static = OlpState::init(m, 1, Mode::Static)?;
    let mut state_adaptive = OlpState::init(m, 1, Mode::Adaptive)?;

    let mut rows = Vec::with_capacity(samples.len());
    for s in samples {
        let a = layer.hidden(&s.input)?;
        let pred_s = state_static.predict(&a)?[0];
        let pred_a = state_adaptive.predict(&a)?[0];
        let y = [s.target];
        state_static.update_static(&a, &y)?;
        state_adaptive.update_adaptive(&a, &y)?;
        let t = (index_offset + s.index + horizon) as f64 * dt;
        rows.push((t, s.target, pred_s, pred_a));
    }

    let window = &rows[MG_WARMUP..];
    let truth_mean = window.iter().map(|r| r.1).sum::<f64>() / window.len() as f64;
    let truth_var =
        window.iter().map(|r| (r.1 - truth_mean).powi(2)).sum::<f64>() / window.len() as f64;
    let truth_std = truth_var.sqrt();
    let rmse = |pick: fn(&(f64, f64, f64, f64)) -> f64| {
        (window.iter().map(|r| (r.1 - pick(r)).powi(2)).sum::<f64>() / window.len() as f64).sqrt()
    };
    // A constant truth window has zero deviation; report the raw RMSE then
    // (≈0 for any learner that has locked on) instead of dividing by zero.
    let normalize = if truth_std > 0.0 { truth_std } else { 1.0 };
    Ok(MgRun {
        nrmse_static: rmse(|r| r.2) / normalize,
        nrmse_adaptive: rmse(|r| r.3) / normalize,
        rows,
    })
}

/// Generates, embeds, and compares; returns the run for inspection.
pub fn run_mg(cfg: &RunConfig) -> Result<MgRun> {
    let series = mackey_glass_default(cfg.steps, 1.2)?;
    let cut = TRANSIENT_DISCARD.min(cfg.steps.saturating_sub(1));
    let trimmed = series.discard(cut)?;
    let samples = delay_embed(&trimmed, &cfg.taps, cfg.horizon)?;
    let run = mg_compare(&samples, cfg.m, cfg.seed, cfg.horizon, trimmed.dt(), cut)?;
    if let Some(out) = &cfg.out {
        fs::write(out, run.to_csv())?;
    }
    println!(
        "mg: m={} seed={} taps={:?} horizon={} — NRMSE static {:.4}, adaptive {:.4}",
        cfg.m, cfg.seed, cfg.taps, cfg.horizon, run.nrmse_static, run.nrmse_adaptive
    );
    Ok(run)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

/// Result of the oracle-equivalence suite.
#[derive(Debug, Clone, Copy)]
pub struct VerifyReport {
    /// Largest |W_online − W_oracle| over the grid.
    pub max_w_dev: f64,
    /// Largest |θ_online − (M·I + AᵀA)⁻¹| over the grid.
    pub max_theta_dev: f64,
    /// Number of (M, N, K, seed) instances exercised.
    pub cases: usize,
}

/// Deviation threshold for the equivalence suite.
pub const VERIFY_TOL: f64 = 1e-7;

/// Runs static online learning and the closed-form ridge oracle over a grid
/// of small instances with inputs in `[−1, 1]`, and reports the worst
/// deviations of both the weights and the inhibition matrix.
///
/// # Errors
/// `Error::Argument` if any grid axis is empty or `n_seeds` is zero.
pub fn verify_grid(
    ms: &[usize],
    ns: &[usize],
    ks: &[usize],
    n_seeds: u64,
    base_seed: u64,
) -> Result<VerifyReport> {
    if ms.is_empty() || ns.is_empty() || ks.is_empty() || n_seeds == 0 {
        return Err(Error::Argument("verification grid must not be empty".into()));
    }
    let mut max_w_dev: f64 = 0.0;
    let mut max_theta_dev: f64 = 0.0;
    let mut cases = 0usize;
    for &m in ms {
        for &n in ns {
            for &k in ks {
                for seed_idx in 0..n_seeds {
                    let mut rng = Prng::new(base_seed.wrapping_add(seed_idx));
                    let mut a_rows = Mat::zeros(k, m);
                    let mut y_rows = Mat::zeros(k, n);
                    rng.fill_uniform(a_rows.as_mut_slice(), -1.0, 1.0)?;
                    rng.fill_uniform(y_rows.as_mut_slice(), -1.0, 1.0)?;

                    let mut state = OlpState::init(m, n, Mode::Static)?;
                    for r in 0..k {
                        state.update_static(a_rows.row(r), y_rows.row(r))?;
                    }

                    let w_oracle = batch_solve(&a_rows, &y_rows, m as f64)?;
                    let dev = max_abs_diff(state.weights(), &w_oracle)?;
                    max_w_dev = max_w_dev.max(dev);

                    // θ oracle: (M·I + AᵀA)⁻¹.
                    let mut gram = Mat::scaled_identity(m, m as f64);
                    for r in 0..k {
                        let row = a_rows.row(r);
                        for i in 0..m {
                            for j in 0..m {
                                let v = gram.get(i, j) + row[i] * row[j];
                                gram.set(i, j, v);
                            }
                        }
                    }
                    let theta_oracle = solve_linear(&gram, &Mat::identity(m))?;
                    let dev = max_abs_diff(state.theta(), &theta_oracle)?;
                    max_theta_dev = max_theta_dev.max(dev);
                    cases += 1;
                }
            }
        }
    }
    Ok(VerifyReport { max_w_dev, max_theta_dev, cases })
}

fn max_abs_diff(a: &Mat, b: &Mat) -> Result<f64> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::Dimension(format!(
            "cannot compare {}x{} with {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(a.as_slice()
        .iter()
        .zip(b.as_slice())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).abs())))
}

fn run_verify(cfg: &RunConfig) -> Result<()> {
    // The M=1 worked example first: one update with a=1, y=2 must land on
    // w=1, θ=0.5 exactly.
    let mut hand = OlpState::init(1, 1, Mode::Static)?;
    hand.update_static(&[1.0], &[2.0])?;
    let hand_ok =
        (hand.weights().get(0, 0) - 1.0).abs() < 1e-15 && (hand.theta().get(0, 0) - 0.5).abs() < 1e-15;

    let report = verify_grid(&[1, 5, 20], &[1, 3], &[10, 100, 500], 5, cfg.seed)?;
    let pass = hand_ok && report.max_w_dev < VERIFY_TOL && report.max_theta_dev < VERIFY_TOL;
    println!(
        "verify: {} cases — max weight deviation {:.3e}, max theta deviation {:.3e}, hand case {} — {}",
        report.cases,
        report.max_w_dev,
        report.max_theta_dev,
        if hand_ok { "ok" } else { "FAILED" },
        if pass { "PASS" } else { "FAIL" }
    );
    if pass {
        Ok(())
    } else {
        Err(Error::Numeric(format!(
            "oracle deviation {:.3e}/{:.3e} exceeds {VERIFY_TOL:.0e}",
            report.max_w_dev, report.max_theta_dev
        )))
    }
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

/// One row of the memory-scaling table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchRow {
    /// Hidden size M.
    pub m: usize,
    /// Output size N.
    pub n: usize,
    /// Hypothetical batch length K.
    pub k: usize,
    /// Learner footprint in reals: exactly `N·M + M²`, independent of K.
    pub olp_reals: u64,
    /// Batch design-matrix storage in reals: `M·K`, growing with K.
    pub batch_reals: u64,
}

/// Footprint table for the given M values (N=10 outputs, batch length `k`).
pub fn bench_rows(ms: &[usize], n: usize, k: usize) -> Vec<BenchRow> {
    ms.iter()
        .map(|&m| BenchRow {
            m,
            n,
            k,
            olp_reals: (n as u64) * (m as u64) + (m as u64) * (m as u64),
            batch_reals: (m as u64) * (k as u64),
        })
        .collect()
}

/// Renders footprint rows as CSV. Timing is deliberately left out so the
/// bytes are identical across runs; per-update timing goes to stdout.
pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("m,n,k,olp_reals,batch_reals\n");
    for r in rows {
        writeln!(out, "{},{},{},{},{}", r.m, r.n, r.k, r.olp_reals, r.batch_reals)
            .expect("string write");
    }
    out
}

/// Median wall-clock microseconds per static update at hidden size `m`.
pub fn time_per_update(m: usize, reps: usize, seed: u64) -> Result<f64> {
    let mut rng = Prng::new(seed);
    let mut a = vec![0.0; m];
    let mut state = OlpState::init(m, 10, Mode::Static)?;
    let y = vec![0.5; 10];
    let mut times: Vec<f64> = Vec::with_capacity(reps);
    for _ in 0..reps {
        rng.fill_uniform(&mut a, 0.0, 1.0)?;
        let start = Instant::now();
        state.update_static(&a, &y)?;
        times.push(start.elapsed().as_secs_f64() * 1e6);
    }
    times.sort_by(|x, y| x.total_cmp(y));
    Ok(times[times.len() / 2])
}

/// Default hidden sizes exercised by the bench command.
pub const BENCH_SIZES: [usize; 5] = [250, 500, 1000, 2000, 5760];

fn run_bench(cfg: &RunConfig) -> Result<()> {
    let k = cfg.limit.unwrap_or(60000);
    let rows = bench_rows(&BENCH_SIZES, 10, k);
    if let Some(out) = &cfg.out {
        fs::write(out, bench_csv(&rows))?;
    }
    for row in &rows {
        let us = time_per_update(row.m, 7, cfg.seed)?;
        println!(
            "bench: m={:5} — state {:>11} reals, batch A {:>12} reals at K={}, {:.1} µs/update",
            row.m, row.olp_reals, row.batch_reals, row.k, us
        );
    }
    Ok(())
}
