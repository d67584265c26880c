//! Contract tests for the online learner: hand-computed update examples,
//! equivalence with the closed-form ridge oracle, the documented invariants
//! (symmetry, trace, no-op, adaptive/static agreement), and checkpoint
//! serialization.

use olp::elm::batch_solve;
use olp::error::Error;
use olp::numerics::mat::Mat;
use olp::numerics::prng::Prng;
use olp::numerics::solve::solve_linear;
use olp::olp::{Mode, OlpState, OVERFLOW_LIMIT};
use proptest::prelude::*;

fn uniform_vec(rng: &mut Prng, len: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut v = vec![0.0; len];
    rng.fill_uniform(&mut v, lo, hi).unwrap();
    v
}

fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .fold(0.0, |acc: f64, (x, y)| acc.max((x - y).abs()))
}

/// Closed-form ridge oracle for a static state: `Wᵀ = (λI + AᵀA)⁻¹AᵀY` with
/// `λ = M`, plus `θ = (M·I + AᵀA)⁻¹`.
fn ridge_oracle(a_rows: &Mat, y_rows: &Mat) -> (Mat, Mat) {
    let m = a_rows.cols();
    let w = batch_solve(a_rows, y_rows, m as f64).unwrap();
    let mut gram = Mat::scaled_identity(m, m as f64);
    for r in 0..a_rows.rows() {
        let row = a_rows.row(r);
        for i in 0..m {
            for j in 0..m {
                let v = gram.get(i, j) + row[i] * row[j];
                gram.set(i, j, v);
            }
        }
    }
    let theta = solve_linear(&gram, &Mat::identity(m)).unwrap();
    (w, theta)
}

// --- init -------------------------------------------------------------------

#[test]
fn init_sets_prior_state() {
    let state = OlpState::init(4, 2, Mode::Static).unwrap();
    assert_eq!((state.m(), state.n(), state.k()), (4, 2, 0));
    assert_eq!(state.mode(), Mode::Static);
    assert!(state.weights().as_slice().iter().all(|&v| v == 0.0));
    for i in 0..4 {
        for j in 0..4 {
            let expect = if i == j { 0.25 } else { 0.0 };
            assert_eq!(state.theta().get(i, j), expect);
        }
    }
}

#[test]
fn init_rejects_zero_dimensions() {
    assert!(matches!(OlpState::init(0, 1, Mode::Static).unwrap_err(), Error::Argument(_)));
    assert!(matches!(OlpState::init(1, 0, Mode::Adaptive).unwrap_err(), Error::Argument(_)));
}

// --- gain ---------------------------------------------------------------------

#[test]
fn gain_zero_activation() {
    let state = OlpState::init(3, 1, Mode::Static).unwrap();
    let (b, denom) = state.gain(&[0.0, 0.0, 0.0]).unwrap();
    assert_eq!(b, vec![0.0, 0.0, 0.0]);
    assert_eq!(denom, 1.0);
}

#[test]
fn gain_hand_example_m1() {
    // Fresh M=1 state has θ = I/1 = 1.
    let state = OlpState::init(1, 1, Mode::Static).unwrap();
    let (b, denom) = state.gain(&[1.0]).unwrap();
    assert_eq!(denom, 2.0);
    assert_eq!(b, vec![0.5]);
}

#[test]
fn gain_hand_example_m2() {
    // Fresh M=2 state has θ = I/2; a = (1,1) gives aᵀθa = 1.
    let state = OlpState::init(2, 1, Mode::Static).unwrap();
    let (b, denom) = state.gain(&[1.0, 1.0]).unwrap();
    assert_eq!(denom, 2.0);
    assert_eq!(b, vec![0.25, 0.25]);
}

#[test]
fn gain_rejects_wrong_length() {
    let state = OlpState::init(3, 1, Mode::Static).unwrap();
    assert!(matches!(state.gain(&[1.0]).unwrap_err(), Error::Dimension(_)));
}

// --- static updates -----------------------------------------------------------

#[test]
fn static_hand_example() {
    let mut state = OlpState::init(1, 1, Mode::Static).unwrap();
    state.update_static(&[1.0], &[2.0]).unwrap();
    assert_eq!(state.weights().get(0, 0), 1.0);
    assert_eq!(state.theta().get(0, 0), 0.5);
    assert_eq!(state.k(), 1);
    // Cross-check against the scalar ridge formula w = y·a/(1/θ₀ + a²).
    let expect = 2.0 * 1.0 / (1.0 / 1.0 + 1.0);
    assert_eq!(state.weights().get(0, 0), expect);
    // Continuation: the trained scalar state predicts 1.0 at a = 1.
    assert_eq!(state.predict(&[1.0]).unwrap(), vec![1.0]);
}

#[test]
fn static_zero_activation_is_noop() {
    let mut state = OlpState::init(3, 2, Mode::Static).unwrap();
    let mut rng = Prng::new(5);
    for _ in 0..10 {
        let a = uniform_vec(&mut rng, 3, 0.0, 1.0);
        let y = uniform_vec(&mut rng, 2, -1.0, 1.0);
        state.update_static(&a, &y).unwrap();
    }
    let w_before = state.weights().clone();
    let theta_before = state.theta().clone();
    let k_before = state.k();
    state.update_static(&[0.0; 3], &[7.0, -3.0]).unwrap();
    assert_eq!(state.weights(), &w_before);
    assert_eq!(state.theta(), &theta_before);
    assert_eq!(state.k(), k_before + 1);
}

#[test]
fn static_matches_ridge_oracle_m10() {
    let (m, n, k) = (10, 2, 100);
    let mut rng = Prng::new(3);
    let mut a_rows = Mat::zeros(k, m);
    let mut y_rows = Mat::zeros(k, n);
    rng.fill_uniform(a_rows.as_mut_slice(), -1.0, 1.0).unwrap();
    rng.fill_uniform(y_rows.as_mut_slice(), -1.0, 1.0).unwrap();

    let mut state = OlpState::init(m, n, Mode::Static).unwrap();
    for r in 0..k {
        state.update_static(a_rows.row(r), y_rows.row(r)).unwrap();
    }
    let (w_oracle, theta_oracle) = ridge_oracle(&a_rows, &y_rows);
    assert!(max_abs_diff(state.weights(), &w_oracle) < 1e-8);
    assert!(max_abs_diff(state.theta(), &theta_oracle) < 1e-8);
}

#[test]
fn update_requires_matching_mode() {
    let mut s = OlpState::init(2, 1, Mode::Static).unwrap();
    assert!(matches!(s.update_adaptive(&[1.0, 0.0], &[1.0]).unwrap_err(), Error::Argument(_)));
    let mut a = OlpState::init(2, 1, Mode::Adaptive).unwrap();
    assert!(matches!(a.update_static(&[1.0, 0.0], &[1.0]).unwrap_err(), Error::Argument(_)));
}

#[test]
fn update_rejects_mismatched_lengths() {
    let mut s = OlpState::init(3, 2, Mode::Static).unwrap();
    assert!(matches!(s.update_static(&[1.0], &[1.0, 2.0]).unwrap_err(), Error::Dimension(_)));
    assert!(matches!(
        s.update_static(&[1.0, 0.0, 0.0], &[1.0]).unwrap_err(),
        Error::Dimension(_)
    ));
}

#[test]
fn dispatching_update_follows_mode() {
    let mut s = OlpState::init(1, 1, Mode::Static).unwrap();
    s.update(&[1.0], &[2.0]).unwrap();
    assert_eq!(s.theta().get(0, 0), 0.5);
    let mut a = OlpState::init(1, 1, Mode::Adaptive).unwrap();
    a.update(&[1.0], &[2.0]).unwrap();
    assert!((a.theta().get(0, 0) - 1.1321205588285577).abs() < 1e-12);
}

// --- normalized error -----------------------------------------------------------

#[test]
fn normalized_error_perfect_prediction_is_zero() {
    let mut state = OlpState::init(2, 1, Mode::Static).unwrap();
    state.update_static(&[1.0, 0.5], &[2.0]).unwrap();
    let a = [0.3, 0.9];
    let y = state.predict(&a).unwrap();
    let e = state.normalized_error(&a, &y).unwrap();
    assert_eq!(e, vec![0.0]);
}

#[test]
fn normalized_error_fresh_state_zero_activation() {
    let state = OlpState::init(3, 2, Mode::Static).unwrap();
    let e = state.normalized_error(&[0.0; 3], &[4.0, -1.0]).unwrap();
    assert_eq!(e, vec![4.0, -1.0]);
}

#[test]
fn normalized_error_hand_example() {
    // Fresh M=1 state: θ = 1, w = 0, a = 1, y = 2 → E = 2/2 = 1.
    let state = OlpState::init(1, 1, Mode::Static).unwrap();
    let e = state.normalized_error(&[1.0], &[2.0]).unwrap();
    assert_eq!(e, vec![1.0]);
}

// --- adaptive updates ------------------------------------------------------------

#[test]
fn adaptive_hand_example() {
    let mut state = OlpState::init(1, 1, Mode::Adaptive).unwrap();
    state.update_adaptive(&[1.0], &[2.0]).unwrap();
    // Weight update is the static one; θ additionally gains (1 − e⁻¹)/1.
    assert_eq!(state.weights().get(0, 0), 1.0);
    let expect = 0.5 + (1.0 - (-1.0f64).exp());
    assert!((state.theta().get(0, 0) - expect).abs() < 1e-15);
    assert!((state.theta().get(0, 0) - 1.1321205588285577).abs() < 1e-12);
}

#[test]
fn adaptive_zero_activation_is_noop() {
    let mut state = OlpState::init(3, 2, Mode::Adaptive).unwrap();
    let mut rng = Prng::new(6);
    for _ in 0..10 {
        let a = uniform_vec(&mut rng, 3, 0.0, 1.0);
        let y = uniform_vec(&mut rng, 2, -1.0, 1.0);
        state.update_adaptive(&a, &y).unwrap();
    }
    let w_before = state.weights().clone();
    let theta_before = state.theta().clone();
    let k_before = state.k();
    // Despite the nonzero target (a nonzero raw error), a zero activation
    // must not even trigger the forgetting term.
    state.update_adaptive(&[0.0; 3], &[7.0, -3.0]).unwrap();
    assert_eq!(state.weights(), &w_before);
    assert_eq!(state.theta(), &theta_before);
    assert_eq!(state.k(), k_before + 1);
}

#[test]
fn adaptive_equals_static_when_error_is_zero() {
    // Train a static state, then clone it into adaptive mode by patching
    // the serialized mode tag (byte 16 of the header).
    let mut trained = OlpState::init(4, 2, Mode::Static).unwrap();
    let mut rng = Prng::new(8);
    for _ in 0..25 {
        let a = uniform_vec(&mut rng, 4, 0.0, 1.0);
        let y = uniform_vec(&mut rng, 2, -1.0, 1.0);
        trained.update_static(&a, &y).unwrap();
    }
    let mut bytes = Vec::new();
    trained.write_to(&mut bytes).unwrap();
    bytes[16] = 1;
    let mut adaptive = OlpState::read_from(bytes.as_slice()).unwrap();
    assert_eq!(adaptive.mode(), Mode::Adaptive);

    // A sample the current weights predict exactly has E = 0, so the
    // forgetting term vanishes and both rules must agree value-for-value.
    let a = uniform_vec(&mut rng, 4, 0.0, 1.0);
    let y = trained.predict(&a).unwrap();
    trained.update_static(&a, &y).unwrap();
    adaptive.update_adaptive(&a, &y).unwrap();
    for (s, ad) in trained
        .weights()
        .as_slice()
        .iter()
        .zip(adaptive.weights().as_slice())
    {
        assert_eq!(s, ad);
    }
    for (s, ad) in trained.theta().as_slice().iter().zip(adaptive.theta().as_slice()) {
        assert_eq!(s, ad);
    }
}

#[test]
fn adaptive_tracks_a_drifting_stream() {
    // Target map switches at sample 500; the adaptive learner must be
    // strictly more accurate than the static one after the switch.
    let m = 20;
    let mut rng = Prng::new(12);
    let map_a = uniform_vec(&mut rng, m, -1.0, 1.0);
    let map_b = uniform_vec(&mut rng, m, -1.0, 1.0);

    let mut stat = OlpState::init(m, 1, Mode::Static).unwrap();
    let mut adap = OlpState::init(m, 1, Mode::Adaptive).unwrap();
    let mut err_static = 0.0;
    let mut err_adaptive = 0.0;
    let mut counted = 0usize;
    for k in 0..1000 {
        let a = uniform_vec(&mut rng, m, 0.0, 1.0);
        let map = if k < 500 { &map_a } else { &map_b };
        let y = [a.iter().zip(map).map(|(x, w)| x * w).sum::<f64>()];
        if (600..1000).contains(&k) {
            err_static += (stat.predict(&a).unwrap()[0] - y[0]).abs();
            err_adaptive += (adap.predict(&a).unwrap()[0] - y[0]).abs();
            counted += 1;
        }
        stat.update_static(&a, &y).unwrap();
        adap.update_adaptive(&a, &y).unwrap();
    }
    assert_eq!(counted, 400);
    assert!(
        err_adaptive < err_static,
        "post-switch error: adaptive {err_adaptive} vs static {err_static}"
    );
}

// --- predict ----------------------------------------------------------------------

#[test]
fn predict_fresh_state_is_zero() {
    let state = OlpState::init(5, 3, Mode::Static).unwrap();
    assert_eq!(state.predict(&[1.0; 5]).unwrap(), vec![0.0; 3]);
}

#[test]
fn predict_identity_weights_pass_through() {
    // Build a state with W = I via the serialized form: header {m=3, n=3,
    // mode=0, k=0}, then W row-major, then θ row-major.
    let mut bytes = Vec::new();
    for h in [3u64, 3, 0, 0] {
        bytes.extend_from_slice(&h.to_le_bytes());
    }
    for v in Mat::identity(3).as_slice() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    for v in Mat::scaled_identity(3, 1.0 / 3.0).as_slice() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    let state = OlpState::read_from(bytes.as_slice()).unwrap();
    let a = [0.25, -3.0, 7.5];
    assert_eq!(state.predict(&a).unwrap(), a.to_vec());
}

// --- invariants --------------------------------------------------------------------

#[test]
fn theta_symmetry_drift_stays_small() {
    let m = 8;
    let mut state = OlpState::init(m, 1, Mode::Static).unwrap();
    let mut rng = Prng::new(17);
    for _ in 0..10_000 {
        let a = uniform_vec(&mut rng, m, 0.0, 1.0);
        let y = uniform_vec(&mut rng, 1, -1.0, 1.0);
        state.update_static(&a, &y).unwrap();
    }
    let theta = state.theta();
    let mut drift: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            drift = drift.max((theta.get(i, j) - theta.get(j, i)).abs());
        }
    }
    let scale = theta.max_abs();
    assert!(
        drift < 1e-8 * scale,
        "symmetry drift {drift:.3e} vs bound {:.3e}",
        1e-8 * scale
    );
}

#[test]
fn theta_trace_non_increasing_in_static_mode() {
    let m = 16;
    let mut state = OlpState::init(m, 2, Mode::Static).unwrap();
    let mut rng = Prng::new(21);
    let mut prev = state.theta_trace();
    for _ in 0..200 {
        let a = uniform_vec(&mut rng, m, 0.0, 1.0);
        let y = uniform_vec(&mut rng, 2, -1.0, 1.0);
        state.update_static(&a, &y).unwrap();
        let trace = state.theta_trace();
        assert!(
            trace <= prev + 1e-12 * prev.abs().max(1.0),
            "trace rose from {prev} to {trace}"
        );
        prev = trace;
    }
}

#[test]
fn weights_approach_least_squares_with_more_data() {
    // The recursion is ridge regression with a fixed regularizer, so its
    // bias relative to the unregularized least-squares fit must shrink as
    // samples accumulate.
    let (m, k_total) = (10, 5000);
    let mut rng = Prng::new(30);
    let w_true = uniform_vec(&mut rng, m, -1.0, 1.0);
    let mut a_rows = Mat::zeros(k_total, m);
    let mut y_rows = Mat::zeros(k_total, 1);
    for r in 0..k_total {
        let a = uniform_vec(&mut rng, m, -1.0, 1.0);
        let noise = rng.next_uniform(-0.01, 0.01).unwrap();
        let y = w_true.iter().zip(&a).map(|(w, x)| w * x).sum::<f64>() + noise;
        a_rows.row_mut(r).copy_from_slice(&a);
        y_rows.set(r, 0, y);
    }
    let w_ls = batch_solve(&a_rows, &y_rows, 0.0).unwrap();

    let mut state = OlpState::init(m, 1, Mode::Static).unwrap();
    let mut gap_200 = f64::NAN;
    for r in 0..k_total {
        state.update_static(a_rows.row(r), y_rows.row(r)).unwrap();
        if state.k() == 200 {
            gap_200 = max_abs_diff(state.weights(), &w_ls);
        }
    }
    let gap_5000 = max_abs_diff(state.weights(), &w_ls);
    assert!(
        gap_5000 < gap_200,
        "gap did not shrink: {gap_200:.3e} at k=200 vs {gap_5000:.3e} at k=5000"
    );
}

#[test]
fn state_footprint_is_constant() {
    let (m, n) = (12, 3);
    let mut state = OlpState::init(m, n, Mode::Static).unwrap();
    let reals = |s: &OlpState| s.weights().as_slice().len() + s.theta().as_slice().len();
    assert_eq!(reals(&state), n * m + m * m);
    let mut rng = Prng::new(2);
    for _ in 0..500 {
        let a = uniform_vec(&mut rng, m, 0.0, 1.0);
        let y = uniform_vec(&mut rng, n, -1.0, 1.0);
        state.update_static(&a, &y).unwrap();
    }
    assert_eq!(reals(&state), n * m + m * m, "footprint changed with k");
}

#[test]
fn overflowing_update_reports_numeric_error() {
    let mut state = OlpState::init(1, 1, Mode::Static).unwrap();
    // One huge target drives |w| past the overflow limit in a single step:
    // w₁ = y/(1/θ₀ + a²) = 5·10¹².
    let err = state.update_static(&[1.0], &[1e13]).unwrap_err();
    match err {
        Error::Numeric(msg) => assert!(msg.contains("discarded"), "message: {msg}"),
        other => panic!("expected numeric overflow, got {other:?}"),
    }
    let _ = OVERFLOW_LIMIT;
}

// --- serialization -------------------------------------------------------------------

#[test]
fn checkpoint_round_trip_is_bit_exact() {
    let mut state = OlpState::init(6, 2, Mode::Adaptive).unwrap();
    let mut rng = Prng::new(14);
    for _ in 0..40 {
        let a = uniform_vec(&mut rng, 6, 0.0, 1.0);
        let y = uniform_vec(&mut rng, 2, -1.0, 1.0);
        state.update_adaptive(&a, &y).unwrap();
    }
    let mut bytes = Vec::new();
    state.write_to(&mut bytes).unwrap();
    assert_eq!(bytes.len(), 8 * (4 + 2 * 6 + 6 * 6));
    let back = OlpState::read_from(bytes.as_slice()).unwrap();
    assert_eq!((back.m(), back.n(), back.k(), back.mode()), (6, 2, 40, Mode::Adaptive));
    for (a, b) in state.weights().as_slice().iter().zip(back.weights().as_slice()) {
        assert_eq!(a.to_bits(), b.to_bits());
    }
    for (a, b) in state.theta().as_slice().iter().zip(back.theta().as_slice()) {
        assert_eq!(a.to_bits(), b.to_bits());
    }
}

#[test]
fn checkpoint_read_rejects_garbage() {
    let mut state = OlpState::init(2, 1, Mode::Static).unwrap();
    state.update_static(&[1.0, 0.0], &[1.0]).unwrap();
    let mut bytes = Vec::new();
    state.write_to(&mut bytes).unwrap();

    // Truncation anywhere is an I/O error.
    let truncated = &bytes[..bytes.len() - 3];
    assert!(matches!(OlpState::read_from(truncated).unwrap_err(), Error::Io(_)));
    let short_header = &bytes[..12];
    assert!(matches!(OlpState::read_from(short_header).unwrap_err(), Error::Io(_)));

    // Unknown mode tag.
    let mut bad_mode = bytes.clone();
    bad_mode[16] = 9;
    assert!(matches!(OlpState::read_from(bad_mode.as_slice()).unwrap_err(), Error::Data(_)));

    // Zero dimension in the header.
    let mut bad_dim = bytes.clone();
    bad_dim[..8].copy_from_slice(&0u64.to_le_bytes());
    assert!(matches!(OlpState::read_from(bad_dim.as_slice()).unwrap_err(), Error::Data(_)));

    // Non-finite payload value.
    let mut bad_payload = bytes.clone();
    bad_payload[32..40].copy_from_slice(&f64::NAN.to_le_bytes());
    assert!(matches!(
        OlpState::read_from(bad_payload.as_slice()).unwrap_err(),
        Error::Data(_)
    ));
}

// --- properties ------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn static_recursion_matches_ridge_oracle(
        m in 1usize..6,
        n in 1usize..3,
        k in 1usize..30,
        seed in any::<u64>(),
    ) {
        let mut rng = Prng::new(seed);
        let mut a_rows = Mat::zeros(k, m);
        let mut y_rows = Mat::zeros(k, n);
        rng.fill_uniform(a_rows.as_mut_slice(), -1.0, 1.0).unwrap();
        rng.fill_uniform(y_rows.as_mut_slice(), -1.0, 1.0).unwrap();
        let mut state = OlpState::init(m, n, Mode::Static).unwrap();
        for r in 0..k {
            state.update_static(a_rows.row(r), y_rows.row(r)).unwrap();
        }
        let (w_oracle, theta_oracle) = ridge_oracle(&a_rows, &y_rows);
        prop_assert!(max_abs_diff(state.weights(), &w_oracle) < 1e-7);
        prop_assert!(max_abs_diff(state.theta(), &theta_oracle) < 1e-7);
    }

    #[test]
    fn updates_count_every_sample(k in 0usize..50, seed in any::<u64>()) {
        let mut rng = Prng::new(seed);
        let mut state = OlpState::init(3, 1, Mode::Static).unwrap();
        for _ in 0..k {
            let a = uniform_vec(&mut rng, 3, 0.0, 1.0);
            let y = uniform_vec(&mut rng, 1, -1.0, 1.0);
            state.update_static(&a, &y).unwrap();
        }
        prop_assert_eq!(state.k(), k as u64);
    }
}
