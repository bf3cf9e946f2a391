//! Statistical consistency of the Monte Carlo estimator against the
//! analytic curves.

mod common;

use g2kit_core::analytic::g2_erlang_cascade;
use g2kit_core::stream::{estimate_g2, simulate_stream};
use g2kit_core::StageRates;

/// Max deviation from the roots-of-unity curve, in pooled standard
/// errors, over the estimated grid.
fn max_sigma_deviation(n: usize, events: f64, seed: u64) -> f64 {
    let gamma = 1.0;
    let rates = StageRates::erlang(n, gamma).unwrap();
    let r = rates.mean_rate();
    let duration = events / r;
    let stream = simulate_stream(&rates, duration, seed).unwrap();
    let bin = 0.05 / r;
    let curve = estimate_g2(&stream, bin, 30.0 / r).unwrap();
    let errs = curve.errors().unwrap();
    let mut worst: f64 = 0.0;
    for (k, &tau) in curve.tau().iter().enumerate() {
        let expect = g2_erlang_cascade(n, gamma, tau).unwrap();
        // pool the Poisson error with a floor so empty plateau bins
        // (expected count ≪ 1) do not divide by zero
        let norm_per_count = if curve.values()[k] > 0.0 {
            errs[k] * errs[k] / curve.values()[k]
        } else {
            estimate_norm_per_count(&curve, k)
        };
        let sigma = (expect.max(curve.values()[k]) * norm_per_count).sqrt().max(norm_per_count);
        worst = worst.max((curve.values()[k] - expect).abs() / sigma);
    }
    worst
}

/// Normalized weight of a single pair count in bin k.
fn estimate_norm_per_count(curve: &g2kit_core::stream::CorrelationCurve, k: usize) -> f64 {
    let raw = curve.raw.as_ref().unwrap();
    let rate = raw.event_count as f64 / raw.total_duration;
    let window = raw.total_duration - raw.segments as f64 * curve.tau()[k];
    1.0 / (rate * rate * window * raw.bin_width)
}

#[test]
fn estimator_tracks_analytic_curves() {
    for (n, seed) in [(1usize, 21u64), (2, 22), (3, 23), (6, 24), (26, 25)] {
        let worst = max_sigma_deviation(n, 2e5, seed);
        assert!(worst < 5.0, "N={n}: worst deviation {worst}σ");
    }
}

#[test]
fn first_bin_scales_with_plateau_power() {
    // halving Δτ divides the first-bin estimate by ≈ 2^(N−1)
    let gamma = 1.0;
    for n in [2usize, 3] {
        let rates = StageRates::erlang(n, gamma).unwrap();
        let r = rates.mean_rate();
        let stream = simulate_stream(&rates, 2e6 / r, 31).unwrap();
        let coarse = estimate_g2(&stream, 0.2, 5.0).unwrap().values()[0];
        let fine = estimate_g2(&stream, 0.1, 5.0).unwrap().values()[0];
        let ratio = coarse / fine;
        let expect = 2f64.powi(n as i32 - 1);
        assert!(
            ratio > expect / 2.0 && ratio < expect * 2.0,
            "N={n}: ratio {ratio} vs 2^(N−1) = {expect}"
        );
    }
}

#[test]
fn time_rescaling_invariance() {
    // rates cγ with bins Δτ/c give the same histogram; the exponential
    // inverse transform makes this exact for a shared seed
    let c = 3.0;
    let base = StageRates::erlang(3, 1.0).unwrap();
    let scaled = StageRates::erlang(3, c).unwrap();
    let sa = simulate_stream(&base, 1e4, 77).unwrap();
    let sb = simulate_stream(&scaled, 1e4 / c, 77).unwrap();
    let ca = estimate_g2(&sa, 0.05, 10.0).unwrap();
    let cb = estimate_g2(&sb, 0.05 / c, 10.0 / c).unwrap();
    assert_eq!(
        ca.raw.as_ref().unwrap().pair_counts,
        cb.raw.as_ref().unwrap().pair_counts
    );
    for k in 0..ca.values().len() {
        assert!((ca.values()[k] - cb.values()[k]).abs() < 1e-9 * (1.0 + ca.values()[k]));
    }
}
