//! Monte Carlo photon streams and histogram estimation of g²(τ).
//!
//! A stream is the cumulative sum of independent phase-type waiting-time
//! draws; the estimator counts forward-ordered photon pairs per delay bin
//! with a two-pointer window over the sorted timestamps.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::phase_type::StageRates;
use crate::rng::{Stream, GENERATOR_ID};

/// Simulation provenance carried alongside the timestamps.
#[derive(Debug, Clone, PartialEq)]
pub struct StreamMeta {
    pub seed: u64,
    pub rates: Vec<f64>,
    pub generator: String,
}

/// Strictly increasing emission timestamps within an observation window.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonStream {
    timestamps: Vec<f64>,
    duration: f64,
    pub meta: Option<StreamMeta>,
}

impl PhotonStream {
    /// Wrap existing timestamps, checking strict monotonicity and the
    /// window bound. The error names the first offending index.
    pub fn from_timestamps(timestamps: Vec<f64>, duration: f64) -> Result<Self> {
        if !(duration > 0.0) {
            return Err(Error::Domain("duration must be positive"));
        }
        for (i, w) in timestamps.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(Error::Unsorted { index: i + 1 });
            }
        }
        if let Some(&first) = timestamps.first() {
            if first < 0.0 {
                return Err(Error::Domain("timestamps must be non-negative"));
            }
        }
        if let Some(&last) = timestamps.last() {
            if last > duration {
                return Err(Error::Domain("timestamp beyond observation window"));
            }
        }
        Ok(Self {
            timestamps,
            duration,
            meta: None,
        })
    }

    pub fn timestamps(&self) -> &[f64] {
        &self.timestamps
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }
}

/// Simulate a photon stream: cumulative phase-type intervals truncated at
/// `duration`. Deterministic per seed; expected count ≈ duration × r.
pub fn simulate_stream(rates: &StageRates, duration: f64, seed: u64) -> Result<PhotonStream> {
    if !(duration > 0.0) {
        return Err(Error::Domain("duration must be positive"));
    }
    let mut rng = Stream::from_seed(seed);
    let mut timestamps = Vec::with_capacity((duration * rates.mean_rate()) as usize + 16);
    let mut t = 0.0;
    loop {
        t += rates.draw_interval(&mut rng);
        if t > duration {
            break;
        }
        timestamps.push(t);
    }
    Ok(PhotonStream {
        timestamps,
        duration,
        meta: Some(StreamMeta {
            seed,
            rates: rates.rates().to_vec(),
            generator: String::from(GENERATOR_ID),
        }),
    })
}

/// Gaussian detector jitter: adds zero-mean noise of width `sigma` to
/// every timestamp, clamps into the window and re-sorts. `sigma = 0`
/// returns the stream unchanged.
pub fn apply_jitter(stream: &PhotonStream, sigma: f64, seed: u64) -> Result<PhotonStream> {
    if sigma < 0.0 {
        return Err(Error::Domain("jitter width must be non-negative"));
    }
    if sigma == 0.0 {
        return Ok(stream.clone());
    }
    let mut rng = Stream::from_seed(seed);
    let mut ts: Vec<f64> = stream
        .timestamps
        .iter()
        .map(|&t| (t + sigma * rng.normal()).clamp(0.0, stream.duration))
        .collect();
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // clamping can produce exact duplicates at the window edges; nudging
    // by one ulp keeps strict monotonicity without moving any histogram bin
    for i in 1..ts.len() {
        if ts[i] <= ts[i - 1] {
            ts[i] = next_up(ts[i - 1]);
        }
    }
    Ok(PhotonStream {
        timestamps: ts,
        duration: stream.duration,
        meta: stream.meta.clone(),
    })
}

fn next_up(x: f64) -> f64 {
    f64::from_bits(x.to_bits() + 1)
}

/// Raw pooled counts behind an estimated curve; required for merging.
#[derive(Debug, Clone, PartialEq)]
pub struct RawCounts {
    pub pair_counts: Vec<u64>,
    pub event_count: u64,
    pub total_duration: f64,
    pub segments: u64,
    pub bin_width: f64,
}

/// g²(τ) sampled on a uniform delay grid, with optional per-bin standard
/// errors and, for estimated curves, the raw counts.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationCurve {
    tau: Vec<f64>,
    values: Vec<f64>,
    errors: Option<Vec<f64>>,
    pub raw: Option<RawCounts>,
}

impl CorrelationCurve {
    /// Analytic curve: values on a grid, no errors, no counts.
    pub fn from_values(tau: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if tau.len() != values.len() {
            return Err(Error::Shape("grid and value lengths differ"));
        }
        Ok(Self {
            tau,
            values,
            errors: None,
            raw: None,
        })
    }

    pub fn tau(&self) -> &[f64] {
        &self.tau
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn errors(&self) -> Option<&[f64]> {
        self.errors.as_deref()
    }
}

/// Histogram estimate of g²(τ) from a photon stream.
///
/// Bin k counts forward-ordered pairs with delay in [kΔτ, (k+1)Δτ) and is
/// normalized by r̂²·(T − τ_k)·Δτ with r̂ = count/T and τ_k the bin
/// center; the (T − τ_k) factor is the edge correction, so no tail margin
/// is discarded. Cost is O(events × pairs-per-window).
pub fn estimate_g2(stream: &PhotonStream, bin_width: f64, tau_max: f64) -> Result<CorrelationCurve> {
    if stream.is_empty() {
        return Err(Error::Estimation("cannot estimate from an empty stream"));
    }
    if !(bin_width > 0.0) || !(tau_max > bin_width) {
        return Err(Error::Domain("require 0 < Δτ < τ_max"));
    }
    if tau_max >= stream.duration {
        return Err(Error::Domain("τ_max must be smaller than the window"));
    }
    let counts = pair_histogram(stream.timestamps(), bin_width, tau_max);
    let raw = RawCounts {
        pair_counts: counts,
        event_count: stream.len() as u64,
        total_duration: stream.duration,
        segments: 1,
        bin_width,
    };
    normalize(raw)
}

/// Delay histogram of forward-ordered pairs; two-pointer window.
pub fn pair_histogram(timestamps: &[f64], bin_width: f64, tau_max: f64) -> Vec<u64> {
    let n_bins = libm::ceil(tau_max / bin_width) as usize;
    let mut counts = alloc::vec![0u64; n_bins];
    for (i, &ti) in timestamps.iter().enumerate() {
        for &tj in &timestamps[i + 1..] {
            let delay = tj - ti;
            if delay >= tau_max {
                break;
            }
            let k = ((delay / bin_width) as usize).min(n_bins - 1);
            counts[k] += 1;
        }
    }
    counts
}

fn normalize(raw: RawCounts) -> Result<CorrelationCurve> {
    let n_bins = raw.pair_counts.len();
    let rate = raw.event_count as f64 / raw.total_duration;
    let mut tau = Vec::with_capacity(n_bins);
    let mut values = Vec::with_capacity(n_bins);
    let mut errors = Vec::with_capacity(n_bins);
    for (k, &c) in raw.pair_counts.iter().enumerate() {
        let tau_k = (k as f64 + 0.5) * raw.bin_width;
        // pooled edge correction: Σ_s (T_s − τ_k) over the segments
        let window = raw.total_duration - raw.segments as f64 * tau_k;
        let norm = rate * rate * window * raw.bin_width;
        tau.push(tau_k);
        values.push(c as f64 / norm);
        errors.push(libm::sqrt(c as f64) / norm);
    }
    Ok(CorrelationCurve {
        tau,
        values,
        errors: Some(errors),
        raw: Some(raw),
    })
}

/// Pool estimated curves: sums raw pair counts, event counts and windows,
/// then renormalizes. Equivalent to estimating on the combined ensemble.
pub fn merge_histograms(curves: &[CorrelationCurve]) -> Result<CorrelationCurve> {
    let first = curves
        .first()
        .ok_or(Error::Shape("cannot merge an empty set of curves"))?;
    let first_raw = first
        .raw
        .as_ref()
        .ok_or(Error::Shape("merge requires raw-count metadata"))?;
    let mut pooled = RawCounts {
        pair_counts: alloc::vec![0u64; first_raw.pair_counts.len()],
        event_count: 0,
        total_duration: 0.0,
        segments: 0,
        bin_width: first_raw.bin_width,
    };
    for curve in curves {
        let raw = curve
            .raw
            .as_ref()
            .ok_or(Error::Shape("merge requires raw-count metadata"))?;
        if raw.pair_counts.len() != pooled.pair_counts.len()
            || (raw.bin_width - pooled.bin_width).abs() > 1e-12 * pooled.bin_width
        {
            return Err(Error::Shape("curves have mismatched grids"));
        }
        for (acc, &c) in pooled.pair_counts.iter_mut().zip(&raw.pair_counts) {
            *acc += c;
        }
        pooled.event_count += raw.event_count;
        pooled.total_duration += raw.total_duration;
        pooled.segments += raw.segments;
    }
    normalize(pooled)
}
