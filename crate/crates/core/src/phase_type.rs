//! Phase-type waiting times for a sequential chain of exponential stages
//! (one excitation plus a cascade of decays): Erlang when all rates are
//! equal, hypoexponential otherwise.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::mixture::{ExponentialMixture, MixtureTerm};
use crate::rng::Stream;
use crate::Complex;

/// Rates whose relative difference is below this are treated as exactly
/// equal and handled with confluent (higher-order pole) partial fractions.
/// Keeps the Erlang limit seamless instead of blowing up 1/(γⱼ−γᵢ).
pub const RATE_CLUSTER_TOL: f64 = 1e-9;

/// Ordered positive stage rates; index 0 is the excitation rate, the rest
/// are cascade/decay rates. The waiting time is the sum of one independent
/// exponential per stage.
#[derive(Debug, Clone, PartialEq)]
pub struct StageRates {
    rates: Vec<f64>,
}

impl StageRates {
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        if rates.is_empty() {
            return Err(Error::Domain("at least one stage rate is required"));
        }
        if rates.iter().any(|&r| !(r > 0.0) || !r.is_finite()) {
            return Err(Error::Domain("stage rates must be positive and finite"));
        }
        Ok(Self { rates })
    }

    /// All stages at the same rate: the Erlang cascade with `n` steps.
    pub fn erlang(n: usize, rate: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("at least one stage is required"));
        }
        Self::new(alloc::vec![rate; n])
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn n_stages(&self) -> usize {
        self.rates.len()
    }

    /// Mean waiting time Σᵢ 1/γᵢ.
    pub fn mean_interval(&self) -> f64 {
        self.rates.iter().map(|r| 1.0 / r).sum()
    }

    /// Stationary event rate r = 1/Σᵢ(1/γᵢ); γ/N for N equal stages.
    pub fn mean_rate(&self) -> f64 {
        1.0 / self.mean_interval()
    }

    /// Distinct rates with multiplicities, clustered at relative
    /// tolerance [`RATE_CLUSTER_TOL`]. Cluster value is the mean of its
    /// members.
    pub fn clusters(&self) -> Vec<(f64, usize)> {
        let mut sorted = self.rates.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut out: Vec<(f64, usize)> = Vec::new();
        for &r in &sorted {
            match out.last_mut() {
                Some((v, m)) if (r - *v).abs() <= RATE_CLUSTER_TOL * r => {
                    // running mean keeps the cluster centered
                    *v += (r - *v) / (*m as f64 + 1.0);
                    *m += 1;
                }
                _ => out.push((r, 1)),
            }
        }
        out
    }

    /// Waiting-time density as an exponential mixture (baseline 0), from
    /// partial fractions of the Laplace transform. Repeated-rate clusters
    /// contribute τ^k e^(−γτ) terms through the confluent expansion.
    pub fn density_mixture(&self) -> ExponentialMixture {
        let clusters = self.clusters();
        let scale: f64 = self.rates.iter().product();
        let mut terms = Vec::new();
        for (j, &(lambda_j, m_j)) in clusters.iter().enumerate() {
            // Taylor coefficients around s = -λⱼ of
            //   scale · Π_{l≠j} (d_l + u)^(−m_l),  d_l = λ_l − λⱼ,
            // truncated to order m_j − 1.
            let mut series = alloc::vec![0.0; m_j];
            series[0] = scale;
            for (l, &(lambda_l, m_l)) in clusters.iter().enumerate() {
                if l == j {
                    continue;
                }
                let d = lambda_l - lambda_j;
                // binomial series of (d+u)^(−m): coeff of u^n is
                // (−1)^n C(m+n−1, n) d^(−m−n)
                let mut factor = alloc::vec![0.0; m_j];
                let mut c = libm::pow(d, -(m_l as f64));
                factor[0] = c;
                for n in 1..m_j {
                    c *= -((m_l + n - 1) as f64) / (n as f64) / d;
                    factor[n] = c;
                }
                series = convolve_truncated(&series, &factor, m_j);
            }
            // coefficient a_n multiplies τ^(m_j−1−n) e^(−λⱼτ)/(m_j−1−n)!
            for (n, &a) in series.iter().enumerate() {
                let power = (m_j - 1 - n) as u32;
                terms.push(MixtureTerm {
                    amplitude: Complex::new(a / factorial(power), 0.0),
                    decay: Complex::new(lambda_j, 0.0),
                    power,
                });
            }
        }
        ExponentialMixture::new(0.0, terms)
    }

    /// Waiting-time density w(τ). Equal rates give the Erlang density
    /// γᴺτᴺ⁻¹e^(−γτ)/(N−1)!; distinct rates the hypoexponential one.
    pub fn pdf(&self, tau: f64) -> Result<f64> {
        if tau < 0.0 {
            return Err(Error::Domain("pdf requires τ ≥ 0"));
        }
        Ok(self.density_mixture().eval(tau))
    }

    /// Laplace transform w̃(s) = Πᵢ γᵢ/(s + γᵢ); w̃(0) = 1.
    pub fn laplace(&self, s: Complex) -> Result<Complex> {
        let mut w = Complex::new(1.0, 0.0);
        for &r in &self.rates {
            let denom = s + r;
            if denom.norm() <= 1e-14 * r {
                return Err(Error::Pole);
            }
            w *= r / denom;
        }
        Ok(w)
    }

    /// `count` independent waiting-time draws, each the sum of one
    /// exponential per stage. Deterministic for a fixed seed.
    pub fn sample_intervals(&self, count: usize, seed: u64) -> Vec<f64> {
        let mut rng = Stream::from_seed(seed);
        (0..count).map(|_| self.draw_interval(&mut rng)).collect()
    }

    /// One waiting-time draw from an existing stream.
    pub fn draw_interval(&self, rng: &mut Stream) -> f64 {
        self.rates.iter().map(|&r| rng.exponential(r)).sum()
    }
}

fn convolve_truncated(a: &[f64], b: &[f64], len: usize) -> Vec<f64> {
    let mut out = alloc::vec![0.0; len];
    for (i, &ai) in a.iter().enumerate() {
        for (k, &bk) in b.iter().take(len - i).enumerate() {
            out[i + k] += ai * bk;
        }
    }
    out
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}
