//! Common representation of every analytic g²(τ) route: a baseline plus a
//! sum of (possibly confluent) complex exponentials,
//! g²(τ) = baseline + Σₖ aₖ τ^{pₖ} e^{−λₖ τ}.

use alloc::vec::Vec;

use crate::Complex;

/// One term aₖ τ^{pₖ} e^{−λₖ τ}. `power > 0` arises from higher-order
/// poles (repeated rates, threshold driving).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureTerm {
    pub amplitude: Complex,
    /// Decay λ; correlations relax to the baseline, so Re(λ) ≥ 0.
    pub decay: Complex,
    pub power: u32,
}

impl MixtureTerm {
    pub fn eval(&self, tau: f64) -> Complex {
        let mut v = self.amplitude * (-self.decay * tau).exp();
        for _ in 0..self.power {
            v *= tau;
        }
        v
    }
}

/// g²(τ) as a baseline plus exponential terms. Non-real terms occur in
/// conjugate pairs so the evaluated function is real.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentialMixture {
    pub baseline: f64,
    pub terms: Vec<MixtureTerm>,
}

impl ExponentialMixture {
    pub fn new(baseline: f64, terms: Vec<MixtureTerm>) -> Self {
        Self { baseline, terms }
    }

    /// Constant mixture (ideal gas: g² ≡ baseline).
    pub fn constant(baseline: f64) -> Self {
        Self {
            baseline,
            terms: Vec::new(),
        }
    }

    pub fn eval_complex(&self, tau: f64) -> Complex {
        let mut sum = Complex::new(self.baseline, 0.0);
        for t in &self.terms {
            sum += t.eval(tau);
        }
        sum
    }

    /// Real value of the mixture at delay τ. The imaginary residue of the
    /// conjugate-pair sum is discarded; it stays below 1e-12 for every
    /// mixture this crate constructs (asserted in tests).
    pub fn eval(&self, tau: f64) -> f64 {
        self.eval_complex(tau).re
    }

    /// Largest |Im| of the evaluated sum over a grid; realness diagnostic.
    pub fn max_imag_on(&self, taus: &[f64]) -> f64 {
        taus.iter()
            .map(|&t| libm::fabs(self.eval_complex(t).im))
            .fold(0.0, f64::max)
    }

    /// Evaluate on a grid of delays.
    pub fn eval_on(&self, taus: &[f64]) -> Vec<f64> {
        taus.iter().map(|&t| self.eval(t)).collect()
    }
}
