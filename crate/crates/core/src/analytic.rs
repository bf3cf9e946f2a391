//! Closed-form second-order coherence functions: incoherently pumped and
//! coherently driven two-level systems, and the equal-rate cascade as a
//! roots-of-unity exponential mixture.

use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{cos, cosh, exp, lgamma, log, pow, sin, sinh, sqrt};

use crate::error::{Error, Result};
use crate::mixture::{ExponentialMixture, MixtureTerm};
use crate::Complex;

/// Relative width |8Ω − γ|/γ below which the drive is treated as exactly
/// at the Mollow threshold, avoiding the 0/0 in sinh(γ_M τ/4)/γ_M.
pub const MOLLOW_THRESHOLD_TOL: f64 = 1e-6;

/// g²(τ) = 1 − e^(−(P+γ)τ) for an incoherently pumped two-level system.
pub fn g2_incoherent_2ls(pump: f64, gamma: f64, tau: f64) -> Result<f64> {
    if tau < 0.0 {
        return Err(Error::Domain("τ must be non-negative"));
    }
    if !(pump > 0.0) || !(gamma > 0.0) {
        return Err(Error::Domain("rates must be positive"));
    }
    Ok(1.0 - exp(-(pump + gamma) * tau))
}

/// g²(τ) = (1 − e^(−γτ))² for weak coherent (Heitler) driving.
pub fn g2_heitler(gamma: f64, tau: f64) -> Result<f64> {
    if tau < 0.0 {
        return Err(Error::Domain("τ must be non-negative"));
    }
    if !(gamma > 0.0) {
        return Err(Error::Domain("decay rate must be positive"));
    }
    let x = 1.0 - exp(-gamma * tau);
    Ok(x * x)
}

/// Drive regime of the coherently driven two-level system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MollowRegime {
    /// 8Ω < γ: hyperbolic (monotone) relaxation.
    Hyperbolic,
    /// 8Ω = γ: critically damped.
    Threshold,
    /// 8Ω > γ: all-times Rabi oscillations.
    Oscillatory,
}

/// Decay rate and drive amplitude of a resonantly driven two-level system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MollowParams {
    pub gamma: f64,
    pub omega: f64,
}

impl MollowParams {
    pub fn new(gamma: f64, omega: f64) -> Result<Self> {
        if !(gamma > 0.0) || omega < 0.0 {
            return Err(Error::Domain("require γ > 0 and Ω ≥ 0"));
        }
        Ok(Self { gamma, omega })
    }

    pub fn regime(&self) -> MollowRegime {
        let d = 8.0 * self.omega - self.gamma;
        if d.abs() < MOLLOW_THRESHOLD_TOL * self.gamma {
            MollowRegime::Threshold
        } else if d < 0.0 {
            MollowRegime::Hyperbolic
        } else {
            MollowRegime::Oscillatory
        }
    }

    /// Rabi splitting Ω_M = √((8Ω)² − γ²); real in the oscillatory regime.
    pub fn rabi_splitting(&self) -> f64 {
        sqrt(64.0 * self.omega * self.omega - self.gamma * self.gamma)
    }

    /// Delay of the first oscillatory maximum, τ_M = 4π/Ω_M.
    pub fn first_max_delay(&self) -> Option<f64> {
        match self.regime() {
            MollowRegime::Oscillatory => Some(4.0 * PI / self.rabi_splitting()),
            _ => None,
        }
    }

    /// Value of the first maximum, 1 + e^(−3πγ/Ω_M).
    pub fn first_max_value(&self) -> Option<f64> {
        match self.regime() {
            MollowRegime::Oscillatory => {
                Some(1.0 + exp(-3.0 * PI * self.gamma / self.rabi_splitting()))
            }
            _ => None,
        }
    }
}

/// g²(τ) of the resonantly driven two-level system at high driving.
///
/// Below threshold (8Ω < γ) the hyperbolic form with
/// γ_M = √(γ² − (8Ω)²); above threshold the analytic continuation with
/// cos/sin of Ω_M τ/4; exactly at threshold the critically damped
/// 1 − e^(−3γτ/4)(1 + 3γτ/4). The three branches join continuously.
pub fn g2_mollow(params: MollowParams, tau: f64) -> Result<f64> {
    if tau < 0.0 {
        return Err(Error::Domain("τ must be non-negative"));
    }
    let g = params.gamma;
    let envelope = exp(-0.75 * g * tau);
    Ok(match params.regime() {
        // critically damped limit of both branches: (3γ/γ_M)sinh(γ_Mτ/4)
        // → 3γτ/4 as γ_M → 0
        MollowRegime::Threshold => 1.0 - envelope * (1.0 + 0.75 * g * tau),
        MollowRegime::Hyperbolic => {
            let gm = sqrt(g * g - 64.0 * params.omega * params.omega);
            let x = 0.25 * gm * tau;
            1.0 - envelope * (cosh(x) + 3.0 * g / gm * sinh(x))
        }
        MollowRegime::Oscillatory => {
            let om = params.rabi_splitting();
            let x = 0.25 * om * tau;
            1.0 - envelope * (cos(x) + 3.0 * g / om * sin(x))
        }
    })
}

/// Mixture form of [`g2_mollow`]: two exponentials with decays
/// (3γ ∓ γ_M)/4 (complex-conjugate in the oscillatory regime), or a
/// confluent pair at threshold.
pub fn mollow_mixture(params: MollowParams) -> ExponentialMixture {
    let g = params.gamma;
    match params.regime() {
        MollowRegime::Threshold => ExponentialMixture::new(
            1.0,
            alloc::vec![
                MixtureTerm {
                    amplitude: Complex::new(-1.0, 0.0),
                    decay: Complex::new(0.75 * g, 0.0),
                    power: 0,
                },
                MixtureTerm {
                    amplitude: Complex::new(-0.75 * g, 0.0),
                    decay: Complex::new(0.75 * g, 0.0),
                    power: 1,
                },
            ],
        ),
        _ => {
            // γ_M is real below threshold, imaginary above; the complex
            // square root covers both.
            let gm = Complex::new(g * g - 64.0 * params.omega * params.omega, 0.0).sqrt();
            let half = Complex::new(0.5, 0.0);
            let coef = 3.0 * g / gm;
            ExponentialMixture::new(
                1.0,
                alloc::vec![
                    MixtureTerm {
                        amplitude: -half * (1.0 + coef),
                        decay: (Complex::new(3.0 * g, 0.0) - gm) / 4.0,
                        power: 0,
                    },
                    MixtureTerm {
                        amplitude: -half * (1.0 - coef),
                        decay: (Complex::new(3.0 * g, 0.0) + gm) / 4.0,
                        power: 0,
                    },
                ],
            )
        }
    }
}

/// Roots-of-unity mixture for the equal-rate cascade with `n` stages:
/// g²(τ) = 1 + Σ_{p=1}^{n−1} z^p exp(−γ(1 − z^p)τ), z = e^(i2π/n).
/// Each root is taken from the exact angle 2πp/n.
pub fn erlang_mixture(n: usize, gamma: f64) -> Result<ExponentialMixture> {
    if n == 0 {
        return Err(Error::Domain("cascade needs at least one stage"));
    }
    if !(gamma > 0.0) {
        return Err(Error::Domain("rate must be positive"));
    }
    let terms = (1..n)
        .map(|p| {
            let angle = 2.0 * PI * p as f64 / n as f64;
            let z = Complex::new(cos(angle), sin(angle));
            MixtureTerm {
                amplitude: z,
                decay: gamma * (Complex::new(1.0, 0.0) - z),
                power: 0,
            }
        })
        .collect();
    Ok(ExponentialMixture::new(1.0, terms))
}

/// g²(τ) of the equal-rate cascade, evaluated from the roots-of-unity sum.
///
/// For γτ ≪ 1 the exponentials cancel to O((γτ)^(n−1)), far below f64
/// round-off for larger n, so short delays are evaluated through the
/// exact Taylor series instead of the mixture.
pub fn g2_erlang_cascade(n: usize, gamma: f64, tau: f64) -> Result<f64> {
    if tau < 0.0 {
        return Err(Error::Domain("τ must be non-negative"));
    }
    if n == 0 {
        return Err(Error::Domain("cascade needs at least one stage"));
    }
    if !(gamma > 0.0) {
        return Err(Error::Domain("rate must be positive"));
    }
    if n >= 2 && gamma * tau < 0.1 {
        return Ok(erlang_series_small_tau(n, gamma * tau));
    }
    Ok(erlang_mixture(n, gamma)?.eval(tau))
}

/// Taylor series of the roots-of-unity sum at small x = γτ. The power
/// sums Σ_p z^p(1 − z^p)^k reduce exactly to
/// S_k = n·Σ_{j ≡ n−1 (mod n), j ≤ k} (−1)^j C(k, j), which vanishes for
/// 1 ≤ k < n−1; the series therefore starts at the plateau power x^(n−1)
/// with no cancellation of large terms.
fn erlang_series_small_tau(n: usize, x: f64) -> f64 {
    let mut sum = 0.0;
    let mut x_pow_over_fact = 1.0; // (−x)^k / k!
    for k in 0..=70usize {
        if k > 0 {
            x_pow_over_fact *= -x / k as f64;
        }
        if k >= n - 1 {
            // S_k / n = Σ over j = n−1, 2n−1, … ≤ k of (−1)^j C(k, j)
            let mut s = 0.0;
            let mut j = n - 1;
            while j <= k {
                s += if j % 2 == 0 { binomial(k, j) } else { -binomial(k, j) };
                j += n;
            }
            let term = n as f64 * s * x_pow_over_fact;
            sum += term;
            if term.abs() < 1e-18 * (sum.abs() + 1e-300) && k > n + 4 {
                break;
            }
        }
    }
    sum
}

fn binomial(k: usize, j: usize) -> f64 {
    let j = j.min(k - j);
    let mut c = 1.0;
    for i in 0..j {
        c = c * (k - i) as f64 / (i + 1) as f64;
    }
    c
}

/// Dedicated closed forms for small cascades (n = 2, 3, 4).
pub fn g2_cascade_closed_form(n: usize, gamma: f64, tau: f64) -> Result<f64> {
    if tau < 0.0 {
        return Err(Error::Domain("τ must be non-negative"));
    }
    let gt = gamma * tau;
    match n {
        2 => Ok(1.0 - exp(-2.0 * gt)),
        3 => Ok(1.0 - 2.0 * sin(sqrt(3.0) / 2.0 * gt + PI / 6.0) * exp(-1.5 * gt)),
        4 => Ok(1.0 - exp(-2.0 * gt) - 2.0 * exp(-gt) * sin(gt)),
        _ => Err(Error::Domain("closed form available for n in {2, 3, 4}")),
    }
}

/// Leading short-time behavior of the cascade correlation:
/// g²(τ) ≈ (n²/n!)(γτ)^(n−1). The exponent is the number of cascade
/// steps n − 1, matching the series expansions of the closed forms.
pub fn g2_short_time(n: usize, gamma: f64, tau: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain("short-time law needs n ≥ 2"));
    }
    if tau < 0.0 {
        return Err(Error::Domain("τ must be non-negative"));
    }
    if tau == 0.0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    // n²/n! (γτ)^(n−1) in log space so large n stays finite
    Ok(exp(
        2.0 * log(nf) - lgamma(nf + 1.0) + (nf - 1.0) * log(gamma * tau),
    ))
}

/// Location and value of a local maximum of g²(τ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveMax {
    pub tau: f64,
    pub value: f64,
}

/// First local maximum of `f` inside `(lo, hi)`: a coarse scan brackets
/// the first interior peak, golden-section refines it to relative
/// tolerance 1e-9 in τ. Returns `None` when the curve is monotone in the
/// window (no interior maximum).
pub fn find_first_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<Option<CurveMax>> {
    if !(lo > 0.0) || !(hi > lo) {
        return Err(Error::Domain("window must satisfy 0 < lo < hi"));
    }
    const SCAN: usize = 4096;
    let step = (hi - lo) / SCAN as f64;
    let mut prev = f(lo);
    let mut curr = f(lo + step);
    for i in 1..SCAN {
        let next = f(lo + (i + 1) as f64 * step);
        if curr >= prev && curr > next {
            let (a, b) = (lo + (i - 1) as f64 * step, lo + (i + 1) as f64 * step);
            let tau = golden_section_max(&f, a, b, 1e-9);
            return Ok(Some(CurveMax { tau, value: f(tau) }));
        }
        prev = curr;
        curr = next;
    }
    Ok(None)
}

fn golden_section_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, rel_tol: f64) -> f64 {
    let inv_phi = (sqrt(5.0) - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a) > rel_tol * (a.abs() + b.abs()) * 0.5 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Least-squares line fit of y against x; returns (slope, intercept).
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    (slope, (sy - slope * sx) / n)
}

/// Fit the power law g² ≈ c (γτ)^k on a short-time window; returns
/// (exponent k, prefactor c).
pub fn fit_short_time_power_law<F: Fn(f64) -> f64>(
    f: F,
    gamma: f64,
    tau_lo: f64,
    tau_hi: f64,
    points: usize,
) -> (f64, f64) {
    let logs: (Vec<f64>, Vec<f64>) = (0..points)
        .map(|i| {
            let t = tau_lo * pow(tau_hi / tau_lo, i as f64 / (points - 1) as f64);
            (log(gamma * t), log(f(t)))
        })
        .unzip();
    let (slope, intercept) = linear_fit(&logs.0, &logs.1);
    (slope, exp(intercept))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn incoherent_examples() {
        assert_relative_eq!(g2_incoherent_2ls(1.0, 1.0, 0.0).unwrap(), 0.0);
        assert_relative_eq!(
            g2_incoherent_2ls(1.0, 1.0, 1.0).unwrap(),
            1.0 - exp(-2.0),
            epsilon = 1e-15
        );
        assert_relative_eq!(
            g2_incoherent_2ls(1.0, 2.0, 1e4).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert!(g2_incoherent_2ls(1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn heitler_examples() {
        assert_relative_eq!(g2_heitler(1.0, 0.0).unwrap(), 0.0);
        let e = 1.0 - exp(-1.0);
        assert_relative_eq!(g2_heitler(1.0, 1.0).unwrap(), e * e, epsilon = 1e-15);
        // quadratic short-time law
        assert_relative_eq!(g2_heitler(1.0, 1e-3).unwrap(), 1e-6, epsilon = 1e-8);
    }

    #[test]
    fn mollow_first_maximum() {
        let p = MollowParams::new(1.0, 1.0).unwrap();
        assert_eq!(p.regime(), MollowRegime::Oscillatory);
        let om = sqrt(63.0);
        assert_relative_eq!(p.rabi_splitting(), om, epsilon = 1e-15);
        let tau_m = p.first_max_delay().unwrap();
        assert_relative_eq!(tau_m, 4.0 * PI / om, epsilon = 1e-15);
        assert_relative_eq!(
            g2_mollow(p, tau_m).unwrap(),
            1.0 + exp(-3.0 * PI / om),
            epsilon = 1e-12
        );
    }

    #[test]
    fn mollow_ceiling_is_two() {
        // maximum 1 + e^(−3πγ/Ω_M) → 2 as Ω → ∞
        let p = MollowParams::new(1.0, 1e9).unwrap();
        assert!(p.first_max_value().unwrap() < 2.0);
        assert_relative_eq!(p.first_max_value().unwrap(), 2.0, epsilon = 1e-6);
    }

    #[test]
    fn mollow_branch_continuity() {
        let gamma = 1.0;
        for sign in [-1.0, 1.0] {
            let omega = gamma * (1.0 + sign * 1e-5) / 8.0;
            let p = MollowParams::new(gamma, omega).unwrap();
            let thr = MollowParams::new(gamma, gamma / 8.0).unwrap();
            for i in 0..200 {
                let tau = i as f64 * 0.1;
                let a = g2_mollow(p, tau).unwrap();
                let b = g2_mollow(thr, tau).unwrap();
                assert!((a - b).abs() < 1e-4, "τ={tau}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn mollow_mixture_matches_direct() {
        for omega in [0.05, 0.125, 0.125 * (1.0 + 1e-9), 1.0, 5.0] {
            let p = MollowParams::new(1.0, omega).unwrap();
            let m = mollow_mixture(p);
            for i in 0..100 {
                let tau = i as f64 * 0.1;
                assert_relative_eq!(
                    m.eval(tau),
                    g2_mollow(p, tau).unwrap(),
                    epsilon = 1e-10,
                    max_relative = 1e-10
                );
            }
        }
    }

    #[test]
    fn cascade_known_values() {
        assert_relative_eq!(g2_erlang_cascade(1, 1.0, 3.3).unwrap(), 1.0);
        assert_relative_eq!(
            g2_erlang_cascade(3, 1.0, 2.0 * PI / sqrt(3.0)).unwrap(),
            1.0 + exp(-sqrt(3.0) * PI),
            epsilon = 1e-12
        );
        assert_relative_eq!(
            g2_erlang_cascade(4, 1.0, 1.0).unwrap(),
            1.0 - exp(-2.0) - 2.0 * exp(-1.0) * sin(1.0),
            epsilon = 1e-12
        );
        assert!(g2_erlang_cascade(0, 1.0, 1.0).is_err());
    }

    #[test]
    fn closed_forms_match_mixture() {
        for n in [2usize, 3, 4] {
            for i in 0..500 {
                let tau = i as f64 * 0.02;
                assert_relative_eq!(
                    g2_cascade_closed_form(n, 1.3, tau).unwrap(),
                    g2_erlang_cascade(n, 1.3, tau).unwrap(),
                    epsilon = 1e-12
                );
            }
        }
        assert!(g2_cascade_closed_form(5, 1.0, 1.0).is_err());
    }

    #[test]
    fn cascade_two_matches_incoherent() {
        for i in 0..100 {
            let tau = i as f64 * 0.1;
            assert_relative_eq!(
                g2_erlang_cascade(2, 1.0, tau).unwrap(),
                g2_incoherent_2ls(1.0, 1.0, tau).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn short_time_prefactors() {
        // n=2 → 2τ; n=3 → (3/2)τ²; n=4 → (2/3)τ³
        assert_relative_eq!(g2_short_time(2, 1.0, 0.1).unwrap(), 0.2, epsilon = 1e-12);
        assert_relative_eq!(g2_short_time(3, 1.0, 0.1).unwrap(), 0.015, epsilon = 1e-12);
        assert_relative_eq!(
            g2_short_time(4, 1.0, 0.1).unwrap(),
            2.0 / 3.0 * 1e-3,
            epsilon = 1e-12
        );
    }

    #[test]
    fn first_max_erlang_three() {
        let got = find_first_max(|t| g2_erlang_cascade(3, 1.0, t).unwrap(), 0.1, 10.0)
            .unwrap()
            .unwrap();
        assert_relative_eq!(got.tau, 2.0 * PI / sqrt(3.0), max_relative = 1e-7);
        assert_relative_eq!(got.value, 1.0 + exp(-sqrt(3.0) * PI), epsilon = 1e-12);
    }

    #[test]
    fn first_max_monotone_is_none() {
        let got = find_first_max(|t| g2_erlang_cascade(2, 1.0, t).unwrap(), 0.1, 10.0).unwrap();
        assert!(got.is_none());
    }

    #[test]
    fn first_max_rescaling_invariance() {
        for c in [0.5, 2.0, 7.0] {
            let base = find_first_max(|t| g2_erlang_cascade(3, 1.0, t).unwrap(), 0.1, 10.0)
                .unwrap()
                .unwrap();
            let scaled = find_first_max(|t| g2_erlang_cascade(3, c, t).unwrap(), 0.1 / c, 10.0 / c)
                .unwrap()
                .unwrap();
            assert_relative_eq!(scaled.tau, base.tau / c, max_relative = 1e-6);
            assert_relative_eq!(scaled.value, base.value, max_relative = 1e-9);
        }
    }
}
