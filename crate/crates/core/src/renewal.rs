//! Laplace-space renewal route: g̃²(s) = (1/r)·w̃(s)/(1 − w̃(s)) for a
//! phase-type waiting time, inverted exactly by pole/residue analysis.
//!
//! With w̃(s) = A/B(s), A = Πᵢγᵢ and B(s) = Πᵢ(s + γᵢ), the correlation
//! transform is (A/r)/f(s) with f = B − A. The poles are the roots of f;
//! s = 0 is always one of them (w̃(0) = 1) and carries the baseline.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::mixture::{ExponentialMixture, MixtureTerm};
use crate::phase_type::StageRates;
use crate::stream::CorrelationCurve;
use crate::Complex;

/// Roots closer than this (relative to the mean rate scale) are treated
/// as one higher-order pole and expanded confluently.
pub const POLE_CLUSTER_TOL: f64 = 1e-7;

const MAX_ABERTH_ITERS: usize = 400;

/// Poles (roots of 1 − w̃(s), s = 0 excluded) and the mixture terms built
/// from their residues. Clustered roots contribute τ^k e^(sτ) terms.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleSet {
    pub poles: Vec<Complex>,
    pub terms: Vec<MixtureTerm>,
}

impl PoleSet {
    /// Amplitudes of the simple (power-0) terms, one per distinct pole.
    pub fn residues(&self) -> Vec<Complex> {
        self.terms
            .iter()
            .filter(|t| t.power == 0)
            .map(|t| t.amplitude)
            .collect()
    }

    /// g²(τ) = 1 + Σ terms.
    pub fn mixture(&self) -> ExponentialMixture {
        ExponentialMixture::new(1.0, self.terms.clone())
    }
}

/// g̃²(s) = (1/r)·w̃(s)/(1 − w̃(s)).
pub fn g2_laplace(rates: &StageRates, s: Complex) -> Result<Complex> {
    let a: f64 = rates.rates().iter().product();
    let b = big_b(rates, s);
    let f = b - a;
    if f.norm() <= 1e-13 * (b.norm() + a) {
        return Err(Error::Pole);
    }
    Ok(a * rates.mean_interval() / f)
}

fn big_b(rates: &StageRates, s: Complex) -> Complex {
    rates.rates().iter().fold(Complex::new(1.0, 0.0), |acc, &r| acc * (s + r))
}

/// f(s) = B(s) − A and f′(s) = B(s)·Σᵢ 1/(s+γᵢ), both in product form
/// (stable for large stage counts, unlike the expanded monomial basis).
fn f_and_fprime(rates: &StageRates, s: Complex, a: f64) -> (Complex, Complex) {
    let b = big_b(rates, s);
    let logderiv: Complex = rates
        .rates()
        .iter()
        .map(|&r| (s + r).inv())
        .sum();
    (b - a, b * logderiv)
}

/// All poles of g̃² with their residues (confluent terms for clustered
/// roots). The exact root s = 0 is suppressed during iteration rather
/// than found numerically.
pub fn find_poles(rates: &StageRates) -> Result<PoleSet> {
    let n = rates.n_stages();
    if n < 2 {
        return Err(Error::Domain("pole analysis needs at least two stages"));
    }
    let a: f64 = rates.rates().iter().product();
    let roots = aberth_roots(rates, a)?;
    let roots = symmetrize_conjugates(roots);

    // group roots into clusters for confluent residue handling
    let scale = rates
        .rates()
        .iter()
        .fold(0.0f64, |m, &r| if r > m { r } else { m });
    let clusters = cluster_roots(&roots, POLE_CLUSTER_TOL * scale);

    let mean_interval = rates.mean_interval();
    let mut terms = Vec::new();
    for cluster in &clusters {
        if cluster.len() == 1 {
            let s0 = cluster[0];
            let (_, fp) = f_and_fprime(rates, s0, a);
            terms.push(MixtureTerm {
                amplitude: Complex::new(a * mean_interval, 0.0) / fp,
                decay: -s0,
                power: 0,
            });
        } else {
            let m = cluster.len();
            let center = cluster.iter().sum::<Complex>() / m as f64;
            terms.extend(confluent_terms(rates, a, mean_interval, center, m));
        }
    }
    Ok(PoleSet {
        poles: roots,
        terms,
    })
}

/// Mixture terms of (A·T)/f(s) at an m-fold pole s₀: Taylor-expand f
/// around s₀, drop the m vanishing leading coefficients, and invert the
/// remaining series to Laurent order.
fn confluent_terms(
    rates: &StageRates,
    a: f64,
    mean_interval: f64,
    center: Complex,
    m: usize,
) -> Vec<MixtureTerm> {
    let order = 2 * m;
    // Taylor coefficients of B(center + u) by multiplying linear factors
    let mut taylor = alloc::vec![Complex::new(0.0, 0.0); order];
    taylor[0] = Complex::new(1.0, 0.0);
    for &r in rates.rates() {
        let b0 = center + r;
        for k in (0..order).rev() {
            let lower = if k > 0 { taylor[k - 1] } else { Complex::new(0.0, 0.0) };
            taylor[k] = taylor[k] * b0 + lower;
        }
    }
    taylor[0] -= a;
    // h(u) = f(u)/u^m; invert to order m−1
    let h = &taylor[m..2 * m];
    let mut inv = alloc::vec![Complex::new(0.0, 0.0); m];
    inv[0] = h[0].inv();
    for j in 1..m {
        let mut acc = Complex::new(0.0, 0.0);
        for k in 1..=j {
            acc += h[k] * inv[j - k];
        }
        inv[j] = -acc * inv[0];
    }
    let front = Complex::new(a * mean_interval, 0.0);
    (0..m)
        .map(|j| {
            let power = (m - 1 - j) as u32;
            MixtureTerm {
                amplitude: front * inv[j] / factorial(power),
                decay: -center,
                power,
            }
        })
        .collect()
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Aberth–Ehrlich iteration on f(s) = B(s) − A for the n − 1 nonzero
/// roots; the exact root at s = 0 enters every correction as a fixed
/// repeller (implicit deflation). Finishes with Newton polishing.
fn aberth_roots(rates: &StageRates, a: f64) -> Result<Vec<Complex>> {
    let n = rates.n_stages();
    let k = n - 1;
    let mean = rates.rates().iter().sum::<f64>() / n as f64;
    // geometric-mean radius around the centroid of the stage poles; for
    // equal rates this is the exact circle through the roots
    let radius = libm::exp(rates.rates().iter().map(|&r| libm::log(r)).sum::<f64>() / n as f64);
    let center = Complex::new(-mean, 0.0);
    let mut z: Vec<Complex> = (0..k)
        .map(|p| {
            let angle = 2.0 * core::f64::consts::PI * (p as f64 + 0.25) / k as f64 + 0.1;
            center + radius * Complex::new(libm::cos(angle), libm::sin(angle))
        })
        .collect();

    let zero = Complex::new(0.0, 0.0);
    let mut converged = false;
    for _ in 0..MAX_ABERTH_ITERS {
        let mut max_step = 0.0f64;
        for i in 0..k {
            let (f, fp) = f_and_fprime(rates, z[i], a);
            if f.norm() == 0.0 {
                continue;
            }
            let newton = f / fp;
            let mut repel = (z[i] - zero).inv();
            for j in 0..k {
                if j != i {
                    repel += (z[i] - z[j]).inv();
                }
            }
            let denom = Complex::new(1.0, 0.0) - newton * repel;
            let step = if denom.norm() > 1e-300 {
                newton / denom
            } else {
                newton
            };
            z[i] -= step;
            let rel = step.norm() / (1.0 + z[i].norm());
            if rel > max_step {
                max_step = rel;
            }
        }
        if max_step < 1e-14 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numeric {
            context: "pole iteration did not converge",
            coefficients: expanded_coefficients(rates, a),
        });
    }
    // Newton polish to relative tolerance 1e-13
    for zi in z.iter_mut() {
        for _ in 0..4 {
            let (f, fp) = f_and_fprime(rates, *zi, a);
            if fp.norm() == 0.0 {
                break;
            }
            let step = f / fp;
            *zi -= step;
            if step.norm() <= 1e-13 * (1.0 + zi.norm()) {
                break;
            }
        }
    }
    Ok(z)
}

/// Expanded monomial coefficients of f (ascending powers); only used to
/// annotate convergence failures.
fn expanded_coefficients(rates: &StageRates, a: f64) -> Vec<f64> {
    let mut coeffs = alloc::vec![1.0];
    for &r in rates.rates() {
        coeffs.push(0.0);
        for k in (0..coeffs.len() - 1).rev() {
            let lower = if k > 0 { coeffs[k - 1] } else { 0.0 };
            coeffs[k] = coeffs[k] * r + lower;
        }
        // highest coefficient stays 1
        let len = coeffs.len();
        coeffs[len - 1] = 1.0;
    }
    coeffs.reverse(); // ascending
    coeffs[0] -= a;
    coeffs
}

/// Real polynomial: pair each root with its conjugate partner and average
/// the pair; snap near-real roots onto the axis.
fn symmetrize_conjugates(mut roots: Vec<Complex>) -> Vec<Complex> {
    let scale = roots.iter().map(|z| z.norm()).fold(1e-300, f64::max);
    let mut done = alloc::vec![false; roots.len()];
    for i in 0..roots.len() {
        if done[i] {
            continue;
        }
        if roots[i].im.abs() < 1e-12 * scale {
            roots[i].im = 0.0;
            done[i] = true;
            continue;
        }
        let target = roots[i].conj();
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for j in 0..roots.len() {
            if j != i && !done[j] {
                let d = (roots[j] - target).norm();
                if d < best_d {
                    best_d = d;
                    best = j;
                }
            }
        }
        if best != usize::MAX {
            let avg = (roots[i] + roots[best].conj()) * 0.5;
            roots[i] = avg;
            roots[best] = avg.conj();
            done[i] = true;
            done[best] = true;
        }
    }
    roots
}

fn cluster_roots(roots: &[Complex], tol: f64) -> Vec<Vec<Complex>> {
    let mut clusters: Vec<Vec<Complex>> = Vec::new();
    let mut sorted: Vec<Complex> = roots.to_vec();
    sorted.sort_by(|p, q| {
        (p.re, p.im)
            .partial_cmp(&(q.re, q.im))
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    for z in sorted {
        match clusters
            .iter_mut()
            .find(|c| c.iter().any(|&w| (w - z).norm() <= tol))
        {
            Some(c) => c.push(z),
            None => clusters.push(alloc::vec![z]),
        }
    }
    clusters
}

/// Evaluate the renewal-route g²(τ) on a delay grid.
pub fn g2_from_renewal(rates: &StageRates, tau_grid: &[f64]) -> Result<CorrelationCurve> {
    let mixture = find_poles(rates)?.mixture();
    CorrelationCurve::from_values(tau_grid.to_vec(), mixture.eval_on(tau_grid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn rates(rs: &[f64]) -> StageRates {
        StageRates::new(rs.to_vec()).unwrap()
    }

    #[test]
    fn laplace_two_equal_rates() {
        // g̃²(s) = 2γ/(s(s+2γ)) at γ=1: value 2/(s(s+2))
        let r = rates(&[1.0, 1.0]);
        let s = Complex::new(1.0, 0.0);
        let got = g2_laplace(&r, s).unwrap();
        assert_relative_eq!(got.re, 2.0 / 3.0, epsilon = 1e-13);
        assert_relative_eq!(got.im, 0.0, epsilon = 1e-13);
    }

    #[test]
    fn laplace_pole_rejected() {
        let r = rates(&[1.0, 1.0]);
        assert_eq!(g2_laplace(&r, Complex::new(0.0, 0.0)), Err(Error::Pole));
        assert_eq!(g2_laplace(&r, Complex::new(-2.0, 0.0)), Err(Error::Pole));
    }

    #[test]
    fn poles_two_equal_rates() {
        let p = find_poles(&rates(&[1.0, 1.0])).unwrap();
        assert_eq!(p.poles.len(), 1);
        assert_relative_eq!(p.poles[0].re, -2.0, epsilon = 1e-12);
        let res = p.residues();
        assert_relative_eq!(res[0].re, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn poles_two_distinct_rates() {
        // inverse transform is 1 − e^(−3τ): single pole −3, residue −1
        let p = find_poles(&rates(&[1.0, 2.0])).unwrap();
        assert_eq!(p.poles.len(), 1);
        assert_relative_eq!(p.poles[0].re, -3.0, epsilon = 1e-12);
        assert_relative_eq!(p.residues()[0].re, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn poles_three_equal_rates_are_roots_of_unity() {
        let p = find_poles(&rates(&[1.0, 1.0, 1.0])).unwrap();
        assert_eq!(p.poles.len(), 2);
        for pole in &p.poles {
            // (s+1)³ = 1 → s = z₃^p − 1
            let w = pole + 1.0;
            assert_relative_eq!(w.norm(), 1.0, epsilon = 1e-12);
            assert!(pole.re < 0.0);
        }
    }

    #[test]
    fn residue_sum_is_minus_one() {
        for rs in [
            alloc::vec![1.0, 1.0],
            alloc::vec![1.0, 2.0],
            alloc::vec![1.0, 2.0, 3.0],
            alloc::vec![0.5, 0.5, 0.5, 0.5],
            alloc::vec![1.0, 4.0, 4.0, 9.0],
        ] {
            let p = find_poles(&StageRates::new(rs).unwrap()).unwrap();
            // g²(0⁺) = 1 + Σ residues = 0 for N ≥ 2
            let sum: Complex = p
                .terms
                .iter()
                .filter(|t| t.power == 0)
                .map(|t| t.amplitude)
                .sum();
            assert_relative_eq!(sum.re, -1.0, epsilon = 1e-10);
            assert_relative_eq!(sum.im, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn permutation_invariance() {
        let p1 = find_poles(&rates(&[1.0, 2.0, 3.0])).unwrap();
        let p2 = find_poles(&rates(&[3.0, 1.0, 2.0])).unwrap();
        let grid: Vec<f64> = (0..200).map(|i| i as f64 * 0.05).collect();
        let m1 = p1.mixture();
        let m2 = p2.mixture();
        for &t in &grid {
            assert_relative_eq!(m1.eval(t), m2.eval(t), epsilon = 1e-10);
        }
    }

    #[test]
    fn equal_rates_match_roots_of_unity_up_to_64() {
        for n in [2usize, 3, 5, 8, 16, 32, 64] {
            let gamma = 1.0;
            let p = find_poles(&StageRates::erlang(n, gamma).unwrap()).unwrap();
            assert_eq!(p.poles.len(), n - 1);
            for pole in &p.poles {
                // pole = γ(z − 1) for some n-th root of unity z ≠ 1
                let z = pole / gamma + 1.0;
                assert_relative_eq!(z.norm(), 1.0, epsilon = 1e-10);
                let zn = z.powu(n as u32);
                assert_relative_eq!(zn.re, 1.0, epsilon = 1e-8);
                assert_relative_eq!(zn.im, 0.0, epsilon = 1e-8);
                assert!(pole.re < 0.0);
            }
            // residues equal the matching root of unity
            for t in &p.terms {
                assert_eq!(t.power, 0);
                let z = -t.decay / gamma + 1.0;
                assert_relative_eq!(t.amplitude.re, z.re, epsilon = 1e-10);
                assert_relative_eq!(t.amplitude.im, z.im, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn curve_matches_closed_forms() {
        let grid: Vec<f64> = (0..1000).map(|i| i as f64 * 0.01).collect();
        let c3 = g2_from_renewal(&rates(&[1.0, 1.0, 1.0]), &grid).unwrap();
        let c4 = g2_from_renewal(&rates(&[1.0, 1.0, 1.0, 1.0]), &grid).unwrap();
        for (i, &t) in grid.iter().enumerate() {
            assert_relative_eq!(
                c3.values()[i],
                crate::analytic::g2_cascade_closed_form(3, 1.0, t).unwrap(),
                epsilon = 1e-10
            );
            assert_relative_eq!(
                c4.values()[i],
                crate::analytic::g2_cascade_closed_form(4, 1.0, t).unwrap(),
                epsilon = 1e-10
            );
        }
        let c = g2_from_renewal(&rates(&[1.0, 2.0]), &grid).unwrap();
        for (i, &t) in grid.iter().enumerate() {
            assert_relative_eq!(c.values()[i], 1.0 - libm::exp(-3.0 * t), epsilon = 1e-10);
        }
    }

    #[test]
    fn single_stage_rejected() {
        assert!(find_poles(&rates(&[1.0])).is_err());
    }
}
