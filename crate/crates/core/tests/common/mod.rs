//! Shared oracles for integration tests: adaptive quadrature, closed-form
//! CDFs, and basic statistics. These stay independent of the library code
//! paths they are used to check.

#![allow(dead_code)]

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(f, a, fa, m, fm, flm);
        let right = simpson(f, m, fm, b, fb, frm);
        // keep splitting for the first levels so a peak narrower than the
        // initial probes cannot be missed
        if depth == 0 || (depth < 30 && (left + right - whole).abs() < 15.0 * tol) {
            left + right + (left + right - whole) / 15.0
        } else {
            recurse(f, a, fa, m, fm, flm, left, tol / 2.0, depth - 1)
                + recurse(f, m, fm, b, fb, frm, right, tol / 2.0, depth - 1)
        }
    }
    let (fa, fb) = (f(a), f(b));
    let fm = f(0.5 * (a + b));
    let whole = simpson(&f, a, fa, b, fb, fm);
    recurse(&f, a, fa, b, fb, fm, whole, tol, 40)
}

/// Complex-valued quadrature via two real integrals.
pub fn integrate_complex<F: Fn(f64) -> (f64, f64) + Copy>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> (f64, f64) {
    (
        integrate(|x| f(x).0, a, b, tol),
        integrate(|x| f(x).1, a, b, tol),
    )
}

/// CDF of the hypoexponential/Erlang waiting time, from its density
/// mixture: ∫₀ᵗ a τᵏ e^(−λτ) dτ in closed form per term.
pub fn phase_type_cdf(rates: &g2kit_core::StageRates, t: f64) -> f64 {
    let mix = rates.density_mixture();
    let mut cdf = 0.0;
    for term in &mix.terms {
        let lambda = term.decay.re;
        let k = term.power;
        // k!/λ^(k+1) (1 − e^(−λt) Σ_{j≤k} (λt)^j/j!)
        let mut fact = 1.0;
        for j in 1..=k {
            fact *= j as f64;
        }
        let mut partial = 0.0;
        let mut pow = 1.0;
        let mut jfact = 1.0;
        for j in 0..=k {
            if j > 0 {
                pow *= lambda * t;
                jfact *= j as f64;
            }
            partial += pow / jfact;
        }
        cdf += term.amplitude.re * fact / lambda.powi(k as i32 + 1)
            * (1.0 - (-lambda * t).exp() * partial);
    }
    cdf
}

/// Two-sided Kolmogorov–Smirnov distance between a sample and a CDF.
pub fn ks_distance<F: Fn(f64) -> f64>(sample: &mut [f64], cdf: F) -> f64 {
    sample.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sample.len() as f64;
    sample
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let c = cdf(x);
            let lo = (c - i as f64 / n).abs();
            let hi = ((i as f64 + 1.0) / n - c).abs();
            lo.max(hi)
        })
        .fold(0.0, f64::max)
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Uniform grid over [0, tau_max] with `points` samples.
pub fn grid(tau_max: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| tau_max * i as f64 / (points - 1) as f64)
        .collect()
}
