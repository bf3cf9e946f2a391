//! Multilevel incoherent cascade as a Lindblad master equation: the full
//! vectorized generator, its steady state, and g²(τ) of a monitored
//! transition via the quantum regression theorem. This is the quantum
//! oracle against which the statistical routes are cross-validated.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{expm, CMat};
use crate::stream::CorrelationCurve;
use crate::Complex;

/// Dense superoperators are capped at 16 levels (256×256 generator).
pub const MAX_LEVELS: usize = 16;

/// Incoherent cascade: pump from the ground state |0⟩ to the top level,
/// then a chain of one-step decays |i⟩→|i−1⟩. The monitored transition
/// (default 1→0) defines the emission operator whose correlations are
/// computed.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeModel {
    pub n_levels: usize,
    /// Level energies ω_i; the Hamiltonian is diagonal, so these cannot
    /// affect the populations (asserted in tests).
    pub energies: Vec<f64>,
    pub pump: f64,
    /// Decay rate of step |i⟩→|i−1⟩ for i = n−1, …, 1 (index 0 is the
    /// top step).
    pub decays: Vec<f64>,
    /// (upper, lower) levels of the monitored transition.
    pub monitored: (usize, usize),
}

impl CascadeModel {
    pub fn new(n_levels: usize, energies: Vec<f64>, pump: f64, decays: Vec<f64>) -> Result<Self> {
        if n_levels < 2 {
            return Err(Error::Domain("cascade needs at least two levels"));
        }
        if n_levels > MAX_LEVELS {
            return Err(Error::Capacity {
                requested: n_levels,
                cap: MAX_LEVELS,
            });
        }
        if energies.len() != n_levels {
            return Err(Error::Domain("one energy per level is required"));
        }
        if decays.len() != n_levels - 1 {
            return Err(Error::Domain("one decay rate per downward step is required"));
        }
        if !(pump > 0.0) || decays.iter().any(|&g| !(g > 0.0)) {
            return Err(Error::Domain("all rates must be positive"));
        }
        Ok(Self {
            n_levels,
            energies,
            pump,
            decays,
            monitored: (1, 0),
        })
    }

    /// Equal-rate cascade with `n_levels` levels: pump and every decay at
    /// `rate`, zero energies. Its monitored-transition g²(τ) equals the
    /// n-stage Erlang cascade result.
    pub fn equal_rates(n_levels: usize, rate: f64) -> Result<Self> {
        Self::new(
            n_levels,
            alloc::vec![0.0; n_levels],
            rate,
            alloc::vec![rate; n_levels - 1],
        )
    }

    /// |lower⟩⟨upper| in the level basis.
    fn lowering(&self, upper: usize, lower: usize) -> CMat {
        let mut op = CMat::zeros(self.n_levels);
        op[(lower, upper)] = Complex::new(1.0, 0.0);
        op
    }
}

/// Superoperator of the dissipator (γ/2)(2ΩρΩ† − Ω†Ωρ − ρΩ†Ω) on the
/// column-vectorized density matrix.
fn dissipator(rate: f64, jump: &CMat) -> CMat {
    let n = jump.dim();
    let ident = CMat::identity(n);
    let jd = jump.conj_transpose();
    let jdj = jd.matmul(jump);
    // vec(AρB) = (Bᵀ ⊗ A) vec(ρ)
    let mut sup = jd.transpose().kron(jump).scale(Complex::new(2.0, 0.0));
    sup.add_assign_scaled(&ident.kron(&jdj), Complex::new(-1.0, 0.0));
    sup.add_assign_scaled(&jdj.transpose().kron(&ident), Complex::new(-1.0, 0.0));
    sup.scale(Complex::new(rate / 2.0, 0.0))
}

/// Full generator −i[H,·] + (P/2)𝓛_pump + Σ(γᵢ/2)𝓛_decay as a dense
/// matrix on vec(ρ). The all-identity row vector is a left null vector
/// (trace preservation).
pub fn liouvillian(model: &CascadeModel) -> CMat {
    let n = model.n_levels;
    let ident = CMat::identity(n);
    let mut h = CMat::zeros(n);
    for i in 0..n {
        h[(i, i)] = Complex::new(model.energies[i], 0.0);
    }
    // −i(I ⊗ H − Hᵀ ⊗ I)
    let minus_i = Complex::new(0.0, -1.0);
    let mut sup = ident.kron(&h).scale(minus_i);
    sup.add_assign_scaled(&h.transpose().kron(&ident), -minus_i);
    // pump |0⟩ → |n−1⟩
    sup = sup.add(&dissipator(model.pump, &model.lowering(0, n - 1)));
    // cascade |i⟩ → |i−1⟩
    for (k, &gamma) in model.decays.iter().enumerate() {
        let upper = n - 1 - k;
        sup = sup.add(&dissipator(gamma, &model.lowering(upper, upper - 1)));
    }
    sup
}

/// Unique trace-1 steady state; diagonal for this model class.
pub fn steady_state(model: &CascadeModel) -> Result<CMat> {
    let n = model.n_levels;
    let sup = liouvillian(model);
    let dim = n * n;
    // replace the first row by the trace functional and solve M x = e₀;
    // valid because the trace row is a left null combination of the rows
    let mut m = sup;
    for j in 0..dim {
        m[(0, j)] = Complex::new(0.0, 0.0);
    }
    for i in 0..n {
        m[(0, i * n + i)] = Complex::new(1.0, 0.0);
    }
    let mut rhs = CMat::zeros(dim);
    rhs[(0, 0)] = Complex::new(1.0, 0.0);
    let sol = m.solve(&rhs).map_err(|_| Error::Numeric {
        context: "steady-state kernel is not unique",
        coefficients: Vec::new(),
    })?;
    let mut rho = CMat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            // column-stacked: vec index j*n + i holds ρ_{ij}
            rho[(i, j)] = sol[(j * n + i, 0)];
        }
    }
    // exact renormalization of the trace
    let trace: Complex = (0..n).map(|i| rho[(i, i)]).sum();
    Ok(rho.scale(trace.inv()))
}

/// g²(τ) of the monitored transition by the quantum regression theorem:
/// the conditional state σρ_ss σ† is propagated by e^(𝓛τ) and the
/// monitored population, normalized by its squared steady-state value,
/// gives the correlation. Requires a uniform grid starting at 0; one
/// τ-step propagator is built and reused.
pub fn g2_qrt(model: &CascadeModel, tau_grid: &[f64]) -> Result<CorrelationCurve> {
    if tau_grid.len() < 2 {
        return Err(Error::Domain("grid needs at least two points"));
    }
    let step = tau_grid[1] - tau_grid[0];
    if !(step > 0.0) || tau_grid[0] != 0.0 {
        return Err(Error::Domain("grid must be uniform starting at τ = 0"));
    }
    for w in tau_grid.windows(2) {
        if ((w[1] - w[0]) - step).abs() > 1e-9 * step {
            return Err(Error::Domain("grid must be uniform starting at τ = 0"));
        }
    }

    let n = model.n_levels;
    let (upper, lower) = model.monitored;
    if upper >= n || lower >= n {
        return Err(Error::Domain("monitored transition outside the level range"));
    }
    let rho_ss = steady_state(model)?;
    let sigma = model.lowering(upper, lower);
    let population = rho_ss[(upper, upper)].re;
    if population <= 0.0 {
        return Err(Error::Numeric {
            context: "monitored level is unpopulated in the steady state",
            coefficients: Vec::new(),
        });
    }

    // conditional state σ ρ_ss σ†, column-vectorized
    let cond = sigma.matmul(&rho_ss).matmul(&sigma.conj_transpose());
    let dim = n * n;
    let mut v = alloc::vec![Complex::new(0.0, 0.0); dim];
    for i in 0..n {
        for j in 0..n {
            v[j * n + i] = cond[(i, j)];
        }
    }

    let sup = liouvillian(model);
    let propagator = expm(&sup.scale(Complex::new(step, 0.0)))?;

    let norm = population * population;
    let mut values = Vec::with_capacity(tau_grid.len());
    for k in 0..tau_grid.len() {
        if k > 0 {
            v = propagator.matvec(&v);
        }
        // G²(τ) = Tr(σ†σ · ρ_cond(τ)) = ⟨upper|ρ_cond|upper⟩
        values.push(v[upper * n + upper].re / norm);
    }
    CorrelationCurve::from_values(tau_grid.to_vec(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid(tau_max: f64, points: usize) -> Vec<f64> {
        (0..points)
            .map(|i| tau_max * i as f64 / (points - 1) as f64)
            .collect()
    }

    #[test]
    fn two_level_population_block() {
        // diagonal block must reproduce the textbook rate matrix
        // [[−P, γ], [P, −γ]]
        let m = CascadeModel::new(2, alloc::vec![0.0, 0.0], 0.7, alloc::vec![1.3]).unwrap();
        let sup = liouvillian(&m);
        let diag_idx = [0usize, 3];
        let expect = [[-0.7, 1.3], [0.7, -1.3]];
        for (a, &ia) in diag_idx.iter().enumerate() {
            for (b, &ib) in diag_idx.iter().enumerate() {
                assert_relative_eq!(sup[(ia, ib)].re, expect[a][b], epsilon = 1e-14);
                assert_relative_eq!(sup[(ia, ib)].im, 0.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn trace_is_preserved() {
        let m = CascadeModel::new(3, alloc::vec![0.3, 1.0, 2.5], 1.0, alloc::vec![2.0, 3.0])
            .unwrap();
        let sup = liouvillian(&m);
        let n = 3;
        // identity left vector annihilates the generator
        for j in 0..n * n {
            let col_sum: Complex = (0..n).map(|i| sup[(i * n + i, j)]).sum();
            assert_relative_eq!(col_sum.norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn steady_state_matches_rate_formula() {
        // diag(γ₁γ₂, Pγ₁, Pγ₂)/(γ₁γ₂ + P(γ₁+γ₂)) at P=1, γ₁=2, γ₂=3
        let m = CascadeModel::new(3, alloc::vec![0.0; 3], 1.0, alloc::vec![2.0, 3.0]).unwrap();
        let rho = steady_state(&m).unwrap();
        let expect = [6.0 / 11.0, 2.0 / 11.0, 3.0 / 11.0];
        // decays[0] is the top step, so ρ₁₁ carries Pγ₁, ρ₂₂ carries Pγ₂
        assert_relative_eq!(rho[(0, 0)].re, expect[0], epsilon = 1e-12);
        assert_relative_eq!(rho[(1, 1)].re, expect[1], epsilon = 1e-12);
        assert_relative_eq!(rho[(2, 2)].re, expect[2], epsilon = 1e-12);
        // diagonal, trace-1
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_relative_eq!(rho[(i, j)].norm(), 0.0, epsilon = 1e-12);
                }
            }
        }
        let trace: f64 = (0..3).map(|i| rho[(i, i)].re).sum();
        assert_relative_eq!(trace, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn steady_state_equal_rates_is_uniform() {
        let m = CascadeModel::equal_rates(3, 1.0).unwrap();
        let rho = steady_state(&m).unwrap();
        for i in 0..3 {
            assert_relative_eq!(rho[(i, i)].re, 1.0 / 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn qrt_three_levels_matches_cascade_closed_form() {
        let m = CascadeModel::equal_rates(3, 1.0).unwrap();
        let g = grid(10.0, 501);
        let c = g2_qrt(&m, &g).unwrap();
        for (i, &t) in g.iter().enumerate() {
            let expect = crate::analytic::g2_cascade_closed_form(3, 1.0, t).unwrap();
            assert!(
                (c.values()[i] - expect).abs() < 1e-8,
                "τ={t}: {} vs {expect}",
                c.values()[i]
            );
        }
        assert_relative_eq!(c.values()[0], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn qrt_two_levels_matches_incoherent() {
        let m = CascadeModel::new(2, alloc::vec![0.0, 0.0], 0.8, alloc::vec![1.7]).unwrap();
        let g = grid(10.0, 401);
        let c = g2_qrt(&m, &g).unwrap();
        for (i, &t) in g.iter().enumerate() {
            let expect = crate::analytic::g2_incoherent_2ls(0.8, 1.7, t).unwrap();
            assert!((c.values()[i] - expect).abs() < 1e-8);
        }
    }

    #[test]
    fn qrt_long_delay_decorrelates() {
        let m = CascadeModel::new(3, alloc::vec![0.0; 3], 1.0, alloc::vec![2.0, 3.0]).unwrap();
        let g = grid(50.0, 1001);
        let c = g2_qrt(&m, &g).unwrap();
        assert_relative_eq!(*c.values().last().unwrap(), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn qrt_independent_of_level_energies() {
        let base = CascadeModel::equal_rates(4, 1.0).unwrap();
        let mut shifted = base.clone();
        shifted.energies = alloc::vec![0.4, -2.0, 13.0, 0.9];
        let g = grid(8.0, 201);
        let a = g2_qrt(&base, &g).unwrap();
        let b = g2_qrt(&shifted, &g).unwrap();
        for i in 0..g.len() {
            assert!((a.values()[i] - b.values()[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn capacity_cap_enforced() {
        let err =
            CascadeModel::new(17, alloc::vec![0.0; 17], 1.0, alloc::vec![1.0; 16]).unwrap_err();
        assert!(matches!(err, Error::Capacity { .. }));
    }
}
