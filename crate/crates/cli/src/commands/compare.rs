use std::path::PathBuf;

use clap::ValueEnum;
use g2kit_core::analytic::{
    g2_cascade_closed_form, g2_erlang_cascade, g2_heitler, g2_incoherent_2ls, g2_mollow,
    MollowParams,
};
use g2kit_core::lindblad::{g2_qrt, CascadeModel};
use g2kit_core::renewal::g2_from_renewal;
use g2kit_core::StageRates;

use crate::commands::parse_rates;
use crate::manifest::ManifestBuilder;
use crate::output::{fmt_float, tau_grid, CurveColumns, Format};
use crate::AppError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    /// Incoherently pumped two-level closed form.
    Incoherent,
    /// Weak coherent driving closed form.
    Heitler,
    /// Strong coherent driving closed form.
    Mollow,
    /// Equal-rate cascade, roots-of-unity form.
    Cascade,
    /// Dedicated 2-, 3- or 4-stage closed forms.
    CascadeClosed,
    /// Renewal-equation pole/residue route (arbitrary rates).
    Renewal,
    /// Master-equation quantum-regression route (arbitrary rates).
    Lindblad,
}

#[derive(clap::Args)]
pub struct Args {
    /// First route.
    #[arg(long, value_enum)]
    pub route_a: Route,
    /// Second route, evaluated on the same grid.
    #[arg(long, value_enum)]
    pub route_b: Route,
    /// Comma-separated stage rates (renewal, lindblad; also sets n and
    /// gamma for the equal-rate routes when the rates are all equal).
    #[arg(long)]
    pub rates: Option<String>,
    /// Number of cascade stages (equal-rate routes).
    #[arg(long)]
    pub n: Option<usize>,
    /// Decay rate γ.
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Incoherent pump rate.
    #[arg(long)]
    pub pump: Option<f64>,
    /// Coherent drive amplitude Ω.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Largest delay on the grid.
    #[arg(long, default_value_t = 10.0)]
    pub tau_max: f64,
    /// Number of grid points.
    #[arg(long, default_value_t = 500)]
    pub points: usize,
    /// Maximum allowed |a − b| over the grid.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Optional file for both curves and their difference.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Args {
    fn stage_rates(&self) -> Result<StageRates, AppError> {
        if let Some(spec) = &self.rates {
            return parse_rates(spec);
        }
        let n = self
            .n
            .ok_or_else(|| AppError::usage("this route needs --rates or --n"))?;
        Ok(StageRates::erlang(n, self.gamma)?)
    }

    fn evaluate_route(&self, route: Route, grid: &[f64]) -> Result<Vec<f64>, AppError> {
        Ok(match route {
            Route::Incoherent => {
                let pump = self
                    .pump
                    .ok_or_else(|| AppError::usage("incoherent route needs --pump"))?;
                grid.iter()
                    .map(|&t| g2_incoherent_2ls(pump, self.gamma, t))
                    .collect::<Result<_, _>>()?
            }
            Route::Heitler => grid
                .iter()
                .map(|&t| g2_heitler(self.gamma, t))
                .collect::<Result<_, _>>()?,
            Route::Mollow => {
                let omega = self
                    .omega
                    .ok_or_else(|| AppError::usage("mollow route needs --omega"))?;
                let params = MollowParams::new(self.gamma, omega)?;
                grid.iter()
                    .map(|&t| g2_mollow(params, t))
                    .collect::<Result<_, _>>()?
            }
            Route::Cascade => {
                let rates = self.stage_rates()?;
                let (n, gamma) = equal_rate_view(&rates)?;
                grid.iter()
                    .map(|&t| g2_erlang_cascade(n, gamma, t))
                    .collect::<Result<_, _>>()?
            }
            Route::CascadeClosed => {
                let rates = self.stage_rates()?;
                let (n, gamma) = equal_rate_view(&rates)?;
                grid.iter()
                    .map(|&t| g2_cascade_closed_form(n, gamma, t))
                    .collect::<Result<_, _>>()?
            }
            Route::Renewal => {
                let rates = self.stage_rates()?;
                g2_from_renewal(&rates, grid)?.values().to_vec()
            }
            Route::Lindblad => {
                let rates = self.stage_rates()?;
                let all = rates.rates();
                let model = CascadeModel::new(
                    all.len(),
                    vec![0.0; all.len()],
                    all[0],
                    all[1..].to_vec(),
                )?;
                g2_qrt(&model, grid)?.values().to_vec()
            }
        })
    }
}

/// Stage count and common rate, requiring all rates equal.
fn equal_rate_view(rates: &StageRates) -> Result<(usize, f64), AppError> {
    let all = rates.rates();
    let gamma = all[0];
    if all.iter().any(|&r| (r - gamma).abs() > 1e-12 * gamma) {
        return Err(AppError::usage(
            "the cascade closed forms require equal rates; use the renewal route",
        ));
    }
    Ok((all.len(), gamma))
}

pub fn run(args: Args) -> Result<u8, AppError> {
    if args.points < 2 {
        return Err(AppError::usage("--points must be at least 2"));
    }
    if !(args.tau_max > 0.0) {
        return Err(AppError::usage("--tau-max must be positive"));
    }
    // The regression route needs a uniform grid from τ = 0; tau_grid
    // provides exactly that, so both routes share it.
    let grid = tau_grid(args.tau_max, args.points);
    let a = args.evaluate_route(args.route_a, &grid)?;
    let b = args.evaluate_route(args.route_b, &grid)?;

    let diff: Vec<f64> = a.iter().zip(&b).map(|(&x, &y)| x - y).collect();
    let max_abs = diff.iter().fold(0.0_f64, |m, &d| m.max(d.abs()));
    let pass = max_abs <= args.tol;

    if let Some(out) = &args.out {
        let table = CurveColumns::new(
            vec!["tau", "g2_a", "g2_b", "diff"],
            vec![&grid, &a, &b, &diff],
        );
        table.write(out, args.format, false)?;
        let mut manifest = ManifestBuilder::new("compare");
        manifest
            .param("route_a", format!("{:?}", args.route_a).to_lowercase())
            .param("route_b", format!("{:?}", args.route_b).to_lowercase())
            .param("tau_max", args.tau_max)
            .param("points", args.points as u64)
            .param("tol", args.tol)
            .param("max_abs_diff", max_abs)
            .param("pass", pass);
        if let Some(r) = &args.rates {
            manifest.param("rates", r.as_str());
        }
        if let Some(n) = args.n {
            manifest.param("n", n as u64);
        }
        manifest.output(out);
        manifest.write_for(out)?;
    }

    println!(
        "{}: max |a - b| = {} (tol {})",
        if pass { "PASS" } else { "FAIL" },
        fmt_float(max_abs),
        fmt_float(args.tol)
    );
    Ok(if pass { 0 } else { 1 })
}
