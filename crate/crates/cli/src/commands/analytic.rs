use std::path::PathBuf;

use clap::ValueEnum;
use g2kit_core::analytic::{
    g2_cascade_closed_form, g2_erlang_cascade, g2_heitler, g2_incoherent_2ls, g2_mollow,
    MollowParams,
};

use crate::manifest::ManifestBuilder;
use crate::output::{tau_grid, CurveColumns, Format};
use crate::AppError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    /// Incoherently pumped two-level system.
    Incoherent,
    /// Weak coherent driving.
    Heitler,
    /// Strong coherent driving.
    Mollow,
    /// Equal-rate cascade (roots-of-unity form), any number of stages.
    Cascade,
    /// Dedicated closed forms for 2, 3 or 4 stages.
    CascadeClosed,
}

#[derive(clap::Args)]
pub struct Args {
    /// Curve family to evaluate.
    #[arg(value_enum)]
    pub model: Model,
    /// Incoherent pump rate.
    #[arg(long)]
    pub pump: Option<f64>,
    /// Decay rate γ.
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Coherent drive amplitude Ω.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Number of cascade stages.
    #[arg(long)]
    pub n: Option<usize>,
    /// Largest delay on the grid.
    #[arg(long, default_value_t = 10.0)]
    pub tau_max: f64,
    /// Number of grid points.
    #[arg(long, default_value_t = 1000)]
    pub points: usize,
    /// Mirror the curve to negative delays (stationarity).
    #[arg(long)]
    pub symmetric: bool,
    /// Also write an SVG line plot next to the data file.
    #[arg(long)]
    pub plot: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output data file.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn evaluate(args: &Args, tau: f64) -> Result<f64, AppError> {
    Ok(match args.model {
        Model::Incoherent => {
            let pump = args
                .pump
                .ok_or_else(|| AppError::usage("incoherent model needs --pump"))?;
            g2_incoherent_2ls(pump, args.gamma, tau)?
        }
        Model::Heitler => g2_heitler(args.gamma, tau)?,
        Model::Mollow => {
            let omega = args
                .omega
                .ok_or_else(|| AppError::usage("mollow model needs --omega"))?;
            g2_mollow(MollowParams::new(args.gamma, omega)?, tau)?
        }
        Model::Cascade => {
            let n = args
                .n
                .ok_or_else(|| AppError::usage("cascade model needs --n"))?;
            g2_erlang_cascade(n, args.gamma, tau)?
        }
        Model::CascadeClosed => {
            let n = args
                .n
                .ok_or_else(|| AppError::usage("cascade-closed model needs --n"))?;
            g2_cascade_closed_form(n, args.gamma, tau)?
        }
    })
}

pub fn run(args: Args) -> Result<u8, AppError> {
    if args.points < 2 {
        return Err(AppError::usage("--points must be at least 2"));
    }
    if !(args.tau_max > 0.0) {
        return Err(AppError::usage("--tau-max must be positive"));
    }
    let grid = tau_grid(args.tau_max, args.points);
    let values: Vec<f64> = grid
        .iter()
        .map(|&t| evaluate(&args, t))
        .collect::<Result<_, _>>()?;

    let table = CurveColumns::new(vec!["tau", "g2"], vec![&grid, &values]);
    table.write(&args.out, args.format, args.symmetric)?;

    let mut manifest = ManifestBuilder::new("analytic");
    manifest
        .param("model", format!("{:?}", args.model).to_lowercase())
        .param("gamma", args.gamma)
        .param("tau_max", args.tau_max)
        .param("points", args.points as u64)
        .param("symmetric", args.symmetric);
    if let Some(p) = args.pump {
        manifest.param("pump", p);
    }
    if let Some(w) = args.omega {
        manifest.param("omega", w);
    }
    if let Some(n) = args.n {
        manifest.param("n", n as u64);
    }
    manifest.output(&args.out);
    if args.plot {
        let plot = table.write_plot(&args.out, args.symmetric)?;
        manifest.output(&plot);
    }
    manifest.write_for(&args.out)?;
    Ok(0)
}
