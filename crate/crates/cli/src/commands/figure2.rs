use std::path::PathBuf;

use g2kit_core::analytic::{g2_erlang_cascade, g2_incoherent_2ls, g2_mollow, MollowParams};

use crate::manifest::ManifestBuilder;
use crate::output::{tau_grid, CurveColumns, Format};
use crate::AppError;

/// The six-curve family: Poissonian reference, pumped two-level system,
/// strong coherent driving, and 3-, 6- and 26-stage cascades. All curves
/// use γ = 1; the cascade delay axes are scaled to the mean interval so
/// every panel spans three mean intervals either side of zero.
#[derive(clap::Args)]
pub struct Args {
    /// Directory for the six data files (created if missing).
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Points per side of each delay axis.
    #[arg(long, default_value_t = 600)]
    pub points: usize,
    /// Also write an SVG line plot per curve.
    #[arg(long)]
    pub plot: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

const GAMMA: f64 = 1.0;
/// Drive amplitude for the strong-driving panel, in units of γ.
const MOLLOW_OMEGA: f64 = 2.0;
const CASCADE_STAGES: [usize; 3] = [3, 6, 26];

pub fn run(args: Args) -> Result<u8, AppError> {
    if args.points < 2 {
        return Err(AppError::usage("--points must be at least 2"));
    }
    std::fs::create_dir_all(&args.out_dir)?;

    let mollow = MollowParams::new(GAMMA, MOLLOW_OMEGA * GAMMA)?;
    let curves: Vec<(&str, Box<dyn Fn(f64) -> g2kit_core::Result<f64>>, f64)> = vec![
        ("curve_i_coherent", Box::new(|_t| Ok(1.0)), 3.0 / GAMMA),
        (
            "curve_ii_two_level",
            Box::new(|t| g2_incoherent_2ls(GAMMA, GAMMA, t)),
            3.0 / GAMMA,
        ),
        (
            "curve_iii_mollow",
            Box::new(move |t| g2_mollow(mollow, t)),
            3.0 / GAMMA,
        ),
        cascade_curve("curve_iv_cascade_3", CASCADE_STAGES[0]),
        cascade_curve("curve_v_cascade_6", CASCADE_STAGES[1]),
        cascade_curve("curve_vi_cascade_26", CASCADE_STAGES[2]),
    ];

    let ext = match args.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    for (name, eval, tau_max) in curves {
        let grid = tau_grid(tau_max, args.points);
        let values: Vec<f64> = grid.iter().map(|&t| eval(t)).collect::<Result<_, _>>()?;
        let table = CurveColumns::new(vec!["tau", "g2"], vec![&grid, &values]);
        let path = args.out_dir.join(format!("{name}.{ext}"));
        table.write(&path, args.format, true)?;

        let mut manifest = ManifestBuilder::new("figure2");
        manifest
            .param("curve", name)
            .param("gamma", GAMMA)
            .param("tau_max", tau_max)
            .param("points", args.points as u64)
            .param("symmetric", true);
        if name.contains("mollow") {
            manifest.param("omega", MOLLOW_OMEGA * GAMMA);
        }
        manifest.output(&path);
        if args.plot {
            let plot = table.write_plot(&path, true)?;
            manifest.output(&plot);
        }
        manifest.write_for(&path)?;
    }
    println!("wrote 6 curves to {}", args.out_dir.display());
    Ok(0)
}

/// Cascade panel: mean interval n/γ, so the axis spans 3n/γ per side.
fn cascade_curve(
    name: &'static str,
    n: usize,
) -> (&'static str, Box<dyn Fn(f64) -> g2kit_core::Result<f64>>, f64) {
    (
        name,
        Box::new(move |t| g2_erlang_cascade(n, GAMMA, t)),
        3.0 * n as f64 / GAMMA,
    )
}
