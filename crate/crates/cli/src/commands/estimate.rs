use std::path::PathBuf;

use g2kit_core::stream::{apply_jitter, estimate_g2};

use crate::manifest::ManifestBuilder;
use crate::output::{CurveColumns, Format};
use crate::stream_io::read_stream;
use crate::AppError;

#[derive(clap::Args)]
pub struct Args {
    /// Timestamp file (.txt or .f64); a `<input>.meta.json` sidecar is
    /// used for the duration and default grid when present.
    #[arg(long)]
    pub input: PathBuf,
    /// Histogram bin width Δτ; defaults to 0.01 mean intervals.
    #[arg(long)]
    pub bin: Option<f64>,
    /// Largest delay; defaults to 30 mean intervals.
    #[arg(long)]
    pub tau_max: Option<f64>,
    /// Gaussian detector jitter (standard deviation) applied to the
    /// timestamps before binning.
    #[arg(long)]
    pub jitter: Option<f64>,
    /// Seed for the jitter noise.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Mirror the histogram to negative delays.
    #[arg(long)]
    pub symmetric: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output curve file.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: Args) -> Result<u8, AppError> {
    let mut stream = read_stream(&args.input)?;
    if let Some(sigma) = args.jitter {
        stream = apply_jitter(&stream, sigma, args.seed)?;
    }

    // Default grid from the empirical mean interval: fine enough to
    // resolve the rise, long enough to reach the plateau.
    let mean_interval = if stream.len() > 1 {
        stream.duration() / stream.len() as f64
    } else {
        return Err(AppError::validation("stream has too few events to bin"));
    };
    let bin = args.bin.unwrap_or(0.01 * mean_interval);
    let tau_max = args.tau_max.unwrap_or(30.0 * mean_interval);

    let curve = estimate_g2(&stream, bin, tau_max)?;
    let errors = curve.errors().map(<[f64]>::to_vec).unwrap_or_default();
    let mut headers = vec!["tau", "g2"];
    let mut columns: Vec<&[f64]> = vec![curve.tau(), curve.values()];
    if !errors.is_empty() {
        headers.push("stderr");
        columns.push(&errors);
    }
    let table = CurveColumns::new(headers, columns);
    table.write(&args.out, args.format, args.symmetric)?;

    let mut manifest = ManifestBuilder::new("estimate");
    manifest
        .param("input", args.input.display().to_string())
        .param("bin", bin)
        .param("tau_max", tau_max)
        .param("events", stream.len() as u64)
        .param("symmetric", args.symmetric);
    if let Some(sigma) = args.jitter {
        manifest.param("jitter", sigma).seed(args.seed);
    }
    manifest.output(&args.out);
    manifest.write_for(&args.out)?;
    Ok(0)
}
