use std::path::PathBuf;

use g2kit_core::stream::simulate_stream;

use crate::commands::parse_rates;
use crate::manifest::ManifestBuilder;
use crate::stream_io::{sidecar_path, write_stream};
use crate::AppError;

#[derive(clap::Args)]
pub struct Args {
    /// Comma-separated stage rates, e.g. "2.0,1.0,1.0".
    #[arg(long)]
    pub rates: String,
    /// Observation window length.
    #[arg(long)]
    pub duration: f64,
    /// RNG seed; the same seed reproduces the stream byte for byte.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output timestamp file (.txt decimal lines or .f64 binary).
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: Args) -> Result<u8, AppError> {
    let rates = parse_rates(&args.rates)?;
    if !(args.duration > 0.0) {
        return Err(AppError::usage("--duration must be positive"));
    }
    let stream = simulate_stream(&rates, args.duration, args.seed)?;
    write_stream(&stream, &args.out)?;

    let mut manifest = ManifestBuilder::new("simulate");
    manifest
        .param("rates", args.rates.as_str())
        .param("duration", args.duration)
        .param("events", stream.len() as u64)
        .seed(args.seed)
        .output(&args.out)
        .output(&sidecar_path(&args.out));
    manifest.write_for(&args.out)?;
    println!("{} events over duration {}", stream.len(), args.duration);
    Ok(0)
}
