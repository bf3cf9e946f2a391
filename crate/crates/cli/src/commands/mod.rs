pub mod analytic;
pub mod compare;
pub mod estimate;
pub mod figure2;
pub mod simulate;

use crate::AppError;

/// Parse a comma-separated rate list.
pub fn parse_rates(spec: &str) -> Result<g2kit_core::StageRates, AppError> {
    let rates: Vec<f64> = spec
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| AppError::usage(format!("bad rate value: {s:?}")))
        })
        .collect::<Result<_, _>>()?;
    Ok(g2kit_core::StageRates::new(rates)?)
}
