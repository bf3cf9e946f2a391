//! Timestamp file formats: `.txt` (one decimal timestamp per line,
//! ascending) or `.f64` (little-endian IEEE doubles, ascending), with a
//! JSON sidecar carrying duration, rates, seed and generator identity.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use g2kit_core::stream::{PhotonStream, StreamMeta};

use crate::output::fmt_float;
use crate::AppError;

#[derive(Serialize, Deserialize)]
pub struct StreamSidecar {
    pub version: String,
    pub duration: f64,
    pub rates: Vec<f64>,
    pub seed: u64,
    pub generator: String,
    pub event_count: u64,
}

pub fn sidecar_path(data_path: &Path) -> PathBuf {
    let mut name = data_path.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    data_path.with_file_name(name)
}

pub fn write_stream(stream: &PhotonStream, path: &Path) -> Result<(), AppError> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("txt") => {
            let mut body = String::with_capacity(stream.len() * 24);
            for &t in stream.timestamps() {
                body.push_str(&fmt_float(t));
                body.push('\n');
            }
            std::fs::write(path, body)?;
        }
        Some("f64") => {
            let mut bytes = Vec::with_capacity(stream.len() * 8);
            for &t in stream.timestamps() {
                bytes.extend_from_slice(&t.to_le_bytes());
            }
            std::fs::write(path, bytes)?;
        }
        _ => {
            return Err(AppError::usage(
                "output extension must be .txt or .f64".to_string(),
            ))
        }
    }
    let meta = stream.meta.as_ref();
    let sidecar = StreamSidecar {
        version: env!("CARGO_PKG_VERSION").to_string(),
        duration: stream.duration(),
        rates: meta.map(|m| m.rates.clone()).unwrap_or_default(),
        seed: meta.map(|m| m.seed).unwrap_or_default(),
        generator: meta
            .map(|m| m.generator.clone())
            .unwrap_or_else(|| g2kit_core::rng::GENERATOR_ID.to_string()),
        event_count: stream.len() as u64,
    };
    let mut body =
        serde_json::to_string_pretty(&sidecar).map_err(|e| AppError::io(e.to_string()))?;
    body.push('\n');
    std::fs::write(sidecar_path(path), body)?;
    Ok(())
}

pub fn read_stream(path: &Path) -> Result<PhotonStream, AppError> {
    let timestamps: Vec<f64> = match path.extension().and_then(|e| e.to_str()) {
        Some("txt") => {
            let body = std::fs::read_to_string(path)?;
            body.lines()
                .filter(|l| !l.trim().is_empty())
                .map(|l| {
                    l.trim()
                        .parse::<f64>()
                        .map_err(|_| AppError::validation(format!("bad timestamp line: {l:?}")))
                })
                .collect::<Result<_, _>>()?
        }
        Some("f64") => {
            let bytes = std::fs::read(path)?;
            if bytes.len() % 8 != 0 {
                return Err(AppError::validation(
                    "binary timestamp file length is not a multiple of 8".to_string(),
                ));
            }
            bytes
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                .collect()
        }
        _ => {
            return Err(AppError::usage(
                "input extension must be .txt or .f64".to_string(),
            ))
        }
    };

    let sidecar: Option<StreamSidecar> = std::fs::read_to_string(sidecar_path(path))
        .ok()
        .and_then(|body| serde_json::from_str(&body).ok());
    let duration = sidecar
        .as_ref()
        .map(|s| s.duration)
        .or_else(|| timestamps.last().copied())
        .ok_or_else(|| AppError::validation("empty stream with no sidecar metadata".to_string()))?;

    let mut stream = PhotonStream::from_timestamps(timestamps, duration)?;
    if let Some(s) = sidecar {
        if !s.rates.is_empty() {
            stream.meta = Some(StreamMeta {
                seed: s.seed,
                rates: s.rates,
                generator: s.generator,
            });
        }
    }
    Ok(stream)
}
