//! Run manifests: every output file is accompanied by a manifest whose
//! parameters reproduce the data byte for byte.

use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::AppError;

#[derive(Serialize)]
pub struct RunManifest {
    pub version: String,
    pub command: String,
    pub parameters: Map<String, Value>,
    pub seed: Option<u64>,
    pub generator: String,
    pub outputs: Vec<String>,
    pub wall_clock_seconds: f64,
}

pub struct ManifestBuilder {
    command: String,
    parameters: Map<String, Value>,
    seed: Option<u64>,
    outputs: Vec<String>,
    started: Instant,
}

impl ManifestBuilder {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            parameters: Map::new(),
            seed: None,
            outputs: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn seed(&mut self, seed: u64) -> &mut Self {
        self.seed = Some(seed);
        self
    }

    pub fn output(&mut self, path: &Path) -> &mut Self {
        self.outputs.push(path.display().to_string());
        self
    }

    /// Write `<data_path>.manifest.json`.
    pub fn write_for(&self, data_path: &Path) -> Result<(), AppError> {
        let manifest = RunManifest {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: self.command.clone(),
            parameters: self.parameters.clone(),
            seed: self.seed,
            generator: g2kit_core::rng::GENERATOR_ID.to_string(),
            outputs: self.outputs.clone(),
            wall_clock_seconds: self.started.elapsed().as_secs_f64(),
        };
        let mut name = data_path.file_name().unwrap_or_default().to_os_string();
        name.push(".manifest.json");
        let path = data_path.with_file_name(name);
        let mut body = serde_json::to_string_pretty(&manifest)
            .map_err(|e| AppError::io(e.to_string()))?;
        body.push('\n');
        std::fs::write(&path, body)?;
        Ok(())
    }
}
