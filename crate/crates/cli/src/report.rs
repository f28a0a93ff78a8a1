//! Report and CSV emission.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::CliResult;

pub struct Output {
    dir: PathBuf,
}

impl Output {
    pub fn create(dir: &Path) -> CliResult<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// Writes `name` with a header row and one record per row.
    pub fn csv<R: Serialize>(
        &self,
        name: &str,
        header: &[&str],
        rows: impl IntoIterator<Item = R>,
    ) -> CliResult<()> {
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_path(self.path(name))?;
        w.write_record(header)?;
        for row in rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes `report.json`: command, config hash, effective config, tolerances and result.
    pub fn report(
        &self,
        command: &str,
        config: &RunConfig,
        tolerances: Value,
        result: Value,
    ) -> CliResult<()> {
        let config_json = serde_json::to_value(config)?;
        let report = json!({
            "command": command,
            "version": env!("CARGO_PKG_VERSION"),
            "config_sha256": config_hash(config)?,
            "seed": config.seed,
            "config": config_json,
            "tolerances": tolerances,
            "result": result,
        });
        let mut text = serde_json::to_string_pretty(&report)?;
        text.push('\n');
        fs::write(self.path("report.json"), text)?;
        Ok(())
    }
}

/// SHA-256 of the compact JSON serialization of the effective configuration.
pub fn config_hash(config: &RunConfig) -> CliResult<String> {
    let bytes = serde_json::to_vec(config)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}
