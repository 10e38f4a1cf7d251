//! Output directory bookkeeping: every file goes through [`Outputs`] so it
//! lands in the manifest with its checksum.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::formats::sha256_hex;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Artifact {
    pub file_name: String,
    pub kind: String,
    pub checksum: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunManifest {
    pub config_echo: RunConfig,
    pub tool_version: String,
    /// Seconds. Not part of any checksum.
    pub wall_time: f64,
    pub artifacts: Vec<Artifact>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

pub struct Outputs {
    dir: PathBuf,
    artifacts: Vec<Artifact>,
    started: Instant,
}

impl Outputs {
    pub fn create(dir: &Path) -> CliResult<Self> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::write(dir, e))?;
        Ok(Outputs { dir: dir.to_path_buf(), artifacts: Vec::new(), started: Instant::now() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn artifacts(&self) -> &[Artifact] {
        &self.artifacts
    }

    pub fn write(&mut self, name: &str, kind: &str, bytes: &[u8]) -> CliResult<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, bytes).map_err(|e| CliError::write(&path, e))?;
        self.artifacts.retain(|a| a.file_name != name);
        self.artifacts.push(Artifact { file_name: name.into(), kind: kind.into(), checksum: sha256_hex(bytes) });
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, kind: &str, value: &T) -> CliResult<()> {
        let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::numerical(format!("json: {e}")))?;
        bytes.push(b'\n');
        self.write(name, kind, &bytes)
    }

    /// Writes `manifest.json` and returns the manifest.
    pub fn finish(self, config: &RunConfig) -> CliResult<RunManifest> {
        let m = RunManifest {
            config_echo: config.clone(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            wall_time: self.started.elapsed().as_secs_f64(),
            artifacts: self.artifacts,
        };
        let path = self.dir.join(MANIFEST_FILE);
        let bytes = serde_json::to_vec_pretty(&m).map_err(|e| CliError::numerical(format!("json: {e}")))?;
        std::fs::write(&path, bytes).map_err(|e| CliError::write(&path, e))?;
        Ok(m)
    }
}

/// Re-reads every artifact of a manifest and compares checksums.
/// Returns the names that are missing or differ.
pub fn verify(dir: &Path, artifacts: &[Artifact]) -> Vec<String> {
    artifacts
        .iter()
        .filter(|a| match std::fs::read(dir.join(&a.file_name)) {
            Ok(b) => sha256_hex(&b) != a.checksum,
            Err(_) => true,
        })
        .map(|a| a.file_name.clone())
        .collect()
}
