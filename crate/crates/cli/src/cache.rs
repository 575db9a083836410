//! Content-addressed storage of stage outputs.

use std::fs;
use std::path::{Path, PathBuf};

use log::{debug, info};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageManifest {
    pub stage: String,
    pub input_hash: String,
    pub params: Value,
    pub output_path: PathBuf,
    pub tool_version: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// Writes unless the file already holds exactly `bytes`.
pub fn write_if_changed(path: &Path, bytes: &[u8]) -> Result<()> {
    if fs::read(path).is_ok_and(|old| old == bytes) {
        debug!("{} unchanged", path.display());
        return Ok(());
    }
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
    }
    fs::write(path, bytes).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: PathBuf) -> Self {
        Cache { dir }
    }

    fn manifest_path(&self, stage: &str, key: &str) -> PathBuf {
        self.dir.join(format!("{stage}-{}.manifest.json", &key[..16]))
    }

    /// Output of `stage` for this input and parameter set, computing and
    /// storing it on a miss.
    pub fn stage(&self, stage: &str, input: &[u8], params: Value, compute: impl FnOnce() -> Result<Vec<u8>>) -> Result<Vec<u8>> {
        let input_hash = sha256_hex(input);
        // different parameters on the same input get their own entry
        let key = sha256_hex(format!("{input_hash}{params}").as_bytes());
        let manifest = StageManifest {
            stage: stage.to_string(),
            input_hash: input_hash.clone(),
            params,
            output_path: self.dir.join(format!("{stage}-{}.json", &key[..16])),
            tool_version: TOOL_VERSION.to_string(),
        };
        let mpath = self.manifest_path(stage, &key);
        if let Ok(bytes) = fs::read(&mpath) {
            match serde_json::from_slice::<StageManifest>(&bytes) {
                Ok(old) if old == manifest => {
                    if let Ok(out) = fs::read(&manifest.output_path) {
                        info!("{stage}: cache hit ({})", manifest.output_path.display());
                        return Ok(out);
                    }
                }
                _ => debug!("{stage}: stale manifest {}", mpath.display()),
            }
        }
        info!("{stage}: computing");
        let out = compute()?;
        write_if_changed(&manifest.output_path, &out)?;
        let mut text = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
        text.push(b'\n');
        write_if_changed(&mpath, &text)?;
        Ok(out)
    }
}
