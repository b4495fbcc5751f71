//! `manifest.json`: what a run was asked to do and a SHA-256 of every file it wrote.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    /// Relative to the output directory.
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub scenario_paths: Vec<String>,
    pub drop: String,
    pub output_dir: String,
    pub files: Vec<ManifestEntry>,
    pub tool_version: String,
    pub timestamp_unix_s: u64,
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(Sha256::digest(&bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect())
}

impl RunManifest {
    pub fn new(
        command: &str,
        scenario_paths: Vec<String>,
        drop: String,
        output_dir: &Path,
    ) -> Self {
        Self {
            command: command.to_owned(),
            scenario_paths,
            drop,
            output_dir: output_dir.display().to_string(),
            files: Vec::new(),
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            timestamp_unix_s: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }

    /// Hashes `file` (relative to the output directory) and lists it.
    pub fn record(&mut self, file: &str) -> Result<()> {
        let sha256 = sha256_file(&Path::new(&self.output_dir).join(file))?;
        self.files.push(ManifestEntry {
            file: file.to_owned(),
            sha256,
        });
        Ok(())
    }

    pub fn write(&self) -> Result<PathBuf> {
        let path = Path::new(&self.output_dir).join(MANIFEST_FILE);
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST_FILE);
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            location: format!("{}:{}:{}", path.display(), e.line(), e.column()),
            message: e.to_string(),
        })
    }

    /// Files that are missing or whose content no longer matches.
    pub fn verify(&self, dir: &Path) -> Vec<String> {
        self.files
            .iter()
            .filter(|e| sha256_file(&dir.join(&e.file)).ok().as_deref() != Some(&e.sha256))
            .map(|e| e.file.clone())
            .collect()
    }
}
