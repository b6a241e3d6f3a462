//! Run manifests: enough provenance to re-run a command and reproduce its
//! primary outputs byte for byte.

use crate::Result;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::Path;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    /// The invoking command line, argv-style.
    pub command: Vec<String>,
    /// SHA-256 of the resolved configuration JSON.
    pub config_digest: String,
    pub seeds: Vec<u64>,
    pub version: String,
    /// Wall-clock seconds per phase (construct / refine / rank-repair /
    /// simulate); timing varies across runs, primary outputs do not.
    pub wall_clock_s: BTreeMap<String, f64>,
}

impl RunManifest {
    pub fn new(command: Vec<String>, config: &impl Serialize, seeds: Vec<u64>) -> Result<Self> {
        Ok(Self {
            command,
            config_digest: digest(config)?,
            seeds,
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_clock_s: BTreeMap::new(),
        })
    }

    pub fn record_phase(&mut self, phase: &str, seconds: f64) {
        self.wall_clock_s.insert(phase.to_string(), seconds);
    }

    /// Writes `manifest.json` into the results directory; a directory holds
    /// exactly one manifest, so reruns overwrite it.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<()> {
        let path = dir.as_ref().join(MANIFEST_FILE);
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}

/// SHA-256 hex digest of a configuration's canonical JSON encoding.
pub fn digest(config: &impl Serialize) -> Result<String> {
    let json = serde_json::to_string(config)?;
    Ok(hex::encode(Sha256::digest(json.as_bytes())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable_and_input_sensitive() {
        let a = digest(&serde_json::json!({"n": 64, "k": 32})).unwrap();
        let b = digest(&serde_json::json!({"n": 64, "k": 32})).unwrap();
        let c = digest(&serde_json::json!({"n": 64, "k": 33})).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 64);
    }

    #[test]
    fn manifest_writes_one_file_per_directory() {
        let dir = tempfile::tempdir().unwrap();
        let mut manifest =
            RunManifest::new(vec!["construct".into()], &serde_json::json!({}), vec![1]).unwrap();
        manifest.record_phase("construct", 1.25);
        manifest.write(dir.path()).unwrap();
        manifest.write(dir.path()).unwrap();
        let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
        assert_eq!(entries.len(), 1);
        let text = std::fs::read_to_string(dir.path().join(MANIFEST_FILE)).unwrap();
        assert!(text.contains("config_digest"));
    }
}
