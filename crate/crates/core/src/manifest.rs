//! Run manifests: provenance plus a 64-bit XXH3 digest of every output file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use xxhash_rust::xxh3::xxh3_64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDigest {
    /// Relative to the manifest's directory.
    pub path: String,
    pub bytes: u64,
    pub xxh3_64: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub tool_version: String,
    pub command_line: Vec<String>,
    /// The `--seed` argument exactly as given.
    pub seed: Option<String>,
    pub seed_value: Option<u64>,
    pub parameters: serde_json::Value,
    pub started_at: String,
    pub finished_at: String,
    #[serde(default)]
    pub truncated: bool,
    pub outputs: Vec<OutputDigest>,
}

impl RunManifest {
    pub fn begin(command_line: Vec<String>, seed: Option<&str>, parameters: serde_json::Value) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME").into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            command_line,
            seed: seed.map(str::to_string),
            seed_value: seed.and_then(|s| parse_seed(s).ok()),
            parameters,
            started_at: now(),
            finished_at: String::new(),
            truncated: false,
            outputs: Vec::new(),
        }
    }

    /// Records the digest of `file`, stored relative to `base`.
    pub fn add_output(&mut self, base: &Path, file: &Path) -> Result<()> {
        let bytes = std::fs::read(file).map_err(|e| Error::io(file, e))?;
        let rel = file.strip_prefix(base).unwrap_or(file);
        self.outputs.push(OutputDigest {
            path: rel.to_string_lossy().into_owned(),
            bytes: bytes.len() as u64,
            xxh3_64: digest_hex(&bytes),
        });
        Ok(())
    }

    pub fn finish_and_write(&mut self, path: &Path) -> Result<()> {
        self.finished_at = now();
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

pub fn digest_hex(bytes: &[u8]) -> String {
    format!("{:016x}", xxh3_64(bytes))
}

/// Accepts decimal or `0x`-prefixed hexadecimal.
pub fn parse_seed(s: &str) -> Result<u64> {
    let t = s.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse(),
    };
    parsed.map_err(|_| Error::Parameter(format!("seed {s:?} is neither decimal nor 0x-hex u64")))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigestCheck {
    pub path: PathBuf,
    pub ok: bool,
    pub detail: String,
}

/// Re-hashes every output listed in the manifest at `path`.
pub fn verify(path: &Path) -> Result<Vec<DigestCheck>> {
    let manifest = RunManifest::read(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    Ok(manifest
        .outputs
        .iter()
        .map(|o| {
            let file = base.join(&o.path);
            match std::fs::read(&file) {
                Ok(bytes) => {
                    let got = digest_hex(&bytes);
                    DigestCheck {
                        ok: got == o.xxh3_64 && bytes.len() as u64 == o.bytes,
                        detail: format!("expected {} got {}", o.xxh3_64, got),
                        path: file,
                    }
                }
                Err(e) => DigestCheck {
                    path: file,
                    ok: false,
                    detail: e.to_string(),
                },
            }
        })
        .collect())
}
