use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

/// What a subcommand read, wrote and was configured with. Contains no
/// timestamps, so identical runs write identical manifests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub arguments: Vec<String>,
    pub config_digest: Option<String>,
    pub seeds: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub settings: BTreeMap<String, Value>,
    pub inputs: Vec<FileDigest>,
    pub artifacts: Vec<FileDigest>,
}

pub struct Run {
    out_dir: PathBuf,
    seed: u64,
    previous: Option<RunManifest>,
    manifest: RunManifest,
}

fn sha256(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Run {
    pub fn start(
        out_dir: &Path,
        command: &str,
        arguments: Vec<String>,
        config_digest: Option<String>,
        seed: u64,
        verify: bool,
    ) -> Result<Self> {
        fs::create_dir_all(out_dir).with_context(|| format!("creating `{}`", out_dir.display()))?;
        let manifest_path = out_dir.join(format!("manifest-{command}.json"));
        let previous = if verify {
            let text = fs::read(&manifest_path)
                .with_context(|| format!("--verify-manifest needs `{}`", manifest_path.display()))?;
            Some(serde_json::from_slice(&text).with_context(|| format!("parsing `{}`", manifest_path.display()))?)
        } else {
            None
        };
        let mut seeds = BTreeMap::new();
        seeds.insert("global".to_string(), seed);
        Ok(Self {
            out_dir: out_dir.to_path_buf(),
            seed,
            previous,
            manifest: RunManifest {
                tool: "segmap".into(),
                version: env!("CARGO_PKG_VERSION").into(),
                command: command.into(),
                arguments,
                config_digest,
                seeds,
                settings: BTreeMap::new(),
                inputs: Vec::new(),
                artifacts: Vec::new(),
            },
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn record_seed(&mut self, name: &str, value: u64) {
        self.manifest.seeds.insert(name.into(), value);
    }

    pub fn record<T: Serialize>(&mut self, key: &str, value: &T) -> Result<()> {
        self.manifest.settings.insert(key.into(), serde_json::to_value(value)?);
        Ok(())
    }

    /// Reads an input file and records its digest.
    pub fn read(&mut self, path: &Path) -> Result<Vec<u8>> {
        let bytes = fs::read(path).with_context(|| format!("reading `{}`", path.display()))?;
        let entry = FileDigest { path: path.display().to_string(), sha256: sha256(&bytes) };
        if !self.manifest.inputs.contains(&entry) {
            self.manifest.inputs.push(entry);
        }
        Ok(bytes)
    }

    pub fn read_json<T: serde::de::DeserializeOwned>(&mut self, path: &Path) -> Result<T> {
        let bytes = self.read(path)?;
        serde_json::from_slice(&bytes).with_context(|| format!("parsing `{}`", path.display()))
    }

    /// Writes `bytes` to `name` inside the output directory.
    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.out_dir.join(name);
        fs::write(&path, bytes).with_context(|| format!("writing `{}`", path.display()))?;
        self.manifest.artifacts.retain(|a| a.path != name);
        self.manifest.artifacts.push(FileDigest { path: name.into(), sha256: sha256(bytes) });
        Ok(path)
    }

    pub fn write_with<F>(&mut self, name: &str, f: F) -> Result<PathBuf>
    where
        F: FnOnce(&mut Vec<u8>) -> segmap::Result<()>,
    {
        let mut buf = Vec::new();
        f(&mut buf)?;
        self.write(name, &buf)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_vec_pretty(value)?;
        text.push(b'\n');
        self.write(name, &text)
    }

    pub fn finish(mut self) -> Result<()> {
        if let Some(previous) = self.previous.take() {
            let before: BTreeMap<&str, &str> =
                previous.artifacts.iter().map(|a| (a.path.as_str(), a.sha256.as_str())).collect();
            let after: BTreeMap<&str, &str> =
                self.manifest.artifacts.iter().map(|a| (a.path.as_str(), a.sha256.as_str())).collect();
            if before != after {
                let differing: Vec<&str> = before
                    .keys()
                    .chain(after.keys())
                    .filter(|k| before.get(*k) != after.get(*k))
                    .copied()
                    .collect::<std::collections::BTreeSet<_>>()
                    .into_iter()
                    .collect();
                bail!("manifest verification failed; artifacts differ: {}", differing.join(", "));
            }
            eprintln!("manifest verified: {} artifacts match", after.len());
        }
        let name = format!("manifest-{}.json", self.manifest.command);
        let mut text = serde_json::to_vec_pretty(&self.manifest)?;
        text.push(b'\n');
        let path = self.out_dir.join(&name);
        fs::write(&path, &text).with_context(|| format!("writing `{}`", path.display()))?;
        Ok(())
    }
}
