//! Run directories, manifests and atomic writes.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Serialize)]
struct OutputEntry {
    file: String,
    sha256: String,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    command: &'a str,
    scenario: &'a serde_json::Value,
    scenario_hash: String,
    timestamp_unix: u64,
    version: &'a str,
    outputs: Vec<OutputEntry>,
}

/// Output directory of one run. Files are staged as `<name>.partial` and
/// renamed once complete.
pub struct RunDir {
    dir: PathBuf,
    force: bool,
    command: String,
    scenario: serde_json::Value,
    outputs: Vec<OutputEntry>,
}

impl RunDir {
    /// `out` if given, else `<root>/<command>-<hash prefix>`.
    pub fn open(
        out: Option<&Path>,
        root: &Path,
        command: &str,
        scenario: serde_json::Value,
        force: bool,
    ) -> anyhow::Result<RunDir> {
        let hash = scenario_hash(command, &scenario);
        let dir = match out {
            Some(p) => p.to_path_buf(),
            None => root.join(format!("{command}-{}", &hash[..12])),
        };
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(RunDir {
            dir,
            force,
            command: command.into(),
            scenario,
            outputs: Vec::new(),
        })
    }

    #[cfg(test)]
    pub fn path(&self) -> &Path {
        &self.dir
    }

    /// Refuses to proceed if any of `names` would be overwritten.
    pub fn claim(&self, names: &[&str]) -> anyhow::Result<()> {
        if self.force {
            return Ok(());
        }
        for name in names.iter().chain(std::iter::once(&"manifest.json")) {
            let p = self.dir.join(name);
            if p.exists() {
                bail!("{} exists; pass --force to overwrite", p.display());
            }
        }
        Ok(())
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> anyhow::Result<()> {
        let target = self.dir.join(name);
        let staged = self.dir.join(format!("{name}.partial"));
        fs::write(&staged, bytes).with_context(|| format!("writing {}", staged.display()))?;
        fs::rename(&staged, &target).with_context(|| format!("renaming to {}", target.display()))?;
        self.outputs.push(OutputEntry {
            file: name.into(),
            sha256: sha256_hex(bytes),
        });
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> anyhow::Result<()> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        self.write(name, &bytes)
    }

    pub fn finish(self) -> anyhow::Result<PathBuf> {
        let timestamp_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let manifest = Manifest {
            command: &self.command,
            scenario: &self.scenario,
            scenario_hash: scenario_hash(&self.command, &self.scenario),
            timestamp_unix,
            version: VERSION,
            outputs: self.outputs,
        };
        let mut bytes = serde_json::to_vec_pretty(&manifest)?;
        bytes.push(b'\n');
        let staged = self.dir.join("manifest.json.partial");
        fs::write(&staged, &bytes)?;
        fs::rename(&staged, self.dir.join("manifest.json"))?;
        Ok(self.dir)
    }
}

fn scenario_hash(command: &str, scenario: &serde_json::Value) -> String {
    let canonical = serde_json::json!({ "command": command, "scenario": scenario, "version": VERSION });
    sha256_hex(canonical.to_string().as_bytes())
}
