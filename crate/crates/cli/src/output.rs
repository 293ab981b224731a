//! Output directories and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde_json::Value;

/// Files produced by one invocation, written together once the run succeeded.
pub struct OutputSet {
    dir: PathBuf,
    force: bool,
    files: Vec<(String, Vec<u8>)>,
}

impl OutputSet {
    pub fn new(dir: &Path, force: bool) -> Self {
        OutputSet {
            dir: dir.to_path_buf(),
            force,
            files: Vec::new(),
        }
    }

    pub fn add(&mut self, name: impl Into<String>, bytes: impl Into<Vec<u8>>) {
        self.files.push((name.into(), bytes.into()));
    }

    /// Fails before touching the disk if any target exists and `--force` is
    /// absent. The manifest lists every file and is written last.
    pub fn finish(mut self, mut manifest: Value) -> Result<Vec<PathBuf>> {
        let names: Vec<String> = self.files.iter().map(|(n, _)| n.clone()).collect();
        manifest["files"] = Value::from(names);
        let text = serde_json::to_string_pretty(&manifest)? + "\n";
        self.add("manifest.json", text);

        if !self.force {
            for (name, _) in &self.files {
                let path = self.dir.join(name);
                if path.exists() {
                    bail!("{} already exists; pass --force to overwrite", path.display());
                }
            }
        }
        fs::create_dir_all(&self.dir).with_context(|| format!("creating {}", self.dir.display()))?;
        let mut written = Vec::new();
        for (name, bytes) in &self.files {
            let path = self.dir.join(name);
            fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
            written.push(path);
        }
        Ok(written)
    }
}
