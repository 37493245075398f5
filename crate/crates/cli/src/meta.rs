//! Run-metadata files: every artifact is accompanied by a JSON record of the
//! full configuration, seeds and inputs, sufficient to reproduce the run.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::Result;

#[derive(Serialize)]
pub struct RunMetadata<'a> {
    pub artifact: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub config: &'a RunConfig,
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
}

impl<'a> RunMetadata<'a> {
    pub fn new(command: &'a str, config: &'a RunConfig) -> Self {
        Self {
            artifact: "rcae",
            version: env!("CARGO_PKG_VERSION"),
            command,
            config,
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
        }
    }

    pub fn input(mut self, key: &str, value: impl ToString) -> Self {
        self.inputs.insert(key.into(), value.to_string());
        self
    }

    pub fn output(mut self, key: &str, value: impl ToString) -> Self {
        self.outputs.insert(key.into(), value.to_string());
        self
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("metadata serializes");
        std::fs::write(path, text + "\n")?;
        Ok(())
    }
}

/// Sidecar naming: `<artifact>.<suffix>`.
pub fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let mut os = path.as_os_str().to_owned();
    os.push(".");
    os.push(suffix);
    PathBuf::from(os)
}

/// Joins relative paths onto `RCAE_OUT_DIR` when that override is set.
pub fn resolve_out(path: &Path) -> PathBuf {
    if path.is_relative() {
        if let Ok(base) = std::env::var("RCAE_OUT_DIR") {
            return Path::new(&base).join(path);
        }
    }
    path.to_path_buf()
}
