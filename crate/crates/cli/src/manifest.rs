//! Run manifests: one per invocation, naming every file it wrote.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::config::Settings;
use crate::error::{io_err, json_err, CliResult};
use crate::io::write_json;

pub const TOOL: &str = "rieszcap";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Arguments after the program name, replayed by `rieszcap rerun`.
    pub argv: Vec<String>,
    /// Shape source (`builtin:<name>` or a file path), when the command used one.
    pub shape: Option<String>,
    pub dimension: Option<usize>,
    pub config: Settings,
    pub seed: u64,
    pub started_unix_secs: u64,
    pub wall_clock_secs: f64,
    pub timings: BTreeMap<String, f64>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn load(path: &Path) -> CliResult<RunManifest> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        serde_json::from_str(&text).map_err(|e| json_err(&path.display().to_string(), e))
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        write_json(path, self)
    }
}

/// Sidecar manifest path for a primary output: `hits.csv` → `hits.csv.manifest.json`.
pub fn manifest_path_for(output: &Path) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    output.with_file_name(name)
}

/// Wall-clock bookkeeping for the phases of one run.
#[derive(Debug)]
pub struct Timer {
    started: Instant,
    started_unix_secs: u64,
    phases: BTreeMap<String, f64>,
}

impl Default for Timer {
    fn default() -> Self {
        Self::new()
    }
}

impl Timer {
    pub fn new() -> Self {
        Timer {
            started: Instant::now(),
            started_unix_secs: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            phases: BTreeMap::new(),
        }
    }

    /// Runs `f`, adding its duration to `phase`.
    pub fn time<R>(&mut self, phase: &str, f: impl FnOnce() -> R) -> R {
        let t = Instant::now();
        let out = f();
        *self.phases.entry(phase.to_string()).or_default() += t.elapsed().as_secs_f64();
        out
    }

    pub fn phases(&self) -> &BTreeMap<String, f64> {
        &self.phases
    }

    pub fn elapsed(&self) -> f64 {
        self.started.elapsed().as_secs_f64()
    }

    pub fn started_unix_secs(&self) -> u64 {
        self.started_unix_secs
    }
}
