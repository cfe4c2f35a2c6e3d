//! Run manifest written alongside every output directory.

use std::fmt::Write as _;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use growth_lab::RNG_ALGORITHM;

pub const MANIFEST_FILE: &str = "manifest.txt";
pub const MANIFEST_HEADER: &str = "# growth-lab manifest v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Incomplete,
    Complete,
    Failed,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Incomplete => "incomplete",
            Status::Complete => "complete",
            Status::Failed => "failed",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunManifest {
    pub subcommand: String,
    pub scenario_hash: String,
    pub seed: u64,
    pub workers: usize,
    pub started_unix: u64,
    pub finished_unix: Option<u64>,
    pub status: Status,
    pub exit_code: Option<i32>,
    pub outputs: Vec<String>,
}

pub fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

impl RunManifest {
    pub fn start(subcommand: &str, scenario_hash: String, seed: u64, workers: usize) -> Self {
        Self {
            subcommand: subcommand.into(),
            scenario_hash,
            seed,
            workers,
            started_unix: unix_now(),
            finished_unix: None,
            status: Status::Incomplete,
            exit_code: None,
            outputs: Vec::new(),
        }
    }

    pub fn finish(&mut self, status: Status, exit_code: i32) {
        self.status = status;
        self.exit_code = Some(exit_code);
        self.finished_unix = Some(unix_now());
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{MANIFEST_HEADER}");
        let _ = writeln!(s, "status={}", self.status.as_str());
        let _ = writeln!(s, "subcommand={}", self.subcommand);
        let _ = writeln!(s, "scenario_sha256={}", self.scenario_hash);
        let _ = writeln!(s, "seed={}", self.seed);
        let _ = writeln!(s, "rng={RNG_ALGORITHM}");
        let _ = writeln!(s, "version={}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(s, "workers={}", self.workers);
        let _ = writeln!(s, "started_unix={}", self.started_unix);
        if let Some(t) = self.finished_unix {
            let _ = writeln!(s, "finished_unix={t}");
        }
        if let Some(c) = self.exit_code {
            let _ = writeln!(s, "exit_code={c}");
        }
        let _ = writeln!(s, "outputs={}", self.outputs.join(","));
        s
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::write(dir.join(MANIFEST_FILE), self.render())
    }
}
