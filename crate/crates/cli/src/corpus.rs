//! Corpus runner: verify every `*.curve` file in a directory, in parallel,
//! aggregating results sorted by entry name. Failures are data, not errors.

use std::path::{Path, PathBuf};
use std::sync::Mutex;

use crate::error::CliError;
use crate::file::load_curve;
use crate::pipeline::{run_report, Command};

#[derive(Debug)]
pub struct CorpusSummary {
    /// `(entry name, outcome)` sorted by name; `Err` holds the failure text.
    pub entries: Vec<(String, Result<(), String>)>,
}

impl CorpusSummary {
    pub fn passed(&self) -> usize {
        self.entries.iter().filter(|(_, r)| r.is_ok()).count()
    }

    pub fn failed(&self) -> usize {
        self.entries.len() - self.passed()
    }

    pub fn machine_format(&self) -> String {
        let mut out = String::new();
        for (name, outcome) in &self.entries {
            match outcome {
                Ok(()) => out.push_str(&format!("corpus.{} = pass\n", name)),
                Err(msg) => out.push_str(&format!(
                    "corpus.{} = fail: {}\n",
                    name,
                    msg.replace('\n', "; ")
                )),
            }
        }
        out.push_str(&format!("corpus.failed = {}\n", self.failed()));
        out.push_str(&format!("corpus.passed = {}\n", self.passed()));
        out.push_str(&format!("corpus.total = {}\n", self.entries.len()));
        out
    }

    pub fn text_format(&self) -> String {
        let mut out = String::new();
        for (name, outcome) in &self.entries {
            match outcome {
                Ok(()) => out.push_str(&format!("PASS  {}\n", name)),
                Err(msg) => out.push_str(&format!("FAIL  {}: {}\n", name, msg.replace('\n', "; "))),
            }
        }
        out.push_str(&format!(
            "{} of {} passed\n",
            self.passed(),
            self.entries.len()
        ));
        out
    }
}

/// Verify every curve file under `dir`. Each entry runs the full `verify`
/// command; an empty directory yields an empty summary.
pub fn run_corpus(dir: &Path) -> Result<CorpusSummary, CliError> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError::Io { path: dir.display().to_string(), msg: e.to_string() })?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().map_or(false, |ext| ext == "curve"))
        .collect();
    paths.sort();

    let results: Mutex<Vec<(String, Result<(), String>)>> = Mutex::new(Vec::new());
    let next: Mutex<usize> = Mutex::new(0);
    let workers = std::thread::available_parallelism().map(|p| p.get()).unwrap_or(1).min(
        paths.len().max(1),
    );

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = {
                    let mut guard = next.lock().unwrap();
                    let idx = *guard;
                    *guard += 1;
                    idx
                };
                if idx >= paths.len() {
                    return;
                }
                let path = &paths[idx];
                let name = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string());
                let outcome = match load_curve(path) {
                    Err(e) => Err(e.to_string()),
                    Ok(cf) => match run_report(&cf, Command::Verify, None) {
                        Ok(_) => Ok(()),
                        Err(e) => Err(e.to_string()),
                    },
                };
                results.lock().unwrap().push((name, outcome));
            });
        }
    });

    let mut entries = results.into_inner().unwrap();
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(CorpusSummary { entries })
}
