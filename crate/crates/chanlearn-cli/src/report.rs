use crate::config::Settings;
use anyhow::{Context, Result};
use chanlearn::transcript::{BoundCheck, TranscriptRow};
use serde::Serialize;
use serde_json::{Map, Value};
use std::fs;
use std::path::Path;

/// What one run produced.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub rows: Vec<TranscriptRow>,
    pub checks: Vec<BoundCheck>,
    pub details: Map<String, Value>,
    /// One JSON object per answered query.
    pub queries: Vec<Value>,
}

impl Report {
    pub fn check(&mut self, name: &str, lhs: f64, rhs: f64) {
        self.checks.push(BoundCheck::new(name, lhs, rhs));
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) {
        self.details.insert(key.to_string(), serde_json::to_value(value).expect("serializable detail"));
    }

    pub fn mistakes(&self) -> usize {
        self.rows.iter().filter(|r| r.mistake).count()
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Serialize)]
struct SummaryJson<'a> {
    scenario: &'static str,
    seed: u64,
    config: &'a Settings,
    rounds: usize,
    mistakes: usize,
    checks: Vec<CheckJson<'a>>,
    all_passed: bool,
    details: &'a Map<String, Value>,
}

#[derive(Serialize)]
struct CheckJson<'a> {
    name: &'a str,
    lhs: f64,
    rhs: f64,
    status: &'static str,
}

pub fn summary_json(settings: &Settings, seed: u64, report: &Report) -> String {
    let s = SummaryJson {
        scenario: settings.scenario.name(),
        seed,
        config: settings,
        rounds: report.rows.len(),
        mistakes: report.mistakes(),
        checks: report
            .checks
            .iter()
            .map(|c| CheckJson { name: &c.name, lhs: c.lhs, rhs: c.rhs, status: if c.passed { "PASS" } else { "FAIL" } })
            .collect(),
        all_passed: report.all_passed(),
        details: &report.details,
    };
    serde_json::to_string(&s).expect("summary serializes")
}

/// Writes `rows.csv`, `queries.jsonl` (when present) and `summary.json`.
pub fn write_files(dir: &Path, summary: &str, report: &Report) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    if !report.rows.is_empty() {
        let path = dir.join("rows.csv");
        let mut w = csv::Writer::from_path(&path).with_context(|| format!("opening {}", path.display()))?;
        for row in &report.rows {
            w.serialize(row)?;
        }
        w.flush()?;
    }
    if !report.queries.is_empty() {
        let mut text = String::new();
        for q in &report.queries {
            text.push_str(&q.to_string());
            text.push('\n');
        }
        fs::write(dir.join("queries.jsonl"), text)?;
    }
    fs::write(dir.join("summary.json"), format!("{summary}\n"))?;
    Ok(())
}

/// One line per failed inequality.
pub fn violations(seed: u64, report: &Report) -> Vec<String> {
    report.checks.iter().filter(|c| !c.passed).map(|c| format!("violated {}: {} > {} (seed {seed})", c.name, c.lhs, c.rhs)).collect()
}
