use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::config::NUM_STREETS;
use crate::error::{Error, Result};

/// Outcome of one controller over a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub controller: String,
    /// Vehicle-seconds.
    pub total_delay: u64,
    pub per_period_delay: Vec<u64>,
    pub max_sqs: u32,
    pub delay_per_street: [u64; NUM_STREETS],
    pub candidates_evaluated: u64,
    /// Phase-1 green chosen for each period.
    pub greens: Vec<u32>,
    pub vehicles_processed: u64,
    pub critical_ticks: [u64; NUM_STREETS],
    /// Total queue after every tick; written to the series CSV.
    #[serde(skip)]
    pub sqs_series: Vec<u32>,
    /// Not exported, so report files stay reproducible.
    #[serde(skip)]
    pub wall_clock: Duration,
}

/// `100 · (1 − value / baseline)`; zero when the baseline is zero.
pub fn improvement_pct(value: f64, baseline: f64) -> f64 {
    if baseline == 0.0 {
        0.0
    } else {
        100.0 * (1.0 - value / baseline)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub controller: String,
    pub total_delay: u64,
    pub max_sqs: u32,
    /// Against the fixed-time run, when present.
    pub delay_improvement_pct: Option<f64>,
    pub queue_improvement_pct: Option<f64>,
    pub candidates_evaluated: u64,
    pub vehicles_processed: u64,
    pub delay_per_street: [u64; NUM_STREETS],
    pub critical_ticks: [u64; NUM_STREETS],
    pub per_period_delay: Vec<u64>,
    pub greens: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub scenario: String,
    pub seed: u64,
    pub baseline: Option<String>,
    pub controllers: Vec<SummaryRow>,
}

impl Summary {
    pub fn new(scenario: &str, seed: u64, reports: &[RunReport]) -> Self {
        let base = reports.iter().find(|r| r.controller == "fixed");
        let controllers = reports
            .iter()
            .map(|r| SummaryRow {
                controller: r.controller.clone(),
                total_delay: r.total_delay,
                max_sqs: r.max_sqs,
                delay_improvement_pct: base.map(|b| improvement_pct(r.total_delay as f64, b.total_delay as f64)),
                queue_improvement_pct: base.map(|b| improvement_pct(f64::from(r.max_sqs), f64::from(b.max_sqs))),
                candidates_evaluated: r.candidates_evaluated,
                vehicles_processed: r.vehicles_processed,
                delay_per_street: r.delay_per_street,
                critical_ticks: r.critical_ticks,
                per_period_delay: r.per_period_delay.clone(),
                greens: r.greens.clone(),
            })
            .collect();
        Self { scenario: scenario.to_owned(), seed, baseline: base.map(|b| b.controller.clone()), controllers }
    }

    pub fn table(&self) -> String {
        let pct = |p: Option<f64>| p.map_or_else(|| "-".to_owned(), |p| format!("{p:.1}%"));
        let mut out = String::new();
        writeln!(
            out,
            "{:<10} {:>14} {:>8} {:>10} {:>10} {:>11}",
            "controller", "delay (veh-s)", "max SQS", "delay imp", "queue imp", "candidates"
        )
        .unwrap();
        for r in &self.controllers {
            writeln!(
                out,
                "{:<10} {:>14} {:>8} {:>10} {:>10} {:>11}",
                r.controller,
                r.total_delay,
                r.max_sqs,
                pct(r.delay_improvement_pct),
                pct(r.queue_improvement_pct),
                r.candidates_evaluated
            )
            .unwrap();
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExportedFiles {
    pub summary: PathBuf,
    pub series: PathBuf,
}

/// Writes the summary (`summary.json` or `summary.txt`) and the per-tick
/// queue series (`series.csv`, `tick,controller,sqs`, tick-major in report
/// order) into `dir`.
pub fn export_report(
    scenario: &str,
    seed: u64,
    reports: &[RunReport],
    dir: impl AsRef<Path>,
    format: ReportFormat,
) -> Result<ExportedFiles> {
    if reports.is_empty() {
        return Err(Error::Config("no reports to export".into()));
    }
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let summary = Summary::new(scenario, seed, reports);
    let (name, body) = match format {
        ReportFormat::Json => ("summary.json", serde_json::to_string_pretty(&summary)? + "\n"),
        ReportFormat::Text => ("summary.txt", summary.table()),
    };
    let summary_path = dir.join(name);
    std::fs::write(&summary_path, body).map_err(|e| Error::io(&summary_path, e))?;

    let ticks = reports.iter().map(|r| r.sqs_series.len()).max().unwrap_or(0);
    let mut csv = String::with_capacity(ticks * reports.len() * 16 + 32);
    csv.push_str("tick,controller,sqs\n");
    for t in 0..ticks {
        for r in reports {
            if let Some(q) = r.sqs_series.get(t) {
                writeln!(csv, "{t},{},{q}", r.controller).unwrap();
            }
        }
    }
    let series_path = dir.join("series.csv");
    std::fs::write(&series_path, csv).map_err(|e| Error::io(&series_path, e))?;
    Ok(ExportedFiles { summary: summary_path, series: series_path })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(name: &str, delay: u64, sqs: Vec<u32>) -> RunReport {
        RunReport {
            controller: name.into(),
            total_delay: delay,
            per_period_delay: vec![delay],
            max_sqs: sqs.iter().copied().max().unwrap_or(0),
            delay_per_street: [delay, 0, 0, 0],
            candidates_evaluated: 1,
            greens: vec![56],
            vehicles_processed: 0,
            critical_ticks: [0; 4],
            sqs_series: sqs,
            wall_clock: Duration::from_millis(3),
        }
    }

    #[test]
    fn self_comparison_is_zero() {
        let s = Summary::new("x", 1, &[report("fixed", 100, vec![1])]);
        assert_eq!(s.controllers[0].delay_improvement_pct, Some(0.0));
    }

    #[test]
    fn halving_delay_is_fifty_percent() {
        let s = Summary::new("x", 1, &[report("fixed", 1000, vec![4]), report("realtime", 500, vec![3])]);
        assert_eq!(s.controllers[1].delay_improvement_pct, Some(50.0));
        assert_eq!(s.controllers[1].queue_improvement_pct, Some(25.0));
        assert_eq!(improvement_pct(0.0, 0.0), 0.0);
    }

    #[test]
    fn no_baseline_without_fixed() {
        let s = Summary::new("x", 1, &[report("fuzzy", 10, vec![])]);
        assert_eq!(s.baseline, None);
        assert_eq!(s.controllers[0].delay_improvement_pct, None);
    }

    #[test]
    fn files_have_expected_layout() {
        let dir = tempfile::tempdir().unwrap();
        let names = ["fixed", "pretimed", "segmental", "fuzzy", "realtime", "fuzzyreal"];
        let reports: Vec<_> =
            names.iter().enumerate().map(|(i, n)| report(n, 10 + i as u64, vec![i as u32; 3])).collect();
        let files = export_report("x", 1, &reports, dir.path(), ReportFormat::Json).unwrap();
        let summary: Summary = serde_json::from_str(&std::fs::read_to_string(&files.summary).unwrap()).unwrap();
        assert_eq!(summary.controllers.len(), 6);
        let csv = std::fs::read_to_string(&files.series).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "tick,controller,sqs");
        assert_eq!(lines.len(), 1 + 3 * 6);
        assert_eq!(lines[1], "0,fixed,0");
        assert_eq!(lines[6], "0,fuzzyreal,5");
        assert_eq!(lines[7], "1,fixed,0");
        assert!(!std::fs::read_to_string(&files.summary).unwrap().contains("wall_clock"));

        let txt = export_report("x", 1, &reports, dir.path(), ReportFormat::Text).unwrap();
        assert!(std::fs::read_to_string(txt.summary).unwrap().contains("fuzzyreal"));
    }

    #[test]
    fn empty_and_unwritable() {
        let dir = tempfile::tempdir().unwrap();
        assert!(export_report("x", 1, &[], dir.path(), ReportFormat::Json).is_err());
        let file = dir.path().join("f");
        std::fs::write(&file, "").unwrap();
        let e = export_report("x", 1, &[report("fixed", 1, vec![1])], file.join("sub"), ReportFormat::Json);
        assert!(matches!(e, Err(Error::Io { .. })));
    }
}
