//! `cogspeech report`: recompute selection frequencies and discrimination
//! from a run's fold log and cross-check them against the run's serialized
//! reports. The fold log is the ground truth; any disagreement is an error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::Args;
use cogspeech_core::harness::{
    read_fold_log, selection_counts, EvalReport, FoldResult, HarnessError, SelectionReport,
};
use cogspeech_core::metrics::roc_auc;

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Run directory containing fold_log.jsonl, or a path to the log itself.
    pub run: PathBuf,
}

pub fn run(args: &ReportArgs) -> Result<(), HarnessError> {
    let (log_path, run_dir) = if args.run.is_dir() {
        (args.run.join("fold_log.jsonl"), Some(args.run.clone()))
    } else {
        (args.run.clone(), None)
    };
    let folds = read_fold_log(super::open_input(&log_path)?)?;
    if folds.is_empty() {
        return Err(HarnessError::Invalid(format!(
            "{}: fold log is empty",
            log_path.display()
        )));
    }

    let counts = selection_counts(&folds);
    let n = folds.len();
    let scores: Vec<f64> = folds.iter().map(|f| f.probability).collect();
    let labels: Vec<f64> = folds.iter().map(|f| f.outcome).collect();
    let auc = roc_auc(&scores, &labels)?;

    let mut text = String::new();
    let _ = writeln!(text, "folds: {n}");
    let _ = writeln!(text, "held-out AUC: {auc:.3}");
    let _ = writeln!(text, "features ever selected: {}", counts.len());
    let mut rows: Vec<(&String, &usize)> = counts.iter().collect();
    rows.sort_by(|a, b| a.1.cmp(b.1).then_with(|| a.0.cmp(b.0)));
    let width = rows.iter().map(|(name, _)| name.len()).max().unwrap_or(7);
    for (name, count) in rows {
        let pct = 100.0 * *count as f64 / n as f64;
        let _ = writeln!(text, "{name:<width$}  {count:>4}  {pct:>5.1}%");
    }

    if let Some(dir) = run_dir {
        check_selection(&dir, &counts, n)?;
        check_eval(&dir, &folds, auc)?;
        let _ = writeln!(text, "serialized reports agree with the fold log");
    }

    print!("{text}");
    Ok(())
}

/// Compare recomputed selection frequencies against selection_report.json,
/// when present. Features that only appear through the final refit carry a
/// zero fold percentage and are ignored here.
fn check_selection(
    dir: &Path,
    counts: &std::collections::BTreeMap<String, usize>,
    n: usize,
) -> Result<(), HarnessError> {
    let path = dir.join("selection_report.json");
    if !path.is_file() {
        return Ok(());
    }
    let report: SelectionReport = serde_json::from_reader(super::open_input(&path)?)
        .map_err(|e| HarnessError::Invalid(format!("{}: {e}", path.display())))?;
    if report.n_folds != n {
        return Err(HarnessError::Invalid(format!(
            "selection report covers {} folds but the log has {n}",
            report.n_folds
        )));
    }
    for row in &report.rows {
        let count = counts.get(&row.feature).copied().unwrap_or(0);
        let pct = 100.0 * count as f64 / n as f64;
        if (pct - row.pct_folds).abs() > 1e-9 {
            return Err(HarnessError::Invalid(format!(
                "selection report lists {} at {:.1}% of folds but the log gives {:.1}%",
                row.feature, row.pct_folds, pct
            )));
        }
    }
    let reported: std::collections::BTreeSet<&str> =
        report.rows.iter().map(|r| r.feature.as_str()).collect();
    for name in counts.keys() {
        if !reported.contains(name.as_str()) {
            return Err(HarnessError::Invalid(format!(
                "feature {name} appears in the fold log but not in the selection report"
            )));
        }
    }
    Ok(())
}

/// Compare the recomputed AUC and subject count against eval_report.json,
/// when present.
fn check_eval(dir: &Path, folds: &[FoldResult], auc: f64) -> Result<(), HarnessError> {
    let path = dir.join("eval_report.json");
    if !path.is_file() {
        return Ok(());
    }
    let report: EvalReport = serde_json::from_reader(super::open_input(&path)?)
        .map_err(|e| HarnessError::Invalid(format!("{}: {e}", path.display())))?;
    if report.n != folds.len() {
        return Err(HarnessError::Invalid(format!(
            "evaluation report covers {} subjects but the log has {}",
            report.n,
            folds.len()
        )));
    }
    if (report.auc - auc).abs() > 1e-9 {
        return Err(HarnessError::Invalid(format!(
            "evaluation report AUC {:.6} disagrees with the fold log's {auc:.6}",
            report.auc
        )));
    }
    Ok(())
}
