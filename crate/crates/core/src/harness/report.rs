//! Aggregated evaluation and feature-selection reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::glm::LogisticFit;
use crate::metrics::{
    hosmer_lemeshow, operating_points, roc_auc, HlTest, MetricsError, OperatingPoints,
};

/// Discrimination and calibration summary for one set of predicted
/// probabilities: AUC, accuracy, six ROC operating points, and the
/// Hosmer-Lemeshow test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalReport {
    pub n: usize,
    pub n_positive: usize,
    pub auc: f64,
    pub operating: OperatingPoints,
    /// Absent when the probabilities cannot support the grouping (e.g. all
    /// predictions tied).
    pub hl: Option<HlTest>,
    /// Mixing weight and penalty of the final refit; absent for baselines.
    pub alpha: Option<f64>,
    pub lambda: Option<f64>,
}

impl EvalReport {
    pub fn from_scores(
        scores: &[f64],
        labels: &[f64],
        hl_groups: usize,
        alpha: Option<f64>,
        lambda: Option<f64>,
    ) -> Result<EvalReport, MetricsError> {
        let auc = roc_auc(scores, labels)?;
        let operating = operating_points(scores, labels)?;
        let hl = match hosmer_lemeshow(scores, labels, hl_groups) {
            Ok(t) => Some(t),
            Err(e) => {
                log::warn!("Hosmer-Lemeshow test unavailable: {e}");
                None
            }
        };
        Ok(EvalReport {
            n: labels.len(),
            n_positive: labels.iter().filter(|&&v| v == 1.0).count(),
            auc,
            operating,
            hl,
            alpha,
            lambda,
        })
    }

    pub fn accuracy(&self) -> f64 {
        self.operating.accuracy
    }

    pub fn prevalence(&self) -> f64 {
        self.n_positive as f64 / self.n as f64
    }
}

pub fn render_eval_report(label: &str, r: &EvalReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "model: {label}");
    let _ = writeln!(s, "subjects: {} ({} impaired)", r.n, r.n_positive);
    let _ = writeln!(s, "AUC             {:.3}", r.auc);
    let _ = writeln!(s, "accuracy        {:.3}", r.operating.accuracy);
    let _ = writeln!(s, "TPR @ FPR 10%   {:.3}", r.operating.tpr_at_fpr10);
    let _ = writeln!(s, "TPR @ FPR 5%    {:.3}", r.operating.tpr_at_fpr5);
    let _ = writeln!(s, "TPR @ FPR 0%    {:.3}", r.operating.tpr_at_fpr0);
    let _ = writeln!(s, "FPR @ TPR 90%   {:.3}", r.operating.fpr_at_tpr90);
    let _ = writeln!(s, "FPR @ TPR 95%   {:.3}", r.operating.fpr_at_tpr95);
    let _ = writeln!(s, "FPR @ TPR 100%  {:.3}", r.operating.fpr_at_tpr100);
    match &r.hl {
        Some(hl) => {
            let _ = writeln!(
                s,
                "HL p-value      {:.3} (statistic {:.3}, {} groups)",
                hl.p_value, hl.statistic, hl.groups_used
            );
        }
        None => {
            let _ = writeln!(s, "HL p-value      n/a");
        }
    }
    if let Some(alpha) = r.alpha {
        let _ = writeln!(s, "alpha           {alpha:.2}");
    }
    if let Some(lambda) = r.lambda {
        let _ = writeln!(s, "lambda          {lambda:.6}");
    }
    s
}

/// One feature's selection frequency across folds plus its coefficient in
/// the all-data refit (on the standardized scale).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionRow {
    pub feature: String,
    pub pct_folds: f64,
    pub beta_final: f64,
}

/// Per-feature fold-selection frequencies with the final refit's parameters.
/// Rows are sorted ascending by selection percentage, then by |β|, then by
/// name, so the strongest evidence reads from the bottom.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelectionReport {
    pub n_folds: usize,
    pub alpha: Option<f64>,
    pub lambda: Option<f64>,
    pub intercept: f64,
    pub rows: Vec<SelectionRow>,
}

impl SelectionReport {
    /// Assemble from fold-selection counts and the final refit's
    /// coefficients. Features appear if they were active in at least one
    /// fold or carry a nonzero final coefficient.
    pub fn from_counts(
        n_folds: usize,
        counts: &BTreeMap<String, usize>,
        final_betas: &BTreeMap<String, f64>,
        alpha: Option<f64>,
        lambda: Option<f64>,
        intercept: f64,
    ) -> SelectionReport {
        let mut features: Vec<&String> = counts.keys().collect();
        for (name, beta) in final_betas {
            if *beta != 0.0 && !counts.contains_key(name) {
                features.push(name);
            }
        }
        let mut rows: Vec<SelectionRow> = features
            .into_iter()
            .map(|name| SelectionRow {
                feature: name.clone(),
                pct_folds: 100.0 * counts.get(name).copied().unwrap_or(0) as f64
                    / n_folds as f64,
                beta_final: final_betas.get(name).copied().unwrap_or(0.0),
            })
            .collect();
        rows.sort_by(|a, b| {
            a.pct_folds
                .total_cmp(&b.pct_folds)
                .then(a.beta_final.abs().total_cmp(&b.beta_final.abs()))
                .then(a.feature.cmp(&b.feature))
        });
        SelectionReport {
            n_folds,
            alpha,
            lambda,
            intercept,
            rows,
        }
    }

    pub fn pct_for(&self, feature: &str) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.feature == feature)
            .map(|r| r.pct_folds)
    }
}

pub fn render_selection_report(r: &SelectionReport) -> String {
    let width = r
        .rows
        .iter()
        .map(|row| row.feature.len())
        .max()
        .unwrap_or(7)
        .max("feature".len());
    let mut s = String::new();
    let _ = writeln!(s, "{:<width$}  folds%     beta", "feature");
    for row in &r.rows {
        let _ = writeln!(
            s,
            "{:<width$}  {:>6.1}  {:>7.3}",
            row.feature, row.pct_folds, row.beta_final
        );
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "folds: {}", r.n_folds);
    let _ = writeln!(s, "intercept: {:.4}", r.intercept);
    if let (Some(a), Some(l)) = (r.alpha, r.lambda) {
        let _ = writeln!(s, "final refit: alpha {a:.2}, lambda {l:.6}");
    }
    s
}

/// Coefficient table for an unregularized fit: β, SE, odds ratio, 95% CI,
/// and the Wald p-value per feature.
pub fn render_coefficient_table(fit: &LogisticFit) -> String {
    let width = fit
        .feature_names
        .iter()
        .map(|n| n.len())
        .max()
        .unwrap_or(7)
        .max("(intercept)".len());
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<width$}  {:>8}  {:>8}  {:>8}  {:>17}  {:>8}",
        "feature", "beta", "SE", "OR", "95% CI", "p"
    );
    let _ = writeln!(
        s,
        "{:<width$}  {:>8.3}  {:>8.3}  {:>8}  {:>17}  {:>8}",
        "(intercept)", fit.intercept, fit.intercept_se, "-", "-", "-"
    );
    for j in 0..fit.feature_names.len() {
        let _ = writeln!(
            s,
            "{:<width$}  {:>8.3}  {:>8.3}  {:>8.2}  [{:>6.2}, {:>6.2}]  {:>8.4}",
            fit.feature_names[j],
            fit.coefficients[j],
            fit.std_errors[j],
            fit.odds_ratios[j],
            fit.ci_lower[j],
            fit.ci_upper[j],
            fit.p_values[j]
        );
    }
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "deviance {:.3} (null {:.3}), {} iterations, converged: {}",
        fit.deviance, fit.null_deviance, fit.iterations, fit.converged
    );
    if fit.separation {
        let _ = writeln!(s, "warning: complete or quasi-complete separation detected");
    }
    s
}
