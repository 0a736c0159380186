//! Nested leave-one-out evaluation with per-fold screening and selection.
//!
//! Each fold standardizes features on its training rows only, screens them
//! with a Pearson test, runs the joint (α, λ) grid search on the survivors,
//! and predicts the held-out subject. The held-out row never touches any
//! training statistic, so fold artifacts are leakage-free by construction.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use ndarray::{Array2, ArrayView1, Axis};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{EvalReport, SelectionReport};
use super::HarnessError;
use crate::corpus::{ColumnStandardizer, FeatureMatrix, DEMOGRAPHIC_FEATURE_NAMES};
use crate::glm::export::ModelFeature;
use crate::glm::{cv_select, CvSelection, ModelFile, PROB_CLAMP};
use crate::metrics::pearson_screen;

/// Inner cross-validation fold count for the (α, λ) search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerFolds {
    Loo,
    K(usize),
}

impl InnerFolds {
    pub fn parse(s: &str) -> Result<InnerFolds, HarnessError> {
        if s == "loo" {
            return Ok(InnerFolds::Loo);
        }
        s.parse::<usize>()
            .ok()
            .filter(|&k| k >= 2)
            .map(InnerFolds::K)
            .ok_or_else(|| {
                HarnessError::Invalid(format!(
                    "fold count must be 'loo' or an integer >= 2, got '{s}'"
                ))
            })
    }

    pub fn label(&self) -> String {
        match self {
            InnerFolds::Loo => "loo".to_string(),
            InnerFolds::K(k) => k.to_string(),
        }
    }
}

/// Where feature standardization statistics come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Fit on each fold's training rows (leakage-safe; the default).
    PerFold,
    /// Fit once on all rows, mirroring a pipeline that standardizes before
    /// splitting. Deliberately leaks the held-out row's scale information.
    Global,
}

impl Normalization {
    pub fn parse(s: &str) -> Result<Normalization, HarnessError> {
        match s {
            "per-fold" => Ok(Normalization::PerFold),
            "global" => Ok(Normalization::Global),
            other => Err(HarnessError::Invalid(format!(
                "normalization must be 'per-fold' or 'global', got '{other}'"
            ))),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Normalization::PerFold => "per-fold",
            Normalization::Global => "global",
        }
    }
}

#[derive(Debug, Clone)]
pub struct LoocvConfig {
    pub alpha_step: f64,
    pub inner_folds: InnerFolds,
    /// Pearson screening level; features with p below it enter the model.
    pub screen_level: f64,
    pub normalization: Normalization,
    pub seed: u64,
    pub hl_groups: usize,
}

impl Default for LoocvConfig {
    fn default() -> Self {
        LoocvConfig {
            alpha_step: 0.01,
            inner_folds: InnerFolds::Loo,
            screen_level: 0.01,
            normalization: Normalization::PerFold,
            seed: 17,
            hl_groups: 10,
        }
    }
}

/// One held-out subject's record: what the training half selected and what
/// it predicted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub subject_id: String,
    pub outcome: f64,
    pub probability: f64,
    pub screened: Vec<String>,
    pub active: Vec<String>,
    /// Absent when no feature survived screening (intercept-only fold).
    pub alpha: Option<f64>,
    pub lambda: Option<f64>,
}

/// Column standardization fitted on training rows, with zero-variance
/// columns dropped up front.
#[derive(Debug, Clone, PartialEq)]
pub struct Preprocessor {
    /// Indices into the full feature list that survived the variance check.
    pub kept: Vec<usize>,
    pub kept_names: Vec<String>,
    /// Standardization parameters over the kept columns.
    pub standardizer: ColumnStandardizer,
}

/// Demographic indicator columns pass through standardization untouched;
/// only age (and every acoustic/text feature) is z-scored.
pub(crate) fn dummy_skip_mask(names: &[String]) -> Vec<bool> {
    names
        .iter()
        .map(|n| n != "age" && DEMOGRAPHIC_FEATURE_NAMES.contains(&n.as_str()))
        .collect()
}

impl Preprocessor {
    pub fn fit(x: &Array2<f64>, names: &[String], skip: &[bool]) -> Preprocessor {
        let (full, mut degenerate) = ColumnStandardizer::fit_dropping(x, skip);
        // Constant pass-through dummies are as useless as constant scaled
        // columns and break the unregularized baseline; drop them too.
        for (j, &skipped) in skip.iter().enumerate() {
            if skipped && x.nrows() > 0 {
                let col = x.column(j);
                let first = col[0];
                if col.iter().all(|&v| v == first) {
                    degenerate.push(j);
                }
            }
        }
        degenerate.sort_unstable();
        if !degenerate.is_empty() {
            let dropped: Vec<&str> = degenerate.iter().map(|&j| names[j].as_str()).collect();
            log::warn!(
                "dropping {} zero-variance feature(s): {}",
                dropped.len(),
                dropped.join(", ")
            );
        }
        let degenerate: BTreeSet<usize> = degenerate.into_iter().collect();
        let kept: Vec<usize> = (0..x.ncols()).filter(|j| !degenerate.contains(j)).collect();
        let standardizer = ColumnStandardizer {
            means: kept.iter().map(|&j| full.means[j]).collect(),
            sds: kept.iter().map(|&j| full.sds[j]).collect(),
            skip: kept.iter().map(|&j| full.skip[j]).collect(),
        };
        Preprocessor {
            kept_names: kept.iter().map(|&j| names[j].clone()).collect(),
            kept,
            standardizer,
        }
    }

    /// Standardized kept columns of the selected rows.
    pub fn transform_rows(&self, x: &Array2<f64>, rows: &[usize]) -> Array2<f64> {
        let mut out = Array2::zeros((rows.len(), self.kept.len()));
        for (r, &i) in rows.iter().enumerate() {
            for (k, &j) in self.kept.iter().enumerate() {
                let v = x[[i, j]];
                out[[r, k]] = if self.standardizer.skip[k] {
                    v
                } else {
                    (v - self.standardizer.means[k]) / self.standardizer.sds[k]
                };
            }
        }
        out
    }

    pub fn transform_row(&self, row: ArrayView1<f64>) -> Vec<f64> {
        self.kept
            .iter()
            .enumerate()
            .map(|(k, &j)| {
                let v = row[j];
                if self.standardizer.skip[k] {
                    v
                } else {
                    (v - self.standardizer.means[k]) / self.standardizer.sds[k]
                }
            })
            .collect()
    }
}

/// Everything one training run produced: the standardization, the screen
/// survivors, and the selected elastic-net model (absent when nothing passed
/// the screen, in which case the model is intercept-only).
#[derive(Debug, Clone)]
pub struct FoldModel {
    pub prep: Preprocessor,
    /// Indices into `prep.kept` that survived the screen.
    pub screened: Vec<usize>,
    pub screened_names: Vec<String>,
    pub selection: Option<CvSelection>,
    pub train_prevalence: f64,
}

impl FoldModel {
    pub fn predict_row(&self, raw_row: ArrayView1<f64>) -> f64 {
        let p = match &self.selection {
            None => self.train_prevalence,
            Some(sel) => {
                let std_row = self.prep.transform_row(raw_row);
                let screened_row: Vec<f64> =
                    self.screened.iter().map(|&k| std_row[k]).collect();
                sel.fit.predict(&screened_row)
            }
        };
        p.clamp(PROB_CLAMP, 1.0 - PROB_CLAMP)
    }

    /// Names of features with nonzero coefficients.
    pub fn active_names(&self) -> Vec<String> {
        match &self.selection {
            None => Vec::new(),
            Some(sel) => sel
                .fit
                .active
                .iter()
                .map(|&a| self.screened_names[a].clone())
                .collect(),
        }
    }

    /// All screened features with their (standardized-scale) coefficients.
    pub fn coefficients(&self) -> BTreeMap<String, f64> {
        match &self.selection {
            None => BTreeMap::new(),
            Some(sel) => self
                .screened_names
                .iter()
                .cloned()
                .zip(sel.fit.coefficients.iter().copied())
                .collect(),
        }
    }

    pub fn intercept(&self) -> f64 {
        match &self.selection {
            Some(sel) => sel.fit.intercept,
            None => (self.train_prevalence / (1.0 - self.train_prevalence)).ln(),
        }
    }

    /// Portable model over raw features: coefficients plus the training
    /// moments needed to reproduce the standardization at prediction time.
    pub fn to_model_file(&self) -> ModelFile {
        match &self.selection {
            None => ModelFile {
                alpha: 1.0,
                lambda: f64::INFINITY,
                intercept: self.intercept(),
                features: Vec::new(),
            },
            Some(sel) => ModelFile {
                alpha: sel.alpha,
                lambda: sel.lambda,
                intercept: sel.fit.intercept,
                features: self
                    .screened
                    .iter()
                    .enumerate()
                    .map(|(s, &k)| ModelFeature {
                        name: self.screened_names[s].clone(),
                        coefficient: sel.fit.coefficients[s],
                        mean: self.prep.standardizer.means[k],
                        sd: self.prep.standardizer.sds[k],
                    })
                    .collect(),
            },
        }
    }
}

fn fit_model_on_rows(
    fm: &FeatureMatrix,
    rows: &[usize],
    config: &LoocvConfig,
    global_prep: Option<&Preprocessor>,
) -> Result<FoldModel, HarnessError> {
    let y: Vec<f64> = rows.iter().map(|&i| fm.y[i]).collect();
    let n_pos = y.iter().filter(|&&v| v == 1.0).count();
    if n_pos == 0 || n_pos == y.len() {
        return Err(HarnessError::Precondition(
            "training rows contain a single outcome class".to_string(),
        ));
    }
    let prep = match global_prep {
        Some(p) => p.clone(),
        None => {
            let x_rows = fm.x.select(Axis(0), rows);
            Preprocessor::fit(&x_rows, &fm.feature_names, &dummy_skip_mask(&fm.feature_names))
        }
    };
    let x_std = prep.transform_rows(&fm.x, rows);
    let screen = pearson_screen(&x_std, &y, config.screen_level)?;
    let screened: Vec<usize> = screen
        .iter()
        .enumerate()
        .filter(|(_, s)| s.selected)
        .map(|(k, _)| k)
        .collect();
    let screened_names: Vec<String> = screened
        .iter()
        .map(|&k| prep.kept_names[k].clone())
        .collect();
    let selection = if screened.is_empty() {
        None
    } else {
        let x_scr = x_std.select(Axis(1), &screened);
        let n_folds = match config.inner_folds {
            InnerFolds::Loo => usize::MAX,
            InnerFolds::K(k) => k,
        };
        Some(cv_select(
            &x_scr,
            &y,
            config.alpha_step,
            n_folds,
            config.seed,
        )?)
    };
    Ok(FoldModel {
        prep,
        screened,
        screened_names,
        selection,
        train_prevalence: n_pos as f64 / y.len() as f64,
    })
}

fn single_fold_with_prep(
    fm: &FeatureMatrix,
    test_index: usize,
    config: &LoocvConfig,
    global_prep: Option<&Preprocessor>,
) -> Result<(FoldResult, FoldModel), HarnessError> {
    let n = fm.n_subjects();
    if test_index >= n {
        return Err(HarnessError::Invalid(format!(
            "fold index {test_index} out of range for {n} subjects"
        )));
    }
    let rows: Vec<usize> = (0..n).filter(|&j| j != test_index).collect();
    let model = fit_model_on_rows(fm, &rows, config, global_prep)?;
    let probability = model.predict_row(fm.x.row(test_index));
    let result = FoldResult {
        subject_id: fm.subject_ids[test_index].clone(),
        outcome: fm.y[test_index],
        probability,
        screened: model.screened_names.clone(),
        active: model.active_names(),
        alpha: model.selection.as_ref().map(|s| s.alpha),
        lambda: model.selection.as_ref().map(|s| s.lambda),
    };
    Ok((result, model))
}

/// Train on all rows except `test_index` and predict that subject. The
/// returned model exposes every training artifact for inspection.
pub fn run_single_fold(
    fm: &FeatureMatrix,
    test_index: usize,
    config: &LoocvConfig,
) -> Result<(FoldResult, FoldModel), HarnessError> {
    let global_prep = match config.normalization {
        Normalization::Global => Some(Preprocessor::fit(
            &fm.x,
            &fm.feature_names,
            &dummy_skip_mask(&fm.feature_names),
        )),
        Normalization::PerFold => None,
    };
    single_fold_with_prep(fm, test_index, config, global_prep.as_ref())
}

#[derive(Debug, Clone)]
pub struct LoocvOutput {
    /// One record per subject, sorted by subject id.
    pub folds: Vec<FoldResult>,
    pub eval: EvalReport,
    pub selection: SelectionReport,
    /// The all-data refit behind the selection report.
    pub final_model: FoldModel,
    pub model_file: ModelFile,
    /// Mixing weights evaluated per grid search (fixed by the α step).
    pub alpha_count: usize,
    /// Longest λ path any grid search produced.
    pub max_lambda_path_len: usize,
}

/// Count, per feature, the folds whose active set contains it.
pub fn selection_counts(folds: &[FoldResult]) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for fold in folds {
        for name in &fold.active {
            *counts.entry(name.clone()).or_insert(0usize) += 1;
        }
    }
    counts
}

fn max_path_len<'a>(models: impl Iterator<Item = &'a FoldModel>) -> usize {
    models
        .filter_map(|m| m.selection.as_ref())
        .flat_map(|s| s.per_alpha.iter().map(|a| a.path_len))
        .max()
        .unwrap_or(0)
}

/// Leave-one-out evaluation over all subjects plus the all-data refit.
pub fn run_loocv(fm: &FeatureMatrix, config: &LoocvConfig) -> Result<LoocvOutput, HarnessError> {
    let n = fm.n_subjects();
    if n < 10 {
        return Err(HarnessError::Precondition(format!(
            "leave-one-out evaluation needs at least 10 subjects, found {n}"
        )));
    }
    let n_pos = fm.y.iter().filter(|&&v| v == 1.0).count();
    if n_pos < 2 || n - n_pos < 2 {
        return Err(HarnessError::Precondition(format!(
            "each outcome class needs at least 2 subjects (found {n_pos} impaired of {n})"
        )));
    }
    let mut ids = fm.subject_ids.clone();
    ids.sort();
    ids.dedup();
    if ids.len() != n {
        return Err(HarnessError::Invalid(
            "subject ids must be unique".to_string(),
        ));
    }
    let global_prep = match config.normalization {
        Normalization::Global => Some(Preprocessor::fit(
            &fm.x,
            &fm.feature_names,
            &dummy_skip_mask(&fm.feature_names),
        )),
        Normalization::PerFold => None,
    };
    let mut pairs: Vec<(FoldResult, FoldModel)> = (0..n)
        .into_par_iter()
        .map(|i| single_fold_with_prep(fm, i, config, global_prep.as_ref()))
        .collect::<Result<_, _>>()?;
    pairs.sort_by(|a, b| a.0.subject_id.cmp(&b.0.subject_id));

    let all_rows: Vec<usize> = (0..n).collect();
    let final_model = fit_model_on_rows(fm, &all_rows, config, global_prep.as_ref())?;

    let folds: Vec<FoldResult> = pairs.iter().map(|(f, _)| f.clone()).collect();
    let probs: Vec<f64> = folds.iter().map(|f| f.probability).collect();
    let labels: Vec<f64> = folds.iter().map(|f| f.outcome).collect();
    let (alpha, lambda) = match &final_model.selection {
        Some(s) => (Some(s.alpha), Some(s.lambda)),
        None => (None, None),
    };
    let eval = EvalReport::from_scores(&probs, &labels, config.hl_groups, alpha, lambda)?;
    let selection = SelectionReport::from_counts(
        n,
        &selection_counts(&folds),
        &final_model.coefficients(),
        alpha,
        lambda,
        final_model.intercept(),
    );
    let alpha_count = (1.0 / config.alpha_step).round() as usize + 1;
    let max_lambda_path_len = max_path_len(
        pairs
            .iter()
            .map(|(_, m)| m)
            .chain(std::iter::once(&final_model)),
    );
    let model_file = final_model.to_model_file();
    Ok(LoocvOutput {
        folds,
        eval,
        selection,
        final_model,
        model_file,
        alpha_count,
        max_lambda_path_len,
    })
}

/// Serialize fold results as one JSON object per line.
pub fn write_fold_log(folds: &[FoldResult], mut out: impl Write) -> Result<(), HarnessError> {
    for fold in folds {
        let line = serde_json::to_string(fold)
            .map_err(|e| HarnessError::Invalid(format!("fold serialization failed: {e}")))?;
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn read_fold_log(input: impl BufRead) -> Result<Vec<FoldResult>, HarnessError> {
    let mut folds = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fold: FoldResult = serde_json::from_str(&line).map_err(|e| {
            HarnessError::Invalid(format!("fold log line {}: {e}", idx + 1))
        })?;
        folds.push(fold);
    }
    Ok(folds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    /// 14 subjects, 4 features; feature 0 tracks the outcome closely, the
    /// rest are seeded noise.
    fn signal_matrix() -> FeatureMatrix {
        let n = 14;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let y: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 1.0 } else { 0.0 }).collect();
        let mut x = Array2::<f64>::zeros((n, 4));
        for i in 0..n {
            x[[i, 0]] = 2.0 * y[i] - 1.0 + 0.3 * rng.gen::<f64>();
            for j in 1..4 {
                x[[i, j]] = rng.gen::<f64>() * 2.0 - 1.0;
            }
        }
        let ids = (0..n).map(|i| format!("s{i:02}")).collect();
        let names = (0..4).map(|j| format!("feat_{j}")).collect();
        FeatureMatrix::new(ids, names, x, y).unwrap()
    }

    fn quick_config() -> LoocvConfig {
        LoocvConfig {
            alpha_step: 0.25,
            ..LoocvConfig::default()
        }
    }

    #[test]
    fn loocv_produces_one_fold_per_subject_in_id_order() {
        let fm = signal_matrix();
        let out = run_loocv(&fm, &quick_config()).unwrap();
        assert_eq!(out.folds.len(), 14);
        let ids: Vec<&str> = out.folds.iter().map(|f| f.subject_id.as_str()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
        assert!(out
            .folds
            .iter()
            .all(|f| f.probability > 0.0 && f.probability < 1.0));
        assert_eq!(out.alpha_count, 5);
        assert!(out.max_lambda_path_len <= 100);
        // The planted feature dominates: selected in every fold.
        assert_eq!(out.selection.pct_for("feat_0"), Some(100.0));
        assert!(out.eval.auc > 0.9);
    }

    #[test]
    fn fold_artifacts_ignore_the_held_out_outcome() {
        let fm = signal_matrix();
        let config = quick_config();
        let (r1, m1) = run_single_fold(&fm, 3, &config).unwrap();
        let mut flipped = fm.clone();
        flipped.y[3] = 1.0 - flipped.y[3];
        let (r2, m2) = run_single_fold(&flipped, 3, &config).unwrap();
        assert_eq!(r1.probability, r2.probability);
        assert_eq!(r1.screened, r2.screened);
        assert_eq!(r1.active, r2.active);
        assert_eq!(r1.alpha, r2.alpha);
        assert_eq!(r1.lambda, r2.lambda);
        assert_eq!(m1.prep, m2.prep);
        let (s1, s2) = (m1.selection.unwrap(), m2.selection.unwrap());
        assert_eq!(s1.fit.coefficients, s2.fit.coefficients);
        assert_eq!(s1.curve.lambdas, s2.curve.lambdas);
    }

    #[test]
    fn too_few_subjects_is_a_precondition_error() {
        let fm = signal_matrix();
        let small = FeatureMatrix::new(
            fm.subject_ids[..6].to_vec(),
            fm.feature_names.clone(),
            fm.x.slice(ndarray::s![..6, ..]).to_owned(),
            fm.y[..6].to_vec(),
        )
        .unwrap();
        assert!(matches!(
            run_loocv(&small, &quick_config()),
            Err(HarnessError::Precondition(_))
        ));
    }

    #[test]
    fn lone_class_member_is_a_precondition_error() {
        let mut fm = signal_matrix();
        for v in fm.y.iter_mut().skip(1) {
            *v = 0.0;
        }
        fm.y[0] = 1.0;
        assert!(matches!(
            run_loocv(&fm, &quick_config()),
            Err(HarnessError::Precondition(_))
        ));
    }

    /// 14 subjects, 4 seeded-noise features with no outcome signal.
    fn noise_matrix() -> FeatureMatrix {
        let n = 14;
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let y: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 1.0 } else { 0.0 }).collect();
        let mut x = Array2::<f64>::zeros((n, 4));
        for i in 0..n {
            for j in 0..4 {
                x[[i, j]] = rng.gen::<f64>() * 2.0 - 1.0;
            }
        }
        let ids = (0..n).map(|i| format!("s{i:02}")).collect();
        let names = (0..4).map(|j| format!("feat_{j}")).collect();
        FeatureMatrix::new(ids, names, x, y).unwrap()
    }

    #[test]
    fn empty_screen_falls_back_to_prevalence() {
        let fm = noise_matrix();
        let config = LoocvConfig {
            screen_level: 1e-6, // noise never clears this
            alpha_step: 0.5,
            ..LoocvConfig::default()
        };
        let out = run_loocv(&fm, &config).unwrap();
        for fold in &out.folds {
            assert!(fold.screened.is_empty());
            assert!(fold.active.is_empty());
            assert_eq!(fold.alpha, None);
            // 7 of 13 training rows are positive when a negative is held out.
            assert!((fold.probability - 7.0 / 13.0).abs() < 0.08);
        }
        assert!(out.model_file.features.is_empty());
        assert_eq!(out.model_file.lambda, f64::INFINITY);
        assert_eq!(out.max_lambda_path_len, 0);
    }

    #[test]
    fn global_normalization_shares_one_standardizer() {
        let fm = signal_matrix();
        let config = LoocvConfig {
            normalization: Normalization::Global,
            alpha_step: 0.5,
            ..LoocvConfig::default()
        };
        let (_, m1) = run_single_fold(&fm, 0, &config).unwrap();
        let (_, m2) = run_single_fold(&fm, 7, &config).unwrap();
        assert_eq!(m1.prep, m2.prep);
    }

    #[test]
    fn dummy_columns_bypass_standardization() {
        let names: Vec<String> = vec!["age".into(), "sex_female".into(), "pitch_min".into()];
        let x = ndarray::array![
            [70.0, 1.0, 100.0],
            [60.0, 0.0, 120.0],
            [65.0, 1.0, 110.0],
            [75.0, 0.0, 130.0]
        ];
        let prep = Preprocessor::fit(&x, &names, &dummy_skip_mask(&names));
        let out = prep.transform_rows(&x, &[0, 1, 2, 3]);
        assert_eq!(out.column(1).to_vec(), vec![1.0, 0.0, 1.0, 0.0]);
        let age: Vec<f64> = out.column(0).to_vec();
        assert!(crate::stats::mean(&age).abs() < 1e-12);
        assert!((crate::stats::sample_sd(&age) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_variance_columns_are_dropped_not_fatal() {
        let names: Vec<String> = vec!["a".into(), "b".into()];
        let x = ndarray::array![[1.0, 5.0], [2.0, 5.0], [3.0, 5.0]];
        let prep = Preprocessor::fit(&x, &names, &[false, false]);
        assert_eq!(prep.kept, vec![0]);
        assert_eq!(prep.kept_names, vec!["a"]);
    }

    #[test]
    fn fold_log_round_trips() {
        let folds = vec![
            FoldResult {
                subject_id: "s01".into(),
                outcome: 1.0,
                probability: 0.82,
                screened: vec!["feat_0".into(), "feat_2".into()],
                active: vec!["feat_0".into()],
                alpha: Some(0.75),
                lambda: Some(0.0123),
            },
            FoldResult {
                subject_id: "s02".into(),
                outcome: 0.0,
                probability: 0.21,
                screened: vec![],
                active: vec![],
                alpha: None,
                lambda: None,
            },
        ];
        let mut buf = Vec::new();
        write_fold_log(&folds, &mut buf).unwrap();
        let back = read_fold_log(std::io::Cursor::new(buf)).unwrap();
        assert_eq!(back, folds);
    }

    #[test]
    fn inner_folds_parsing() {
        assert_eq!(InnerFolds::parse("loo").unwrap(), InnerFolds::Loo);
        assert_eq!(InnerFolds::parse("5").unwrap(), InnerFolds::K(5));
        assert!(InnerFolds::parse("1").is_err());
        assert!(InnerFolds::parse("k").is_err());
        assert_eq!(InnerFolds::K(5).label(), "5");
        assert_eq!(Normalization::parse("global").unwrap(), Normalization::Global);
        assert!(Normalization::parse("both").is_err());
    }
}
