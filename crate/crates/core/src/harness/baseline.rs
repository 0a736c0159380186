//! Unregularized reference models: a trivial constant predictor and a
//! fit-once logistic baseline over demographic features.
//!
//! The baseline trains on one matrix and evaluates on another, which covers
//! both the local variant (train == eval cohort) and the global variant
//! (train on a larger external cohort, evaluate on the study subjects).

use ndarray::Axis;

use super::loocv::{dummy_skip_mask, Preprocessor};
use super::report::EvalReport;
use super::HarnessError;
use crate::corpus::FeatureMatrix;
use crate::glm::{fit_logistic, LogisticFit};

#[derive(Debug, Clone)]
pub struct BaselineReport {
    pub fit: LogisticFit,
    pub eval: EvalReport,
    /// Zero-variance columns excluded before the fit.
    pub dropped: Vec<String>,
    pub n_train: usize,
}

/// Fit an unregularized logistic model on `train` and evaluate it on
/// `eval_fm`. Both matrices must carry the same feature columns.
pub fn run_baseline(
    train: &FeatureMatrix,
    eval_fm: &FeatureMatrix,
    hl_groups: usize,
) -> Result<BaselineReport, HarnessError> {
    if train.feature_names != eval_fm.feature_names {
        return Err(HarnessError::Invalid(
            "training and evaluation matrices have different feature columns".to_string(),
        ));
    }
    let skip = dummy_skip_mask(&train.feature_names);
    let prep = Preprocessor::fit(&train.x, &train.feature_names, &skip);
    let dropped: Vec<String> = train
        .feature_names
        .iter()
        .filter(|n| !prep.kept_names.contains(n))
        .cloned()
        .collect();
    let all_train: Vec<usize> = (0..train.n_subjects()).collect();
    let x_std = prep.transform_rows(&train.x, &all_train);
    let fit = fit_logistic(&x_std, &train.y, &prep.kept_names)?;
    let probs: Vec<f64> = eval_fm
        .x
        .axis_iter(Axis(0))
        .map(|row| fit.predict(&prep.transform_row(row)))
        .collect();
    let eval = EvalReport::from_scores(&probs, &eval_fm.y, hl_groups, None, None)?;
    Ok(BaselineReport {
        fit,
        eval,
        dropped,
        n_train: train.n_subjects(),
    })
}

/// Metrics for a predictor that scores every subject at the prevalence.
/// Its ROC is the diagonal (AUC 0.5) and, below 50% prevalence, it calls
/// everyone unimpaired, so accuracy is the prevalence complement.
pub fn trivial_report(labels: &[f64], hl_groups: usize) -> Result<EvalReport, HarnessError> {
    let n = labels.len();
    if n == 0 {
        return Err(HarnessError::Invalid(
            "cannot evaluate a trivial predictor on zero subjects".to_string(),
        ));
    }
    let prevalence = labels.iter().sum::<f64>() / n as f64;
    let scores = vec![prevalence; n];
    Ok(EvalReport::from_scores(
        &scores, labels, hl_groups, None, None,
    )?)
}
