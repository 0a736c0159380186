//! Binomial generalized linear models.
//!
//! Two fitting routes live here: an unregularized maximum-likelihood fit with
//! Wald inference ([`fit_logistic`]), and an elastic-net penalized fit
//! ([`fit_elasticnet`]) with a regularization path and cross-validated
//! selection of both the mixing weight and penalty strength ([`cv_select`]).
//!
//! The penalized objective, with `N` observations and slope vector `β`, is
//!
//! ```text
//! F(β0, β) = (1/N) Σ_i [ln(1 + exp(η_i)) − y_i η_i]
//!          + λ [(1 − α) ‖β‖₂² + α ‖β‖₁],      η_i = β0 + x_iᵀβ
//! ```
//!
//! with the intercept left unpenalized. All optimality checks and the
//! `λ_max` formula in [`path`] are stated on this scale.

pub mod cv;
pub mod elastic_net;
pub mod export;
mod linalg;
pub mod logistic;
pub mod path;

pub use cv::{cv_select, cv_select_with_assignment, AlphaCvSummary, CvCurve, CvSelection, ElasticNetFit};
pub use elastic_net::{enet_objective, fit_elasticnet, kkt_residuals, EnetSolution, KktResiduals};
pub use export::{parse_model, render_model, ModelFile};
pub use logistic::{fit_logistic, LogisticFit};
pub use path::{fit_enet_path, lambda_max, lambda_path, PathFit};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GlmError {
    #[error("design matrix has no rows or no columns")]
    EmptyDesign,
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("outcome labels contain a single class")]
    SingleClass,
    #[error("design matrix is rank deficient; dependent columns: {}", .columns.join(", "))]
    RankDeficient { columns: Vec<String> },
    #[error("solver did not converge within {0} coordinate sweeps")]
    NonConvergence(usize),
    #[error("linear solve failed: {0}")]
    Singular(String),
    #[error("{skipped} of {total} cross-validation folds had single-class training labels (limit 20%)")]
    DegenerateFolds { skipped: usize, total: usize },
    #[error("{0}")]
    Invalid(String),
}

/// Numerically stable logistic function.
pub fn sigmoid(eta: f64) -> f64 {
    if eta >= 0.0 {
        1.0 / (1.0 + (-eta).exp())
    } else {
        let e = eta.exp();
        e / (1.0 + e)
    }
}

/// Numerically stable `ln(1 + exp(eta))`.
pub fn log1p_exp(eta: f64) -> f64 {
    eta.max(0.0) + (-eta.abs()).exp().ln_1p()
}

/// Clamp used before taking logs of fitted probabilities.
pub(crate) const PROB_CLAMP: f64 = 1e-12;

/// Binomial deviance `−2 Σ [y ln p + (1−y) ln(1−p)]` with probabilities
/// clamped away from 0 and 1.
pub fn deviance(probs: &[f64], labels: &[f64]) -> f64 {
    debug_assert_eq!(probs.len(), labels.len());
    let mut ll = 0.0;
    for (&p, &y) in probs.iter().zip(labels) {
        let p = p.clamp(PROB_CLAMP, 1.0 - PROB_CLAMP);
        ll += y * p.ln() + (1.0 - y) * (1.0 - p).ln();
    }
    -2.0 * ll
}

/// Deviance of the intercept-only model on `labels`.
pub fn null_deviance(labels: &[f64]) -> f64 {
    let n = labels.len();
    if n == 0 {
        return 0.0;
    }
    let ybar = labels.iter().sum::<f64>() / n as f64;
    let probs = vec![ybar; n];
    deviance(&probs, labels)
}

pub(crate) fn check_labels(y: &[f64], n_rows: usize) -> Result<f64, GlmError> {
    if y.len() != n_rows {
        return Err(GlmError::LengthMismatch {
            expected: n_rows,
            found: y.len(),
        });
    }
    let pos = y.iter().filter(|&&v| v == 1.0).count();
    if pos == 0 || pos == y.len() {
        return Err(GlmError::SingleClass);
    }
    Ok(pos as f64 / y.len() as f64)
}
