//! Discrimination, calibration, and univariate screening metrics.
//!
//! Everything here operates on plain probability/label slices so it can be
//! used both on in-sample fits and on pooled cross-validation predictions.

mod calibration;
mod roc;
mod screen;
pub mod special;

pub use calibration::{hosmer_lemeshow, HlTest};
pub use roc::{auc_trapezoid, operating_points, roc_auc, roc_curve, OperatingPoints, RocCurve};
pub use screen::{pearson_screen, ScreenResult};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("labels contain a single class; metric is undefined")]
    SingleClass,
    #[error("too few samples: need at least {required}, found {found}")]
    TooFewSamples { required: usize, found: usize },
    #[error("grouping degenerated below three usable cells")]
    DegenerateGrouping,
    #[error("{0}")]
    Invalid(String),
}

pub(crate) fn check_lengths(expected: usize, found: usize) -> Result<(), MetricsError> {
    if expected == found {
        Ok(())
    } else {
        Err(MetricsError::LengthMismatch { expected, found })
    }
}

pub(crate) fn check_two_classes(labels: &[f64]) -> Result<(), MetricsError> {
    let pos = labels.iter().filter(|&&y| y == 1.0).count();
    if pos == 0 || pos == labels.len() {
        Err(MetricsError::SingleClass)
    } else {
        Ok(())
    }
}
