//! Pipeline orchestration: corpus loading, nested leave-one-out evaluation,
//! demographic baselines, aggregated reports, and synthetic test corpora.

mod baseline;
mod extract;
mod loocv;
mod report;
mod synth;

pub use baseline::{run_baseline, trivial_report, BaselineReport};
pub use extract::{extract_feature_matrix, load_corpus, CorpusData};
pub use loocv::{
    read_fold_log, run_loocv, run_single_fold, selection_counts, write_fold_log, FoldModel,
    FoldResult, InnerFolds, LoocvConfig, LoocvOutput, Normalization, Preprocessor,
};
pub use report::{
    render_coefficient_table, render_eval_report, render_selection_report, EvalReport,
    SelectionReport, SelectionRow,
};
pub use synth::{generate_corpus, write_corpus, SynthConfig};

use thiserror::Error;

use crate::acoustic::AcousticError;
use crate::corpus::CorpusError;
use crate::glm::GlmError;
use crate::metrics::MetricsError;
use crate::text::TextError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Acoustic(#[from] AcousticError),
    #[error(transparent)]
    Text(#[from] TextError),
    #[error(transparent)]
    Glm(#[from] GlmError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    /// A statistical precondition failed (too few subjects, single-class
    /// outcomes, degenerate folds), as opposed to malformed input.
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    Invalid(String),
}
