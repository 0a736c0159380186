//! File formats and the shared data model: exam transcripts, frame-level
//! acoustic tracks, demographic records, and assembled feature matrices.

mod demographics;
mod frames;
mod matrix;
mod transcript;
mod zscore;

pub use demographics::{
    encode_demographics, read_demographics_csv, write_demographics_csv, DemographicRecord,
    Education, Employment, Sex, DEMOGRAPHIC_FEATURE_NAMES,
};
pub use frames::{
    FrameTrack, DEFAULT_SPARSE_CHANNELS, FRAME_HOP_SECONDS, NONZERO_MASKED_CHANNELS,
    VOICING_CHANNEL,
};
pub use matrix::{family_of, parse_family_set, FeatureFamily, FeatureMatrix};
pub use transcript::{parse_transcript, tokenize, write_transcript, Speaker, Transcript, Turn};
pub use zscore::{zscore_columns, ColumnStandardizer};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("zero-variance column '{0}' cannot be z-scored")]
    DegenerateColumn(String),
    #[error("duplicate name '{0}'")]
    Duplicate(String),
    #[error("{0}")]
    Invalid(String),
}
