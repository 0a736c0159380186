//! Speech and language analytics for cognitive-impairment screening.
//!
//! The crate turns neuropsychological-exam transcripts, frame-level acoustic
//! tracks, and demographic records into a fixed feature set, fits baseline and
//! elastic-net regularized logistic regressions, and evaluates them with ROC,
//! calibration, and cross-validation machinery.
//!
//! Modules follow the processing pipeline:
//! - [`corpus`]: file formats and the shared data model
//! - [`acoustic`]: global acoustic statistics from frame tracks
//! - [`text`]: turn-level text features
//! - [`lm`]: interpolated Kneser-Ney trigram language models
//! - [`glm`]: unregularized and elastic-net logistic regression
//! - [`metrics`]: ROC/AUC, operating points, Hosmer-Lemeshow, Pearson screening
//! - [`harness`]: leave-one-out pipeline, baselines, synthetic corpora

pub mod acoustic;
pub mod corpus;
pub mod glm;
pub mod harness;
pub mod lm;
pub mod metrics;
pub mod text;

pub(crate) mod stats;

pub use acoustic::{GlobalAcousticVector, SpeechSegment};
pub use corpus::{
    DemographicRecord, FeatureFamily, FeatureMatrix, FrameTrack, Speaker, Transcript, Turn,
};
pub use glm::{CvCurve, CvSelection, ElasticNetFit, EnetSolution, LogisticFit};
pub use harness::{
    BaselineReport, EvalReport, FoldResult, LoocvConfig, LoocvOutput, SelectionReport, SynthConfig,
};
pub use metrics::{HlTest, OperatingPoints, RocCurve, ScreenResult};
