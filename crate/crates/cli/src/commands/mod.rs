//! Subcommand implementations and the small amount of plumbing they share:
//! flag parsers for the clap derives, contextual file helpers, and run-
//! directory writers.

pub mod baseline;
pub mod extract;
pub mod loocv;
pub mod report;
pub mod synth;

use std::collections::BTreeSet;
use std::fs;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use cogspeech_core::corpus::{parse_family_set, FeatureFamily, FeatureMatrix};
use cogspeech_core::harness::{HarnessError, InnerFolds, Normalization};
use cogspeech_core::lm::PplNorm;
use cogspeech_core::text::OovVariant;

// Flag parsers for the clap derives. They return `String` errors so a bad
// value is a usage error (exit 1) rather than an input error.

pub fn parse_families(s: &str) -> Result<BTreeSet<FeatureFamily>, String> {
    parse_family_set(s).map_err(|e| e.to_string())
}

pub fn parse_alpha_step(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("not a number: '{s}'"))?;
    if v > 0.0 && v <= 0.5 {
        Ok(v)
    } else {
        Err(format!("mixing-grid step must lie in (0, 0.5], got {v}"))
    }
}

pub fn parse_level(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("not a number: '{s}'"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("screening level must lie in (0, 1), got {v}"))
    }
}

pub fn parse_folds(s: &str) -> Result<InnerFolds, String> {
    InnerFolds::parse(s).map_err(|e| e.to_string())
}

pub fn parse_normalization(s: &str) -> Result<Normalization, String> {
    Normalization::parse(s).map_err(|e| e.to_string())
}

pub fn parse_oov(s: &str) -> Result<OovVariant, String> {
    match s {
        "others-not-subject" => Ok(OovVariant::OthersNotSubject),
        "subject-not-others" => Ok(OovVariant::SubjectNotOthers),
        other => Err(format!(
            "out-of-vocabulary direction must be 'others-not-subject' or \
             'subject-not-others', got '{other}'"
        )),
    }
}

pub fn parse_ppl_norm(s: &str) -> Result<PplNorm, String> {
    match s {
        "eval-tokens" => Ok(PplNorm::EvalTokens),
        "train-vocab" => Ok(PplNorm::TrainVocab),
        other => Err(format!(
            "perplexity normalization must be 'eval-tokens' or 'train-vocab', got '{other}'"
        )),
    }
}

pub fn oov_label(v: OovVariant) -> &'static str {
    match v {
        OovVariant::OthersNotSubject => "others-not-subject",
        OovVariant::SubjectNotOthers => "subject-not-others",
    }
}

pub fn ppl_norm_label(v: PplNorm) -> &'static str {
    match v {
        PplNorm::EvalTokens => "eval-tokens",
        PplNorm::TrainVocab => "train-vocab",
    }
}

pub fn families_label(set: &BTreeSet<FeatureFamily>) -> String {
    if set.len() == 3 {
        return "all".to_string();
    }
    set.iter()
        .map(|f| match f {
            FeatureFamily::Demographic => "dem",
            FeatureFamily::Audio => "audio",
            FeatureFamily::Text => "text",
        })
        .collect::<Vec<_>>()
        .join("+")
}

// File plumbing with paths in the error messages.

pub fn ensure_dir(dir: &Path) -> Result<(), HarnessError> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::Invalid(format!("{}: {e}", dir.display())))
}

pub fn open_input(path: &Path) -> Result<BufReader<File>, HarnessError> {
    let file =
        File::open(path).map_err(|e| HarnessError::Invalid(format!("{}: {e}", path.display())))?;
    Ok(BufReader::new(file))
}

pub fn create_output(dir: &Path, name: &str) -> Result<BufWriter<File>, HarnessError> {
    let path = dir.join(name);
    let file = File::create(&path)
        .map_err(|e| HarnessError::Invalid(format!("{}: {e}", path.display())))?;
    Ok(BufWriter::new(file))
}

pub fn write_text(dir: &Path, name: &str, text: &str) -> Result<(), HarnessError> {
    let mut out = create_output(dir, name)?;
    out.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_json<T: serde::Serialize>(
    dir: &Path,
    name: &str,
    value: &T,
) -> Result<(), HarnessError> {
    let json = serde_json::to_string_pretty(value)
        .map_err(|e| HarnessError::Invalid(format!("cannot serialize {name}: {e}")))?;
    write_text(dir, name, &json)
}

pub fn load_matrix(path: &Path) -> Result<FeatureMatrix, HarnessError> {
    let mtx = FeatureMatrix::from_csv(open_input(path)?)?;
    if mtx.n_subjects() == 0 {
        return Err(HarnessError::Invalid(format!(
            "{}: feature matrix has no subjects",
            path.display()
        )));
    }
    Ok(mtx)
}
