//! `cogspeech extract`: turn a corpus directory into a feature-matrix CSV.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use cogspeech_core::corpus::FeatureFamily;
use cogspeech_core::harness::{extract_feature_matrix, load_corpus, HarnessError};
use cogspeech_core::lm::PplNorm;
use cogspeech_core::text::{OovVariant, TextConfig};

use crate::manifest::Manifest;

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// Corpus directory with demographics.csv, transcripts/, and tracks/.
    pub corpus: PathBuf,

    /// Run directory for features.csv, extraction_log.txt, manifest.json.
    #[arg(long, default_value = "extract-run")]
    pub out: PathBuf,

    /// Feature families to keep: dem, audio, text, sums like dem+text, or
    /// all.
    #[arg(long, default_value = "all", value_parser = super::parse_families)]
    pub features: BTreeSet<FeatureFamily>,

    /// Direction of the out-of-vocabulary rate.
    #[arg(long, default_value = "others-not-subject", value_parser = super::parse_oov)]
    pub oov_variant: OovVariant,

    /// Perplexity normalization: per evaluated token or per training-vocabulary word.
    #[arg(long, default_value = "eval-tokens", value_parser = super::parse_ppl_norm)]
    pub ppl_norm: PplNorm,
}

pub fn run(args: &ExtractArgs) -> Result<(), HarnessError> {
    let data = load_corpus(&args.corpus)?;
    let text_config = TextConfig {
        oov_variant: args.oov_variant,
        ppl_norm: args.ppl_norm,
    };
    let full = extract_feature_matrix(&data, text_config)?;
    let matrix = full.select_families(&args.features);
    if matrix.feature_names.is_empty() {
        return Err(HarnessError::Invalid(
            "selected feature families are empty".to_string(),
        ));
    }

    super::ensure_dir(&args.out)?;
    matrix.to_csv(super::create_output(&args.out, "features.csv")?)?;

    let mut log = String::new();
    for (i, id) in data.subject_ids.iter().enumerate() {
        let _ = writeln!(
            log,
            "{id}: outcome={} turns={} frames={} features={}",
            data.outcomes[i],
            data.transcripts[i].turns.len(),
            data.tracks[i].n_frames(),
            matrix.feature_names.len(),
        );
    }
    super::write_text(&args.out, "extraction_log.txt", &log)?;

    let mut manifest = Manifest::new("extract");
    manifest
        .flag("features", super::families_label(&args.features))
        .flag("oov-variant", super::oov_label(args.oov_variant))
        .flag("ppl-norm", super::ppl_norm_label(args.ppl_norm))
        .output("features.csv")
        .output("extraction_log.txt")
        .input("corpus", &args.corpus)?
        .write(&args.out)?;

    println!(
        "extracted {} features for {} subjects -> {}",
        matrix.feature_names.len(),
        matrix.subject_ids.len(),
        args.out.join("features.csv").display()
    );
    Ok(())
}
