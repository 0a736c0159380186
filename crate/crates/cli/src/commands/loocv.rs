//! `cogspeech loocv`: nested leave-one-out evaluation of the screened
//! elastic-net pipeline over a feature-matrix CSV.

use std::collections::BTreeSet;
use std::num::NonZeroUsize;
use std::path::PathBuf;

use clap::Args;
use cogspeech_core::corpus::FeatureFamily;
use cogspeech_core::glm::render_model;
use cogspeech_core::harness::{
    render_eval_report, render_selection_report, run_loocv, write_fold_log, HarnessError,
    InnerFolds, LoocvConfig, Normalization,
};

use crate::manifest::Manifest;

#[derive(Debug, Args)]
pub struct LoocvArgs {
    /// Feature-matrix CSV, as written by `extract`.
    pub matrix: PathBuf,

    /// Run directory for the fold log, reports, and manifest.
    #[arg(long, default_value = "loocv-run")]
    pub out: PathBuf,

    /// Feature families to keep before modeling.
    #[arg(long, default_value = "all", value_parser = super::parse_families)]
    pub features: BTreeSet<FeatureFamily>,

    /// Mixing-grid step; the grid is 0, step, ..., 1.
    #[arg(long, default_value = "0.01", value_parser = super::parse_alpha_step)]
    pub alpha_step: f64,

    /// Inner cross-validation folds: 'loo' or an integer >= 2.
    #[arg(long, default_value = "loo", value_parser = super::parse_folds)]
    pub folds: InnerFolds,

    /// Univariate screening level inside each fold.
    #[arg(long, default_value = "0.01", value_parser = super::parse_level)]
    pub screen_level: f64,

    /// 'per-fold' refits the standardization inside each training set;
    /// 'global' (deliberately leaky) fits it once on all subjects.
    #[arg(long, default_value = "per-fold", value_parser = super::parse_normalization)]
    pub normalize: Normalization,

    /// Seed for inner-fold shuffling.
    #[arg(long, default_value_t = 17)]
    pub seed: u64,

    /// Risk groups for the Hosmer-Lemeshow test.
    #[arg(long, default_value_t = 10)]
    pub hl_groups: usize,
}

pub fn run(args: &LoocvArgs, threads: Option<NonZeroUsize>) -> Result<(), HarnessError> {
    let full = super::load_matrix(&args.matrix)?;
    let matrix = full.select_families(&args.features);
    if matrix.feature_names.is_empty() {
        return Err(HarnessError::Invalid(
            "selected feature families are empty".to_string(),
        ));
    }

    let config = LoocvConfig {
        alpha_step: args.alpha_step,
        inner_folds: args.folds,
        screen_level: args.screen_level,
        normalization: args.normalize,
        seed: args.seed,
        hl_groups: args.hl_groups,
    };
    let output = run_loocv(&matrix, &config)?;

    super::ensure_dir(&args.out)?;
    write_fold_log(&output.folds, super::create_output(&args.out, "fold_log.jsonl")?)?;
    super::write_json(&args.out, "eval_report.json", &output.eval)?;
    super::write_json(&args.out, "selection_report.json", &output.selection)?;
    let eval_text = render_eval_report("elastic net (nested LOOCV)", &output.eval);
    super::write_text(&args.out, "eval_report.txt", &eval_text)?;
    super::write_text(
        &args.out,
        "selection_report.txt",
        &render_selection_report(&output.selection),
    )?;
    super::write_text(&args.out, "model_final.txt", &render_model(&output.model_file))?;

    let mut manifest = Manifest::new("loocv");
    manifest.alpha_count = Some(output.alpha_count);
    manifest.max_lambda_path_len = Some(output.max_lambda_path_len);
    manifest.inner_folds = Some(args.folds.label());
    manifest.lambda_selection = Some("1se".to_string());
    manifest.seed = Some(args.seed);
    manifest
        .flag("features", super::families_label(&args.features))
        .flag("alpha-step", args.alpha_step)
        .flag("folds", args.folds.label())
        .flag("screen-level", args.screen_level)
        .flag("normalize", args.normalize.label())
        .flag("seed", args.seed)
        .flag("hl-groups", args.hl_groups)
        .flag(
            "threads",
            threads.map_or_else(|| "auto".to_string(), |k| k.to_string()),
        )
        .output("fold_log.jsonl")
        .output("eval_report.json")
        .output("eval_report.txt")
        .output("selection_report.json")
        .output("selection_report.txt")
        .output("model_final.txt")
        .input("matrix", &args.matrix)?
        .write(&args.out)?;

    print!("{eval_text}");
    println!("run directory: {}", args.out.display());
    Ok(())
}
