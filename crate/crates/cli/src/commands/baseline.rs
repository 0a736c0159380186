//! `cogspeech baseline`: demographics-only logistic reference models.
//!
//! Produces the trivial always-the-prevalence score alongside an
//! unregularized demographic fit, either trained on the evaluation cohort
//! itself (local) or on a larger external matrix (global, via `--train`).

use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::Args;
use cogspeech_core::corpus::FeatureFamily;
use cogspeech_core::harness::{
    render_coefficient_table, render_eval_report, run_baseline, trivial_report, HarnessError,
};

use crate::manifest::Manifest;

#[derive(Debug, Args)]
pub struct BaselineArgs {
    /// Evaluation feature-matrix CSV; only demographic columns are used.
    pub matrix: PathBuf,

    /// Optional training matrix for a global baseline. Without it the model
    /// is fit on the evaluation cohort itself.
    #[arg(long)]
    pub train: Option<PathBuf>,

    /// Run directory for the reports and manifest.
    #[arg(long, default_value = "baseline-run")]
    pub out: PathBuf,

    /// Risk groups for the Hosmer-Lemeshow test.
    #[arg(long, default_value_t = 10)]
    pub hl_groups: usize,
}

pub fn run(args: &BaselineArgs) -> Result<(), HarnessError> {
    let dem: BTreeSet<FeatureFamily> = [FeatureFamily::Demographic].into_iter().collect();
    let eval_fm = super::load_matrix(&args.matrix)?.select_families(&dem);

    let scope = if args.train.is_some() { "global" } else { "local" };
    let train_fm = match &args.train {
        Some(path) => super::load_matrix(path)?.select_families(&dem),
        None => eval_fm.clone(),
    };

    let trivial = trivial_report(&eval_fm.y, args.hl_groups)?;
    let report = run_baseline(&train_fm, &eval_fm, args.hl_groups)?;

    let mut text = render_eval_report("trivial (constant prevalence)", &trivial);
    text.push('\n');
    text.push_str(&render_eval_report(
        &format!("demographics only ({scope})"),
        &report.eval,
    ));
    text.push('\n');
    text.push_str(&format!("training subjects: {}\n", report.n_train));
    if !report.dropped.is_empty() {
        text.push_str(&format!(
            "dropped zero-variance columns: {}\n",
            report.dropped.join(", ")
        ));
    }
    text.push('\n');
    text.push_str(&render_coefficient_table(&report.fit));

    super::ensure_dir(&args.out)?;
    super::write_text(&args.out, "baseline_report.txt", &text)?;
    super::write_json(&args.out, "eval_report.json", &report.eval)?;
    super::write_json(&args.out, "trivial_report.json", &trivial)?;
    super::write_json(&args.out, "coefficients.json", &report.fit)?;

    let mut manifest = Manifest::new("baseline");
    manifest
        .flag("scope", scope)
        .flag("hl-groups", args.hl_groups)
        .output("baseline_report.txt")
        .output("eval_report.json")
        .output("trivial_report.json")
        .output("coefficients.json")
        .input("matrix", &args.matrix)?;
    if let Some(train) = &args.train {
        manifest.input("train", train)?;
    }
    manifest.write(&args.out)?;

    print!("{text}");
    Ok(())
}
