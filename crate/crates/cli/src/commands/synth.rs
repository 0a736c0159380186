//! `cogspeech synth`: write a seeded synthetic exam corpus.
//!
//! The generator plants four group differences (pitch drops, jitter spread,
//! answer duration, question rate); everything else is outcome-independent
//! noise. The manifest records a content hash per generated file, and the
//! whole run is deterministic in the seed: same flags, same bytes.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;
use cogspeech_core::harness::{generate_corpus, write_corpus, HarnessError, SynthConfig};

use crate::manifest::{collect_files, sha256_file, Manifest};

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Output corpus directory.
    #[arg(long, default_value = "synth-corpus")]
    pub out: PathBuf,

    /// JSON generator config; explicit flags below override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Number of subjects (ids s001, s002, ...).
    #[arg(long)]
    pub subjects: Option<usize>,

    /// Fraction of impaired subjects, in (0, 1).
    #[arg(long)]
    pub prevalence: Option<f64>,

    #[arg(long)]
    pub seed: Option<u64>,

    /// Depth (Hz) of the impaired group's occasional pitch drops.
    #[arg(long)]
    pub pitch_effect: Option<f64>,

    /// Scales the extra jitter spread of the impaired group.
    #[arg(long)]
    pub jitter_effect: Option<f64>,

    /// Seconds added to every impaired answer turn.
    #[arg(long)]
    pub duration_effect: Option<f64>,

    /// Added to the impaired per-turn question probability.
    #[arg(long)]
    pub question_effect: Option<f64>,

    /// Spread of the outcome-independent dense channels.
    #[arg(long)]
    pub noise_scale: Option<f64>,

    /// Fewest answer turns per subject.
    #[arg(long)]
    pub turns_low: Option<usize>,

    /// Most answer turns per subject.
    #[arg(long)]
    pub turns_high: Option<usize>,
}

impl SynthArgs {
    fn effective_config(&self) -> Result<SynthConfig, HarnessError> {
        let mut cfg = match &self.config {
            Some(path) => {
                let reader = super::open_input(path)?;
                serde_json::from_reader(reader)
                    .map_err(|e| HarnessError::Invalid(format!("{}: {e}", path.display())))?
            }
            None => SynthConfig::default(),
        };
        macro_rules! override_field {
            ($flag:ident, $field:ident) => {
                if let Some(v) = self.$flag {
                    cfg.$field = v;
                }
            };
        }
        override_field!(subjects, n_subjects);
        override_field!(prevalence, prevalence);
        override_field!(seed, seed);
        override_field!(pitch_effect, pitch_effect);
        override_field!(jitter_effect, jitter_effect);
        override_field!(duration_effect, duration_effect);
        override_field!(question_effect, question_effect);
        override_field!(noise_scale, noise_scale);
        override_field!(turns_low, turns_low);
        override_field!(turns_high, turns_high);
        Ok(cfg)
    }
}

pub fn run(args: &SynthArgs) -> Result<(), HarnessError> {
    let cfg = args.effective_config()?;
    let data = generate_corpus(&cfg)?;
    write_corpus(&data, &args.out)?;

    let mut rel_paths = Vec::new();
    collect_files(&args.out, &args.out, &mut rel_paths)?;
    rel_paths.sort_unstable();
    let mut files = BTreeMap::new();
    for rel in &rel_paths {
        files.insert(rel.clone(), sha256_file(&args.out.join(rel))?);
    }

    let mut manifest = Manifest::new("synth");
    manifest.seed = Some(cfg.seed);
    manifest.files = Some(files);
    manifest
        .flag("subjects", cfg.n_subjects)
        .flag("prevalence", cfg.prevalence)
        .flag("seed", cfg.seed)
        .flag("pitch-effect", cfg.pitch_effect)
        .flag("jitter-effect", cfg.jitter_effect)
        .flag("duration-effect", cfg.duration_effect)
        .flag("question-effect", cfg.question_effect)
        .flag("noise-scale", cfg.noise_scale)
        .flag("turns-low", cfg.turns_low)
        .flag("turns-high", cfg.turns_high);
    if let Some(config) = &args.config {
        manifest.input("config", config)?;
    }
    for rel in &rel_paths {
        manifest.output(rel);
    }
    manifest.write(&args.out)?;

    let impaired = data.outcomes.iter().filter(|&&o| o == 1).count();
    println!(
        "wrote {} subjects ({impaired} impaired) to {}",
        data.subject_ids.len(),
        args.out.display()
    );
    Ok(())
}
