//! Shared fixtures for the pipeline benchmarks.

use cogspeech_core::harness::{extract_feature_matrix, generate_corpus, CorpusData, SynthConfig};
use cogspeech_core::corpus::FeatureMatrix;
use cogspeech_core::text::TextConfig;

/// A small planted-signal corpus sized for benchmark iterations.
pub fn bench_corpus(n_subjects: usize, seed: u64) -> CorpusData {
    let cfg = SynthConfig {
        n_subjects,
        seed,
        turns_low: 4,
        turns_high: 6,
        ..SynthConfig::default()
    };
    generate_corpus(&cfg).expect("benchmark config is valid")
}

/// The corresponding full feature matrix.
pub fn bench_matrix(n_subjects: usize, seed: u64) -> FeatureMatrix {
    let data = bench_corpus(n_subjects, seed);
    extract_feature_matrix(&data, TextConfig::default()).expect("benchmark corpus extracts")
}
