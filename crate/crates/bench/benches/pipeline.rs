//! Benchmarks for the hot paths: the elastic-net path fit, language-model
//! training and scoring, the voicing envelope, and ROC computation.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ndarray::Array2;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use cogspeech_bench::{bench_corpus, bench_matrix};
use cogspeech_core::acoustic::{detect_speech_segments, voicing_envelope};
use cogspeech_core::glm::fit_enet_path;
use cogspeech_core::lm::{KneserNeyLm, PplNorm};
use cogspeech_core::metrics::roc_auc;

fn random_design(n: usize, p: usize, seed: u64) -> (Array2<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = Array2::<f64>::zeros((n, p));
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut eta = -0.3;
        for j in 0..p {
            let v: f64 = rng.gen::<f64>() * 2.0 - 1.0;
            x[[i, j]] = v;
            if j < 3 {
                eta += 1.2 * v;
            }
        }
        y[i] = if rng.gen::<f64>() < 1.0 / (1.0 + (-eta).exp()) {
            1.0
        } else {
            0.0
        };
    }
    (x, y)
}

fn enet_path_bench(c: &mut Criterion) {
    let (x, y) = random_design(60, 12, 11);
    c.bench_function("enet_path_60x12_alpha05", |b| {
        b.iter(|| fit_enet_path(&x, &y, 0.5, 100, true).unwrap())
    });
}

fn lm_bench(c: &mut Criterion) {
    let corpus = bench_corpus(12, 23);
    let streams: Vec<Vec<String>> = corpus
        .transcripts
        .iter()
        .map(|t| {
            t.subject_turns()
                .flat_map(|turn| turn.tokens.iter())
                .filter(|tok| tok.chars().any(|c| c.is_alphanumeric()) && !tok.starts_with('<'))
                .map(|tok| tok.to_lowercase())
                .collect()
        })
        .collect();
    let train: Vec<Vec<String>> = streams[1..].to_vec();
    c.bench_function("kn_train_11_subjects", |b| {
        b.iter(|| KneserNeyLm::train(&train).unwrap())
    });
    let lm = KneserNeyLm::train(&train).unwrap();
    let eval = &streams[..1];
    c.bench_function("kn_perplexity", |b| {
        b.iter(|| lm.perplexity(eval, PplNorm::EvalTokens))
    });
}

fn envelope_bench(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let voicing: Vec<f64> = (0..6000)
        .map(|i| (i as f64 * 0.05).sin() + 0.1 * rng.gen::<f64>())
        .collect();
    c.bench_function("voicing_envelope_6000", |b| {
        b.iter(|| {
            let env = voicing_envelope(&voicing, 10);
            detect_speech_segments(&env, 0.1)
        })
    });
}

fn roc_bench(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in [100usize, 10_000] {
        let labels: Vec<f64> = (0..n)
            .map(|_| if rng.gen::<f64>() < 0.3 { 1.0 } else { 0.0 })
            .collect();
        let scores: Vec<f64> = labels
            .iter()
            .map(|&l| 0.4 * l + 0.6 * rng.gen::<f64>())
            .collect();
        c.bench_with_input(BenchmarkId::new("roc_auc", n), &n, |b, _| {
            b.iter(|| roc_auc(&scores, &labels).unwrap())
        });
    }
}

fn extraction_bench(c: &mut Criterion) {
    c.bench_function("extract_matrix_10_subjects", |b| {
        b.iter(|| bench_matrix(10, 31))
    });
}

criterion_group!(
    benches,
    enet_path_bench,
    lm_bench,
    envelope_bench,
    roc_bench,
    extraction_bench
);
criterion_main!(benches);
