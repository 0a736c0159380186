//! Seeded synthetic exam corpus with planted group effects.
//!
//! Impaired subjects differ from normals in exactly four places: downward
//! pitch excursions (drives `pitch_min`), a wider jitter spread (drives
//! `jitter_sd`), longer answer turns (drives `dur_mean`), and a higher
//! question rate (drives `q_sum`). Every other channel and every
//! demographic field is outcome-independent noise.
//!
//! All randomness is drawn unconditionally and scaled by
//! `outcome × effect`, so setting the effect sizes to zero makes a
//! subject's transcript and track bit-identical whichever class the
//! shuffle assigns them to.

use std::f64::consts::TAU;
use std::fs;
use std::io::BufWriter;
use std::path::Path;

use ndarray::Array2;
use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::extract::CorpusData;
use super::HarnessError;
use crate::corpus::{
    write_demographics_csv, write_transcript, DemographicRecord, Education, Employment,
    FrameTrack, Sex, Speaker, Transcript, Turn, FRAME_HOP_SECONDS,
};

/// Base channels emitted by the generator: the four sparse voice-quality
/// channels plus 19 dense spectral ones, 23 in total.
pub const SYNTH_CHANNELS: usize = 23;

const COMMON_POOL: [&str; 40] = [
    "i", "the", "a", "and", "it", "was", "we", "my", "to", "of", "in", "that", "then", "so",
    "well", "just", "really", "went", "saw", "had", "got", "made", "took", "day", "time", "home",
    "morning", "breakfast", "coffee", "walk", "garden", "house", "kids", "wife", "doctor",
    "store", "car", "nice", "good", "little",
];

const RARE_POOL: [&str; 48] = [
    "crossword", "pharmacy", "thermostat", "casserole", "hummingbird", "appointment",
    "grandson", "granddaughter", "neighborhood", "retirement", "birdfeeder", "porch",
    "tomatoes", "zucchini", "sermon", "choir", "dominoes", "bingo", "crochet", "quilting",
    "veranda", "almanac", "harmonica", "orchard", "tractor", "sawmill", "lighthouse",
    "ferry", "harbor", "trolley", "typewriter", "percolator", "icebox", "clothesline",
    "rhubarb", "persimmon", "mulberry", "chickadee", "cardinal", "sparrow", "woodshed",
    "rocking", "checkers", "solitaire", "newsreel", "matinee", "shortwave", "buick",
];

const PROMPTS: [&[&str]; 6] = [
    &["tell", "me", "about", "your", "morning", "?"],
    &["what", "did", "you", "do", "yesterday", "?"],
    &["describe", "the", "picture", "for", "me", "?"],
    &["how", "did", "you", "get", "here", "today", "?"],
    &["what", "do", "you", "usually", "have", "for", "breakfast", "?"],
    &["tell", "me", "about", "where", "you", "grew", "up", "?"],
];

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub n_subjects: usize,
    pub prevalence: f64,
    pub seed: u64,
    /// Depth (Hz) of the impaired group's sustained low-pitch dips.
    pub pitch_effect: f64,
    /// Scales an extra 0.02 onto the impaired group's jitter spread.
    pub jitter_effect: f64,
    /// Seconds added to every impaired answer turn.
    pub duration_effect: f64,
    /// Added to the impaired per-turn question probability (subject bases
    /// sit in 0.08–0.22).
    pub question_effect: f64,
    /// Spread of the outcome-independent dense channels.
    pub noise_scale: f64,
    pub turns_low: usize,
    pub turns_high: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_subjects: 60,
            prevalence: 0.25,
            seed: 17,
            pitch_effect: 24.0,
            jitter_effect: 0.25,
            duration_effect: 0.9,
            question_effect: 0.22,
            noise_scale: 1.0,
            turns_low: 8,
            turns_high: 14,
        }
    }
}

impl SynthConfig {
    /// A small, fast corpus with every planted effect switched off.
    pub fn noise(n_subjects: usize, seed: u64) -> SynthConfig {
        SynthConfig {
            n_subjects,
            seed,
            pitch_effect: 0.0,
            jitter_effect: 0.0,
            duration_effect: 0.0,
            question_effect: 0.0,
            turns_low: 4,
            turns_high: 6,
            ..SynthConfig::default()
        }
    }

    pub fn n_impaired(&self) -> usize {
        (self.prevalence * self.n_subjects as f64).round() as usize
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.n_subjects < 10 {
            return Err(HarnessError::Invalid(format!(
                "need at least 10 subjects, got {}",
                self.n_subjects
            )));
        }
        if self.n_subjects > 999 {
            return Err(HarnessError::Invalid(
                "subject ids use a three-digit space; cap the corpus at 999".to_string(),
            ));
        }
        if !(self.prevalence > 0.0 && self.prevalence < 1.0) {
            return Err(HarnessError::Invalid(format!(
                "prevalence must lie strictly inside (0, 1), got {}",
                self.prevalence
            )));
        }
        let k = self.n_impaired();
        if k < 2 || k + 2 > self.n_subjects {
            return Err(HarnessError::Invalid(format!(
                "prevalence {} with {} subjects leaves a class below 2 members",
                self.prevalence, self.n_subjects
            )));
        }
        if self.turns_low < 1 || self.turns_low > self.turns_high {
            return Err(HarnessError::Invalid(format!(
                "turn range [{}, {}] is invalid",
                self.turns_low, self.turns_high
            )));
        }
        for (name, v) in [
            ("pitch_effect", self.pitch_effect),
            ("jitter_effect", self.jitter_effect),
            ("duration_effect", self.duration_effect),
            ("question_effect", self.question_effect),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(HarnessError::Invalid(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        if !(self.noise_scale.is_finite() && self.noise_scale > 0.0) {
            return Err(HarnessError::Invalid(format!(
                "noise_scale must be positive, got {}",
                self.noise_scale
            )));
        }
        Ok(())
    }
}

/// Snap to the 10 ms grid so transcript times round-trip cleanly.
fn q2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

fn channel_names() -> Vec<String> {
    let mut names = vec![
        "voicing_prob".to_string(),
        "pitch".to_string(),
        "shimmer".to_string(),
        "jitter".to_string(),
        "energy".to_string(),
    ];
    for k in 0..18 {
        names.push(format!("mfcc_{k:02}"));
    }
    names
}

struct SubjectData {
    record: DemographicRecord,
    transcript: Transcript,
    track: FrameTrack,
}

fn generate_subject(
    id: &str,
    outcome: u8,
    sub_seed: u64,
    cfg: &SynthConfig,
    zipf: &WeightedIndex<f64>,
) -> SubjectData {
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed);
    let imp = outcome as f64;

    // Demographics carry no signal: every field is outcome-independent.
    let record = DemographicRecord {
        age: rng.gen_range(55..=89) as f64,
        sex: if rng.gen::<f64>() < 0.5 {
            Sex::Female
        } else {
            Sex::Male
        },
        education: [
            Education::SomeHighSchool,
            Education::HighSchool,
            Education::SomeCollege,
            Education::College,
        ][rng.gen_range(0..4)],
        employment: [
            Employment::FullTime,
            Employment::PartTime,
            Employment::Retired,
            Employment::Unemployed,
            Employment::Disability,
            Employment::Never,
            Employment::Volunteer,
            Employment::Student,
            Employment::Homemaker,
            Employment::Other,
        ][rng.gen_range(0..10)],
    };

    // Subject-level baselines, drawn for everyone so the draw stream never
    // depends on the outcome; the planted effects shift them additively.
    // The spreads are sized so each planted feature overlaps between the
    // groups instead of separating them outright.
    let tempo = rng.gen_range(-0.9..0.9);
    let jitter_base = rng.gen_range(0.005..0.016);
    let question_base = rng.gen_range(0.08..0.22);

    // Turn layout: tester prompt, gap, subject answer, gap, repeated.
    // Answer durations are a shared base plus a log-normal tail: the tail
    // makes the per-subject maximum noisy for everyone, so the planted
    // shift shows up in the mean rather than the extremes. Every duration
    // is drawn for everyone and shifted additively for the impaired, so
    // the draw stream never depends on the outcome.
    let n_pairs = rng.gen_range(cfg.turns_low..=cfg.turns_high);
    let mut turns = Vec::with_capacity(2 * n_pairs);
    let mut cursor = q2(rng.gen_range(0.2..0.8));
    for k in 0..n_pairs {
        let tester_dur = q2(rng.gen_range(1.0..2.5));
        let gap_a = q2(rng.gen_range(0.05..0.3));
        let tail: f64 = rng.sample(StandardNormal);
        let answer_dur = q2(
            (1.4 + tempo + imp * cfg.duration_effect + (0.3 + 0.5 * tail).exp()).max(0.7),
        );
        let gap_b = q2(rng.gen_range(0.05..0.3));
        let tester_end = q2(cursor + tester_dur);
        turns.push(Turn {
            start: cursor,
            end: tester_end,
            speaker: Speaker::Tester,
            tokens: PROMPTS[k % PROMPTS.len()]
                .iter()
                .map(|w| w.to_string())
                .collect(),
        });
        let answer_start = q2(tester_end + gap_a);
        let answer_end = q2(answer_start + answer_dur);
        turns.push(Turn {
            start: answer_start,
            end: answer_end,
            speaker: Speaker::Subject,
            tokens: Vec::new(),
        });
        cursor = q2(answer_end + gap_b);
    }

    // Per-subject voice and spectral parameters. The sinusoid amplitude
    // varies between subjects so overall pitch variability is a noisy
    // trait rather than a stand-in for the planted dips.
    let base_f0 = 110.0 + rng.gen_range(0.0..24.0);
    let pitch_amp = rng.gen_range(5.0..13.0);
    let phase_voicing = rng.gen_range(0.0..TAU);
    let phase_pitch = rng.gen_range(0.0..TAU);
    let dense_params: Vec<(f64, f64, f64)> = (0..19)
        .map(|_| {
            (
                rng.gen_range(0.5..1.5),
                rng.gen_range(0.7..2.0),
                rng.gen_range(0.0..TAU),
            )
        })
        .collect();

    // Answer tokens: mostly common words with a Zipf-ish profile, a few
    // subject-specific rare words, filler tags, and a final punctuation
    // token whose question probability carries the planted effect.
    let rare: Vec<&str> = (0..4)
        .map(|_| RARE_POOL[rng.gen_range(0..RARE_POOL.len())])
        .collect();
    let question_prob = (question_base + imp * cfg.question_effect).min(0.9);
    for turn in turns.iter_mut().filter(|t| t.speaker == Speaker::Subject) {
        let wps = rng.gen_range(1.2..2.8);
        let n_words = ((turn.duration() * wps).round() as usize).max(3);
        let mut tokens = Vec::with_capacity(n_words + 2);
        for w in 0..n_words {
            let word = if rng.gen::<f64>() < 0.85 {
                COMMON_POOL[zipf.sample(&mut rng)]
            } else {
                rare[rng.gen_range(0..rare.len())]
            };
            if w >= 1 && rng.gen::<f64>() < 0.10 {
                tokens.push("<um>".to_string());
            }
            tokens.push(word.to_string());
        }
        tokens.push(if rng.gen::<f64>() < question_prob { "?" } else { "." }.to_string());
        turn.tokens = tokens;
    }

    // Frame track. Voicing oscillates through the answer turns so the
    // envelope rises and falls; pitch, shimmer, and jitter exist only on
    // voiced frames; the dense channels are outcome-free sinusoids plus
    // noise.
    let answer_spans: Vec<(f64, f64)> = turns
        .iter()
        .filter(|t| t.speaker == Speaker::Subject)
        .map(|t| (t.start, t.end))
        .collect();
    let last_end = turns.last().map(|t| t.end).unwrap_or(0.0);
    let n_frames = (last_end * 100.0).round() as usize + 25;

    // Low-pitch excursions: a handful of sustained dips during which the
    // voice settles toward a flat plateau below the baseline. The blend
    // weight flattens the sinusoid for everyone; only the plateau depth is
    // gated by the outcome, so the draw stream stays outcome-free. The
    // raised-cosine entry keeps the frame-to-frame slope well under the
    // pitch noise, so a dip moves the floor of the pitch channel without
    // leaving a signature in its deltas.
    let mut dip_w = vec![0.0f64; n_frames];
    let mut dip_depth = vec![0.0f64; n_frames];
    let n_dips = rng.gen_range(3..=7);
    for _ in 0..n_dips {
        let span = answer_spans[rng.gen_range(0..answer_spans.len())];
        let center = span.0 + rng.gen::<f64>() * (span.1 - span.0);
        let half = rng.gen_range(0.12..0.30);
        let depth = imp * cfg.pitch_effect * rng.gen_range(0.8..1.2);
        let lo = (((center - half) / FRAME_HOP_SECONDS).floor()).max(0.0) as usize;
        let hi = ((((center + half) / FRAME_HOP_SECONDS).ceil()) as usize).min(n_frames - 1);
        for f in lo..=hi {
            let phase = (f as f64 * FRAME_HOP_SECONDS - center) / half;
            if phase.abs() < 1.0 {
                let w = 0.5 * (1.0 + (std::f64::consts::PI * phase).cos());
                if w > dip_w[f] {
                    dip_w[f] = w;
                    dip_depth[f] = w * depth;
                }
            }
        }
    }

    let mut values = Array2::<f64>::zeros((n_frames, SYNTH_CHANNELS));
    let mut span_idx = 0usize;
    for i in 0..n_frames {
        let t = i as f64 * FRAME_HOP_SECONDS;
        while span_idx < answer_spans.len() && t >= answer_spans[span_idx].1 {
            span_idx += 1;
        }
        let inside = span_idx < answer_spans.len() && t >= answer_spans[span_idx].0;
        let voicing = if inside {
            let z: f64 = rng.sample(StandardNormal);
            (0.55 + 0.4 * (TAU * t / 1.3 + phase_voicing).sin() + 0.05 * z).clamp(0.01, 0.99)
        } else {
            rng.gen_range(0.0..0.15)
        };
        values[[i, 0]] = voicing;
        let voiced = inside && voicing > 0.45;
        if voiced {
            let z: f64 = rng.sample(StandardNormal);
            let swing = (1.0 - dip_w[i]) * pitch_amp * (TAU * t / 2.7 + phase_pitch).sin();
            let pitch = base_f0 + swing + 2.5 * z - dip_depth[i];
            values[[i, 1]] = pitch.max(30.0);
            let z: f64 = rng.sample(StandardNormal);
            values[[i, 2]] = (0.1 + 0.03 * z).max(0.001);
            // The clamp mimics an extractor's dynamic range and pins the
            // channel extremes for everyone, so the planted spread change
            // is visible to the standard deviation but not to the max.
            let z: f64 = rng.sample(StandardNormal);
            let jitter_sd = jitter_base + imp * cfg.jitter_effect * 0.02;
            values[[i, 3]] = (0.03 + jitter_sd * z).clamp(0.002, 0.058);
        }
        for (c, &(amp, period, phase)) in dense_params.iter().enumerate() {
            let z: f64 = rng.sample(StandardNormal);
            values[[i, 4 + c]] =
                amp * (TAU * t / period + phase).sin() + 0.4 * cfg.noise_scale * z;
        }
    }
    let names = channel_names();
    let sparse = FrameTrack::default_sparse_set(&names);
    let track =
        FrameTrack::new(id, names, values, sparse).expect("generator emits a well-formed track");

    SubjectData {
        record,
        transcript: Transcript {
            subject_id: id.to_string(),
            turns,
        },
        track,
    }
}

/// Generate a full corpus in memory. Deterministic given the config.
pub fn generate_corpus(cfg: &SynthConfig) -> Result<CorpusData, HarnessError> {
    cfg.validate()?;
    let mut master = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.n_subjects;
    let mut outcomes: Vec<u8> = vec![1; cfg.n_impaired()];
    outcomes.resize(n, 0);
    outcomes.shuffle(&mut master);
    let sub_seeds: Vec<u64> = (0..n).map(|_| master.gen()).collect();

    let weights: Vec<f64> = (0..COMMON_POOL.len()).map(|r| 1.0 / (1.0 + r as f64)).collect();
    let zipf = WeightedIndex::new(&weights).expect("static weights are valid");

    let mut data = CorpusData {
        subject_ids: Vec::with_capacity(n),
        demographics: Vec::with_capacity(n),
        outcomes,
        transcripts: Vec::with_capacity(n),
        tracks: Vec::with_capacity(n),
    };
    for i in 0..n {
        let id = format!("s{:03}", i + 1);
        let subject = generate_subject(&id, data.outcomes[i], sub_seeds[i], cfg, &zipf);
        data.subject_ids.push(id);
        data.demographics.push(subject.record);
        data.transcripts.push(subject.transcript);
        data.tracks.push(subject.track);
    }
    Ok(data)
}

/// Write a corpus as `demographics.csv`, `transcripts/<id>.tsv`, and
/// `tracks/<id>.csv` under `dir`.
pub fn write_corpus(data: &CorpusData, dir: &Path) -> Result<(), HarnessError> {
    let transcripts_dir = dir.join("transcripts");
    let tracks_dir = dir.join("tracks");
    fs::create_dir_all(&transcripts_dir)?;
    fs::create_dir_all(&tracks_dir)?;
    let rows: Vec<(String, DemographicRecord, u8)> = data
        .subject_ids
        .iter()
        .zip(&data.demographics)
        .zip(&data.outcomes)
        .map(|((id, rec), &out)| (id.clone(), rec.clone(), out))
        .collect();
    let demo = fs::File::create(dir.join("demographics.csv"))?;
    write_demographics_csv(&rows, BufWriter::new(demo))?;
    for (id, transcript) in data.subject_ids.iter().zip(&data.transcripts) {
        let f = fs::File::create(transcripts_dir.join(format!("{id}.tsv")))?;
        write_transcript(transcript, BufWriter::new(f))?;
    }
    for (id, track) in data.subject_ids.iter().zip(&data.tracks) {
        let f = fs::File::create(tracks_dir.join(format!("{id}.csv")))?;
        track.to_csv(BufWriter::new(f))?;
    }
    Ok(())
}
