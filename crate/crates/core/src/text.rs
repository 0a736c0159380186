//! Turn-level text features: fluency statistics, question and hesitation
//! counts, vocabulary measures, and leave-one-subject-out perplexities.
//!
//! All features are computed over *subject* turns only; tester turns never
//! influence any value. "Words" are tokens that are neither transcription
//! tags (`<um>`) nor standalone punctuation — those two classes are counted
//! by their own dedicated features instead. Vocabulary, out-of-vocabulary
//! overlap, and language-model streams are case-folded.

use std::collections::BTreeSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::corpus::Transcript;
use crate::lm::{KneserNeyLm, LmError, PplNorm};
use crate::stats;

/// Canonical order of the 21 text features.
pub const TEXT_FEATURE_NAMES: [&str; 21] = [
    "words_mean",
    "words_min",
    "words_max",
    "words_median",
    "words_sum",
    "dur_mean",
    "dur_min",
    "dur_max",
    "dur_median",
    "wpm_mean",
    "wpm_min",
    "wpm_max",
    "wpm_median",
    "q_mean",
    "q_sum",
    "um_mean",
    "um_sum",
    "vocab_size",
    "oov_rate",
    "ppl_self",
    "ppl_others",
];

const HESITATION_TAG: &str = "<um>";
const QUESTION_TOKEN: &str = "?";

#[derive(Debug, Error)]
pub enum TextError {
    #[error("subject '{0}' has no subject turns")]
    NoSubjectTurns(String),
    #[error("subject '{0}' has an empty vocabulary")]
    EmptyVocabulary(String),
    #[error("need at least {required} subjects, found {found}")]
    TooFewSubjects { required: usize, found: usize },
    #[error("language model: {0}")]
    Lm(#[from] LmError),
}

/// Which set difference the out-of-vocabulary rate measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OovVariant {
    /// Words the cohort uses that the subject never does, over the subject's
    /// vocabulary size. Can exceed 1.
    OthersNotSubject,
    /// The conventional direction: the subject's words absent from the
    /// cohort's vocabulary.
    SubjectNotOthers,
}

#[derive(Debug, Clone, Copy)]
pub struct TextConfig {
    pub oov_variant: OovVariant,
    pub ppl_norm: PplNorm,
}

impl Default for TextConfig {
    fn default() -> Self {
        TextConfig {
            oov_variant: OovVariant::OthersNotSubject,
            ppl_norm: PplNorm::EvalTokens,
        }
    }
}

/// True for transcription tags such as `<um>` or `<laughter>`.
pub fn is_tag_token(token: &str) -> bool {
    token.len() > 2 && token.starts_with('<') && token.ends_with('>')
}

/// True for tokens counted as words: not a tag, and containing at least one
/// alphanumeric character (which excludes standalone punctuation).
pub fn is_word_token(token: &str) -> bool {
    !is_tag_token(token) && token.chars().any(|c| c.is_alphanumeric())
}

/// Case-folded word tokens of each subject turn, in turn order. Empty turns
/// are kept: a turn that contains only tags or punctuation still happened.
pub fn subject_sentences(t: &Transcript) -> Vec<Vec<String>> {
    t.subject_turns()
        .map(|turn| {
            turn.tokens
                .iter()
                .filter(|tok| is_word_token(tok))
                .map(|tok| tok.to_lowercase())
                .collect()
        })
        .collect()
}

/// Case-folded vocabulary over all subject turns.
pub fn vocabulary(t: &Transcript) -> BTreeSet<String> {
    subject_sentences(t).into_iter().flatten().collect()
}

/// Out-of-vocabulary rate between a subject's vocabulary and the pooled
/// vocabulary of everyone else.
pub fn oov_rate(
    subject_id: &str,
    subject_vocab: &BTreeSet<String>,
    others_vocab: &BTreeSet<String>,
    variant: OovVariant,
) -> Result<f64, TextError> {
    if subject_vocab.is_empty() {
        return Err(TextError::EmptyVocabulary(subject_id.to_string()));
    }
    let numerator = match variant {
        OovVariant::OthersNotSubject => others_vocab.difference(subject_vocab).count(),
        OovVariant::SubjectNotOthers => subject_vocab.difference(others_vocab).count(),
    };
    Ok(numerator as f64 / subject_vocab.len() as f64)
}

/// The 13 per-turn distributional features: word counts (mean, min, max,
/// median, sum), durations in seconds (mean, min, max, median), and
/// words-per-minute (mean, min, max, median).
pub fn per_turn_stats(t: &Transcript) -> Result<[f64; 13], TextError> {
    let mut words = Vec::new();
    let mut durations = Vec::new();
    let mut wpm = Vec::new();
    for turn in t.subject_turns() {
        let w = turn.tokens.iter().filter(|tok| is_word_token(tok)).count() as f64;
        let d = turn.end - turn.start;
        words.push(w);
        durations.push(d);
        wpm.push(w / d * 60.0);
    }
    if words.is_empty() {
        return Err(TextError::NoSubjectTurns(t.subject_id.clone()));
    }
    Ok([
        stats::mean(&words),
        stats::min(&words),
        stats::max(&words),
        stats::median(&words),
        words.iter().sum(),
        stats::mean(&durations),
        stats::min(&durations),
        stats::max(&durations),
        stats::median(&durations),
        stats::mean(&wpm),
        stats::min(&wpm),
        stats::max(&wpm),
        stats::median(&wpm),
    ])
}

/// Question-mark and `<um>`-tag counts over subject turns:
/// `[q_mean, q_sum, um_mean, um_sum]`.
pub fn question_hesitation_counts(t: &Transcript) -> Result<[f64; 4], TextError> {
    let mut q = Vec::new();
    let mut um = Vec::new();
    for turn in t.subject_turns() {
        q.push(turn.tokens.iter().filter(|tok| tok.as_str() == QUESTION_TOKEN).count() as f64);
        um.push(
            turn.tokens
                .iter()
                .filter(|tok| tok.to_lowercase() == HESITATION_TAG)
                .count() as f64,
        );
    }
    if q.is_empty() {
        return Err(TextError::NoSubjectTurns(t.subject_id.clone()));
    }
    Ok([
        stats::mean(&q),
        q.iter().sum(),
        stats::mean(&um),
        um.iter().sum(),
    ])
}

/// Leave-one-subject-out perplexities for subject `i`: the model is trained
/// on everyone else's turn sentences; `ppl_self` scores subject `i`'s stream
/// and `ppl_others` scores the training stream itself.
pub fn perplexity_features(
    i: usize,
    sentences: &[Vec<Vec<String>>],
    norm: PplNorm,
) -> Result<(f64, f64), TextError> {
    if sentences.len() < 2 {
        return Err(TextError::TooFewSubjects {
            required: 2,
            found: sentences.len(),
        });
    }
    let train: Vec<Vec<String>> = sentences
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .flat_map(|(_, s)| s.iter().cloned())
        .collect();
    let lm = KneserNeyLm::train(&train)?;
    let ppl_self = lm.perplexity(&sentences[i], norm);
    let ppl_others = lm.perplexity(&train, norm);
    Ok((ppl_self, ppl_others))
}

/// The full 21-feature vector for every transcript, in corpus order.
/// Perplexity features retrain one model per held-out subject, so the
/// per-subject work runs in parallel.
pub fn extract_text_features(
    transcripts: &[Transcript],
    config: TextConfig,
) -> Result<Vec<Vec<f64>>, TextError> {
    if transcripts.len() < 2 {
        return Err(TextError::TooFewSubjects {
            required: 2,
            found: transcripts.len(),
        });
    }
    let vocabs: Vec<BTreeSet<String>> = transcripts.iter().map(vocabulary).collect();
    let sentences: Vec<Vec<Vec<String>>> =
        transcripts.iter().map(subject_sentences).collect();

    transcripts
        .par_iter()
        .enumerate()
        .map(|(i, t)| {
            let turn_stats = per_turn_stats(t)?;
            let qh = question_hesitation_counts(t)?;
            let mut others: BTreeSet<String> = BTreeSet::new();
            for (j, v) in vocabs.iter().enumerate() {
                if j != i {
                    others.extend(v.iter().cloned());
                }
            }
            let oov = oov_rate(&t.subject_id, &vocabs[i], &others, config.oov_variant)?;
            let (ppl_self, ppl_others) = perplexity_features(i, &sentences, config.ppl_norm)?;

            let mut out = Vec::with_capacity(TEXT_FEATURE_NAMES.len());
            out.extend_from_slice(&turn_stats);
            out.extend_from_slice(&qh);
            out.push(vocabs[i].len() as f64);
            out.push(oov);
            out.push(ppl_self);
            out.push(ppl_others);
            debug_assert_eq!(out.len(), TEXT_FEATURE_NAMES.len());
            Ok(out)
        })
        .collect()
}
