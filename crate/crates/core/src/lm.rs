//! Interpolated Kneser–Ney trigram language models over turn token streams.
//!
//! Each training sentence is padded as `<s> <s> … </s>`. The trigram level
//! uses raw counts; the bigram and unigram levels use continuation counts
//! (type counts of distinct left contexts), which is what makes the
//! lower-order distributions measure *versatility* rather than frequency.
//! Every level interpolates with the one below:
//!
//! ```text
//! p₃(w|u,v) = [max(c(uvw) − D₃, 0) + D₃·N₁₊(uv·)·p₂(w|v)] / c(uv·)
//! p₂(w|v)   = [max(ĉ(vw) − D₂, 0) + D₂·N₁₊(v·)·p₁(w)]    / ĉ(v·)
//! p₁(w)     = [max(ĉ(w) − D₁, 0)  + D₁·N₁₊(··)·b(w)]      / ĉ(·)
//! ```
//!
//! with a uniform base `b(w) = 1/(V+1)` over the V training types (including
//! `</s>`) plus `<unk>`. A level with an unseen context falls through to the
//! one below. By telescoping, each conditional sums to one over the
//! predictable vocabulary.
//!
//! Per-level discounts use the count-of-counts estimate `D = n₁/(n₁ + 2n₂)`.
//! When a level has no singletons (`n₁ = 0`, e.g. a corpus where everything
//! repeats) the estimate collapses, so the discount falls back to 0.5 with a
//! warning.

use std::collections::HashMap;

use thiserror::Error;

const S_ID: u32 = 0;
const E_ID: u32 = 1;
const UNK_ID: u32 = 2;
const FIRST_WORD_ID: u32 = 3;

pub const SENTENCE_START: &str = "<s>";
pub const SENTENCE_END: &str = "</s>";
pub const UNKNOWN: &str = "<unk>";

const FALLBACK_DISCOUNT: f64 = 0.5;

#[derive(Debug, Error)]
pub enum LmError {
    #[error("cannot train a language model on an empty corpus")]
    EmptyCorpus,
    #[error("model parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
}

/// Perplexity normalization: divide the total log-probability by the number
/// of scored tokens (the usual convention) or by the training vocabulary
/// size (a stricter, length-insensitive variant).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PplNorm {
    EvalTokens,
    TrainVocab,
}

#[derive(Debug, Clone)]
pub struct KneserNeyLm {
    /// Interned tokens; ids 0..3 are `<s>`, `</s>`, `<unk>`.
    tokens: Vec<String>,
    ids: HashMap<String, u32>,
    trigrams: HashMap<(u32, u32, u32), u32>,
    /// Per trigram context `(u, v)`: (total raw count, distinct successors).
    tri_ctx: HashMap<(u32, u32), (u32, u32)>,
    /// Continuation counts `ĉ(vw)` = distinct `u` with `c(uvw) > 0`.
    bi_cont: HashMap<(u32, u32), u32>,
    /// Per bigram context `v`: (Σ_w ĉ(vw), distinct w with ĉ(vw) > 0).
    bi_ctx: HashMap<u32, (u32, u32)>,
    /// Continuation counts `ĉ(w)` = distinct `v` with `ĉ(vw) > 0`.
    uni_cont: HashMap<u32, u32>,
    /// Σ_w ĉ(w) (the number of distinct bigram types).
    uni_total: u32,
    /// Distinct `w` with `ĉ(w) > 0`.
    uni_distinct: u32,
    d3: f64,
    d2: f64,
    d1: f64,
}

impl KneserNeyLm {
    /// Train with discounts estimated from count-of-counts.
    pub fn train<S: AsRef<str>>(sentences: &[Vec<S>]) -> Result<Self, LmError> {
        Self::train_with_discounts(sentences, None)
    }

    /// Train with explicitly pinned discounts `(D₃, D₂, D₁)`; mainly useful
    /// for analyses that must hold the discounts fixed across corpora.
    pub fn train_with_discounts<S: AsRef<str>>(
        sentences: &[Vec<S>],
        discounts: Option<(f64, f64, f64)>,
    ) -> Result<Self, LmError> {
        if sentences.is_empty() {
            return Err(LmError::EmptyCorpus);
        }
        if let Some((d3, d2, d1)) = discounts {
            for d in [d3, d2, d1] {
                if !(0.0..1.0).contains(&d) {
                    return Err(LmError::Invalid(format!(
                        "discount must be in [0, 1), got {d}"
                    )));
                }
            }
        }

        let mut tokens = vec![
            SENTENCE_START.to_string(),
            SENTENCE_END.to_string(),
            UNKNOWN.to_string(),
        ];
        let mut ids: HashMap<String, u32> = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();

        let mut trigrams: HashMap<(u32, u32, u32), u32> = HashMap::new();
        for sent in sentences {
            let mut padded = Vec::with_capacity(sent.len() + 3);
            padded.push(S_ID);
            padded.push(S_ID);
            for tok in sent {
                let t = tok.as_ref();
                let id = *ids.entry(t.to_string()).or_insert_with(|| {
                    tokens.push(t.to_string());
                    (tokens.len() - 1) as u32
                });
                padded.push(id);
            }
            padded.push(E_ID);
            for win in padded.windows(3) {
                *trigrams.entry((win[0], win[1], win[2])).or_insert(0) += 1;
            }
        }

        Ok(Self::from_counts(tokens, ids, trigrams, discounts))
    }

    fn from_counts(
        tokens: Vec<String>,
        ids: HashMap<String, u32>,
        trigrams: HashMap<(u32, u32, u32), u32>,
        discounts: Option<(f64, f64, f64)>,
    ) -> Self {
        let mut tri_ctx: HashMap<(u32, u32), (u32, u32)> = HashMap::new();
        let mut bi_cont: HashMap<(u32, u32), u32> = HashMap::new();
        for (&(u, v, w), &c) in &trigrams {
            let e = tri_ctx.entry((u, v)).or_insert((0, 0));
            e.0 += c;
            e.1 += 1;
            *bi_cont.entry((v, w)).or_insert(0) += 1;
        }
        let mut bi_ctx: HashMap<u32, (u32, u32)> = HashMap::new();
        let mut uni_cont: HashMap<u32, u32> = HashMap::new();
        for (&(v, w), &c) in &bi_cont {
            let e = bi_ctx.entry(v).or_insert((0, 0));
            e.0 += c;
            e.1 += 1;
            *uni_cont.entry(w).or_insert(0) += 1;
        }
        let uni_total: u32 = uni_cont.values().sum();
        let uni_distinct = uni_cont.len() as u32;

        let (d3, d2, d1) = match discounts {
            Some(d) => d,
            None => (
                estimate_discount(trigrams.values().copied(), "trigram"),
                estimate_discount(bi_cont.values().copied(), "bigram continuation"),
                estimate_discount(uni_cont.values().copied(), "unigram continuation"),
            ),
        };

        KneserNeyLm {
            tokens,
            ids,
            trigrams,
            tri_ctx,
            bi_cont,
            bi_ctx,
            uni_cont,
            uni_total,
            uni_distinct,
            d3,
            d2,
            d1,
        }
    }

    /// Training vocabulary size V: all seen types including `</s>`,
    /// excluding `<s>` and `<unk>`.
    pub fn vocab_size(&self) -> usize {
        self.tokens.len() - 2
    }

    pub fn discounts(&self) -> (f64, f64, f64) {
        (self.d3, self.d2, self.d1)
    }

    /// Every token the model can predict: training types, `</s>`, `<unk>`.
    pub fn predictable_tokens(&self) -> Vec<&str> {
        self.tokens
            .iter()
            .enumerate()
            .filter(|(i, _)| *i as u32 != S_ID)
            .map(|(_, t)| t.as_str())
            .collect()
    }

    fn id_of(&self, token: &str) -> u32 {
        self.ids.get(token).copied().unwrap_or(UNK_ID)
    }

    fn base(&self, w: u32) -> f64 {
        if w == S_ID {
            0.0
        } else {
            1.0 / (self.vocab_size() + 1) as f64
        }
    }

    fn uni_prob(&self, w: u32) -> f64 {
        let base = self.base(w);
        if self.uni_total == 0 {
            return base;
        }
        let c = self.uni_cont.get(&w).copied().unwrap_or(0) as f64;
        let total = self.uni_total as f64;
        ((c - self.d1).max(0.0) + self.d1 * self.uni_distinct as f64 * base) / total
    }

    fn bi_prob(&self, v: u32, w: u32, p_uni: f64) -> f64 {
        match self.bi_ctx.get(&v) {
            None => p_uni,
            Some(&(total, distinct)) => {
                let c = self.bi_cont.get(&(v, w)).copied().unwrap_or(0) as f64;
                ((c - self.d2).max(0.0) + self.d2 * distinct as f64 * p_uni) / total as f64
            }
        }
    }

    fn tri_prob(&self, u: u32, v: u32, w: u32, p_bi: f64) -> f64 {
        match self.tri_ctx.get(&(u, v)) {
            None => p_bi,
            Some(&(total, distinct)) => {
                let c = self.trigrams.get(&(u, v, w)).copied().unwrap_or(0) as f64;
                ((c - self.d3).max(0.0) + self.d3 * distinct as f64 * p_bi) / total as f64
            }
        }
    }

    fn prob_ids(&self, u: u32, v: u32, w: u32) -> f64 {
        let p_uni = self.uni_prob(w);
        let p_bi = self.bi_prob(v, w, p_uni);
        self.tri_prob(u, v, w, p_bi)
    }

    /// Conditional probability of `word` after the two context tokens.
    /// Unseen tokens (in context or target) are mapped to `<unk>`.
    pub fn prob(&self, context: (&str, &str), word: &str) -> f64 {
        self.prob_ids(self.id_of(context.0), self.id_of(context.1), self.id_of(word))
    }

    /// Total log₂ probability of one padded sentence and the number of
    /// scored positions (every token after the two start pads, including
    /// `</s>`).
    pub fn log2_sentence<S: AsRef<str>>(&self, tokens: &[S]) -> (f64, usize) {
        let mut padded = Vec::with_capacity(tokens.len() + 3);
        padded.push(S_ID);
        padded.push(S_ID);
        padded.extend(tokens.iter().map(|t| self.id_of(t.as_ref())));
        padded.push(E_ID);
        let mut log2 = 0.0;
        for win in padded.windows(3) {
            log2 += self.prob_ids(win[0], win[1], win[2]).log2();
        }
        (log2, padded.len() - 2)
    }

    /// Corpus perplexity `2^(−L/M)` where `L` is the total log₂ probability
    /// and `M` depends on the normalization mode.
    pub fn perplexity<S: AsRef<str>>(&self, sentences: &[Vec<S>], norm: PplNorm) -> f64 {
        let mut log2 = 0.0;
        let mut scored = 0usize;
        for sent in sentences {
            let (l, m) = self.log2_sentence(sent);
            log2 += l;
            scored += m;
        }
        let denom = match norm {
            PplNorm::EvalTokens => scored as f64,
            PplNorm::TrainVocab => self.vocab_size() as f64,
        };
        if denom == 0.0 {
            return f64::NAN;
        }
        ppl_from_log2(log2, denom)
    }

    /// Text serialization (versioned, lossless for f64 via shortest-exact
    /// formatting).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("cogspeech-lm v1\n");
        out.push_str(&format!("discounts {} {} {}\n", self.d3, self.d2, self.d1));
        out.push_str(&format!("vocab {}\n", self.tokens.len() - FIRST_WORD_ID as usize));
        for t in &self.tokens[FIRST_WORD_ID as usize..] {
            out.push_str(t);
            out.push('\n');
        }
        let mut grams: Vec<(&(u32, u32, u32), &u32)> = self.trigrams.iter().collect();
        grams.sort_unstable_by_key(|(k, _)| **k);
        out.push_str(&format!("trigrams {}\n", grams.len()));
        for ((u, v, w), c) in grams {
            out.push_str(&format!("{u} {v} {w} {c}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, LmError> {
        let mut lines = text.lines();
        let magic = lines.next().ok_or_else(|| LmError::Parse("empty input".into()))?;
        if magic.trim() != "cogspeech-lm v1" {
            return Err(LmError::Parse(format!("unsupported header '{magic}'")));
        }
        let disc_line = lines
            .next()
            .ok_or_else(|| LmError::Parse("missing discounts line".into()))?;
        let disc: Vec<f64> = disc_line
            .strip_prefix("discounts ")
            .ok_or_else(|| LmError::Parse(format!("bad discounts line '{disc_line}'")))?
            .split_whitespace()
            .map(|s| s.parse::<f64>().map_err(|e| LmError::Parse(e.to_string())))
            .collect::<Result<_, _>>()?;
        if disc.len() != 3 {
            return Err(LmError::Parse("expected three discounts".into()));
        }

        let vocab_line = lines
            .next()
            .ok_or_else(|| LmError::Parse("missing vocab line".into()))?;
        let n_vocab: usize = vocab_line
            .strip_prefix("vocab ")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| LmError::Parse(format!("bad vocab line '{vocab_line}'")))?;
        let mut tokens = vec![
            SENTENCE_START.to_string(),
            SENTENCE_END.to_string(),
            UNKNOWN.to_string(),
        ];
        for _ in 0..n_vocab {
            let t = lines
                .next()
                .ok_or_else(|| LmError::Parse("vocab list truncated".into()))?;
            tokens.push(t.to_string());
        }
        let ids: HashMap<String, u32> = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
        if ids.len() != tokens.len() {
            return Err(LmError::Parse("duplicate vocabulary entry".into()));
        }

        let tri_line = lines
            .next()
            .ok_or_else(|| LmError::Parse("missing trigrams line".into()))?;
        let n_tri: usize = tri_line
            .strip_prefix("trigrams ")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| LmError::Parse(format!("bad trigrams line '{tri_line}'")))?;
        let mut trigrams = HashMap::with_capacity(n_tri);
        for _ in 0..n_tri {
            let line = lines
                .next()
                .ok_or_else(|| LmError::Parse("trigram table truncated".into()))?;
            let fields: Vec<u32> = line
                .split_whitespace()
                .map(|s| s.parse::<u32>().map_err(|e| LmError::Parse(e.to_string())))
                .collect::<Result<_, _>>()?;
            if fields.len() != 4 {
                return Err(LmError::Parse(format!("bad trigram line '{line}'")));
            }
            let max_id = tokens.len() as u32;
            if fields[..3].iter().any(|id| *id >= max_id) {
                return Err(LmError::Parse(format!("token id out of range in '{line}'")));
            }
            trigrams.insert((fields[0], fields[1], fields[2]), fields[3]);
        }

        Ok(Self::from_counts(
            tokens,
            ids,
            trigrams,
            Some((disc[0], disc[1], disc[2])),
        ))
    }
}

/// Perplexity from a total log₂ probability and a normalizer.
pub fn ppl_from_log2(log2_prob: f64, denom: f64) -> f64 {
    (2.0f64).powf(-log2_prob / denom)
}

fn estimate_discount(counts: impl Iterator<Item = u32>, level: &str) -> f64 {
    let mut n1 = 0u64;
    let mut n2 = 0u64;
    for c in counts {
        match c {
            1 => n1 += 1,
            2 => n2 += 1,
            _ => {}
        }
    }
    if n1 == 0 {
        log::warn!("{level} level has no singletons (n1={n1}, n2={n2}); using discount 0.5");
        return FALLBACK_DISCOUNT;
    }
    n1 as f64 / (n1 + 2 * n2) as f64
}
