//! Exam transcript model and its tab-separated on-disk format.
//!
//! Each line is `start_s<TAB>end_s<TAB>speaker<TAB>utterance` with speaker
//! codes `S` (subject) and `T` (tester). Lines starting with `#` are comments.
//! Utterances are stored tokenized: whitespace-separated, with sentence
//! punctuation split into standalone tokens and `<...>` annotation tags kept
//! whole, so `it's <um> october?` becomes `["it's", "<um>", "october", "?"]`.

use std::io::{BufRead, Write};

use super::CorpusError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Speaker {
    Subject,
    Tester,
}

impl Speaker {
    pub fn code(self) -> &'static str {
        match self {
            Speaker::Subject => "S",
            Speaker::Tester => "T",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Turn {
    pub start: f64,
    pub end: f64,
    pub speaker: Speaker,
    pub tokens: Vec<String>,
}

impl Turn {
    pub fn duration(&self) -> f64 {
        self.end - self.start
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transcript {
    pub subject_id: String,
    pub turns: Vec<Turn>,
}

impl Transcript {
    pub fn subject_turns(&self) -> impl Iterator<Item = &Turn> {
        self.turns.iter().filter(|t| t.speaker == Speaker::Subject)
    }
}

fn is_sentence_punct(c: char) -> bool {
    matches!(c, '?' | '.' | '!' | ',' | ';' | ':')
}

/// Whitespace-split an utterance, peeling sentence punctuation off token
/// edges into standalone tokens. `<...>` tags pass through untouched.
pub fn tokenize(utterance: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    for chunk in utterance.split_whitespace() {
        if chunk.len() > 2 && chunk.starts_with('<') && chunk.ends_with('>') {
            tokens.push(chunk.to_string());
            continue;
        }
        let chars: Vec<char> = chunk.chars().collect();
        let mut start = 0;
        let mut end = chars.len();
        while start < end && is_sentence_punct(chars[start]) {
            tokens.push(chars[start].to_string());
            start += 1;
        }
        let mut trailing = Vec::new();
        while end > start && is_sentence_punct(chars[end - 1]) {
            trailing.push(chars[end - 1].to_string());
            end -= 1;
        }
        if end > start {
            tokens.push(chars[start..end].iter().collect());
        }
        tokens.extend(trailing.into_iter().rev());
    }
    tokens
}

pub fn parse_transcript(
    subject_id: &str,
    input: impl BufRead,
) -> Result<Transcript, CorpusError> {
    let mut turns = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(CorpusError::Parse {
                line: lineno,
                message: format!("expected 4 tab-separated fields, found {}", fields.len()),
            });
        }
        let start: f64 = fields[0].trim().parse().map_err(|_| CorpusError::Parse {
            line: lineno,
            message: format!("non-numeric start time '{}'", fields[0]),
        })?;
        let end: f64 = fields[1].trim().parse().map_err(|_| CorpusError::Parse {
            line: lineno,
            message: format!("non-numeric end time '{}'", fields[1]),
        })?;
        if !start.is_finite() || !end.is_finite() || start < 0.0 {
            return Err(CorpusError::Parse {
                line: lineno,
                message: "timestamps must be finite and non-negative".to_string(),
            });
        }
        if end <= start {
            return Err(CorpusError::Parse {
                line: lineno,
                message: "end before start".to_string(),
            });
        }
        let speaker = match fields[2].trim() {
            "S" => Speaker::Subject,
            "T" => Speaker::Tester,
            other => {
                return Err(CorpusError::Parse {
                    line: lineno,
                    message: format!("unknown speaker code '{other}'"),
                })
            }
        };
        turns.push(Turn {
            start,
            end,
            speaker,
            tokens: tokenize(fields[3]),
        });
    }
    turns.sort_by(|a, b| a.start.total_cmp(&b.start));
    for pair in turns.windows(2) {
        if pair[1].start < pair[0].end {
            log::warn!(
                "transcript {subject_id}: turns overlap at {:.3}s..{:.3}s",
                pair[1].start,
                pair[0].end
            );
        }
    }
    Ok(Transcript {
        subject_id: subject_id.to_string(),
        turns,
    })
}

pub fn write_transcript(t: &Transcript, mut out: impl Write) -> Result<(), CorpusError> {
    for turn in &t.turns {
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            turn.start,
            turn.end,
            turn.speaker.code(),
            turn.tokens.join(" ")
        )?;
    }
    Ok(())
}
