//! Corpus loading and feature-matrix assembly.
//!
//! On-disk layout of a corpus directory:
//! - `demographics.csv` — one row per subject with the outcome label
//! - `transcripts/<subject_id>.tsv` — timestamped speaker turns
//! - `tracks/<subject_id>.csv` — 10 ms frame-level acoustic channels

use std::collections::BTreeSet;
use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use ndarray::Array2;
use rayon::prelude::*;

use super::HarnessError;
use crate::acoustic::extract_acoustic;
use crate::corpus::{
    encode_demographics, parse_transcript, read_demographics_csv, DemographicRecord,
    FeatureMatrix, FrameTrack, Transcript, DEMOGRAPHIC_FEATURE_NAMES,
};
use crate::text::{extract_text_features, TextConfig, TEXT_FEATURE_NAMES};

/// A fully loaded corpus, with all per-subject vectors in the same (sorted by
/// subject id) order.
#[derive(Debug, Clone)]
pub struct CorpusData {
    pub subject_ids: Vec<String>,
    pub demographics: Vec<DemographicRecord>,
    pub outcomes: Vec<u8>,
    pub transcripts: Vec<Transcript>,
    pub tracks: Vec<FrameTrack>,
}

impl CorpusData {
    pub fn n_subjects(&self) -> usize {
        self.subject_ids.len()
    }
}

fn open(path: &Path) -> Result<BufReader<File>, HarnessError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| HarnessError::Invalid(format!("cannot open {}: {e}", path.display())))
}

/// Load a corpus directory, keyed off `demographics.csv`. Every subject
/// listed there must have a transcript and a frame track; all tracks must
/// share one channel set so the acoustic feature names line up.
pub fn load_corpus(dir: &Path) -> Result<CorpusData, HarnessError> {
    let mut rows = read_demographics_csv(open(&dir.join("demographics.csv"))?)?;
    rows.sort_by(|a, b| a.0.cmp(&b.0));
    let mut seen = BTreeSet::new();
    for (id, _, _) in &rows {
        if !seen.insert(id.clone()) {
            return Err(HarnessError::Invalid(format!(
                "subject '{id}' appears twice in demographics.csv"
            )));
        }
    }
    let mut subject_ids = Vec::with_capacity(rows.len());
    let mut demographics = Vec::with_capacity(rows.len());
    let mut outcomes = Vec::with_capacity(rows.len());
    let mut transcripts = Vec::with_capacity(rows.len());
    let mut tracks = Vec::with_capacity(rows.len());
    for (id, rec, outcome) in rows {
        let transcript_path = dir.join("transcripts").join(format!("{id}.tsv"));
        let transcript = parse_transcript(&id, open(&transcript_path)?).map_err(|e| {
            HarnessError::Invalid(format!("{}: {e}", transcript_path.display()))
        })?;
        let track_path = dir.join("tracks").join(format!("{id}.csv"));
        let track = FrameTrack::from_csv(&id, open(&track_path)?)
            .map_err(|e| HarnessError::Invalid(format!("{}: {e}", track_path.display())))?;
        subject_ids.push(id);
        demographics.push(rec);
        outcomes.push(outcome);
        transcripts.push(transcript);
        tracks.push(track);
    }
    if let Some(first) = tracks.first() {
        for track in &tracks[1..] {
            if track.channel_names != first.channel_names {
                return Err(HarnessError::Invalid(format!(
                    "subject '{}' has different track channels than subject '{}'",
                    track.subject_id, first.subject_id
                )));
            }
        }
    }
    Ok(CorpusData {
        subject_ids,
        demographics,
        outcomes,
        transcripts,
        tracks,
    })
}

/// Assemble the per-subject feature matrix: the demographic block, then the
/// global acoustic statistics, then the text features.
pub fn extract_feature_matrix(
    data: &CorpusData,
    text_config: TextConfig,
) -> Result<FeatureMatrix, HarnessError> {
    let n = data.n_subjects();
    if n == 0 {
        return Err(HarnessError::Invalid("corpus has no subjects".to_string()));
    }
    let acoustic: Vec<_> = data
        .tracks
        .par_iter()
        .zip(data.transcripts.par_iter())
        .map(|(track, transcript)| extract_acoustic(track, transcript))
        .collect::<Result<_, _>>()?;
    let acoustic_names = &acoustic[0].names;
    for (i, vector) in acoustic.iter().enumerate() {
        if &vector.names != acoustic_names {
            return Err(HarnessError::Invalid(format!(
                "subject '{}' produced a different acoustic feature set",
                data.subject_ids[i]
            )));
        }
    }
    let text = extract_text_features(&data.transcripts, text_config)?;

    let p = DEMOGRAPHIC_FEATURE_NAMES.len() + acoustic_names.len() + TEXT_FEATURE_NAMES.len();
    let mut names: Vec<String> = Vec::with_capacity(p);
    names.extend(DEMOGRAPHIC_FEATURE_NAMES.iter().map(|s| s.to_string()));
    names.extend(acoustic_names.iter().cloned());
    names.extend(TEXT_FEATURE_NAMES.iter().map(|s| s.to_string()));

    let mut x = Array2::<f64>::zeros((n, p));
    for i in 0..n {
        let demo = encode_demographics(&data.demographics[i]);
        let mut j = 0;
        for v in demo {
            x[[i, j]] = v;
            j += 1;
        }
        for &v in &acoustic[i].values {
            x[[i, j]] = v;
            j += 1;
        }
        for &v in &text[i] {
            x[[i, j]] = v;
            j += 1;
        }
    }
    let y: Vec<f64> = data.outcomes.iter().map(|&o| o as f64).collect();
    Ok(FeatureMatrix::new(data.subject_ids.clone(), names, x, y)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Education, Employment, Sex, Speaker, Turn};
    use std::collections::BTreeSet as Set;

    fn tiny_subject(id: &str, seedish: f64) -> (Transcript, FrameTrack, DemographicRecord) {
        let turns = vec![
            Turn {
                start: 0.0,
                end: 1.0,
                speaker: Speaker::Tester,
                tokens: vec!["tell".into(), "me".into(), ".".into()],
            },
            Turn {
                start: 1.0,
                end: 3.0,
                speaker: Speaker::Subject,
                tokens: vec!["it".into(), "was".into(), "october".into(), "?".into()],
            },
        ];
        let transcript = Transcript {
            subject_id: id.to_string(),
            turns,
        };
        let names: Vec<String> = ["voicing_prob", "pitch", "energy"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let n_frames = 320;
        let mut values = Array2::<f64>::zeros((n_frames, 3));
        for i in 0..n_frames {
            let t = i as f64 * 0.01;
            values[[i, 0]] = 0.5 + 0.45 * (t * 5.0 + seedish).sin();
            values[[i, 1]] = if i % 4 == 0 { 0.0 } else { 100.0 + seedish + t };
            values[[i, 2]] = (t * 2.0).cos() + seedish * 0.1 + 0.001 * i as f64;
        }
        let sparse: Set<String> = FrameTrack::default_sparse_set(&names);
        let track = FrameTrack::new(id, names, values, sparse).unwrap();
        let rec = DemographicRecord {
            age: 70.0 + seedish,
            sex: Sex::Female,
            education: Education::HighSchool,
            employment: Employment::Retired,
        };
        (transcript, track, rec)
    }

    fn tiny_corpus() -> CorpusData {
        let mut data = CorpusData {
            subject_ids: Vec::new(),
            demographics: Vec::new(),
            outcomes: Vec::new(),
            transcripts: Vec::new(),
            tracks: Vec::new(),
        };
        for (k, id) in ["s1", "s2", "s3"].iter().enumerate() {
            let (transcript, track, rec) = tiny_subject(id, k as f64);
            data.subject_ids.push(id.to_string());
            data.demographics.push(rec);
            data.outcomes.push((k % 2) as u8);
            data.transcripts.push(transcript);
            data.tracks.push(track);
        }
        data
    }

    #[test]
    fn feature_matrix_has_expected_block_structure() {
        let data = tiny_corpus();
        let fm = extract_feature_matrix(&data, TextConfig::default()).unwrap();
        // 14 demographic + 10 * 3 acoustic + 21 text
        assert_eq!(fm.n_features(), 14 + 30 + 21);
        assert_eq!(fm.feature_names[0], "age");
        assert_eq!(fm.feature_names[14], "voicing_prob_mean");
        assert_eq!(fm.feature_names[14 + 30], "words_mean");
        assert_eq!(fm.y, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn corpus_round_trips_through_a_directory() {
        let data = tiny_corpus();
        let dir = tempfile::tempdir().unwrap();
        super::super::write_corpus(&data, dir.path()).unwrap();
        let loaded = load_corpus(dir.path()).unwrap();
        assert_eq!(loaded.subject_ids, data.subject_ids);
        assert_eq!(loaded.outcomes, data.outcomes);
        assert_eq!(loaded.transcripts[1].turns.len(), 2);
        assert_eq!(loaded.tracks[0].n_frames(), data.tracks[0].n_frames());
    }

    #[test]
    fn missing_track_names_the_subject() {
        let data = tiny_corpus();
        let dir = tempfile::tempdir().unwrap();
        super::super::write_corpus(&data, dir.path()).unwrap();
        std::fs::remove_file(dir.path().join("tracks").join("s2.csv")).unwrap();
        let err = load_corpus(dir.path()).unwrap_err();
        assert!(err.to_string().contains("s2.csv"));
    }
}
