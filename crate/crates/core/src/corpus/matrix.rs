//! Assembled per-subject feature matrices.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use ndarray::Array2;

use super::demographics::DEMOGRAPHIC_FEATURE_NAMES;
use super::CorpusError;
use crate::text::TEXT_FEATURE_NAMES;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FeatureFamily {
    Demographic,
    Audio,
    Text,
}

/// Family membership is determined by name: the fixed demographic and text
/// name sets are reserved, everything else is an acoustic feature.
pub fn family_of(name: &str) -> FeatureFamily {
    if DEMOGRAPHIC_FEATURE_NAMES.contains(&name) {
        FeatureFamily::Demographic
    } else if TEXT_FEATURE_NAMES.contains(&name) {
        FeatureFamily::Text
    } else {
        FeatureFamily::Audio
    }
}

/// Parse a feature-set flag: `dem`, `text`, `audio`, `dem+text`, `dem+audio`,
/// `audio+text`, or `all`.
pub fn parse_family_set(s: &str) -> Result<BTreeSet<FeatureFamily>, CorpusError> {
    if s == "all" {
        return Ok([
            FeatureFamily::Demographic,
            FeatureFamily::Audio,
            FeatureFamily::Text,
        ]
        .into_iter()
        .collect());
    }
    let mut set = BTreeSet::new();
    for part in s.split('+') {
        let family = match part {
            "dem" => FeatureFamily::Demographic,
            "text" => FeatureFamily::Text,
            "audio" => FeatureFamily::Audio,
            other => {
                return Err(CorpusError::Invalid(format!(
                    "unknown feature family '{other}' (expected dem, text, audio, or all)"
                )))
            }
        };
        if !set.insert(family) {
            return Err(CorpusError::Invalid(format!(
                "feature family '{part}' listed twice"
            )));
        }
    }
    Ok(set)
}

#[derive(Debug, Clone)]
pub struct FeatureMatrix {
    pub subject_ids: Vec<String>,
    pub feature_names: Vec<String>,
    pub families: Vec<FeatureFamily>,
    /// Subjects x features.
    pub x: Array2<f64>,
    /// Binary outcomes as 0.0/1.0.
    pub y: Vec<f64>,
}

impl FeatureMatrix {
    pub fn new(
        subject_ids: Vec<String>,
        feature_names: Vec<String>,
        x: Array2<f64>,
        y: Vec<f64>,
    ) -> Result<Self, CorpusError> {
        let mut seen = BTreeSet::new();
        for name in &feature_names {
            if !seen.insert(name.clone()) {
                return Err(CorpusError::Duplicate(name.clone()));
            }
        }
        if x.nrows() != subject_ids.len() || x.nrows() != y.len() {
            return Err(CorpusError::Invalid(format!(
                "matrix has {} rows for {} subjects and {} outcomes",
                x.nrows(),
                subject_ids.len(),
                y.len()
            )));
        }
        if x.ncols() != feature_names.len() {
            return Err(CorpusError::Invalid(format!(
                "matrix has {} columns for {} feature names",
                x.ncols(),
                feature_names.len()
            )));
        }
        if let Some(v) = y.iter().find(|v| **v != 0.0 && **v != 1.0) {
            return Err(CorpusError::Invalid(format!(
                "outcome values must be 0 or 1, found {v}"
            )));
        }
        let families = feature_names.iter().map(|n| family_of(n)).collect();
        Ok(FeatureMatrix {
            subject_ids,
            feature_names,
            families,
            x,
            y,
        })
    }

    pub fn n_subjects(&self) -> usize {
        self.x.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.x.ncols()
    }

    /// Restrict to the named feature families, preserving column order.
    pub fn select_families(&self, families: &BTreeSet<FeatureFamily>) -> FeatureMatrix {
        let keep: Vec<usize> = (0..self.n_features())
            .filter(|&j| families.contains(&self.families[j]))
            .collect();
        self.select_columns(&keep)
    }

    pub fn select_columns(&self, keep: &[usize]) -> FeatureMatrix {
        let names: Vec<String> = keep.iter().map(|&j| self.feature_names[j].clone()).collect();
        let mut data = Vec::with_capacity(self.n_subjects() * keep.len());
        for i in 0..self.n_subjects() {
            for &j in keep {
                data.push(self.x[[i, j]]);
            }
        }
        let x = Array2::from_shape_vec((self.n_subjects(), keep.len()), data)
            .expect("column selection preserves shape");
        FeatureMatrix::new(self.subject_ids.clone(), names, x, self.y.clone())
            .expect("column subset of a valid matrix is valid")
    }

    pub fn to_csv(&self, mut out: impl Write) -> Result<(), CorpusError> {
        write!(out, "subject_id,outcome")?;
        for name in &self.feature_names {
            write!(out, ",{name}")?;
        }
        writeln!(out)?;
        for i in 0..self.n_subjects() {
            write!(out, "{},{}", self.subject_ids[i], self.y[i] as u8)?;
            for j in 0..self.n_features() {
                write!(out, ",{}", self.x[[i, j]])?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    pub fn from_csv(input: impl BufRead) -> Result<Self, CorpusError> {
        let mut lines = input.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| CorpusError::Parse {
            line: 1,
            message: "empty file".to_string(),
        })?;
        let header = header?;
        let mut cols = header.trim_end().split(',');
        if cols.next() != Some("subject_id") || cols.next() != Some("outcome") {
            return Err(CorpusError::Parse {
                line: 1,
                message: "header must start with 'subject_id,outcome'".to_string(),
            });
        }
        let feature_names: Vec<String> = cols.map(|c| c.to_string()).collect();
        let p = feature_names.len();
        let mut ids = Vec::new();
        let mut y = Vec::new();
        let mut data = Vec::new();
        for (idx, line) in lines {
            let lineno = idx + 1;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.trim_end().split(',').collect();
            if fields.len() != p + 2 {
                return Err(CorpusError::Parse {
                    line: lineno,
                    message: format!("expected {} fields, found {}", p + 2, fields.len()),
                });
            }
            ids.push(fields[0].to_string());
            y.push(match fields[1] {
                "0" => 0.0,
                "1" => 1.0,
                other => {
                    return Err(CorpusError::Parse {
                        line: lineno,
                        message: format!("invalid outcome '{other}'"),
                    })
                }
            });
            for field in &fields[2..] {
                let v: f64 = field.parse().map_err(|_| CorpusError::Parse {
                    line: lineno,
                    message: format!("non-numeric value '{field}'"),
                })?;
                data.push(v);
            }
        }
        let x = Array2::from_shape_vec((ids.len(), p), data)
            .map_err(|e| CorpusError::Invalid(e.to_string()))?;
        FeatureMatrix::new(ids, feature_names, x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use std::io::Cursor;

    fn sample() -> FeatureMatrix {
        FeatureMatrix::new(
            vec!["s1".into(), "s2".into()],
            vec!["age".into(), "pitch_min".into(), "words_mean".into()],
            array![[70.0, 110.0, 12.5], [64.0, 150.0, 9.0]],
            vec![1.0, 0.0],
        )
        .unwrap()
    }

    #[test]
    fn families_follow_reserved_name_sets() {
        let m = sample();
        assert_eq!(m.families[0], FeatureFamily::Demographic);
        assert_eq!(m.families[1], FeatureFamily::Audio);
        assert_eq!(m.families[2], FeatureFamily::Text);
    }

    #[test]
    fn family_selection_preserves_order() {
        let m = sample();
        let set = parse_family_set("dem+text").unwrap();
        let sub = m.select_families(&set);
        assert_eq!(sub.feature_names, vec!["age", "words_mean"]);
        assert_eq!(sub.x[[0, 1]], 12.5);
    }

    #[test]
    fn rejects_duplicate_feature_names() {
        let err = FeatureMatrix::new(
            vec!["s1".into()],
            vec!["a".into(), "a".into()],
            array![[1.0, 2.0]],
            vec![0.0],
        )
        .unwrap_err();
        assert!(err.to_string().contains("duplicate"));
    }

    #[test]
    fn csv_round_trip_is_lossless() {
        let m = sample();
        let mut buf = Vec::new();
        m.to_csv(&mut buf).unwrap();
        let m2 = FeatureMatrix::from_csv(Cursor::new(buf)).unwrap();
        assert_eq!(m.subject_ids, m2.subject_ids);
        assert_eq!(m.feature_names, m2.feature_names);
        assert_eq!(m.y, m2.y);
        assert_eq!(m.x, m2.x);
    }

    #[test]
    fn parse_family_set_rejects_unknown() {
        assert!(parse_family_set("dem+speech").is_err());
        assert_eq!(parse_family_set("all").unwrap().len(), 3);
    }
}
