//! Frame-level acoustic descriptor tracks.
//!
//! The CSV format is `time_s,<channel>,...` with one row per 10 ms analysis
//! frame; frame i's row must carry time `i * 0.010`. A subset of channels is
//! designated "sparse": zero is a meaningful value there (unvoiced frames) and
//! those channels are exempt from per-subject normalization.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use ndarray::Array2;

use super::CorpusError;

pub const FRAME_HOP_SECONDS: f64 = 0.010;

/// Channel that drives speech-segment detection; every track must carry it.
pub const VOICING_CHANNEL: &str = "voicing_prob";

/// Channels where zero marks "not applicable" rather than a measurement.
pub const DEFAULT_SPARSE_CHANNELS: [&str; 4] = ["voicing_prob", "pitch", "shimmer", "jitter"];

/// Sparse channels whose statistics are computed over non-zero frames only.
pub const NONZERO_MASKED_CHANNELS: [&str; 3] = ["pitch", "shimmer", "jitter"];

#[derive(Debug, Clone)]
pub struct FrameTrack {
    pub subject_id: String,
    pub channel_names: Vec<String>,
    /// Frames x channels.
    pub values: Array2<f64>,
    pub sparse_channels: BTreeSet<String>,
}

impl FrameTrack {
    pub fn new(
        subject_id: impl Into<String>,
        channel_names: Vec<String>,
        values: Array2<f64>,
        sparse_channels: BTreeSet<String>,
    ) -> Result<Self, CorpusError> {
        let mut seen = BTreeSet::new();
        for name in &channel_names {
            if !seen.insert(name.clone()) {
                return Err(CorpusError::Duplicate(name.clone()));
            }
        }
        if !channel_names.iter().any(|n| n == VOICING_CHANNEL) {
            return Err(CorpusError::Invalid(format!(
                "track is missing required channel '{VOICING_CHANNEL}'"
            )));
        }
        for sparse in &sparse_channels {
            if !channel_names.iter().any(|n| n == sparse) {
                return Err(CorpusError::Invalid(format!(
                    "sparse channel '{sparse}' is not in the channel list"
                )));
            }
        }
        if values.ncols() != channel_names.len() {
            return Err(CorpusError::Invalid(format!(
                "value matrix has {} columns for {} channels",
                values.ncols(),
                channel_names.len()
            )));
        }
        Ok(FrameTrack {
            subject_id: subject_id.into(),
            channel_names,
            values,
            sparse_channels,
        })
    }

    pub fn n_frames(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_channels(&self) -> usize {
        self.values.ncols()
    }

    pub fn channel_index(&self, name: &str) -> Option<usize> {
        self.channel_names.iter().position(|n| n == name)
    }

    pub fn is_sparse(&self, name: &str) -> bool {
        self.sparse_channels.contains(name)
    }

    /// Default sparse designation: the well-known zero-meaningful channels
    /// present in the header.
    pub fn default_sparse_set(channel_names: &[String]) -> BTreeSet<String> {
        channel_names
            .iter()
            .filter(|n| DEFAULT_SPARSE_CHANNELS.contains(&n.as_str()))
            .cloned()
            .collect()
    }

    pub fn from_csv(subject_id: &str, input: impl BufRead) -> Result<Self, CorpusError> {
        let mut lines = input.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| CorpusError::Parse {
            line: 1,
            message: "empty file".to_string(),
        })?;
        let header = header?;
        let mut cols = header.trim_end().split(',');
        match cols.next() {
            Some("time_s") => {}
            other => {
                return Err(CorpusError::Parse {
                    line: 1,
                    message: format!(
                        "first header column must be 'time_s', found '{}'",
                        other.unwrap_or("")
                    ),
                })
            }
        }
        let channel_names: Vec<String> = cols.map(|c| c.trim().to_string()).collect();
        if channel_names.is_empty() {
            return Err(CorpusError::Parse {
                line: 1,
                message: "no data channels in header".to_string(),
            });
        }
        let n_channels = channel_names.len();
        let mut data: Vec<f64> = Vec::new();
        let mut n_frames = 0usize;
        for (idx, line) in lines {
            let lineno = idx + 1;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split(',');
            let time: f64 = fields
                .next()
                .unwrap()
                .trim()
                .parse()
                .map_err(|_| CorpusError::Parse {
                    line: lineno,
                    message: "non-numeric time".to_string(),
                })?;
            let expected = n_frames as f64 * FRAME_HOP_SECONDS;
            if (time - expected).abs() > 1e-6 {
                return Err(CorpusError::Parse {
                    line: lineno,
                    message: format!("expected frame time {expected:.3}, found {time}"),
                });
            }
            let mut count = 0usize;
            for field in fields {
                let v: f64 = field.trim().parse().map_err(|_| CorpusError::Parse {
                    line: lineno,
                    message: format!("non-numeric value '{field}'"),
                })?;
                data.push(v);
                count += 1;
            }
            if count != n_channels {
                return Err(CorpusError::Parse {
                    line: lineno,
                    message: format!("expected {n_channels} channel values, found {count}"),
                });
            }
            n_frames += 1;
        }
        let values = Array2::from_shape_vec((n_frames, n_channels), data)
            .map_err(|e| CorpusError::Invalid(e.to_string()))?;
        let sparse = Self::default_sparse_set(&channel_names);
        FrameTrack::new(subject_id, channel_names, values, sparse)
    }

    pub fn to_csv(&self, mut out: impl Write) -> Result<(), CorpusError> {
        write!(out, "time_s")?;
        for name in &self.channel_names {
            write!(out, ",{name}")?;
        }
        writeln!(out)?;
        for i in 0..self.n_frames() {
            write!(out, "{:.2}", i as f64 * FRAME_HOP_SECONDS)?;
            for j in 0..self.n_channels() {
                write!(out, ",{:.5}", self.values[[i, j]])?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}
