//! Global acoustic feature extraction.
//!
//! A subject's 10 ms frame track is reduced to five summary statistics per
//! channel (base channels plus frame-to-frame deltas) over the frames where
//! the subject is actually speaking. "Speaking" is decided by a smoothed
//! voicing envelope: the voicing-probability channel is z-scored over the
//! subject's own frames, a natural cubic spline is threaded through its local
//! maxima, and frames where that envelope clears a small threshold form the
//! speech segments that the statistics are pooled over.

mod spline;

pub use spline::CubicSpline;

use thiserror::Error;

use crate::corpus::{
    FrameTrack, Transcript, FRAME_HOP_SECONDS, NONZERO_MASKED_CHANNELS, VOICING_CHANNEL,
};
use crate::stats;

/// Minimum index distance between envelope knots (local maxima).
pub const MIN_PEAK_SEPARATION: usize = 10;

/// Envelope threshold, in standard deviations of the z-scored voicing
/// probability, above which a frame counts as speech.
pub const SEGMENT_THRESHOLD: f64 = 0.1;

/// Suffix marking a frame-difference channel derived from a base channel.
pub const DELTA_SUFFIX: &str = "_diff";

const STAT_SUFFIXES: [&str; 5] = ["mean", "max", "min", "median", "sd"];

#[derive(Debug, Error)]
pub enum AcousticError {
    #[error("channel '{0}' has zero variance and cannot be z-scored")]
    DegenerateChannel(String),
    #[error("subject '{0}': no frames fall inside subject turns")]
    NoSubjectFrames(String),
    #[error("subject '{0}': no speech segments above the voicing threshold")]
    NoSpeechSegments(String),
    #[error("{0}")]
    Invalid(String),
}

/// Maximal run of speech frames, indexed into the subject-frame sequence.
/// Both endpoints are inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpeechSegment {
    pub start_frame: usize,
    pub end_frame: usize,
}

impl SpeechSegment {
    pub fn len(&self) -> usize {
        self.end_frame - self.start_frame + 1
    }

    pub fn is_empty(&self) -> bool {
        false // a segment always spans at least one frame
    }
}

/// Named summary statistics: 5 per channel, base channels then deltas.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalAcousticVector {
    pub names: Vec<String>,
    pub values: Vec<f64>,
}

impl GlobalAcousticVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Z-score every non-sparse channel over the full recording. Sparse channels
/// (where zero means "not applicable") pass through untouched.
pub fn per_subject_normalize(track: &FrameTrack) -> Result<FrameTrack, AcousticError> {
    let mut values = track.values.clone();
    for (j, name) in track.channel_names.iter().enumerate() {
        if track.is_sparse(name) {
            continue;
        }
        let column: Vec<f64> = values.column(j).to_vec();
        let m = stats::mean(&column);
        let sd = stats::sample_sd(&column);
        if sd <= 0.0 {
            return Err(AcousticError::DegenerateChannel(name.clone()));
        }
        for (i, v) in column.iter().enumerate() {
            values[[i, j]] = (v - m) / sd;
        }
    }
    FrameTrack::new(
        track.subject_id.clone(),
        track.channel_names.clone(),
        values,
        track.sparse_channels.clone(),
    )
    .map_err(|e| AcousticError::Invalid(e.to_string()))
}

/// Append a `<channel>_diff` column for every channel, holding the
/// frame-to-frame difference with the first frame's delta defined as 0.
pub fn compute_deltas(track: &FrameTrack) -> Result<FrameTrack, AcousticError> {
    let t = track.n_frames();
    let c = track.n_channels();
    let mut values = ndarray::Array2::<f64>::zeros((t, 2 * c));
    let mut names = track.channel_names.clone();
    for j in 0..c {
        names.push(format!("{}{DELTA_SUFFIX}", track.channel_names[j]));
        for i in 0..t {
            values[[i, j]] = track.values[[i, j]];
            values[[i, c + j]] = if i == 0 {
                0.0
            } else {
                track.values[[i, j]] - track.values[[i - 1, j]]
            };
        }
    }
    FrameTrack::new(
        track.subject_id.clone(),
        names,
        values,
        track.sparse_channels.clone(),
    )
    .map_err(|e| AcousticError::Invalid(e.to_string()))
}

/// Indices of frames whose center time lies within `[start, end)` of some
/// subject turn, in increasing order without duplicates.
pub fn select_subject_frames(
    track: &FrameTrack,
    transcript: &Transcript,
) -> Result<Vec<usize>, AcousticError> {
    if track.subject_id != transcript.subject_id {
        return Err(AcousticError::Invalid(format!(
            "track subject '{}' does not match transcript subject '{}'",
            track.subject_id, transcript.subject_id
        )));
    }
    let turns: Vec<(f64, f64)> = transcript
        .subject_turns()
        .map(|t| (t.start, t.end))
        .collect();
    let mut frames = Vec::new();
    for i in 0..track.n_frames() {
        let t = i as f64 * FRAME_HOP_SECONDS;
        if turns.iter().any(|&(s, e)| s <= t && t < e) {
            frames.push(i);
        }
    }
    if frames.is_empty() {
        return Err(AcousticError::NoSubjectFrames(track.subject_id.clone()));
    }
    Ok(frames)
}

/// Z-score the voicing-probability channel over the subject frames only.
/// A constant voicing series cannot be standardized; it maps to all zeros
/// (which downstream yields no speech segments).
pub fn zscore_subject_voicing(track: &FrameTrack, subject_frames: &[usize]) -> Vec<f64> {
    let j = track
        .channel_index(VOICING_CHANNEL)
        .expect("FrameTrack construction guarantees a voicing channel");
    let raw: Vec<f64> = subject_frames
        .iter()
        .map(|&i| track.values[[i, j]])
        .collect();
    let m = stats::mean(&raw);
    let sd = stats::sample_sd(&raw);
    if sd <= 0.0 {
        log::warn!(
            "subject '{}': constant voicing probability over subject frames",
            track.subject_id
        );
        return vec![0.0; raw.len()];
    }
    raw.iter().map(|v| (v - m) / sd).collect()
}

/// Smooth `v` by interpolating a natural cubic spline through a subset of its
/// strict local maxima. Maxima are accepted greedily left to right; a
/// candidate closer than `min_separation` to the last accepted knot replaces
/// it only if strictly larger. The first and last points are always knots.
pub fn voicing_envelope(v: &[f64], min_separation: usize) -> Vec<f64> {
    let m = v.len();
    if m == 0 {
        return Vec::new();
    }
    if m == 1 {
        return vec![v[0]];
    }
    let mut peaks: Vec<usize> = Vec::new();
    for i in 1..m - 1 {
        if v[i] > v[i - 1] && v[i] > v[i + 1] {
            match peaks.last().copied() {
                Some(last) if i - last < min_separation => {
                    if v[i] > v[last] {
                        *peaks.last_mut().unwrap() = i;
                    }
                }
                _ => peaks.push(i),
            }
        }
    }
    let mut knots = Vec::with_capacity(peaks.len() + 2);
    knots.push(0);
    knots.extend(peaks); // strict maxima are interior, so no duplicates
    knots.push(m - 1);
    let xs: Vec<f64> = knots.iter().map(|&k| k as f64).collect();
    let ys: Vec<f64> = knots.iter().map(|&k| v[k]).collect();
    let spline = CubicSpline::natural(&xs, &ys);
    (0..m).map(|i| spline.eval(i as f64)).collect()
}

/// Maximal runs of envelope values strictly above `threshold`.
pub fn detect_speech_segments(envelope: &[f64], threshold: f64) -> Vec<SpeechSegment> {
    let mut segments = Vec::new();
    let mut run_start: Option<usize> = None;
    for (i, &e) in envelope.iter().enumerate() {
        if e > threshold {
            run_start.get_or_insert(i);
        } else if let Some(s) = run_start.take() {
            segments.push(SpeechSegment {
                start_frame: s,
                end_frame: i - 1,
            });
        }
    }
    if let Some(s) = run_start {
        segments.push(SpeechSegment {
            start_frame: s,
            end_frame: envelope.len() - 1,
        });
    }
    segments
}

fn is_masked_channel(name: &str) -> bool {
    let base = name.strip_suffix(DELTA_SUFFIX).unwrap_or(name);
    NONZERO_MASKED_CHANNELS.contains(&base)
}

/// Pool the five summary statistics (mean, max, min, median, sd) per channel
/// over the frames inside `segments`. Segment indices refer to positions in
/// `subject_frames`, which maps them back to rows of `track`.
///
/// Pitch, shimmer, and jitter — and their delta channels — are only defined
/// where the base channel is non-zero, so their statistics are restricted to
/// those frames; if none remain, the five slots are zeroed with a warning.
pub fn global_stats(
    track: &FrameTrack,
    subject_frames: &[usize],
    segments: &[SpeechSegment],
) -> Result<GlobalAcousticVector, AcousticError> {
    if segments.is_empty() {
        return Err(AcousticError::NoSpeechSegments(track.subject_id.clone()));
    }
    let mut rows: Vec<usize> = Vec::new();
    for seg in segments {
        if seg.end_frame >= subject_frames.len() || seg.end_frame < seg.start_frame {
            return Err(AcousticError::Invalid(format!(
                "segment {}..={} outside the {}-frame subject sequence",
                seg.start_frame,
                seg.end_frame,
                subject_frames.len()
            )));
        }
        rows.extend(subject_frames[seg.start_frame..=seg.end_frame].iter().copied());
    }
    let mut names = Vec::with_capacity(5 * track.n_channels());
    let mut values = Vec::with_capacity(5 * track.n_channels());
    for (j, name) in track.channel_names.iter().enumerate() {
        let column: Vec<f64> = if is_masked_channel(name) {
            let base = name.strip_suffix(DELTA_SUFFIX).unwrap_or(name);
            let base_j = track.channel_index(base).ok_or_else(|| {
                AcousticError::Invalid(format!(
                    "delta channel '{name}' has no base channel '{base}' in the track"
                ))
            })?;
            rows.iter()
                .filter(|&&r| track.values[[r, base_j]] != 0.0)
                .map(|&r| track.values[[r, j]])
                .collect()
        } else {
            rows.iter().map(|&r| track.values[[r, j]]).collect()
        };
        let block = if column.is_empty() {
            log::warn!(
                "subject '{}': channel '{name}' has no usable frames in speech segments; \
                 statistics set to 0",
                track.subject_id
            );
            [0.0; 5]
        } else {
            [
                stats::mean(&column),
                stats::max(&column),
                stats::min(&column),
                stats::median(&column),
                stats::sample_sd(&column),
            ]
        };
        for (suffix, value) in STAT_SUFFIXES.iter().zip(block) {
            names.push(format!("{name}_{suffix}"));
            values.push(value);
        }
    }
    Ok(GlobalAcousticVector { names, values })
}

/// Full per-subject pipeline: normalize, append deltas, find the subject's
/// frames, build the voicing envelope, detect speech segments, and pool the
/// per-channel statistics over them.
pub fn extract_acoustic(
    track: &FrameTrack,
    transcript: &Transcript,
) -> Result<GlobalAcousticVector, AcousticError> {
    let normalized = per_subject_normalize(track)?;
    let with_deltas = compute_deltas(&normalized)?;
    let subject_frames = select_subject_frames(track, transcript)?;
    let v = zscore_subject_voicing(track, &subject_frames);
    let envelope = voicing_envelope(&v, MIN_PEAK_SEPARATION);
    let segments = detect_speech_segments(&envelope, SEGMENT_THRESHOLD);
    global_stats(&with_deltas, &subject_frames, &segments)
}
