//! Hosmer-Lemeshow goodness-of-fit test.

use super::special::chi2_sf;
use super::MetricsError;

#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct HlTest {
    pub statistic: f64,
    pub p_value: f64,
    /// Groups actually used after tie handling and degenerate merges.
    pub groups_used: usize,
    pub df: f64,
}

/// Hosmer-Lemeshow test on `groups` equal-count deciles of predicted risk.
///
/// Subjects are sorted by predicted probability; boundary ties stay in the
/// same group. A group whose expected count is 0 or equals its size is merged
/// into its neighbor (with a warning) to keep the statistic finite. Large
/// p-values indicate no evidence of miscalibration.
pub fn hosmer_lemeshow(
    probs: &[f64],
    labels: &[f64],
    groups: usize,
) -> Result<HlTest, MetricsError> {
    if probs.len() != labels.len() {
        return Err(MetricsError::LengthMismatch {
            expected: probs.len(),
            found: labels.len(),
        });
    }
    if groups < 3 {
        return Err(MetricsError::Invalid(
            "hosmer_lemeshow requires at least 3 groups".to_string(),
        ));
    }
    let n = probs.len();
    if n < 2 * groups {
        return Err(MetricsError::TooFewSamples {
            required: 2 * groups,
            found: n,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| probs[a].total_cmp(&probs[b]));

    // equal-count boundaries, extended rightward so ties stay together
    let mut cells: Vec<(f64, f64, usize)> = Vec::new(); // (observed, expected, size)
    let mut lo = 0usize;
    for g in 0..groups {
        if lo >= n {
            break;
        }
        let mut hi = ((g + 1) * n) / groups;
        if hi <= lo {
            continue;
        }
        while hi < n && probs[order[hi]] == probs[order[hi - 1]] {
            hi += 1;
        }
        if g == groups - 1 {
            hi = n;
        }
        let mut observed = 0.0;
        let mut expected = 0.0;
        for &idx in &order[lo..hi] {
            observed += labels[idx];
            expected += probs[idx];
        }
        cells.push((observed, expected, hi - lo));
        lo = hi;
    }

    // merge degenerate cells (expected 0 or expected = size) into a neighbor
    let mut merged: Vec<(f64, f64, usize)> = Vec::new();
    for cell in cells {
        merged.push(cell);
        loop {
            let k = merged.len();
            if k < 2 {
                break;
            }
            let (o, e, s) = merged[k - 2];
            let degenerate = e <= 0.0 || e >= s as f64;
            if !degenerate {
                break;
            }
            log::warn!("hosmer_lemeshow: merging degenerate risk group (expected {e:.3} of {s})");
            let (o2, e2, s2) = merged.pop().unwrap();
            let last = merged.last_mut().unwrap();
            *last = (o + o2, e + e2, s + s2);
        }
    }
    // trailing degenerate cell merges leftward
    while merged.len() >= 2 {
        let (o, e, s) = *merged.last().unwrap();
        if e > 0.0 && e < s as f64 {
            break;
        }
        log::warn!("hosmer_lemeshow: merging degenerate final risk group");
        merged.pop();
        let last = merged.last_mut().unwrap();
        *last = (last.0 + o, last.1 + e, last.2 + s);
    }

    let used = merged.len();
    if used < 3 {
        return Err(MetricsError::DegenerateGrouping);
    }
    let mut statistic = 0.0;
    for &(o, e, s) in &merged {
        let denom = e * (1.0 - e / s as f64);
        if denom <= 0.0 {
            return Err(MetricsError::DegenerateGrouping);
        }
        statistic += (o - e) * (o - e) / denom;
    }
    let df = (used - 2) as f64;
    Ok(HlTest {
        statistic,
        p_value: chi2_sf(df, statistic),
        groups_used: used,
        df,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfectly_calibrated_groups_give_statistic_zero() {
        // Three risk blocks of four at p = 1/4, 1/2, 3/4 with exactly 1, 2,
        // and 3 positives: every group has observed = expected.
        let probs = [
            0.25, 0.25, 0.25, 0.25, 0.5, 0.5, 0.5, 0.5, 0.75, 0.75, 0.75, 0.75,
        ];
        let labels = [
            1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0,
        ];
        let hl = hosmer_lemeshow(&probs, &labels, 3).unwrap();
        assert!(hl.statistic.abs() < 1e-12);
        assert!((hl.p_value - 1.0).abs() < 1e-12);
        assert_eq!(hl.groups_used, 3);
        assert_eq!(hl.df, 1.0);
    }

    #[test]
    fn too_few_samples_is_an_error() {
        let probs = vec![0.5; 19];
        let labels = vec![0.0; 19];
        assert!(matches!(
            hosmer_lemeshow(&probs, &labels, 10),
            Err(MetricsError::TooFewSamples { required: 20, .. })
        ));
    }

    #[test]
    fn ties_stay_in_one_group() {
        // all probabilities identical -> a single group -> degenerate
        let probs = vec![0.3; 40];
        let labels: Vec<f64> = (0..40).map(|i| if i % 3 == 0 { 1.0 } else { 0.0 }).collect();
        assert!(matches!(
            hosmer_lemeshow(&probs, &labels, 10),
            Err(MetricsError::DegenerateGrouping)
        ));
    }

    #[test]
    fn anticalibrated_probabilities_are_rejected() {
        // strongly miscalibrated: high predicted risk on negatives
        let mut probs = Vec::new();
        let mut labels = Vec::new();
        for i in 0..200 {
            let p = 0.05 + 0.9 * (i as f64 / 199.0);
            probs.push(p);
            labels.push(if p < 0.5 { 1.0 } else { 0.0 });
        }
        let hl = hosmer_lemeshow(&probs, &labels, 10).unwrap();
        assert!(hl.p_value < 1e-6, "p = {}", hl.p_value);
    }

    #[test]
    fn permutation_invariant() {
        let probs = [0.1, 0.9, 0.4, 0.6, 0.2, 0.8, 0.3, 0.7, 0.15, 0.85,
                     0.12, 0.88, 0.45, 0.55, 0.25, 0.75, 0.35, 0.65, 0.18, 0.82];
        let labels = [0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0,
                      0.0, 1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0];
        let a = hosmer_lemeshow(&probs, &labels, 10).unwrap();
        let mut idx: Vec<usize> = (0..20).rev().collect();
        idx.swap(3, 11);
        let probs2: Vec<f64> = idx.iter().map(|&i| probs[i]).collect();
        let labels2: Vec<f64> = idx.iter().map(|&i| labels[i]).collect();
        let b = hosmer_lemeshow(&probs2, &labels2, 10).unwrap();
        assert_eq!(a.statistic, b.statistic);
        assert_eq!(a.p_value, b.p_value);
    }
}
