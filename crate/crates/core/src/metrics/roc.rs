//! ROC curves, AUC, and screening-relevant operating points.

use super::MetricsError;

/// Empirical ROC curve. Points run from (0, 0) to (1, 1) as the decision
/// threshold sweeps from above the largest score downward; tied scores move
/// both coordinates in a single step.
#[derive(Debug, Clone)]
pub struct RocCurve {
    /// Score thresholds, one per point after the initial (0, 0).
    pub thresholds: Vec<f64>,
    /// (false positive rate, true positive rate) pairs including endpoints.
    pub points: Vec<(f64, f64)>,
}

fn class_counts(labels: &[f64]) -> Result<(usize, usize), MetricsError> {
    let pos = labels.iter().filter(|&&y| y == 1.0).count();
    let neg = labels.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(MetricsError::SingleClass);
    }
    Ok((pos, neg))
}

/// AUC by the rank form of the Mann-Whitney U statistic; ties count 1/2.
pub fn roc_auc(scores: &[f64], labels: &[f64]) -> Result<f64, MetricsError> {
    if scores.len() != labels.len() {
        return Err(MetricsError::LengthMismatch {
            expected: scores.len(),
            found: labels.len(),
        });
    }
    let (pos, neg) = class_counts(labels)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // average ranks over tie groups (1-based)
    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let avg_rank = (i + 1 + j + 1) as f64 / 2.0;
        for &idx in &order[i..=j] {
            if labels[idx] == 1.0 {
                rank_sum_pos += avg_rank;
            }
        }
        i = j + 1;
    }
    let u = rank_sum_pos - (pos * (pos + 1)) as f64 / 2.0;
    Ok(u / (pos as f64 * neg as f64))
}

pub fn roc_curve(scores: &[f64], labels: &[f64]) -> Result<RocCurve, MetricsError> {
    if scores.len() != labels.len() {
        return Err(MetricsError::LengthMismatch {
            expected: scores.len(),
            found: labels.len(),
        });
    }
    let (pos, neg) = class_counts(labels)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut points = vec![(0.0, 0.0)];
    let mut thresholds = Vec::new();
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut i = 0;
    while i < order.len() {
        let threshold = scores[order[i]];
        let mut j = i;
        while j < order.len() && scores[order[j]] == threshold {
            if labels[order[j]] == 1.0 {
                tp += 1;
            } else {
                fp += 1;
            }
            j += 1;
        }
        thresholds.push(threshold);
        points.push((fp as f64 / neg as f64, tp as f64 / pos as f64));
        i = j;
    }
    Ok(RocCurve { thresholds, points })
}

/// Trapezoidal area under an ROC curve. With tied scores folded into single
/// steps this equals the Mann-Whitney AUC exactly.
pub fn auc_trapezoid(curve: &RocCurve) -> f64 {
    curve
        .points
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * 0.5 * (w[0].1 + w[1].1))
        .sum()
}

#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct OperatingPoints {
    /// Highest TPR subject to FPR <= 0.10 / 0.05 / 0.
    pub tpr_at_fpr10: f64,
    pub tpr_at_fpr5: f64,
    pub tpr_at_fpr0: f64,
    /// Lowest FPR subject to TPR >= 0.90 / 0.95 / 1.0.
    pub fpr_at_tpr90: f64,
    pub fpr_at_tpr95: f64,
    pub fpr_at_tpr100: f64,
    /// Fraction correct when predicting positive at probability >= 0.5.
    pub accuracy: f64,
}

fn max_tpr_with_fpr_at_most(curve: &RocCurve, limit: f64) -> f64 {
    curve
        .points
        .iter()
        .filter(|(fpr, _)| *fpr <= limit + 1e-12)
        .map(|&(_, tpr)| tpr)
        .fold(0.0, f64::max)
}

fn min_fpr_with_tpr_at_least(curve: &RocCurve, target: f64) -> f64 {
    curve
        .points
        .iter()
        .filter(|(_, tpr)| *tpr >= target - 1e-12)
        .map(|&(fpr, _)| fpr)
        .fold(1.0, f64::min)
}

/// Operating points of the empirical ROC plus accuracy at the 0.5 cutoff.
/// Scores must be probabilities for the accuracy entry to be meaningful.
pub fn operating_points(scores: &[f64], labels: &[f64]) -> Result<OperatingPoints, MetricsError> {
    let curve = roc_curve(scores, labels)?;
    let correct = scores
        .iter()
        .zip(labels)
        .filter(|(s, y)| (**s >= 0.5) == (**y == 1.0))
        .count();
    Ok(OperatingPoints {
        tpr_at_fpr10: max_tpr_with_fpr_at_most(&curve, 0.10),
        tpr_at_fpr5: max_tpr_with_fpr_at_most(&curve, 0.05),
        tpr_at_fpr0: max_tpr_with_fpr_at_most(&curve, 0.0),
        fpr_at_tpr90: min_fpr_with_tpr_at_least(&curve, 0.90),
        fpr_at_tpr95: min_fpr_with_tpr_at_least(&curve, 0.95),
        fpr_at_tpr100: min_fpr_with_tpr_at_least(&curve, 1.0),
        accuracy: correct as f64 / scores.len() as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_separation_has_auc_one() {
        let scores = [0.9, 0.8, 0.2, 0.1];
        let labels = [1.0, 1.0, 0.0, 0.0];
        assert_eq!(roc_auc(&scores, &labels).unwrap(), 1.0);
    }

    #[test]
    fn all_tied_scores_give_half() {
        let scores = [0.3, 0.3, 0.3, 0.3];
        let labels = [1.0, 0.0, 1.0, 0.0];
        assert_eq!(roc_auc(&scores, &labels).unwrap(), 0.5);
    }

    #[test]
    fn single_class_is_an_error() {
        assert!(matches!(
            roc_auc(&[0.1, 0.2], &[1.0, 1.0]),
            Err(MetricsError::SingleClass)
        ));
    }

    #[test]
    fn curve_runs_corner_to_corner() {
        let scores = [0.9, 0.8, 0.4, 0.3];
        let labels = [1.0, 0.0, 1.0, 0.0];
        let curve = roc_curve(&scores, &labels).unwrap();
        assert_eq!(curve.points.first().unwrap(), &(0.0, 0.0));
        assert_eq!(curve.points.last().unwrap(), &(1.0, 1.0));
        let auc = roc_auc(&scores, &labels).unwrap();
        assert!((auc_trapezoid(&curve) - auc).abs() < 1e-15);
    }

    #[test]
    fn interleaved_fixture_operating_points() {
        // sorted desc: 0.9(+), 0.8(-), 0.4(+), 0.3(-)
        let scores = [0.9, 0.8, 0.4, 0.3];
        let labels = [1.0, 0.0, 1.0, 0.0];
        let op = operating_points(&scores, &labels).unwrap();
        assert_eq!(op.tpr_at_fpr0, 0.5);
        assert_eq!(op.fpr_at_tpr100, 0.5);
        // threshold 0.5: predicted positives are 0.9 and 0.8 -> 1 TP, 1 FP,
        // and below threshold 1 TN, 1 FN -> accuracy 0.5
        assert_eq!(op.accuracy, 0.5);
    }

    #[test]
    fn constant_scores_give_prevalence_complement_accuracy() {
        let scores = [0.2; 8];
        let mut labels = [0.0; 8];
        labels[0] = 1.0;
        labels[1] = 1.0;
        let op = operating_points(&scores, &labels).unwrap();
        assert_eq!(op.accuracy, 0.75);
        assert_eq!(roc_auc(&scores, &labels).unwrap(), 0.5);
    }
}
