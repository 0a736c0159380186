//! Joint cross-validated selection of the elastic-net mixing weight and
//! penalty strength.
//!
//! For every mixing weight on a uniform grid, a full-data path fixes the
//! penalty sequence; each fold refits along that exact sequence and is scored
//! by mean held-out deviance. Within a mixing weight the penalty is chosen by
//! the one-standard-error rule (the largest penalty whose mean deviance is
//! within one SE of the minimum); across mixing weights the smallest
//! one-SE-rule deviance wins, with near-ties resolved toward the sparser,
//! more L1-leaning end of the grid.

use ndarray::{Array2, Axis};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::path::{fit_enet_path, fit_enet_path_at_warm, DEFAULT_PATH_POINTS};
use super::{deviance, sigmoid, GlmError};

/// Relative tolerance for treating two mixing weights as tied.
const ALPHA_TIE_TOL: f64 = 1e-6;
/// Maximum tolerated fraction of folds with single-class training labels.
const MAX_SKIPPED_FOLD_SHARE: f64 = 0.2;

/// Cross-validation curve over the penalty sequence at one mixing weight.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CvCurve {
    pub lambdas: Vec<f64>,
    pub mean_deviance: Vec<f64>,
    pub se: Vec<f64>,
    pub lambda_min: f64,
    pub lambda_1se: f64,
    pub min_index: usize,
    pub one_se_index: usize,
}

/// One row of the mixing-weight comparison table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlphaCvSummary {
    pub alpha: f64,
    /// Mean held-out deviance at this weight's one-SE penalty.
    pub criterion: f64,
    pub lambda_1se: f64,
    pub path_len: usize,
}

/// The model refit on all training data at the selected `(α, λ)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElasticNetFit {
    pub alpha: f64,
    pub lambda: f64,
    pub intercept: f64,
    pub coefficients: Vec<f64>,
    /// Indices of nonzero coefficients.
    pub active: Vec<usize>,
}

impl ElasticNetFit {
    pub fn predict(&self, row: &[f64]) -> f64 {
        let eta = self.intercept
            + row
                .iter()
                .zip(&self.coefficients)
                .map(|(x, b)| x * b)
                .sum::<f64>();
        sigmoid(eta)
    }
}

/// Outcome of the joint grid search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CvSelection {
    pub alpha: f64,
    pub lambda: f64,
    pub fit: ElasticNetFit,
    pub curve: CvCurve,
    pub per_alpha: Vec<AlphaCvSummary>,
    /// Folds skipped because their training half had a single class.
    pub skipped_folds: usize,
    pub total_folds: usize,
}

/// Uniform mixing-weight grid with spacing `step`: `i/k` for `i = 0..=k`,
/// `k = round(1/step)`. A step of 0.01 yields 101 weights.
pub fn alpha_grid(step: f64) -> Result<Vec<f64>, GlmError> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(GlmError::Invalid(format!(
            "alpha step must be in (0, 1], got {step}"
        )));
    }
    let k = (1.0 / step).round().max(1.0) as usize;
    Ok((0..=k).map(|i| i as f64 / k as f64).collect())
}

/// Leave-one-out assignment: observation `i` forms fold `i`.
pub fn loo_assignment(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// Seeded k-fold assignment: indices are shuffled once, then dealt round-robin.
pub fn kfold_assignment(n: usize, k: usize, seed: u64) -> Vec<usize> {
    assert!(k >= 2 && k <= n, "need 2 <= k <= n");
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let mut assignment = vec![0usize; n];
    for (pos, &idx) in order.iter().enumerate() {
        assignment[idx] = pos % k;
    }
    assignment
}

/// Convenience wrapper: leave-one-out when `n_folds >= n`, otherwise seeded
/// k-fold.
pub fn cv_select(
    x: &Array2<f64>,
    y: &[f64],
    alpha_step: f64,
    n_folds: usize,
    seed: u64,
) -> Result<CvSelection, GlmError> {
    let n = x.nrows();
    let assignment = if n_folds >= n {
        loo_assignment(n)
    } else {
        kfold_assignment(n, n_folds, seed)
    };
    cv_select_with_assignment(x, y, alpha_step, &assignment)
}

struct AlphaOutcome {
    summary: AlphaCvSummary,
    curve: CvCurve,
    fit: ElasticNetFit,
}

/// Run the grid search with an explicit fold assignment.
pub fn cv_select_with_assignment(
    x: &Array2<f64>,
    y: &[f64],
    alpha_step: f64,
    assignment: &[usize],
) -> Result<CvSelection, GlmError> {
    let n = x.nrows();
    if assignment.len() != n {
        return Err(GlmError::LengthMismatch {
            expected: n,
            found: assignment.len(),
        });
    }
    super::check_labels(y, n)?;
    let k = assignment.iter().copied().max().map_or(0, |m| m + 1);
    if k < 2 {
        return Err(GlmError::Invalid("need at least two folds".into()));
    }
    for f in 0..k {
        if !assignment.contains(&f) {
            return Err(GlmError::Invalid(format!("fold {f} has no members")));
        }
    }

    // Fold usability is label-driven and identical for every mixing weight,
    // so decide it once.
    let mut usable = Vec::new();
    let mut skipped = 0usize;
    for f in 0..k {
        let train_labels: Vec<f64> = (0..n)
            .filter(|i| assignment[*i] != f)
            .map(|i| y[i])
            .collect();
        let pos = train_labels.iter().filter(|&&v| v == 1.0).count();
        if pos == 0 || pos == train_labels.len() {
            log::warn!("fold {f}: single-class training labels, skipping");
            skipped += 1;
        } else {
            usable.push(f);
        }
    }
    if skipped as f64 > MAX_SKIPPED_FOLD_SHARE * k as f64 {
        return Err(GlmError::DegenerateFolds { skipped, total: k });
    }

    // Pre-split the data per usable fold (shared across the alpha grid).
    let splits: Vec<FoldSplit> = usable
        .iter()
        .map(|&f| FoldSplit::new(x, y, assignment, f))
        .collect();

    let grid = alpha_grid(alpha_step)?;
    let outcomes: Result<Vec<AlphaOutcome>, GlmError> = grid
        .par_iter()
        .map(|&alpha| evaluate_alpha(x, y, alpha, &splits))
        .collect();
    let outcomes = outcomes?;

    // Smallest criterion wins; near-ties go to the largest mixing weight so
    // pure-noise data lands on the laziest (most sparse) end of the grid.
    let best_value = outcomes
        .iter()
        .map(|o| o.summary.criterion)
        .fold(f64::INFINITY, f64::min);
    let tie_band = best_value + ALPHA_TIE_TOL * (1.0 + best_value.abs());
    let chosen = outcomes
        .iter()
        .enumerate()
        .filter(|(_, o)| o.summary.criterion <= tie_band)
        .map(|(i, _)| i)
        .max()
        .expect("non-empty grid");

    let per_alpha = outcomes.iter().map(|o| o.summary.clone()).collect();
    let chosen = &outcomes[chosen];
    Ok(CvSelection {
        alpha: chosen.summary.alpha,
        lambda: chosen.summary.lambda_1se,
        fit: chosen.fit.clone(),
        curve: chosen.curve.clone(),
        per_alpha,
        skipped_folds: skipped,
        total_folds: k,
    })
}

struct FoldSplit {
    train_x: Array2<f64>,
    train_y: Vec<f64>,
    test_x: Array2<f64>,
    test_y: Vec<f64>,
}

impl FoldSplit {
    fn new(x: &Array2<f64>, y: &[f64], assignment: &[usize], fold: usize) -> Self {
        let train_rows: Vec<usize> = (0..x.nrows()).filter(|i| assignment[*i] != fold).collect();
        let test_rows: Vec<usize> = (0..x.nrows()).filter(|i| assignment[*i] == fold).collect();
        FoldSplit {
            train_x: x.select(Axis(0), &train_rows),
            train_y: train_rows.iter().map(|&i| y[i]).collect(),
            test_x: x.select(Axis(0), &test_rows),
            test_y: test_rows.iter().map(|&i| y[i]).collect(),
        }
    }
}

fn evaluate_alpha(
    x: &Array2<f64>,
    y: &[f64],
    alpha: f64,
    splits: &[FoldSplit],
) -> Result<AlphaOutcome, GlmError> {
    let full = fit_enet_path(x, y, alpha, DEFAULT_PATH_POINTS, true)?;
    let lambdas = full.lambdas.clone();
    let n_lambda = lambdas.len();

    // fold_dev[f][l]: mean per-observation held-out deviance. Each fold fit
    // warm-starts from the full-data solution at the same penalty, which is
    // within one observation's influence of the fold's own optimum.
    let mut fold_dev = Vec::with_capacity(splits.len());
    for split in splits {
        let path = fit_enet_path_at_warm(&split.train_x, &split.train_y, alpha, &lambdas, &full)?;
        let mut devs = Vec::with_capacity(n_lambda);
        for l in 0..n_lambda {
            let probs = path.predict_at(l, &split.test_x);
            devs.push(deviance(&probs, &split.test_y) / split.test_y.len() as f64);
        }
        fold_dev.push(devs);
    }

    let k_used = fold_dev.len() as f64;
    let mut mean = vec![0.0; n_lambda];
    let mut se = vec![0.0; n_lambda];
    for l in 0..n_lambda {
        let vals: Vec<f64> = fold_dev.iter().map(|d| d[l]).collect();
        let m = vals.iter().sum::<f64>() / k_used;
        mean[l] = m;
        if vals.len() > 1 {
            let var =
                vals.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (k_used - 1.0);
            se[l] = (var / k_used).sqrt();
        }
    }

    let min_index = mean
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("non-empty path");
    let threshold = mean[min_index] + se[min_index];
    let one_se_index = (0..n_lambda)
        .find(|&l| mean[l] <= threshold)
        .expect("min index satisfies its own threshold");

    let curve = CvCurve {
        lambdas: lambdas.clone(),
        mean_deviance: mean.clone(),
        se,
        lambda_min: lambdas[min_index],
        lambda_1se: lambdas[one_se_index],
        min_index,
        one_se_index,
    };
    let coefficients = full.coefs[one_se_index].clone();
    let active = coefficients
        .iter()
        .enumerate()
        .filter(|(_, b)| **b != 0.0)
        .map(|(j, _)| j)
        .collect();
    let fit = ElasticNetFit {
        alpha,
        lambda: lambdas[one_se_index],
        intercept: full.intercepts[one_se_index],
        coefficients,
        active,
    };
    let summary = AlphaCvSummary {
        alpha,
        criterion: mean[one_se_index],
        lambda_1se: lambdas[one_se_index],
        path_len: n_lambda,
    };
    Ok(AlphaOutcome { summary, curve, fit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    #[test]
    fn alpha_grid_has_expected_spacing() {
        let fine = alpha_grid(0.01).unwrap();
        assert_eq!(fine.len(), 101);
        assert_eq!(fine[0], 0.0);
        assert_eq!(fine[100], 1.0);
        assert!((fine[37] - 0.37).abs() < 1e-12);

        let coarse = alpha_grid(0.25).unwrap();
        assert_eq!(coarse, vec![0.0, 0.25, 0.5, 0.75, 1.0]);

        assert!(alpha_grid(0.0).is_err());
        assert!(alpha_grid(1.5).is_err());
    }

    #[test]
    fn kfold_assignment_is_balanced_and_deterministic() {
        let a = kfold_assignment(23, 5, 17);
        let b = kfold_assignment(23, 5, 17);
        assert_eq!(a, b);
        let mut counts = [0usize; 5];
        for &f in &a {
            counts[f] += 1;
        }
        let min = *counts.iter().min().unwrap();
        let max = *counts.iter().max().unwrap();
        assert!(max - min <= 1, "unbalanced folds: {counts:?}");
        assert_ne!(a, kfold_assignment(23, 5, 18));
    }

    /// N = 20 with one strong column and two nuisance columns.
    fn signal_fixture() -> (Array2<f64>, Vec<f64>) {
        let mut rows = Vec::new();
        let mut y = Vec::new();
        for i in 0..20 {
            let label = if i % 2 == 0 { 0.0 } else { 1.0 };
            let strong = if label == 0.0 { -1.0 } else { 1.0 };
            let n1 = ((i * 13 % 7) as f64 - 3.0) / 3.0;
            let n2 = ((i * 29 % 11) as f64 - 5.0) / 5.0;
            rows.extend([strong + 0.2 * n1, n1, n2]);
            y.push(label);
        }
        (Array2::from_shape_vec((20, 3), rows).unwrap(), y)
    }

    #[test]
    fn strong_signal_is_kept_by_the_one_se_rule() {
        let (x, y) = signal_fixture();
        let sel = cv_select(&x, &y, 0.5, 5, 17).unwrap();
        assert!(
            sel.fit.active.contains(&0),
            "expected column 0 active, got {:?} at alpha {}",
            sel.fit.active,
            sel.alpha
        );
        assert_eq!(sel.per_alpha.len(), 3);
        assert_eq!(sel.skipped_folds, 0);
        // Reported curve indices are self-consistent.
        assert_eq!(sel.curve.lambda_1se, sel.lambda);
        assert!(sel.curve.one_se_index <= sel.curve.min_index);
    }

    #[test]
    fn loo_matches_explicit_assignment() {
        let (x, y) = signal_fixture();
        let a = cv_select(&x, &y, 0.5, usize::MAX, 3).unwrap();
        let b = cv_select_with_assignment(&x, &y, 0.5, &loo_assignment(20)).unwrap();
        assert_eq!(a.alpha, b.alpha);
        assert_eq!(a.lambda, b.lambda);
        assert_eq!(a.fit.coefficients, b.fit.coefficients);
    }

    #[test]
    fn excessive_degenerate_folds_are_an_error() {
        // y = [1,0,0,0] under leave-one-out: removing the only positive
        // leaves a single-class training fold (1 of 4 = 25% > 20%).
        let x = Array2::from_shape_vec((4, 1), vec![0.4, -0.1, 0.2, -0.3]).unwrap();
        let y = vec![1.0, 0.0, 0.0, 0.0];
        match cv_select_with_assignment(&x, &y, 1.0, &loo_assignment(4)) {
            Err(GlmError::DegenerateFolds { skipped, total }) => {
                assert_eq!((skipped, total), (1, 4));
            }
            other => panic!("expected degenerate-folds error, got {other:?}"),
        }
    }
}
