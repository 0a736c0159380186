//! Unregularized logistic regression via iteratively reweighted least
//! squares, with Wald standard errors and odds-ratio confidence intervals.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::linalg::{cholesky_inverse, dependent_columns, solve_spd_with_jitter};
use super::{check_labels, deviance, null_deviance, sigmoid, GlmError};
use crate::metrics::special::normal_cdf;

const MAX_ITERATIONS: usize = 100;
const GRAD_TOL: f64 = 1e-8;
/// A fitted log-odds beyond this magnitude is treated as quasi-separation.
const SEPARATION_BOUND: f64 = 30.0;
const WALD_Z: f64 = 1.959_963_984_540_054;

/// Maximum-likelihood logistic fit with per-coefficient Wald inference.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LogisticFit {
    pub feature_names: Vec<String>,
    pub intercept: f64,
    pub intercept_se: f64,
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub wald_z: Vec<f64>,
    pub p_values: Vec<f64>,
    pub odds_ratios: Vec<f64>,
    pub ci_lower: Vec<f64>,
    pub ci_upper: Vec<f64>,
    pub deviance: f64,
    pub null_deviance: f64,
    pub converged: bool,
    pub separation: bool,
    pub iterations: usize,
}

impl LogisticFit {
    /// Predicted probability for one feature row (same column order as the fit).
    pub fn predict(&self, row: &[f64]) -> f64 {
        debug_assert_eq!(row.len(), self.coefficients.len());
        let eta = self.intercept
            + row
                .iter()
                .zip(&self.coefficients)
                .map(|(x, b)| x * b)
                .sum::<f64>();
        sigmoid(eta)
    }

    pub fn predict_all(&self, x: &Array2<f64>) -> Vec<f64> {
        x.rows()
            .into_iter()
            .map(|r| self.predict(r.as_slice().expect("contiguous row")))
            .collect()
    }
}

/// Fit a logistic model by Newton–Raphson on the log-likelihood.
///
/// The design is checked for rank deficiency up front; dependent columns are
/// reported by name rather than silently absorbed, because downstream odds
/// ratios would be meaningless. Quasi-separation is not an error — the fit is
/// returned with `separation = true` and inflated standard errors, matching
/// how the situation is usually reported.
pub fn fit_logistic(
    x: &Array2<f64>,
    y: &[f64],
    feature_names: &[String],
) -> Result<LogisticFit, GlmError> {
    let n = x.nrows();
    let p = x.ncols();
    if n == 0 || p == 0 {
        return Err(GlmError::EmptyDesign);
    }
    if feature_names.len() != p {
        return Err(GlmError::LengthMismatch {
            expected: p,
            found: feature_names.len(),
        });
    }
    check_labels(y, n)?;
    if n <= p {
        return Err(GlmError::Invalid(format!(
            "need more observations ({n}) than parameters ({})",
            p + 1
        )));
    }

    // Design with an explicit intercept column.
    let mut design = Array2::<f64>::ones((n, p + 1));
    for i in 0..n {
        for j in 0..p {
            design[[i, j + 1]] = x[[i, j]];
        }
    }

    let gram = design.t().dot(&design);
    let dep = dependent_columns(&gram, 1e-10);
    if !dep.is_empty() {
        let columns = dep
            .iter()
            .map(|&j| {
                if j == 0 {
                    "(intercept)".to_string()
                } else {
                    feature_names[j - 1].clone()
                }
            })
            .collect();
        return Err(GlmError::RankDeficient { columns });
    }

    let mut beta = vec![0.0; p + 1];
    let mut probs = vec![0.5; n];
    let mut converged = false;
    let mut separation = false;
    let mut iterations = 0;
    let mut info_factor = None;

    for iter in 1..=MAX_ITERATIONS {
        iterations = iter;
        // Score U = Xᵀ(y − p) and information I = XᵀWX.
        let mut score = vec![0.0; p + 1];
        let mut info = Array2::<f64>::zeros((p + 1, p + 1));
        for i in 0..n {
            let resid = y[i] - probs[i];
            let w = probs[i] * (1.0 - probs[i]);
            for a in 0..=p {
                let xa = design[[i, a]];
                score[a] += xa * resid;
                for b in a..=p {
                    info[[a, b]] += w * xa * design[[i, b]];
                }
            }
        }
        for a in 0..=p {
            for b in 0..a {
                info[[a, b]] = info[[b, a]];
            }
        }

        let grad_inf = score.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if grad_inf < GRAD_TOL {
            converged = true;
            let (_, l) = solve_spd_with_jitter(&info, &score)?;
            info_factor = Some(l);
            break;
        }

        let (step, l) = solve_spd_with_jitter(&info, &score)?;
        info_factor = Some(l);
        for (b, s) in beta.iter_mut().zip(&step) {
            *b += s;
        }
        for i in 0..n {
            let mut e = 0.0;
            for a in 0..=p {
                e += design[[i, a]] * beta[a];
            }
            probs[i] = sigmoid(e);
        }
        if beta.iter().any(|b| b.abs() > SEPARATION_BOUND) {
            // Drifting log-odds: the likelihood has no interior maximum, so
            // further Newton steps only push coefficients toward ±∞.
            separation = true;
            break;
        }
    }
    let covariance = cholesky_inverse(&info_factor.expect("at least one IRLS iteration"));

    let mut std_errors = Vec::with_capacity(p);
    let mut wald_z = Vec::with_capacity(p);
    let mut p_values = Vec::with_capacity(p);
    let mut odds_ratios = Vec::with_capacity(p);
    let mut ci_lower = Vec::with_capacity(p);
    let mut ci_upper = Vec::with_capacity(p);
    for j in 0..p {
        let se = covariance[[j + 1, j + 1]].max(0.0).sqrt();
        let b = beta[j + 1];
        let z = if se > 0.0 { b / se } else { 0.0 };
        std_errors.push(se);
        wald_z.push(z);
        p_values.push(2.0 * normal_cdf(-z.abs()));
        odds_ratios.push(b.exp().min(f64::MAX));
        ci_lower.push((b - WALD_Z * se).exp());
        ci_upper.push((b + WALD_Z * se).exp());
    }

    Ok(LogisticFit {
        feature_names: feature_names.to_vec(),
        intercept: beta[0],
        intercept_se: covariance[[0, 0]].max(0.0).sqrt(),
        coefficients: beta[1..].to_vec(),
        std_errors,
        wald_z,
        p_values,
        odds_ratios,
        ci_lower,
        ci_upper,
        deviance: deviance(&probs, y),
        null_deviance: null_deviance(y),
        converged,
        separation,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("x{i}")).collect()
    }

    /// 2×2 table with cells (x=0,y=0)=4, (x=0,y=1)=1, (x=1,y=0)=1, (x=1,y=1)=4.
    fn two_by_two() -> (Array2<f64>, Vec<f64>) {
        let mut rows = Vec::new();
        let mut y = Vec::new();
        for _ in 0..4 {
            rows.push(0.0);
            y.push(0.0);
        }
        rows.push(0.0);
        y.push(1.0);
        rows.push(1.0);
        y.push(0.0);
        for _ in 0..4 {
            rows.push(1.0);
            y.push(1.0);
        }
        (
            Array2::from_shape_vec((rows.len(), 1), rows).unwrap(),
            y,
        )
    }

    #[test]
    fn saturated_two_by_two_matches_closed_form() {
        // Closed-form MLE: intercept = ln(1/4), slope = ln(16); the Wald SE
        // of the slope is √(1/4 + 1/1 + 1/1 + 1/4) = √2.5.
        let (x, y) = two_by_two();
        let fit = fit_logistic(&x, &y, &names(1)).unwrap();
        assert!(fit.converged);
        assert!(!fit.separation);
        assert!((fit.intercept - (0.25f64).ln()).abs() < 1e-6);
        assert!((fit.coefficients[0] - 16.0f64.ln()).abs() < 1e-6);
        assert!((fit.std_errors[0] - 2.5f64.sqrt()).abs() < 1e-6);
        assert!((fit.odds_ratios[0] - 16.0).abs() < 1e-4);
        // p-value is consistent with its own z statistic definition.
        let expected_p = 2.0 * normal_cdf(-fit.wald_z[0].abs());
        assert!((fit.p_values[0] - expected_p).abs() < 1e-12);
        assert!(fit.p_values[0] > 0.07 && fit.p_values[0] < 0.09);
    }

    #[test]
    fn confidence_interval_brackets_odds_ratio() {
        let (x, y) = two_by_two();
        let fit = fit_logistic(&x, &y, &names(1)).unwrap();
        assert!(fit.ci_lower[0] < fit.odds_ratios[0]);
        assert!(fit.ci_upper[0] > fit.odds_ratios[0]);
        let width = (fit.ci_upper[0] / fit.ci_lower[0]).ln();
        assert!((width - 2.0 * 1.959_963_984_540_054 * fit.std_errors[0]).abs() < 1e-9);
    }

    #[test]
    fn duplicate_column_is_reported_by_name() {
        let x = Array2::from_shape_vec(
            (6, 2),
            vec![1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 4.0, 4.0, 5.0, 5.0, 6.0, 6.0],
        )
        .unwrap();
        let y = vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0];
        let nm = vec!["first".to_string(), "copy_of_first".to_string()];
        match fit_logistic(&x, &y, &nm) {
            Err(GlmError::RankDeficient { columns }) => {
                assert!(!columns.is_empty());
                assert!(columns.iter().all(|c| c == "first" || c == "copy_of_first"));
            }
            other => panic!("expected rank deficiency, got {other:?}"),
        }
    }

    #[test]
    fn separated_data_sets_the_flag() {
        // Narrow margins keep the score above tolerance while the slope
        // drifts, so the fit exits through the separation bound.
        let x =
            Array2::from_shape_vec((6, 1), vec![-0.3, -0.2, -0.1, 0.1, 0.2, 0.3]).unwrap();
        let y = vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0];
        let fit = fit_logistic(&x, &y, &names(1)).unwrap();
        assert!(fit.separation);
        assert!(!fit.converged);
        assert!(fit.coefficients[0] > SEPARATION_BOUND);
        // A perfect classifier: deviance well below the null model's.
        assert!(fit.deviance < 0.5 * fit.null_deviance);
    }

    #[test]
    fn single_class_outcome_is_rejected() {
        let x = Array2::from_shape_vec((4, 1), vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let y = vec![1.0, 1.0, 1.0, 1.0];
        assert!(matches!(
            fit_logistic(&x, &y, &names(1)),
            Err(GlmError::SingleClass)
        ));
    }
}
