//! Regularization paths for the elastic net.
//!
//! The path starts at the smallest penalty that zeroes every slope and
//! descends geometrically over four decades. Warm starts make the whole
//! sweep barely more expensive than the final point alone.

use ndarray::Array2;

use super::elastic_net::{fit_with, EnetWorkspace, FitOptions};
use super::{check_labels, null_deviance, sigmoid, GlmError};

/// Number of path points used throughout the pipeline.
pub const DEFAULT_PATH_POINTS: usize = 100;
/// Ratio of the smallest to the largest penalty on the path.
const LAMBDA_MIN_RATIO: f64 = 1e-4;
/// Absolute floor applied to every path point.
const LAMBDA_FLOOR: f64 = 1e-8;
/// Relative cushion on the first point so soft-thresholding zeroes every
/// slope despite rounding in the gradient computation.
const LAMBDA_MAX_CUSHION: f64 = 1e-10;
/// Mixing weight floor used in the `λ_max` formula so the ridge end of the
/// grid still produces a finite starting penalty.
const ALPHA_FLOOR: f64 = 0.001;
/// Truncation arms only once the training deviance has improved by this
/// fraction of its starting value; before that, flat stretches are expected
/// (small-α paths barely move near `λ_max`) and must not stop the sweep.
const TRUNCATION_ARM_IMPROVEMENT: f64 = 0.01;
/// Once armed, stop when one step improves the deviance by less than this
/// relative amount.
const TRUNCATION_REL_STEP: f64 = 1e-5;
/// Stop outright when the model explains this fraction of the null
/// deviance: beyond it the remaining penalties buy fit the data cannot
/// support, at steeply growing solver cost on near-separated fits.
const SATURATION_RATIO: f64 = 0.99;

/// A fitted regularization path at one mixing weight.
#[derive(Debug, Clone)]
pub struct PathFit {
    pub alpha: f64,
    pub lambdas: Vec<f64>,
    pub intercepts: Vec<f64>,
    pub coefs: Vec<Vec<f64>>,
    pub train_deviances: Vec<f64>,
    pub null_deviance: f64,
}

impl PathFit {
    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// Fraction of the null deviance explained at path index `k`.
    pub fn deviance_ratio(&self, k: usize) -> f64 {
        1.0 - self.train_deviances[k] / self.null_deviance
    }

    /// Predicted probabilities at path index `k` for the rows of `x`.
    pub fn predict_at(&self, k: usize, x: &Array2<f64>) -> Vec<f64> {
        let coefs = &self.coefs[k];
        x.rows()
            .into_iter()
            .map(|row| {
                let eta = self.intercepts[k]
                    + row.iter().zip(coefs).map(|(v, b)| v * b).sum::<f64>();
                sigmoid(eta)
            })
            .collect()
    }
}

/// Smallest penalty at which every slope is zero:
/// `max_j |x_jᵀ(y − ȳ)| / (N · max(α, 0.001))`.
pub fn lambda_max(x: &Array2<f64>, y: &[f64], alpha: f64) -> Result<f64, GlmError> {
    let n = x.nrows();
    if n == 0 || x.ncols() == 0 {
        return Err(GlmError::EmptyDesign);
    }
    let ybar = check_labels(y, n)?;
    let mut max_grad = 0.0f64;
    for col in x.columns() {
        let g: f64 = col.iter().zip(y).map(|(xij, yi)| xij * (yi - ybar)).sum();
        max_grad = max_grad.max(g.abs());
    }
    Ok((max_grad / (n as f64 * alpha.max(ALPHA_FLOOR))).max(LAMBDA_FLOOR))
}

/// Geometric grid from `λ_max` down to `1e-4·λ_max`, with a relative cushion
/// on the first point and an absolute floor on all of them.
pub fn lambda_path(lambda_max: f64, n_points: usize) -> Vec<f64> {
    assert!(n_points >= 1, "path needs at least one point");
    let mut out = Vec::with_capacity(n_points);
    out.push((lambda_max * (1.0 + LAMBDA_MAX_CUSHION)).max(LAMBDA_FLOOR));
    for k in 1..n_points {
        let t = k as f64 / (n_points - 1) as f64;
        out.push((lambda_max * LAMBDA_MIN_RATIO.powf(t)).max(LAMBDA_FLOOR));
    }
    out
}

/// Fit the path at an explicit penalty sequence (descending), warm-starting
/// each point from the previous one. No truncation is applied: this is the
/// form used on cross-validation folds, which must be evaluated at exactly
/// the penalties chosen on the full data.
pub fn fit_enet_path_at(
    x: &Array2<f64>,
    y: &[f64],
    alpha: f64,
    lambdas: &[f64],
) -> Result<PathFit, GlmError> {
    run_path(x, y, alpha, lambdas, false, None)
}

/// Like [`fit_enet_path_at`], but each point warm-starts from the solution
/// a reference path found at the same index. When the reference was fit on
/// nearly the same rows (a cross-validation fold's parent data), those
/// starts sit within the one-row influence of the optimum and the solver
/// converges in a handful of sweeps. The fixed points are unchanged.
pub fn fit_enet_path_at_warm(
    x: &Array2<f64>,
    y: &[f64],
    alpha: f64,
    lambdas: &[f64],
    reference: &PathFit,
) -> Result<PathFit, GlmError> {
    run_path(x, y, alpha, lambdas, false, Some(reference))
}

/// Fit a fresh path from `λ_max`, optionally truncating once the training
/// deviance stops moving (see the module constants for the exact rule).
pub fn fit_enet_path(
    x: &Array2<f64>,
    y: &[f64],
    alpha: f64,
    n_points: usize,
    truncate: bool,
) -> Result<PathFit, GlmError> {
    let lmax = lambda_max(x, y, alpha)?;
    let lambdas = lambda_path(lmax, n_points);
    run_path(x, y, alpha, &lambdas, truncate, None)
}

fn run_path(
    x: &Array2<f64>,
    y: &[f64],
    alpha: f64,
    lambdas: &[f64],
    truncate: bool,
    reference: Option<&PathFit>,
) -> Result<PathFit, GlmError> {
    if lambdas.is_empty() {
        return Err(GlmError::Invalid("empty penalty sequence".into()));
    }
    let null_dev = null_deviance(y);
    let mut fit = PathFit {
        alpha,
        lambdas: Vec::with_capacity(lambdas.len()),
        intercepts: Vec::with_capacity(lambdas.len()),
        coefs: Vec::with_capacity(lambdas.len()),
        train_deviances: Vec::with_capacity(lambdas.len()),
        null_deviance: null_dev,
    };

    // Reference-seeded sweeps re-solve a one-row perturbation of an already
    // converged path, so they run at cross-validation resolution.
    let mut ws = EnetWorkspace::new(x);
    let opts = if reference.is_some() { FitOptions::warm_refit() } else { FitOptions::strict() };

    let mut warm: Option<(f64, Vec<f64>)> = None;
    let mut armed = false;
    for (idx, &lambda) in lambdas.iter().enumerate() {
        let start = match reference {
            Some(r) if idx < r.coefs.len() && r.coefs[idx].len() == x.ncols() => {
                Some((r.intercepts[idx], r.coefs[idx].as_slice()))
            }
            _ => warm.as_ref().map(|(b0, b)| (*b0, b.as_slice())),
        };
        let (sol, dev) = fit_with(&mut ws, y, lambda, alpha, start, opts)?;

        let prev_dev = fit.train_deviances.last().copied();
        fit.lambdas.push(lambda);
        fit.intercepts.push(sol.intercept);
        fit.coefs.push(sol.coefficients.clone());
        fit.train_deviances.push(dev);
        warm = Some((sol.intercept, sol.coefficients));

        if truncate {
            let start_dev = fit.train_deviances[0];
            if !armed && start_dev > 0.0 && (start_dev - dev) / start_dev >= TRUNCATION_ARM_IMPROVEMENT
            {
                armed = true;
            }
            if 1.0 - dev / null_dev > SATURATION_RATIO {
                break;
            }
            if armed {
                if let Some(prev) = prev_dev {
                    if prev > 0.0 && (prev - dev) / prev < TRUNCATION_REL_STEP {
                        break;
                    }
                }
            }
        }
    }
    Ok(fit)
}
