//! Small dense symmetric positive-definite solvers used by the IRLS fits.
//!
//! The design matrices here are tiny (hundreds of rows, tens of columns after
//! screening), so an unblocked Cholesky is both fast enough and easy to audit.

use ndarray::Array2;

use super::GlmError;

/// Lower-triangular Cholesky factor of a symmetric matrix, or `None` if a
/// pivot drops below `tol` times the largest diagonal entry.
pub(crate) fn cholesky(a: &Array2<f64>, tol: f64) -> Option<Array2<f64>> {
    let n = a.nrows();
    debug_assert_eq!(n, a.ncols());
    let max_diag = (0..n).map(|i| a[[i, i]].abs()).fold(0.0f64, f64::max);
    let floor = tol * max_diag.max(1.0);
    let mut l = Array2::<f64>::zeros((n, n));
    for j in 0..n {
        let mut d = a[[j, j]];
        for k in 0..j {
            d -= l[[j, k]] * l[[j, k]];
        }
        if d <= floor {
            return None;
        }
        let dj = d.sqrt();
        l[[j, j]] = dj;
        for i in (j + 1)..n {
            let mut s = a[[i, j]];
            for k in 0..j {
                s -= l[[i, k]] * l[[j, k]];
            }
            l[[i, j]] = s / dj;
        }
    }
    Some(l)
}

/// Solve `L Lᵀ x = b` given the lower factor `L`.
pub(crate) fn cholesky_solve(l: &Array2<f64>, b: &[f64]) -> Vec<f64> {
    let n = l.nrows();
    debug_assert_eq!(b.len(), n);
    let mut x = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            x[i] -= l[[i, k]] * x[k];
        }
        x[i] /= l[[i, i]];
    }
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            x[i] -= l[[k, i]] * x[k];
        }
        x[i] /= l[[i, i]];
    }
    x
}

/// Inverse of `L Lᵀ` given the lower factor `L`.
pub(crate) fn cholesky_inverse(l: &Array2<f64>) -> Array2<f64> {
    let n = l.nrows();
    let mut inv = Array2::<f64>::zeros((n, n));
    let mut unit = vec![0.0; n];
    for j in 0..n {
        unit[j] = 1.0;
        let col = cholesky_solve(l, &unit);
        unit[j] = 0.0;
        for i in 0..n {
            inv[[i, j]] = col[i];
        }
    }
    inv
}

/// Solve a symmetric positive semi-definite system, escalating a diagonal
/// jitter when the plain factorization fails. Returns the solution together
/// with the factor actually used (jittered if retries were needed).
pub(crate) fn solve_spd_with_jitter(
    a: &Array2<f64>,
    b: &[f64],
) -> Result<(Vec<f64>, Array2<f64>), GlmError> {
    const BASE_TOL: f64 = 1e-12;
    if let Some(l) = cholesky(a, BASE_TOL) {
        return Ok((cholesky_solve(&l, b), l));
    }
    let n = a.nrows();
    let max_diag = (0..n).map(|i| a[[i, i]].abs()).fold(0.0f64, f64::max).max(1.0);
    let mut jitter = 1e-10 * max_diag;
    for _ in 0..12 {
        let mut aj = a.clone();
        for i in 0..n {
            aj[[i, i]] += jitter;
        }
        if let Some(l) = cholesky(&aj, BASE_TOL) {
            return Ok((cholesky_solve(&l, b), l));
        }
        jitter *= 10.0;
    }
    Err(GlmError::Singular(format!(
        "information matrix not positive definite after jitter up to {jitter:.3e}"
    )))
}

/// Indices of columns whose pivot collapses in a pivoted Cholesky of the Gram
/// matrix — i.e. columns linearly dependent on the ones kept before them.
pub(crate) fn dependent_columns(gram: &Array2<f64>, rel_tol: f64) -> Vec<usize> {
    let n = gram.nrows();
    let mut a = gram.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let max_diag = (0..n).map(|i| a[[i, i]].abs()).fold(0.0f64, f64::max);
    let floor = rel_tol * max_diag.max(1.0);
    let mut dependent = Vec::new();
    for step in 0..n {
        // Pick the largest remaining diagonal as the next pivot.
        let (best, best_val) = (step..n)
            .map(|i| (i, a[[i, i]]))
            .fold((step, f64::NEG_INFINITY), |acc, cur| {
                if cur.1 > acc.1 {
                    cur
                } else {
                    acc
                }
            });
        if best_val <= floor {
            // Everything left is in the span of the accepted columns.
            dependent.extend(perm[step..n].iter().copied());
            break;
        }
        if best != step {
            perm.swap(step, best);
            swap_symmetric(&mut a, step, best);
        }
        let piv = a[[step, step]].sqrt();
        a[[step, step]] = piv;
        for i in (step + 1)..n {
            a[[i, step]] /= piv;
        }
        for j in (step + 1)..n {
            for i in j..n {
                let update = a[[i, step]] * a[[j, step]];
                a[[i, j]] -= update;
                if i != j {
                    a[[j, i]] = a[[i, j]];
                }
            }
        }
    }
    dependent.sort_unstable();
    dependent
}

fn swap_symmetric(a: &mut Array2<f64>, i: usize, j: usize) {
    let n = a.nrows();
    for k in 0..n {
        let (x, y) = (a[[i, k]], a[[j, k]]);
        a[[i, k]] = y;
        a[[j, k]] = x;
    }
    for k in 0..n {
        let (x, y) = (a[[k, i]], a[[k, j]]);
        a[[k, i]] = y;
        a[[k, j]] = x;
    }
}
