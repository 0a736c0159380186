//! Univariate Pearson screening of feature columns against a binary outcome.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::special::t_two_sided_p;
use super::{check_two_classes, MetricsError};

/// Screening verdict for a single feature column.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScreenResult {
    pub r: f64,
    pub t_stat: f64,
    pub p_value: f64,
    pub selected: bool,
}

/// Pearson correlation of each column of `x` with `y`, with a two-sided
/// t-test at `level`. Zero-variance columns are never selected (p = 1).
///
/// The t statistic uses n − 2 degrees of freedom; |r| = 1 maps to p = 0.
pub fn pearson_screen(
    x: &Array2<f64>,
    y: &[f64],
    level: f64,
) -> Result<Vec<ScreenResult>, MetricsError> {
    let n = x.nrows();
    super::check_lengths(n, y.len())?;
    if n < 3 {
        return Err(MetricsError::TooFewSamples {
            required: 3,
            found: n,
        });
    }
    if !(0.0..1.0).contains(&level) || level <= 0.0 {
        return Err(MetricsError::Invalid(format!(
            "screening level must be in (0, 1), got {level}"
        )));
    }
    check_two_classes(y)?;

    let y_mean = y.iter().sum::<f64>() / n as f64;
    let y_ss: f64 = y.iter().map(|v| (v - y_mean).powi(2)).sum();
    let df = (n - 2) as f64;

    let mut out = Vec::with_capacity(x.ncols());
    for col in x.columns() {
        let x_mean = col.sum() / n as f64;
        let mut xy = 0.0;
        let mut xx = 0.0;
        for (xi, yi) in col.iter().zip(y) {
            let dx = xi - x_mean;
            xy += dx * (yi - y_mean);
            xx += dx * dx;
        }
        if xx <= 0.0 {
            out.push(ScreenResult {
                r: 0.0,
                t_stat: 0.0,
                p_value: 1.0,
                selected: false,
            });
            continue;
        }
        let r = (xy / (xx * y_ss).sqrt()).clamp(-1.0, 1.0);
        let (t, p) = if r.abs() >= 1.0 {
            (f64::INFINITY.copysign(r), 0.0)
        } else {
            let t = r * (df / (1.0 - r * r)).sqrt();
            (t, t_two_sided_p(df, t))
        };
        out.push(ScreenResult {
            r,
            t_stat: t,
            p_value: p,
            selected: p < level,
        });
    }
    Ok(out)
}
