//! Column standardization fitted on one set of rows and applied to others.

use ndarray::Array2;

use super::CorpusError;

/// Per-column mean/sd parameters. Skipped columns (indicator dummies) pass
/// through unchanged; sds use the sample (n - 1) denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnStandardizer {
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
    pub skip: Vec<bool>,
}

impl ColumnStandardizer {
    /// Fit on the rows of `x`. A zero-variance non-skipped column is an error
    /// naming the column.
    pub fn fit(x: &Array2<f64>, names: &[String], skip: &[bool]) -> Result<Self, CorpusError> {
        let (standardizer, degenerate) = Self::fit_dropping(x, skip);
        if let Some(&j) = degenerate.first() {
            return Err(CorpusError::DegenerateColumn(names[j].clone()));
        }
        Ok(standardizer)
    }

    /// Fit like [`ColumnStandardizer::fit`], but return zero-variance columns
    /// instead of erroring so callers can drop them.
    pub fn fit_dropping(x: &Array2<f64>, skip: &[bool]) -> (Self, Vec<usize>) {
        let n = x.nrows();
        let p = x.ncols();
        assert_eq!(skip.len(), p, "skip mask length must match column count");
        let mut means = vec![0.0; p];
        let mut sds = vec![1.0; p];
        let mut degenerate = Vec::new();
        for j in 0..p {
            if skip[j] {
                continue;
            }
            let col = x.column(j);
            let mean = col.sum() / n as f64;
            let ss: f64 = col.iter().map(|v| (v - mean) * (v - mean)).sum();
            let sd = if n >= 2 {
                (ss / (n - 1) as f64).sqrt()
            } else {
                0.0
            };
            if sd == 0.0 {
                degenerate.push(j);
            } else {
                means[j] = mean;
                sds[j] = sd;
            }
        }
        (
            ColumnStandardizer {
                means,
                sds,
                skip: skip.to_vec(),
            },
            degenerate,
        )
    }

    pub fn transform(&self, x: &Array2<f64>) -> Array2<f64> {
        let mut out = x.clone();
        self.transform_in_place(&mut out);
        out
    }

    pub fn transform_in_place(&self, x: &mut Array2<f64>) {
        for j in 0..x.ncols() {
            if self.skip[j] {
                continue;
            }
            for v in x.column_mut(j) {
                *v = (*v - self.means[j]) / self.sds[j];
            }
        }
    }

    pub fn transform_row(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .enumerate()
            .map(|(j, &v)| {
                if self.skip[j] {
                    v
                } else {
                    (v - self.means[j]) / self.sds[j]
                }
            })
            .collect()
    }
}

/// Standardize the non-skipped columns of `x` in place and return the fitted
/// parameters.
pub fn zscore_columns(
    x: &mut Array2<f64>,
    names: &[String],
    skip: &[bool],
) -> Result<ColumnStandardizer, CorpusError> {
    let standardizer = ColumnStandardizer::fit(x, names, skip)?;
    standardizer.transform_in_place(x);
    Ok(standardizer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("f{i}")).collect()
    }

    #[test]
    fn zscored_columns_have_zero_mean_unit_sample_sd() {
        let mut x = array![[1.0, 0.0], [2.0, 1.0], [3.0, 0.0], [4.0, 1.0]];
        zscore_columns(&mut x, &names(2), &[false, false]).unwrap();
        for j in 0..2 {
            let col: Vec<f64> = x.column(j).to_vec();
            let m = crate::stats::mean(&col);
            let sd = crate::stats::sample_sd(&col);
            assert!(m.abs() < 1e-12);
            assert!((sd - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn skipped_columns_pass_through() {
        let mut x = array![[1.0, 0.0], [2.0, 1.0], [3.0, 0.0]];
        zscore_columns(&mut x, &names(2), &[false, true]).unwrap();
        assert_eq!(x.column(1).to_vec(), vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn zero_variance_column_is_an_error_naming_it() {
        let mut x = array![[1.0, 5.0], [2.0, 5.0], [3.0, 5.0]];
        let err = zscore_columns(&mut x, &names(2), &[false, false]).unwrap_err();
        assert!(err.to_string().contains("'f1'"));
    }

    #[test]
    fn transform_row_uses_training_parameters() {
        let x = array![[0.0], [2.0]];
        let s = ColumnStandardizer::fit(&x, &names(1), &[false]).unwrap();
        let row = s.transform_row(&[4.0]);
        // mean 1, sample sd sqrt(2)
        assert!((row[0] - 3.0 / 2.0_f64.sqrt()).abs() < 1e-12);
    }
}
