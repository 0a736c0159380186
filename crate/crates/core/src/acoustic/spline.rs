//! Natural cubic spline interpolation with a tridiagonal (Thomas) solve.

/// Piecewise-cubic interpolant with natural boundary conditions (zero second
/// derivative at both ends). Degenerates gracefully: one knot → constant,
/// two knots → linear.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl CubicSpline {
    /// Build the interpolant through `(xs[i], ys[i])`. Knot abscissae must be
    /// strictly increasing.
    pub fn natural(xs: &[f64], ys: &[f64]) -> Self {
        assert_eq!(xs.len(), ys.len(), "knot arrays must match");
        assert!(!xs.is_empty(), "need at least one knot");
        assert!(
            xs.windows(2).all(|w| w[1] > w[0]),
            "knot abscissae must be strictly increasing"
        );
        let n = xs.len();
        let mut m = vec![0.0; n];
        if n > 2 {
            // Tridiagonal system for interior second derivatives.
            let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
            let k = n - 2;
            let mut diag = vec![0.0; k];
            let mut upper = vec![0.0; k];
            let mut lower = vec![0.0; k];
            let mut rhs = vec![0.0; k];
            for i in 0..k {
                diag[i] = 2.0 * (h[i] + h[i + 1]);
                lower[i] = h[i];
                upper[i] = h[i + 1];
                rhs[i] = 6.0
                    * ((ys[i + 2] - ys[i + 1]) / h[i + 1] - (ys[i + 1] - ys[i]) / h[i]);
            }
            // Thomas forward sweep (the natural BCs zero out the couplings of
            // the first and last interior rows to m_0 and m_{n-1}).
            for i in 1..k {
                let w = lower[i] / diag[i - 1];
                diag[i] -= w * upper[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            m[k] = rhs[k - 1] / diag[k - 1];
            for i in (0..k - 1).rev() {
                m[i + 1] = (rhs[i] - upper[i] * m[i + 2]) / diag[i];
            }
        }
        CubicSpline {
            xs: xs.to_vec(),
            ys: ys.to_vec(),
            m,
        }
    }

    /// Evaluate at `x`. Outside the knot range the end polynomial extends.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if n == 1 {
            return self.ys[0];
        }
        // Rightmost interval whose left knot is <= x (clamped to valid range).
        let i = match self
            .xs
            .binary_search_by(|probe| probe.total_cmp(&x))
        {
            Ok(idx) => idx.min(n - 2),
            Err(ins) => ins.saturating_sub(1).min(n - 2),
        };
        let h = self.xs[i + 1] - self.xs[i];
        let d = x - self.xs[i];
        let b = (self.ys[i + 1] - self.ys[i]) / h - h * (2.0 * self.m[i] + self.m[i + 1]) / 6.0;
        let c = self.m[i] / 2.0;
        let e = (self.m[i + 1] - self.m[i]) / (6.0 * h);
        self.ys[i] + d * (b + d * (c + d * e))
    }
}
