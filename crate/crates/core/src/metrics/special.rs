//! Special functions backing the p-value machinery.
//!
//! Regularized incomplete gamma and beta functions are evaluated with series /
//! continued-fraction pairs iterated to a 1e-12 relative target. The
//! continued fractions use modified Lentz iteration.

const EPS: f64 = 1e-12;
const FPMIN: f64 = 1e-300;
const MAX_ITER: usize = 500;

/// ln Γ(x) for x > 0 (Lanczos approximation, ~1e-10 relative error).
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0, "ln_gamma requires x > 0");
    const COF: [f64; 6] = [
        76.18009172947146,
        -86.50532032941677,
        24.01409824083091,
        -1.231739572450155,
        0.1208650973866179e-2,
        -0.5395239384953e-5,
    ];
    let mut y = x;
    let tmp = x + 5.5;
    let tmp = tmp - (x + 0.5) * tmp.ln();
    let mut ser = 1.000000000190015;
    for c in COF {
        y += 1.0;
        ser += c / y;
    }
    -tmp + (2.5066282746310005 * ser / x).ln()
}

/// Regularized lower incomplete gamma P(a, x).
pub fn reg_inc_gamma_p(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        gamma_series(a, x)
    } else {
        1.0 - gamma_cf(a, x)
    }
}

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
pub fn reg_inc_gamma_q(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_series(a, x)
    } else {
        gamma_cf(a, x)
    }
}

fn gamma_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut sum = 1.0 / a;
    let mut del = sum;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum * (-x + a * x.ln() - ln_gamma(a)).exp()
}

fn gamma_cf(a: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    (-x + a * x.ln() - ln_gamma(a)).exp() * h
}

/// Regularized incomplete beta I_x(a, b).
pub fn reg_inc_beta(a: f64, b: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && b > 0.0 && (0.0..=1.0).contains(&x));
    if x == 0.0 {
        return 0.0;
    }
    if x == 1.0 {
        return 1.0;
    }
    let front =
        (ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln()).exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_cf(a, b, x) / a
    } else {
        1.0 - front * beta_cf(b, a, 1.0 - x) / b
    }
}

fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Standard normal CDF via the incomplete gamma representation of erfc.
pub fn normal_cdf(x: f64) -> f64 {
    let z = x.abs() / std::f64::consts::SQRT_2;
    let half_erfc = 0.5 * reg_inc_gamma_q(0.5, z * z);
    if x >= 0.0 {
        1.0 - half_erfc
    } else {
        half_erfc
    }
}

/// Survival function of the chi-squared distribution with `df` degrees of
/// freedom.
pub fn chi2_sf(df: f64, x: f64) -> f64 {
    debug_assert!(df > 0.0 && x >= 0.0);
    reg_inc_gamma_q(0.5 * df, 0.5 * x)
}

/// Two-sided p-value for a Student-t statistic with `df` degrees of freedom:
/// P(|T| > |t|) = I_{df/(df+t^2)}(df/2, 1/2).
pub fn t_two_sided_p(df: f64, t: f64) -> f64 {
    debug_assert!(df > 0.0);
    if !t.is_finite() {
        return 0.0;
    }
    reg_inc_beta(0.5 * df, 0.5, df / (df + t * t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_matches_factorials() {
        // Γ(n) = (n-1)!
        assert!((ln_gamma(5.0) - 24.0_f64.ln()).abs() < 1e-10);
        assert!((ln_gamma(1.0)).abs() < 1e-10);
        // Γ(1/2) = sqrt(pi)
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-10);
    }

    #[test]
    fn incomplete_gamma_complements_sum_to_one() {
        for &(a, x) in &[(0.5, 0.3), (2.0, 1.0), (4.0, 7.75), (10.0, 3.0)] {
            let p = reg_inc_gamma_p(a, x);
            let q = reg_inc_gamma_q(a, x);
            assert!((p + q - 1.0).abs() < 1e-12, "a={a} x={x}");
        }
    }

    #[test]
    fn continued_fraction_matches_series_across_the_switch() {
        // P(a, x) from the series route evaluated in its stable region should
        // agree with the CF route just across the x = a + 1 boundary.
        for &a in &[0.5, 1.5, 3.0, 8.0] {
            let x = a + 1.0;
            let series = gamma_series(a, x - 1e-9);
            let cf = 1.0 - gamma_cf(a, x + 1e-9);
            assert!((series - cf).abs() < 1e-8, "a={a}: {series} vs {cf}");
        }
    }

    #[test]
    fn inc_beta_known_values() {
        // I_x(1, 1) = x
        assert!((reg_inc_beta(1.0, 1.0, 0.37) - 0.37).abs() < 1e-12);
        // I_x(1, b) = 1 - (1-x)^b
        let x = 0.2;
        let b = 3.0;
        assert!((reg_inc_beta(1.0, b, x) - (1.0 - (1.0 - x).powf(b))).abs() < 1e-12);
        // symmetry I_x(a,b) = 1 - I_{1-x}(b,a)
        let v = reg_inc_beta(2.5, 1.75, 0.4) + reg_inc_beta(1.75, 2.5, 0.6);
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normal_cdf_reference_points() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-12);
        assert!((normal_cdf(1.959963984540054) - 0.975).abs() < 1e-9);
        assert!((normal_cdf(-1.0) - 0.15865525393145707).abs() < 1e-9);
    }

    #[test]
    fn chi2_sf_reference_point() {
        // classic 5% critical value at 8 degrees of freedom
        let p = chi2_sf(8.0, 15.507);
        assert!((p - 0.05).abs() < 1e-3, "p = {p}");
    }

    #[test]
    fn t_two_sided_p_reference_points() {
        // t = 0 -> p = 1; large |t| -> p near 0
        assert!((t_two_sided_p(5.0, 0.0) - 1.0).abs() < 1e-12);
        assert!(t_two_sided_p(5.0, 100.0) < 1e-8);
        // df=2, t=4.302652729911275 is the 97.5th percentile -> p = 0.05
        assert!((t_two_sided_p(2.0, 4.302652729911275) - 0.05).abs() < 1e-9);
    }
}
