//! Temporary timing probe; not part of the suite.

use std::time::Instant;

use cogspeech_core::corpus::FeatureMatrix;
use cogspeech_core::glm::fit_enet_path;
use cogspeech_core::glm::path::fit_enet_path_at;
use cogspeech_core::harness::Preprocessor;
use cogspeech_core::metrics::pearson_screen;
use ndarray::Array2;

#[test]
#[ignore]
fn profile_path_fits() {
    let file = std::fs::File::open("/tmp/smoke/ex60/features.csv").unwrap();
    let fm = FeatureMatrix::from_csv(std::io::BufReader::new(file)).unwrap();
    let rows: Vec<usize> = (0..fm.x.nrows()).collect();
    let skip = vec![false; fm.feature_names.len()];
    let prep = Preprocessor::fit(&fm.x, &fm.feature_names, &skip);
    let x = prep.transform_rows(&fm.x, &rows);
    let y = fm.y.clone();

    let screen = pearson_screen(&x, &y, 0.01).unwrap();
    let kept: Vec<usize> = screen
        .iter()
        .enumerate()
        .filter(|(_, s)| s.selected)
        .map(|(j, _)| j)
        .collect();
    println!("screened columns: {}", kept.len());
    let xs = select_cols(&x, &kept);

    for &alpha in &[0.0, 0.5, 1.0] {
        let t0 = Instant::now();
        let full = fit_enet_path(&xs, &y, alpha, 100, true).unwrap();
        let t_full = t0.elapsed();
        let last = full.len() - 1;
        let max_b = full.coefs[last].iter().fold(0.0f64, |m, b| m.max(b.abs()));
        println!(
            "alpha {alpha}: full path len {} in {:?} (end max|b| {:.2}, dev ratio {:.4})",
            full.len(),
            t_full,
            max_b,
            full.deviance_ratio(last)
        );

        // Per-lambda sweep counts along a manual warm chain.
        let mut warm: Option<(f64, Vec<f64>)> = None;
        let mut by_sweeps: Vec<(usize, usize, f64)> = Vec::new();
        for (l, &lam) in full.lambdas.iter().enumerate() {
            let sol = cogspeech_core::glm::fit_elasticnet(
                &xs,
                &y,
                lam,
                alpha,
                warm.as_ref().map(|(b0, b): &(f64, Vec<f64>)| (*b0, b.as_slice())),
            )
            .unwrap();
            let mb = sol.coefficients.iter().fold(0.0f64, |m, b| m.max(b.abs()));
            by_sweeps.push((sol.sweeps, l, mb));
            warm = Some((sol.intercept, sol.coefficients));
        }
        let total: usize = by_sweeps.iter().map(|t| t.0).sum();
        let line: Vec<String> = by_sweeps
            .iter()
            .enumerate()
            .step_by(5)
            .map(|(l, t)| format!("{l}:{} r{:.3}", t.0, full.deviance_ratio(l)))
            .collect();
        println!("alpha {alpha}: total sweeps {total}\n  {}", line.join(" | "));

        // One leave-one-out inner fold: drop row 0.
        let train_rows: Vec<usize> = (1..xs.nrows()).collect();
        let xt = select_rows(&xs, &train_rows);
        let yt: Vec<f64> = train_rows.iter().map(|&i| y[i]).collect();
        let t1 = Instant::now();
        let inner = fit_enet_path_at(&xt, &yt, alpha, &full.lambdas).unwrap();
        let t_inner = t1.elapsed();
        let t2 = Instant::now();
        let inner_w =
            cogspeech_core::glm::path::fit_enet_path_at_warm(&xt, &yt, alpha, &full.lambdas, &full)
                .unwrap();
        let t_warm = t2.elapsed();
        assert_eq!(inner.len(), inner_w.len());
        println!(
            "alpha {alpha}: inner cold {:?} / ref-warm {:?} (x60x59 warm: {:.0}s est)",
            t_inner,
            t_warm,
            t_warm.as_secs_f64() * 60.0 * 59.0
        );
    }

    // One full cv_select at the default grid = one outer fold of the
    // nested run, i.e. 1/60 of the whole selection workload.
    let t3 = Instant::now();
    let sel = cogspeech_core::glm::cv_select(&xs, &y, 0.01, usize::MAX, 17).unwrap();
    let t_sel = t3.elapsed();
    println!(
        "cv_select step 0.01 inner-loo: {:?} (x60 outer: {:.0}s est) alpha*={} lambda*={:.5} active={}",
        t_sel,
        t_sel.as_secs_f64() * 60.0,
        sel.alpha,
        sel.lambda,
        sel.fit.active.len()
    );
}

fn select_cols(x: &Array2<f64>, cols: &[usize]) -> Array2<f64> {
    let mut out = Array2::zeros((x.nrows(), cols.len()));
    for (jj, &j) in cols.iter().enumerate() {
        out.column_mut(jj).assign(&x.column(j));
    }
    out
}

fn select_rows(x: &Array2<f64>, rows: &[usize]) -> Array2<f64> {
    let mut out = Array2::zeros((rows.len(), x.ncols()));
    for (ii, &i) in rows.iter().enumerate() {
        out.row_mut(ii).assign(&x.row(i));
    }
    out
}
