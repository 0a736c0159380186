//! Independent reference implementations the integration suites check the
//! library against. Each favors the most direct algorithm available over
//! speed, and none shares code with the crate itself.

#![allow(dead_code)]

use ndarray::Array2;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn log1p_exp(v: f64) -> f64 {
    if v > 0.0 {
        v + (-v).exp().ln_1p()
    } else {
        v.exp().ln_1p()
    }
}

fn sigmoid(v: f64) -> f64 {
    if v >= 0.0 {
        1.0 / (1.0 + (-v).exp())
    } else {
        let e = v.exp();
        e / (1.0 + e)
    }
}

/// Penalized logistic objective, written out directly:
/// `(1/N)·Σ[ln(1+e^η) − y·η] + λ[(1−α)‖β‖₂² + α‖β‖₁]`.
pub fn objective(
    x: &Array2<f64>,
    y: &[f64],
    intercept: f64,
    coefs: &[f64],
    lambda: f64,
    alpha: f64,
) -> f64 {
    let n = x.nrows();
    let mut nll = 0.0;
    for i in 0..n {
        let mut eta = intercept;
        for (j, b) in coefs.iter().enumerate() {
            eta += x[[i, j]] * b;
        }
        nll += log1p_exp(eta) - y[i] * eta;
    }
    let l1: f64 = coefs.iter().map(|b| b.abs()).sum();
    let l2: f64 = coefs.iter().map(|b| b * b).sum();
    nll / n as f64 + lambda * ((1.0 - alpha) * l2 + alpha * l1)
}

/// Accelerated proximal-gradient (FISTA) solver for the same objective,
/// with backtracking on the smooth part and a function-value restart.
/// Returns `(intercept, coefficients, objective)` at convergence.
pub fn prox_enet(
    x: &Array2<f64>,
    y: &[f64],
    lambda: f64,
    alpha: f64,
) -> (f64, Vec<f64>, f64) {
    let n = x.nrows();
    let p = x.ncols();
    let n_f = n as f64;
    let l1 = lambda * alpha;
    let ridge = lambda * (1.0 - alpha);

    // Smooth part: mean logistic loss plus the ridge penalty.
    let smooth = |b0: f64, b: &[f64]| -> f64 {
        let mut acc = 0.0;
        for i in 0..n {
            let mut eta = b0;
            for (j, bj) in b.iter().enumerate() {
                eta += x[[i, j]] * bj;
            }
            acc += log1p_exp(eta) - y[i] * eta;
        }
        acc / n_f + ridge * b.iter().map(|v| v * v).sum::<f64>()
    };
    let grad = |b0: f64, b: &[f64], g0: &mut f64, g: &mut [f64]| {
        *g0 = 0.0;
        g.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..n {
            let mut eta = b0;
            for (j, bj) in b.iter().enumerate() {
                eta += x[[i, j]] * bj;
            }
            let r = sigmoid(eta) - y[i];
            *g0 += r;
            for (j, gj) in g.iter_mut().enumerate() {
                *gj += x[[i, j]] * r;
            }
        }
        *g0 /= n_f;
        for (j, gj) in g.iter_mut().enumerate() {
            *gj = *gj / n_f + 2.0 * ridge * b[j];
        }
    };
    let soft = |v: f64, t: f64| -> f64 {
        if v > t {
            v - t
        } else if v < -t {
            v + t
        } else {
            0.0
        }
    };

    let mut b0 = 0.0;
    let mut b = vec![0.0; p];
    let mut z0 = b0;
    let mut z = b.clone();
    let mut t_mom = 1.0f64;
    let mut step_l = 1.0f64;
    let mut g0 = 0.0;
    let mut g = vec![0.0; p];
    let mut prev_obj = smooth(b0, &b) + l1 * b.iter().map(|v| v.abs()).sum::<f64>();

    for _ in 0..500_000 {
        grad(z0, &z, &mut g0, &mut g);
        let f_z = smooth(z0, &z);

        // Backtrack until the quadratic majorization holds at the new point.
        let (mut n0, mut nb);
        loop {
            n0 = z0 - g0 / step_l;
            nb = (0..p)
                .map(|j| soft(z[j] - g[j] / step_l, l1 / step_l))
                .collect::<Vec<f64>>();
            let mut lin = 0.0;
            let mut sq = (n0 - z0) * (n0 - z0);
            lin += g0 * (n0 - z0);
            for j in 0..p {
                let d = nb[j] - z[j];
                lin += g[j] * d;
                sq += d * d;
            }
            if smooth(n0, &nb) <= f_z + lin + 0.5 * step_l * sq + 1e-12 {
                break;
            }
            step_l *= 2.0;
        }

        let obj = smooth(n0, &nb) + l1 * nb.iter().map(|v| v.abs()).sum::<f64>();
        let move_sq: f64 = (n0 - b0) * (n0 - b0)
            + nb.iter().zip(&b).map(|(a, c)| (a - c) * (a - c)).sum::<f64>();

        if obj > prev_obj {
            // Restart the momentum from the last good iterate.
            z0 = b0;
            z.copy_from_slice(&b);
            t_mom = 1.0;
            continue;
        }

        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t_mom * t_mom).sqrt());
        let mix = (t_mom - 1.0) / t_next;
        z0 = n0 + mix * (n0 - b0);
        for j in 0..p {
            z[j] = nb[j] + mix * (nb[j] - b[j]);
        }
        t_mom = t_next;

        let done = prev_obj - obj < 1e-14 * (1.0 + obj.abs()) && move_sq.sqrt() < 1e-11;
        b0 = n0;
        b = nb;
        prev_obj = obj;
        if done {
            break;
        }
    }

    (b0, b, prev_obj)
}

/// Natural cubic spline by dense Gaussian elimination with partial
/// pivoting: build the full second-derivative system, solve it, evaluate.
pub fn dense_natural_spline(xs: &[f64], ys: &[f64], at: &[f64]) -> Vec<f64> {
    let n = xs.len();
    assert_eq!(n, ys.len());
    assert!(n >= 1);
    if n == 1 {
        return vec![ys[0]; at.len()];
    }

    // Second derivatives m: natural ends plus continuity rows.
    let mut a = vec![vec![0.0; n]; n];
    let mut rhs = vec![0.0; n];
    a[0][0] = 1.0;
    a[n - 1][n - 1] = 1.0;
    for i in 1..n - 1 {
        let h0 = xs[i] - xs[i - 1];
        let h1 = xs[i + 1] - xs[i];
        a[i][i - 1] = h0;
        a[i][i] = 2.0 * (h0 + h1);
        a[i][i + 1] = h1;
        rhs[i] = 6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
    }
    let m = gauss_solve(&mut a, &mut rhs);

    at.iter()
        .map(|&t| {
            // Rightmost interval whose left knot is at or below t, clamped.
            let mut i = 0;
            while i + 2 < n && xs[i + 1] <= t {
                i += 1;
            }
            let h = xs[i + 1] - xs[i];
            let du = xs[i + 1] - t;
            let dl = t - xs[i];
            m[i] * du * du * du / (6.0 * h)
                + m[i + 1] * dl * dl * dl / (6.0 * h)
                + (ys[i] / h - m[i] * h / 6.0) * du
                + (ys[i + 1] / h - m[i + 1] * h / 6.0) * dl
        })
        .collect()
}

fn gauss_solve(a: &mut [Vec<f64>], rhs: &mut [f64]) -> Vec<f64> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        rhs.swap(col, pivot);
        assert!(a[col][col].abs() > 1e-300, "singular spline system");
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                for k in col..n {
                    a[row][k] -= f * a[col][k];
                }
                rhs[row] -= f * rhs[col];
            }
        }
    }
    let mut sol = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for k in row + 1..n {
            acc -= a[row][k] * sol[k];
        }
        sol[row] = acc / a[row][row];
    }
    sol
}

/// Envelope reference: the greedy peak rule re-stated from scratch, then
/// the dense spline through the chosen knots.
pub fn envelope_oracle(v: &[f64], min_separation: usize) -> Vec<f64> {
    let m = v.len();
    if m == 0 {
        return Vec::new();
    }
    if m == 1 {
        return vec![v[0]];
    }
    let mut knots: Vec<usize> = vec![0];
    let mut last_peak: Option<usize> = None;
    for i in 1..m - 1 {
        if !(v[i] > v[i - 1] && v[i] > v[i + 1]) {
            continue;
        }
        match last_peak {
            Some(k) if i - k < min_separation => {
                if v[i] > v[k] {
                    last_peak = Some(i);
                }
            }
            _ => {
                if let Some(k) = last_peak {
                    knots.push(k);
                }
                last_peak = Some(i);
            }
        }
    }
    if let Some(k) = last_peak {
        knots.push(k);
    }
    knots.push(m - 1);
    let xs: Vec<f64> = knots.iter().map(|&k| k as f64).collect();
    let ys: Vec<f64> = knots.iter().map(|&k| v[k]).collect();
    let at: Vec<f64> = (0..m).map(|i| i as f64).collect();
    dense_natural_spline(&xs, &ys, &at)
}

/// Maximal runs strictly above the threshold, by index jumping rather than
/// a state machine. Returns inclusive `(start, end)` frame pairs.
pub fn threshold_runs(env: &[f64], thr: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < env.len() {
        if env[i] > thr {
            let start = i;
            while i < env.len() && env[i] > thr {
                i += 1;
            }
            out.push((start, i - 1));
        } else {
            i += 1;
        }
    }
    out
}

/// Interpolated Kneser-Ney re-derived from explicit count tables keyed by
/// strings. Ordered maps keep every walk deterministic.
pub mod kn {
    use std::collections::BTreeMap;

    const START: &str = "<s>";
    const END: &str = "</s>";
    const UNK: &str = "<unk>";

    pub struct KnOracle {
        vocab: Vec<String>,
        tri: BTreeMap<(String, String, String), u32>,
        tri_ctx_total: BTreeMap<(String, String), u32>,
        tri_ctx_types: BTreeMap<(String, String), u32>,
        bi_cont: BTreeMap<(String, String), u32>,
        bi_ctx_total: BTreeMap<String, u32>,
        bi_ctx_types: BTreeMap<String, u32>,
        uni_cont: BTreeMap<String, u32>,
        uni_total: u32,
        uni_types: u32,
        d3: f64,
        d2: f64,
        d1: f64,
    }

    fn discount<'a>(counts: impl Iterator<Item = &'a u32>) -> f64 {
        let mut n1 = 0u64;
        let mut n2 = 0u64;
        for &c in counts {
            if c == 1 {
                n1 += 1;
            } else if c == 2 {
                n2 += 1;
            }
        }
        if n1 == 0 {
            0.5
        } else {
            n1 as f64 / (n1 + 2 * n2) as f64
        }
    }

    impl KnOracle {
        pub fn train(sentences: &[Vec<&str>], pinned: Option<(f64, f64, f64)>) -> KnOracle {
            let mut vocab: Vec<String> = Vec::new();
            let mut tri: BTreeMap<(String, String, String), u32> = BTreeMap::new();
            for sent in sentences {
                let mut padded = vec![START.to_string(), START.to_string()];
                for w in sent {
                    if !vocab.iter().any(|v| v == w) {
                        vocab.push(w.to_string());
                    }
                    padded.push(w.to_string());
                }
                padded.push(END.to_string());
                for t in padded.windows(3) {
                    *tri.entry((t[0].clone(), t[1].clone(), t[2].clone())).or_insert(0) += 1;
                }
            }

            let mut tri_ctx_total = BTreeMap::new();
            let mut tri_ctx_types = BTreeMap::new();
            let mut bi_cont = BTreeMap::new();
            for ((u, v, w), c) in &tri {
                *tri_ctx_total.entry((u.clone(), v.clone())).or_insert(0) += c;
                *tri_ctx_types.entry((u.clone(), v.clone())).or_insert(0) += 1;
                *bi_cont.entry((v.clone(), w.clone())).or_insert(0) += 1;
            }
            let mut bi_ctx_total = BTreeMap::new();
            let mut bi_ctx_types = BTreeMap::new();
            let mut uni_cont = BTreeMap::new();
            for ((v, w), c) in &bi_cont {
                *bi_ctx_total.entry(v.clone()).or_insert(0) += c;
                *bi_ctx_types.entry(v.clone()).or_insert(0) += 1;
                *uni_cont.entry(w.clone()).or_insert(0) += 1;
            }
            let uni_total = uni_cont.values().sum();
            let uni_types = uni_cont.len() as u32;
            let (d3, d2, d1) = pinned.unwrap_or_else(|| {
                (
                    discount(tri.values()),
                    discount(bi_cont.values()),
                    discount(uni_cont.values()),
                )
            });

            KnOracle {
                vocab,
                tri,
                tri_ctx_total,
                tri_ctx_types,
                bi_cont,
                bi_ctx_total,
                bi_ctx_types,
                uni_cont,
                uni_total,
                uni_types,
                d3,
                d2,
                d1,
            }
        }

        /// Training types plus `</s>`, excluding `<s>` and `<unk>`.
        pub fn vocab_size(&self) -> usize {
            self.vocab.len() + 1
        }

        /// Every token the model assigns positive mass: types, `</s>`,
        /// `<unk>`.
        pub fn predictable(&self) -> Vec<String> {
            let mut out = self.vocab.clone();
            out.push(END.to_string());
            out.push(UNK.to_string());
            out
        }

        fn known(&self, w: &str) -> String {
            if w == START || w == END || self.vocab.iter().any(|v| v == w) {
                w.to_string()
            } else {
                UNK.to_string()
            }
        }

        pub fn prob(&self, u: &str, v: &str, w: &str) -> f64 {
            let (u, v, w) = (self.known(u), self.known(v), self.known(w));
            let base = if w == START {
                0.0
            } else {
                1.0 / (self.vocab_size() + 1) as f64
            };
            let p1 = if self.uni_total == 0 {
                base
            } else {
                let c = *self.uni_cont.get(&w).unwrap_or(&0) as f64;
                ((c - self.d1).max(0.0) + self.d1 * self.uni_types as f64 * base)
                    / self.uni_total as f64
            };
            let p2 = match self.bi_ctx_total.get(&v) {
                None => p1,
                Some(&total) => {
                    let c = *self.bi_cont.get(&(v.clone(), w.clone())).unwrap_or(&0) as f64;
                    let types = self.bi_ctx_types[&v] as f64;
                    ((c - self.d2).max(0.0) + self.d2 * types * p1) / total as f64
                }
            };
            match self.tri_ctx_total.get(&(u.clone(), v.clone())) {
                None => p2,
                Some(&total) => {
                    let c = *self.tri.get(&(u.clone(), v.clone(), w.clone())).unwrap_or(&0) as f64;
                    let types = self.tri_ctx_types[&(u, v)] as f64;
                    ((c - self.d3).max(0.0) + self.d3 * types * p2) / total as f64
                }
            }
        }

        /// Perplexity normalized by scored tokens: every position after the
        /// two start pads, including `</s>`.
        pub fn ppl_eval_tokens(&self, sentences: &[Vec<&str>]) -> f64 {
            let mut log2 = 0.0;
            let mut scored = 0usize;
            for sent in sentences {
                let mut padded = vec![START.to_string(), START.to_string()];
                padded.extend(sent.iter().map(|w| self.known(w)));
                padded.push(END.to_string());
                for t in padded.windows(3) {
                    log2 += self.prob(&t[0], &t[1], &t[2]).log2();
                }
                scored += sent.len() + 1;
            }
            (2.0f64).powf(-log2 / scored as f64)
        }
    }
}

/// AUC by explicit pair counting over every (positive, negative) pair.
pub fn auc_pairs(scores: &[f64], labels: &[f64]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for (i, &si) in scores.iter().enumerate() {
        if labels[i] != 1.0 {
            continue;
        }
        for (j, &sj) in scores.iter().enumerate() {
            if labels[j] != 0.0 {
                continue;
            }
            pairs += 1.0;
            if si > sj {
                wins += 1.0;
            } else if si == sj {
                wins += 0.5;
            }
        }
    }
    wins / pairs
}

/// Tail probabilities by composite Simpson quadrature on singularity-free
/// substitutions; no special functions involved.
pub mod quad {
    /// Composite Simpson rule with `2k` panels.
    fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, half_panels: usize) -> f64 {
        let n = 2 * half_panels;
        let h = (hi - lo) / n as f64;
        let mut acc = f(lo) + f(hi);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(lo + i as f64 * h);
        }
        acc * h / 3.0
    }

    /// Two-sided Student-t p-value via the incomplete-beta identity
    /// `p = I_{ν/(ν+t²)}(ν/2, ½)`, with `u = 1 − s²` removing the
    /// endpoint singularity: `∫_x^1 u^{a−1}(1−u)^{−1/2} du =
    /// 2∫_0^{√(1−x)} (1−s²)^{a−1} ds`.
    pub fn t_two_sided(df: f64, t: f64) -> f64 {
        let a = df / 2.0;
        let x = df / (df + t * t);
        let upper = |from_x: f64| {
            let s_hi = (1.0 - from_x).max(0.0).sqrt();
            simpson(|s| 2.0 * (1.0 - s * s).max(0.0).powf(a - 1.0), 0.0, s_hi, 60_000)
        };
        upper(x) / upper(0.0)
    }

    /// Chi-square survival function by integrating the density; `u = s²`
    /// keeps the integrand finite at the origin for one degree of freedom.
    pub fn chi2_sf(df: f64, x: f64) -> f64 {
        let a = df / 2.0;
        let hi = (df + 40.0 * df.sqrt() + 200.0).max(2.0 * x);
        let g = |s: f64| 2.0 * s.powf(2.0 * a - 1.0) * (-s * s / 2.0).exp();
        let tail = simpson(g, x.max(0.0).sqrt(), hi.sqrt(), 60_000);
        let whole = simpson(g, 0.0, hi.sqrt(), 60_000);
        tail / whole
    }
}

/// Seeded random logistic problems: standard-normal design, moderate true
/// effects, both classes guaranteed, nothing close to separation.
pub fn random_problem(seed: u64, n: usize, p: usize) -> (Array2<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut x = Array2::zeros((n, p));
        for i in 0..n {
            for j in 0..p {
                x[[i, j]] = rng.sample::<f64, _>(StandardNormal);
            }
        }
        let beta: Vec<f64> = (0..p).map(|_| rng.gen_range(-0.9..0.9)).collect();
        let b0 = rng.gen_range(-0.4..0.4);
        let y: Vec<f64> = (0..n)
            .map(|i| {
                let mut eta = b0;
                for (j, b) in beta.iter().enumerate() {
                    eta += x[[i, j]] * b;
                }
                let pr = 1.0 / (1.0 + (-eta).exp());
                if rng.gen::<f64>() < pr {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        let pos = y.iter().sum::<f64>() as usize;
        if pos >= 3 && n - pos >= 3 {
            return (x, y);
        }
    }
}
