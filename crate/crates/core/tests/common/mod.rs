//! Oracles shared by the integration test binaries.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;

/// `log` of the pair product for the symmetric configuration `±y`.
pub fn log_pair_product(y: &[f64]) -> f64 {
    let m = y.len();
    let mut s = 0.0;
    for i in 0..m {
        for j in 0..m {
            s += (y[i] + y[j]).ln();
            if j > i {
                s += 2.0 * (y[j] - y[i]).ln();
            }
        }
    }
    s
}

/// Fekete points of `[−1,−a] ∪ [a,1]` with `n` points: Newton ascent on the
/// concave log pair product, endpoints pinned. Returns `log δ_n`.
pub fn fekete_log_diameter(a: f64, n: usize) -> f64 {
    let m = n / 2;
    let mut y: Vec<f64> = (0..m)
        .map(|j| {
            let th = PI * (1.0 - j as f64 / (m - 1) as f64);
            (0.5 * (1.0 + a * a) + 0.5 * (1.0 - a * a) * th.cos()).sqrt()
        })
        .collect();
    y[0] = a;
    y[m - 1] = 1.0;
    let free = m - 2;
    for _ in 0..40 {
        let mut g = DVector::zeros(free);
        let mut h = DMatrix::zeros(free, free);
        for k in 1..m - 1 {
            let mut gk = 0.0;
            let mut hkk = -1.0 / (y[k] * y[k]);
            for j in 0..m {
                let s = y[k] + y[j];
                gk += 2.0 / s;
                if j != k {
                    let d = y[k] - y[j];
                    gk += 2.0 / d;
                    hkk -= 2.0 / (d * d) + 2.0 / (s * s);
                    if (1..m - 1).contains(&j) {
                        h[(k - 1, j - 1)] = 2.0 / (d * d) - 2.0 / (s * s);
                    }
                }
            }
            g[k - 1] = gk;
            h[(k - 1, k - 1)] = hkk;
        }
        let neg = -h;
        let step = neg.cholesky().expect("energy Hessian is definite").solve(&g);
        let decrement = g.dot(&step);
        let base = log_pair_product(&y);
        let mut t = 1.0;
        loop {
            let mut trial = y.clone();
            for k in 1..m - 1 {
                trial[k] += t * step[k - 1];
            }
            if trial.windows(2).all(|w| w[1] > w[0]) && log_pair_product(&trial) >= base - 1e-9 {
                y = trial;
                break;
            }
            t *= 0.5;
            assert!(t > 1e-12, "line search failed");
        }
        if decrement < 1e-18 * base.abs().max(1.0) {
            break;
        }
    }
    let pairs = (n * (n - 1) / 2) as f64;
    log_pair_product(&y) / pairs
}

/// Capacity of `[−1,−a] ∪ [a,1]` extrapolated from Fekete diameters at
/// N = 512, 1024 and 2048, assuming `log δ_N = log C + B log N/N + D/N`.
pub fn fekete_capacity(a: f64) -> f64 {
    let sizes = [512usize, 1024, 2048];
    let logs: Vec<f64> = sizes.iter().map(|&n| fekete_log_diameter(a, n)).collect();
    let x = DMatrix::from_fn(3, 3, |i, j| {
        let n = sizes[i] as f64;
        [1.0, n.ln() / n, 1.0 / n][j]
    });
    x.lu().solve(&DVector::from_vec(logs)).unwrap()[0].exp()
}
