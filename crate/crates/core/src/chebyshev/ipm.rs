//! Primal-dual interior-point solver for the discrete minimax program
//!
//! ```text
//! minimize t  subject to  a_r · x − t ≤ −b_r,  r = 1..R
//! ```
//!
//! written as `min cᵀy s.t. Gy + s = h, s ≥ 0` with `y = (x, t)`, and solved
//! by Mehrotra predictor-corrector steps on the normal equations.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub(crate) struct LpSolution {
    pub x: Vec<f64>,
    pub value: f64,
    /// Dual objective: a lower bound for the optimum up to the dual residual.
    pub dual_value: f64,
    pub iterations: usize,
}

const MAX_ITERATIONS: usize = 120;
/// Relative primal-dual gap accepted when the iteration stalls. The dual value
/// of a feasible iterate stays a valid lower bound, so only the bracket widens.
const ACCEPTABLE_GAP: f64 = 1e-6;

fn max_step(v: &DVector<f64>, dv: &DVector<f64>) -> f64 {
    v.iter()
        .zip(dv.iter())
        .filter(|(_, d)| **d < 0.0)
        .map(|(x, d)| -x / d)
        .fold(f64::INFINITY, f64::min)
}

/// Solves the program for rows `a` (each of length `d`) and offsets `b`.
pub(crate) fn solve_minimax(a: &[Vec<f64>], b: &[f64]) -> Result<LpSolution> {
    let rows = a.len();
    if rows == 0 || rows != b.len() {
        return Err(Error::Lp(format!("{rows} rows for {} offsets", b.len())));
    }
    let d = a[0].len();
    let dim = d + 1;
    let g = DMatrix::from_fn(rows, dim, |r, k| if k < d { a[r][k] } else { -1.0 });
    let h = DVector::from_iterator(rows, b.iter().map(|v| -v));
    let mut cost = DVector::zeros(dim);
    cost[d] = 1.0;

    let bmax = b.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut y = DVector::zeros(dim);
    y[d] = bmax + 1.0;
    let mut s = &h - &g * &y;
    let mut z = DVector::from_element(rows, 1.0 / rows as f64);
    let scale = 1.0 + b.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let m = rows as f64;
    let mut best: Option<(f64, DVector<f64>, f64)> = None;
    let mut iterations = MAX_ITERATIONS;

    for it in 0..MAX_ITERATIONS {
        iterations = it;
        let r_d = g.tr_mul(&z) + &cost;
        let r_p = &g * &y + &s - &h;
        let mu = s.dot(&z) / m;
        let pobj = y[d];
        let dobj = -h.dot(&z);
        let gap = (pobj - dobj).abs() / (1.0 + pobj.abs());
        let feasible = r_p.amax() < 1e-10 * scale && r_d.amax() < 1e-10;
        if feasible && best.as_ref().is_none_or(|(g, _, _)| gap < *g) {
            best = Some((gap, y.clone(), dobj));
        }
        if feasible && (gap < 1e-12 || mu < 1e-20 * (1.0 + pobj.abs())) {
            break;
        }

        let w = z.component_div(&s);
        let mut gw = g.clone();
        for (r, mut row) in gw.row_iter_mut().enumerate() {
            row *= w[r].sqrt();
        }
        let normal = gw.tr_mul(&gw);
        let trace = normal.trace() / dim as f64;
        let mut reg = 1e-14 * trace.max(1e-300);
        let chol = loop {
            let mut regd = normal.clone();
            for k in 0..dim {
                regd[(k, k)] += reg;
            }
            if let Some(c) = regd.cholesky() {
                break c;
            }
            reg *= 100.0;
            if reg > trace {
                return Err(Error::Lp("normal equations are not positive definite".into()));
            }
        };


        let solve = |r_c: &DVector<f64>| -> (DVector<f64>, DVector<f64>, DVector<f64>) {
            let t = w.component_mul(&r_p) - r_c.component_div(&s);
            let rhs = -&r_d - g.tr_mul(&t);
            let dy = chol.solve(&rhs);
            let dz = w.component_mul(&(&g * &dy + &r_p)) - r_c.component_div(&s);
            let ds = -(r_c + s.component_mul(&dz)).component_div(&z);
            (dy, dz, ds)
        };

        let r_c = s.component_mul(&z);
        let (_, dz_a, ds_a) = solve(&r_c);
        let alpha_a = max_step(&s, &ds_a).min(max_step(&z, &dz_a)).min(1.0);
        let mu_a = (&s + &ds_a * alpha_a).dot(&(&z + &dz_a * alpha_a)) / m;
        let sigma = (mu_a / mu).powi(3).clamp(0.0, 1.0);

        let r_c = s.component_mul(&z) + ds_a.component_mul(&dz_a) - DVector::from_element(rows, sigma * mu);
        let (dy, dz, ds) = solve(&r_c);
        let alpha = (0.99 * max_step(&s, &ds).min(max_step(&z, &dz))).min(1.0);
        if !alpha.is_finite() || alpha < 1e-14 {
            // Stalled at the precision floor.
            break;
        }
        y += &dy * alpha;
        s += &ds * alpha;
        z += &dz * alpha;
    }
    // Return the most accurate feasible iterate seen.
    match best {
        Some((gap, y, dual_value)) if gap < ACCEPTABLE_GAP => Ok(LpSolution {
            x: y.rows(0, d).iter().cloned().collect(),
            value: y[d],
            dual_value,
            iterations,
        }),
        Some((gap, _, _)) => Err(Error::Lp(format!(
            "no convergence after {iterations} iterations (gap {gap:e})"
        ))),
        None => Err(Error::Lp("no feasible iterate reached".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn best_constant_approximation() {
        // min_x max_i |x − v_i| over v = {0, 1, 5}: x = 2.5, value 2.5.
        let v = [0.0, 1.0, 5.0];
        let mut a = Vec::new();
        let mut b = Vec::new();
        for &vi in &v {
            a.push(vec![1.0]);
            b.push(-vi);
            a.push(vec![-1.0]);
            b.push(vi);
        }
        let sol = solve_minimax(&a, &b).unwrap();
        assert!((sol.x[0] - 2.5).abs() < 1e-9);
        assert!((sol.value - 2.5).abs() < 1e-9);
        assert!(sol.dual_value <= sol.value + 1e-12);
    }

    #[test]
    fn linear_fit_on_a_grid() {
        // Best uniform linear fit to x² on [0, 1]: x − 1/8 with error 1/8.
        let mut a = Vec::new();
        let mut b = Vec::new();
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            // e(x) = x² − (c0 + c1 x)
            a.push(vec![-1.0, -x]);
            b.push(x * x);
            a.push(vec![1.0, x]);
            b.push(-x * x);
        }
        let sol = solve_minimax(&a, &b).unwrap();
        assert!((sol.value - 0.125).abs() < 1e-9);
        assert!((sol.x[0] + 0.125).abs() < 1e-8);
        assert!((sol.x[1] - 1.0).abs() < 1e-8);
    }
}
