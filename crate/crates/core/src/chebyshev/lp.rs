use std::collections::HashSet;
use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use super::basis::{ConditionedBasis, MonicPolynomial};
use super::extrema::{refined_maxima, Extremum};
use super::ipm::solve_minimax;
use super::{extreme_points, Diagnostics, Method, MinimaxResult};
use crate::error::{Error, Result};
use crate::geometry::{DiscretizedBoundary, Parametrization};

pub const DEFAULT_DIRECTIONS: usize = 64;
const MIN_DIRECTIONS: usize = 32;
const INITIAL_DIRECTIONS: usize = 8;
const MAX_WORKING_SET_ROUNDS: usize = 100;
const MAX_CUT_ROUNDS: usize = 60;
const CUT_TOLERANCE: f64 = 1e-10;
const LAWSON_ITERATIONS: usize = 40;
/// Refined sampling density relative to the node count of each piece.
const REFINEMENT: usize = 4;

/// The discretized program in the conditioned basis.
struct Problem {
    n: usize,
    /// Real coefficients (conjugation-symmetric boundary).
    real: bool,
    basis: ConditionedBasis,
    /// Basis values `φ_0..φ_n` at the constraint nodes.
    phi: Vec<Vec<Complex64>>,
}

impl Problem {
    fn unknowns(&self) -> usize {
        if self.real {
            self.n
        } else {
            2 * self.n
        }
    }

    /// Half-plane `Re(dir · p(z)) ≤ t` as `(a, b)` with `a·x − t ≤ −b`.
    fn row(&self, phi: &[Complex64], dir: Complex64) -> (Vec<f64>, f64) {
        let mut a = Vec::with_capacity(self.unknowns());
        a.extend(phi[..self.n].iter().map(|p| (dir * p).re));
        if !self.real {
            a.extend(phi[..self.n].iter().map(|p| -(dir * p).im));
        }
        (a, (dir * phi[self.n]).re)
    }

    fn coefficients(&self, x: &[f64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|k| Complex64::new(x[k], if self.real { 0.0 } else { x[self.n + k] }))
            .collect()
    }

    fn eval(&self, phi: &[Complex64], coeffs: &[Complex64]) -> Complex64 {
        phi[self.n] + coeffs.iter().zip(phi).map(|(c, p)| c * p).sum::<Complex64>()
    }

    fn polynomial(&self, coeffs: Vec<Complex64>) -> MonicPolynomial {
        MonicPolynomial {
            basis: self.basis.clone(),
            degree: self.n,
            coefficients: coeffs,
        }
    }

    /// Weighted least squares `min Σ w_j |p(z_j)|²` over the coefficients.
    fn weighted_least_squares(&self, w: &[f64]) -> Option<Vec<Complex64>> {
        let n = self.n;
        let mut gram = DMatrix::<Complex64>::zeros(n, n);
        let mut rhs = DVector::<Complex64>::zeros(n);
        for (phi, &wj) in self.phi.iter().zip(w) {
            for k in 0..n {
                let ck = phi[k].conj() * wj;
                for l in 0..n {
                    gram[(k, l)] += ck * phi[l];
                }
                rhs[k] -= ck * phi[n];
            }
        }
        if self.real {
            let g = gram.map(|v| v.re);
            let r = rhs.map(|v| v.re);
            let sol = g.cholesky()?.solve(&r);
            Some(sol.iter().map(|&v| Complex64::new(v, 0.0)).collect())
        } else {
            let sol = gram.cholesky()?.solve(&rhs);
            Some(sol.iter().cloned().collect())
        }
    }
}

struct WorkingSet {
    rows: Vec<Vec<f64>>,
    offsets: Vec<f64>,
    keys: HashSet<(usize, usize)>,
}

impl WorkingSet {
    fn push(&mut self, (a, b): (Vec<f64>, f64)) {
        self.rows.push(a);
        self.offsets.push(b);
    }
}

/// Monic minimax polynomial of degree `n` on a discretized boundary.
///
/// The program `min t` subject to `Re(e^{iθ_ℓ} p(z_j)) ≤ t` over all nodes
/// and `m` equispaced directions is solved on a growing working set of
/// rows. Cutting planes at the continuous maxima of `|p|` along the pieces
/// then tighten the polygonal relaxation, and a Lawson reweighting is tried
/// last. `M_n` is the maximum modulus over `4×` refined boundary samples.
pub fn minimax_lp(boundary: &DiscretizedBoundary, n: usize, m: usize) -> Result<MinimaxResult> {
    if n == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    if m < MIN_DIRECTIONS {
        return Err(Error::InvalidInput(format!(
            "at least {MIN_DIRECTIONS} directions required, got {m}"
        )));
    }
    if boundary.len() <= 2 * n {
        return Err(Error::TooCoarse {
            requested: boundary.len(),
            minimum: 2 * n + 1,
        });
    }

    let real = boundary.is_conjugation_symmetric(1e-12);
    let pts = &boundary.points;
    let mut center = pts.iter().sum::<Complex64>() / pts.len() as f64;
    if real {
        center.im = 0.0;
    }
    let scale = pts.iter().map(|z| (z - center).norm()).fold(0.0, f64::max);
    let basis = ConditionedBasis::arnoldi(pts, center, scale, n, real);
    // With real coefficients |p(z̄)| = |p(z)|, so the upper half suffices.
    let nodes: Vec<Complex64> = pts
        .iter()
        .filter(|z| !real || z.im >= -1e-14 * scale)
        .cloned()
        .collect();
    let phi: Vec<Vec<Complex64>> = nodes.par_iter().map(|&z| basis.eval_all(z, n)).collect();
    let prob = Problem { n, real, basis, phi };
    let log_factor = prob.basis.log_monic_factor(n);
    let dirs: Vec<Complex64> = (0..m)
        .map(|l| Complex64::from_polar(1.0, 2.0 * PI * l as f64 / m as f64))
        .collect();

    // Discrete program on a working set of (node, direction) rows.
    let mut ws = WorkingSet {
        rows: Vec::new(),
        offsets: Vec::new(),
        keys: HashSet::new(),
    };
    for j in 0..nodes.len() {
        for q in 0..INITIAL_DIRECTIONS {
            let l = q * m / INITIAL_DIRECTIONS;
            ws.keys.insert((j, l));
            ws.push(prob.row(&prob.phi[j], dirs[l]));
        }
    }
    let mut iterations = 0;
    let mut sol = solve_minimax(&ws.rows, &ws.offsets)?;
    iterations += sol.iterations;
    for _ in 0..MAX_WORKING_SET_ROUNDS {
        let coeffs = prob.coefficients(&sol.x);
        let t = sol.value;
        let additions: Vec<(usize, usize)> = prob
            .phi
            .par_iter()
            .enumerate()
            .filter_map(|(j, phi)| {
                let p = prob.eval(phi, &coeffs);
                let centre = (-p.arg() / (2.0 * PI) * m as f64).round() as i64;
                let best = (centre - 1..=centre + 1)
                    .map(|l| l.rem_euclid(m as i64) as usize)
                    .max_by(|&a, &b| (dirs[a] * p).re.total_cmp(&(dirs[b] * p).re))?;
                ((dirs[best] * p).re > t + 1e-12 * t.abs().max(1e-300)).then_some((j, best))
            })
            .collect();
        let fresh: Vec<(usize, usize)> = additions.into_iter().filter(|k| !ws.keys.contains(k)).collect();
        if fresh.is_empty() {
            break;
        }
        for (j, l) in fresh {
            ws.keys.insert((j, l));
            ws.push(prob.row(&prob.phi[j], dirs[l]));
        }
        sol = solve_minimax(&ws.rows, &ws.offsets)?;
        iterations += sol.iterations;
    }
    let discrete_value = sol.value;

    // Cutting planes at the continuous maxima of |p|.
    let shapes: Vec<Arc<dyn Parametrization>> = boundary.pieces.iter().map(|p| p.shape.clone()).collect();
    let samples = boundary.pieces.iter().map(|p| p.nodes.len()).max().unwrap_or(0) * REFINEMENT;
    let maxima_of = |coeffs: &[Complex64]| -> Vec<Extremum> {
        let f = |z: Complex64| prob.eval(&prob.basis.eval_all(z, n), coeffs).norm();
        refined_maxima(&shapes, samples, &f)
    };
    let mut best_coeffs = prob.coefficients(&sol.x);
    let mut best_maxima = maxima_of(&best_coeffs);
    let mut lower = sol.dual_value;
    let mut rounds = 0;
    while rounds < MAX_CUT_ROUNDS {
        let coeffs = prob.coefficients(&sol.x);
        let maxima = if rounds == 0 { best_maxima.clone() } else { maxima_of(&coeffs) };
        let top = maxima[0].value;
        if top < best_maxima[0].value {
            best_coeffs = coeffs.clone();
            best_maxima = maxima.clone();
        }
        if (top - sol.value) <= CUT_TOLERANCE * top {
            break;
        }
        for e in maxima.iter().filter(|e| e.value > sol.value * (1.0 + 1e-12)) {
            let phi = prob.basis.eval_all(e.point, n);
            let p = prob.eval(&phi, &coeffs);
            ws.push(prob.row(&phi, p.conj() / p.norm()));
        }
        sol = solve_minimax(&ws.rows, &ws.offsets)?;
        iterations += sol.iterations;
        lower = lower.max(sol.dual_value);
        rounds += 1;
    }
    if rounds > 0 {
        let coeffs = prob.coefficients(&sol.x);
        let maxima = maxima_of(&coeffs);
        if maxima[0].value < best_maxima[0].value {
            best_coeffs = coeffs;
            best_maxima = maxima;
        }
    }

    // Lawson reweighting, kept only if it lowers the refined maximum.
    let mut lawson_accepted = false;
    let mut w = vec![1.0 / prob.phi.len() as f64; prob.phi.len()];
    let mut lawson = None;
    for _ in 0..LAWSON_ITERATIONS {
        let Some(c) = prob.weighted_least_squares(&w) else { break };
        let moduli: Vec<f64> = prob.phi.iter().map(|phi| prob.eval(phi, &c).norm()).collect();
        let total: f64 = w.iter().zip(&moduli).map(|(a, b)| a * b).sum();
        if !(total > 0.0) {
            break;
        }
        for (wj, mj) in w.iter_mut().zip(&moduli) {
            *wj *= mj / total;
        }
        lawson = Some(c);
    }
    if let Some(c) = lawson {
        let maxima = maxima_of(&c);
        if maxima[0].value < best_maxima[0].value {
            best_coeffs = c;
            best_maxima = maxima;
            lawson_accepted = true;
        }
    }

    let top = best_maxima[0].value;
    let node_max = prob
        .phi
        .iter()
        .map(|phi| prob.eval(phi, &best_coeffs).norm())
        .fold(0.0, f64::max);
    let mut warnings = Vec::new();
    if (top - node_max) > 1e-3 * top {
        warnings.push(format!(
            "under-resolved boundary: the maximum modulus between nodes exceeds the node maximum by {:.2e} relative",
            (top - node_max) / top
        ));
    }
    let sign = |z: Complex64| {
        if real && z.im.abs() <= 1e-14 * scale {
            Some(prob.eval(&prob.basis.eval_all(z, n), &best_coeffs).re.signum())
        } else {
            None
        }
    };
    let extremes = extreme_points(&best_maxima, top, sign);
    let factor = log_factor.exp();
    Ok(MinimaxResult {
        degree: n,
        cheb_number: (log_factor + top.ln()).exp(),
        log_cheb_number: log_factor + top.ln(),
        log_lower_bound: log_factor + lower.ln(),
        polynomial: prob.polynomial(best_coeffs),
        extreme_points: extremes,
        diagnostics: Diagnostics {
            method: Method::Lp,
            iterations,
            gap: ((top - lower) / top).max(0.0),
            cutting_rounds: rounds,
            lp_epsilon: Some(discrete_value * factor),
            lp_epsilon_corrected: Some(discrete_value * factor / (PI / m as f64).cos()),
            lawson_accepted,
            warnings,
        },
    })
}
