use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::basis::{ConditionedBasis, MonicPolynomial};
use super::extrema::{refined_maxima, Extremum};
use super::{extreme_points, Diagnostics, Method, MinimaxResult};
use crate::error::{Error, Result};
use crate::geometry::{CompactSystem, Parametrization};
use crate::potential::equilibrium_of;

const MAX_EXCHANGES: usize = 200;
const LEVELLING_TOLERANCE: f64 = 1e-12;
/// Gap below which a stalled exchange still yields a usable result.
const ACCEPTABLE_GAP: f64 = 1e-9;

/// Splits `total` reference points between components in proportion to
/// their equilibrium masses (largest-remainder rounding).
fn allocate(masses: &[f64], total: usize) -> Vec<usize> {
    let raw: Vec<f64> = masses.iter().map(|m| m * total as f64).collect();
    let mut counts: Vec<usize> = raw.iter().map(|r| r.floor() as usize).collect();
    let mut order: Vec<usize> = (0..masses.len()).collect();
    order.sort_by(|&a, &b| (raw[b] - raw[b].floor()).total_cmp(&(raw[a] - raw[a].floor())));
    let mut missing = total - counts.iter().sum::<usize>();
    for &k in order.iter().cycle() {
        if missing == 0 {
            break;
        }
        counts[k] += 1;
        missing -= 1;
    }
    counts
}

fn initial_reference(sys: &CompactSystem, n: usize) -> Result<Vec<f64>> {
    let comps = sys.components();
    let masses = if comps.len() == 1 {
        vec![1.0]
    } else {
        equilibrium_of(sys, 64)?.component_mass
    };
    let counts = allocate(&masses, n + 1);
    let (lo, hi) = (comps[0].real_extent().0, comps[comps.len() - 1].real_extent().1);
    let center = 0.5 * (lo + hi);
    let mut xs = Vec::with_capacity(n + 1);
    for (c, &count) in comps.iter().zip(&counts) {
        let (a, b) = c.real_extent();
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        match count {
            0 => {}
            1 => xs.push(if mid < center { a } else { b }),
            _ => xs.extend((0..count).map(|j| mid - half * (j as f64 * std::f64::consts::PI / (count - 1) as f64).cos())),
        }
    }
    Ok(xs)
}

/// Error curve `T_n(s) + Σ c_k T_k(s)` in the rescaled variable.
fn error_at(basis: &ConditionedBasis, coeffs: &[f64], x: f64) -> f64 {
    let n = coeffs.len();
    let t = basis.eval_real(x, n);
    t[n] + coeffs.iter().zip(&t).map(|(c, v)| c * v).sum::<f64>()
}

/// Solves the levelled system `e(x_i) = (−1)^i h` for the coefficients and `h`.
fn level(basis: &ConditionedBasis, reference: &[f64]) -> Result<(Vec<f64>, f64)> {
    let n = reference.len() - 1;
    let mut a = DMatrix::zeros(n + 1, n + 1);
    let mut rhs = DVector::zeros(n + 1);
    for (i, &x) in reference.iter().enumerate() {
        let t = basis.eval_real(x, n);
        for k in 0..n {
            a[(i, k)] = t[k];
        }
        a[(i, n)] = if i % 2 == 0 { -1.0 } else { 1.0 };
        rhs[i] = -t[n];
    }
    let sol = a
        .lu()
        .solve(&rhs)
        .filter(|s| s.iter().all(|v| v.is_finite()))
        .ok_or_else(|| Error::Degenerate("singular levelled Remez system (coincident reference points)".into()))?;
    Ok((sol.rows(0, n).iter().cloned().collect(), sol[n]))
}

/// Inserts the new extremum `x` with sign `sign` into the sorted reference,
/// dropping one point so that signs keep alternating.
fn exchange(reference: &mut Vec<f64>, signs: &[f64], x: f64, sign: f64) {
    let last = reference.len() - 1;
    let pos = reference.partition_point(|&r| r < x);
    if pos == 0 {
        if signs[0] == sign {
            reference[0] = x;
        } else {
            reference.pop();
            reference.insert(0, x);
        }
    } else if pos > last {
        if signs[last] == sign {
            reference[last] = x;
        } else {
            reference.remove(0);
            reference.push(x);
        }
    } else if signs[pos - 1] == sign {
        reference[pos - 1] = x;
    } else {
        reference[pos] = x;
    }
}

/// `(gap, iteration, coefficients, levelled error, maxima)` of an iterate.
type Stalled = (f64, usize, Vec<f64>, f64, Vec<Extremum>);

/// Multi-interval Remez exchange for the monic minimax polynomial of degree
/// `n` on an all-interval system.
pub fn remez_real(sys: &CompactSystem, n: usize) -> Result<MinimaxResult> {
    if n == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    if !sys.is_real() || sys.is_empty() {
        return Err(Error::Unsupported(
            "Remez exchange needs every component to be a real interval; use minimax_lp".into(),
        ));
    }
    sys.validate().into_result()?;
    let comps = sys.components();
    let (lo, hi) = (comps[0].real_extent().0, comps[comps.len() - 1].real_extent().1);
    let basis = ConditionedBasis::chebyshev(Complex64::new(0.5 * (lo + hi), 0.0), 0.5 * (hi - lo));
    let shapes: Vec<Arc<dyn Parametrization>> = comps
        .iter()
        .map(|c| Arc::new(*c) as Arc<dyn Parametrization>)
        .collect();
    let samples = (8 * (n + 1)).max(256);

    let mut reference = initial_reference(sys, n)?;
    let mut gap = f64::INFINITY;
    // Smallest-gap iterate so far, with the exchange count at which it appeared.
    let mut best: Option<Stalled> = None;
    for it in 0..MAX_EXCHANGES {
        let (coeffs, h) = level(&basis, &reference)?;
        let f = |z: Complex64| error_at(&basis, &coeffs, z.re).abs();
        let maxima = refined_maxima(&shapes, samples, &f);
        let top = maxima[0];
        gap = (top.value - h.abs()) / top.value;
        let converged = gap < LEVELLING_TOLERANCE
            || reference.iter().any(|&r| (r - top.point.re).abs() <= 1e-15 * basis.scale);
        if converged {
            return Ok(finish(basis, n, &coeffs, h, &maxima, it, gap, Vec::new()));
        }
        let signs: Vec<f64> = (0..=n).map(|i| if i % 2 == 0 { h.signum() } else { -h.signum() }).collect();
        let sign = error_at(&basis, &coeffs, top.point.re).signum();
        exchange(&mut reference, &signs, top.point.re, sign);
        if best.as_ref().is_none_or(|b| gap < b.0) {
            best = Some((gap, it, coeffs, h, maxima));
        }
    }
    // Near the rounding floor the exchange can cycle without reaching the
    // tolerance; a levelled iterate that is close enough is still returned.
    match best {
        Some((g, it, coeffs, h, maxima)) if g < ACCEPTABLE_GAP => {
            let warning = format!("levelling stalled at relative gap {g:.2e}");
            Ok(finish(basis, n, &coeffs, h, &maxima, it, g, vec![warning]))
        }
        _ => Err(Error::Stagnation {
            iterations: MAX_EXCHANGES,
            gap,
        }),
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    basis: ConditionedBasis,
    n: usize,
    coeffs: &[f64],
    h: f64,
    maxima: &[Extremum],
    iterations: usize,
    gap: f64,
    warnings: Vec<String>,
) -> MinimaxResult {
    let top = maxima[0].value;
    let log_factor = basis.log_monic_factor(n);
    let err = |z: Complex64| Some(error_at(&basis, coeffs, z.re).signum());
    let extremes = extreme_points(maxima, top, err);
    MinimaxResult {
        degree: n,
        cheb_number: (log_factor + top.ln()).exp(),
        log_cheb_number: log_factor + top.ln(),
        log_lower_bound: log_factor + h.abs().ln(),
        polynomial: MonicPolynomial {
            basis,
            degree: n,
            coefficients: coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        },
        extreme_points: extremes,
        diagnostics: Diagnostics {
            method: Method::Remez,
            iterations,
            gap: gap.max(0.0),
            cutting_rounds: 0,
            lp_epsilon: None,
            lp_epsilon_corrected: None,
            lawson_accepted: false,
            warnings,
        },
    }
}
