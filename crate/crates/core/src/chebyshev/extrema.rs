//! Continuous local maxima of a function along parametrized boundary pieces.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::geometry::{sampling_parameters, Parametrization};

/// A refined local maximum of `f` on piece `piece`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Extremum {
    pub piece: usize,
    pub param: f64,
    pub point: Complex64,
    pub value: f64,
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Maximizes `g` on `[a, b]` by golden-section search, also comparing the
/// bracket ends so that boundary maxima are found exactly.
fn golden_max(g: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let (a0, b0) = (a, b);
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let mut f1 = g(x1);
    let mut f2 = g(x2);
    for _ in 0..90 {
        if b - a <= 1e-15 * (1.0 + a.abs()) {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = g(x1);
        }
    }
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for end in [a0, b0] {
        let v = g(end);
        if v > best.1 {
            best = (end, v);
        }
    }
    best
}

/// Samples `f` on `samples` parameter cells per piece (endpoints included
/// for open pieces), then refines every discrete local maximum by golden
/// section between its neighbours. Results are sorted by decreasing value.
pub(crate) fn refined_maxima(
    shapes: &[Arc<dyn Parametrization>],
    samples: usize,
    f: &(dyn Fn(Complex64) -> f64 + Sync),
) -> Vec<Extremum> {
    let mut out: Vec<Extremum> = Vec::new();
    for (k, shape) in shapes.iter().enumerate() {
        let closed = shape.is_closed();
        let params = sampling_parameters(closed, samples);
        let values: Vec<f64> = params.par_iter().map(|&t| f(shape.point(t))).collect();
        let len = params.len();
        let (lo, hi) = shape.domain();
        let step = (hi - lo) / samples as f64;
        let candidates: Vec<usize> = (0..len)
            .filter(|&i| {
                let left = if i > 0 {
                    Some(values[i - 1])
                } else if closed {
                    Some(values[len - 1])
                } else {
                    None
                };
                let right = if i + 1 < len {
                    Some(values[i + 1])
                } else if closed {
                    Some(values[0])
                } else {
                    None
                };
                left.is_none_or(|l| values[i] >= l) && right.is_none_or(|r| values[i] > r)
            })
            .collect();
        let refined: Vec<Extremum> = candidates
            .par_iter()
            .map(|&i| {
                let t = params[i];
                let (a, b) = if closed {
                    (t - step, t + step)
                } else {
                    ((t - step).max(lo), (t + step).min(hi))
                };
                let g = |s: f64| f(shape.point(s));
                let (mut param, mut value) = golden_max(&g, a, b);
                if values[i] > value {
                    param = t;
                    value = values[i];
                }
                Extremum {
                    piece: k,
                    param,
                    point: shape.point(param),
                    value,
                }
            })
            .collect();
        out.extend(refined);
    }
    out.sort_by(|a, b| b.value.total_cmp(&a.value));
    out
}
