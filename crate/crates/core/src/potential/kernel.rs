//! Discrete single-layer operator for the logarithmic kernel.
//!
//! Entry `(i, j)` maps the quadrature mass `μ_j` at node `j` to its
//! contribution to `∫ log(1/|z_i − t|) dμ(t)`. Off-piece entries are the
//! plain kernel values. Self-interaction blocks use product integration of
//! the singular part, which is exact for densities that are trigonometric
//! polynomials in the piece parameter:
//!
//! * open pieces: `log|cos θ − cos φ| = −log 2 − Σ_k (2/k) cos kθ cos kφ`;
//! * closed pieces: `log|2 sin((t − s)/2)| = −Σ_m cos(m(t − s))/m`.
//!
//! What remains after subtracting the singular part is smooth and handled
//! by the nodal rule.

use std::f64::consts::{LN_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::geometry::{DiscretizedBoundary, Parametrization};

/// Smooth remainder `log|p(t) − p(s)| − log|cos t − cos s|` (open pieces) or
/// `log|p(t) − p(s)| − log|2 sin((t − s)/2)|` (closed pieces), with its
/// diagonal limit.
pub(crate) fn remainder(shape: &dyn Parametrization, t: f64, s: f64) -> f64 {
    let closed = shape.is_closed();
    let gap = (t - s).abs();
    if gap < 1e-13 {
        let speed = shape.derivative(t).norm();
        return if closed {
            speed.ln()
        } else {
            (speed / t.sin()).ln()
        };
    }
    let dist = (shape.point(t) - shape.point(s)).norm().ln();
    if closed {
        dist - (2.0 * (0.5 * (t - s)).sin()).abs().ln()
    } else {
        dist - (t.cos() - s.cos()).abs().ln()
    }
}

/// `Σ_{k=1}^{N−1} cos(kx)/k` (open rule, `N` nodes).
fn open_series(x: f64, n: usize) -> f64 {
    (1..n).map(|k| (k as f64 * x).cos() / k as f64).sum()
}

/// Kress weight series for `N` equispaced nodes on a closed piece.
fn closed_series(x: f64, n: usize) -> f64 {
    let half = n / 2;
    if n.is_multiple_of(2) {
        let mut s: f64 = (1..half).map(|m| (m as f64 * x).cos() / m as f64).sum();
        s += (half as f64 * x).cos() / n as f64;
        s
    } else {
        (1..=half).map(|m| (m as f64 * x).cos() / m as f64).sum()
    }
}

/// Potential at parameter `t` of piece `k` due to unit quadrature masses at
/// the nodes of the same piece, i.e. the self-block row for an arbitrary
/// (not necessarily nodal) collocation parameter.
pub(crate) fn self_row(boundary: &DiscretizedBoundary, k: usize, t: f64) -> Vec<f64> {
    let piece = &boundary.pieces[k];
    let shape = piece.shape.as_ref();
    let n = piece.nodes.len();
    piece
        .nodes
        .clone()
        .map(|j| {
            let s = boundary.params[j];
            let singular = if shape.is_closed() {
                closed_series(t - s, n)
            } else {
                LN_2 + open_series(t - s, n) + open_series(t + s, n)
            };
            singular - remainder(shape, t, s)
        })
        .collect()
}

/// Assembles the dense `N × N` single-layer matrix.
pub(crate) fn assemble(boundary: &DiscretizedBoundary) -> DMatrix<f64> {
    let m = boundary.len();
    // Self blocks only depend on index differences/sums, so tabulate them.
    let tables: Vec<Vec<f64>> = boundary
        .pieces
        .iter()
        .map(|piece| {
            let n = piece.nodes.len();
            if piece.shape.is_closed() {
                (0..n)
                    .map(|d| closed_series(2.0 * PI * d as f64 / n as f64, n))
                    .collect()
            } else {
                (0..=2 * n)
                    .map(|d| open_series(d as f64 * PI / n as f64, n))
                    .collect()
            }
        })
        .collect();

    let rows: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|i| {
            let zi = boundary.points[i];
            let pi = boundary.piece_of[i];
            let piece = &boundary.pieces[pi];
            let li = i - piece.nodes.start;
            let n = piece.nodes.len();
            let shape = piece.shape.as_ref();
            let mut row = vec![0.0; m];
            for (j, slot) in row.iter_mut().enumerate() {
                if boundary.piece_of[j] != pi {
                    *slot = -(zi - boundary.points[j]).norm().ln();
                    continue;
                }
                let lj = j - piece.nodes.start;
                let singular = if shape.is_closed() {
                    tables[pi][(li + n - lj) % n]
                } else {
                    // θ_i ± θ_j are integer multiples of π/N for the Gauss–Chebyshev rule.
                    LN_2 + tables[pi][li.abs_diff(lj)] + tables[pi][li + lj + 1]
                };
                *slot = singular - remainder(shape, boundary.params[i], boundary.params[j]);
            }
            row
        })
        .collect();

    DMatrix::from_fn(m, m, |i, j| rows[i][j])
}

/// Point-mass potential `Σ μ_j log(1/|z − z_j|)` at an off-boundary point.
pub(crate) fn point_potential(points: &[Complex64], masses: &[f64], z: Complex64) -> f64 {
    points
        .iter()
        .zip(masses)
        .map(|(p, w)| -w * (z - p).norm().ln())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{discretize, CompactSystem, Component};

    #[test]
    fn tabulated_blocks_match_direct_rows() {
        let sys = CompactSystem::new(vec![
            Component::interval(-1.0, -0.2),
            Component::ellipse(1.0, 0.3, 0.2),
        ]);
        let b = discretize(&sys, 16).unwrap();
        let a = assemble(&b);
        for i in [0usize, 5, 15, 16, 23, 31] {
            let k = b.piece_of[i];
            let row = self_row(&b, k, b.params[i]);
            for (off, v) in b.pieces[k].nodes.clone().zip(row) {
                assert!((a[(i, off)] - v).abs() < 1e-12, "({i},{off})");
            }
        }
    }

    #[test]
    fn interval_remainder_is_constant() {
        let c = Component::interval(0.0, 3.0);
        let r0 = remainder(&c, 0.3, 0.3);
        let r1 = remainder(&c, 0.3, 2.1);
        assert!((r0 - 1.5f64.ln()).abs() < 1e-14);
        assert!((r1 - 1.5f64.ln()).abs() < 1e-13);
    }
}
