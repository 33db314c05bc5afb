use num_complex::Complex64;

use super::EquilibriumSolution;
use crate::error::{Error, Result};
use crate::geometry::CompactSystem;

/// Green's function of the outer domain with pole at infinity, built from an
/// equilibrium solution: `g(z) = Σ μ_i log|z − z_i| − log C(E)`.
#[derive(Debug, Clone)]
pub struct GreenData {
    pub source: EquilibriumSolution,
    /// Filled by [`critical_points`].
    pub critical_points: Vec<CriticalPoint>,
}

/// A real critical point of `g` lying in a gap between components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub gap: usize,
    pub location: f64,
    pub value: f64,
}

pub fn greens_function(sol: &EquilibriumSolution) -> GreenData {
    GreenData {
        source: sol.clone(),
        critical_points: Vec::new(),
    }
}

impl GreenData {
    /// `g(z)`; refuses points that coincide with a quadrature node.
    pub fn eval(&self, z: Complex64) -> Result<f64> {
        let b = &self.source.boundary;
        let scale = 1.0 + z.norm();
        if let Some(node) = b
            .points
            .iter()
            .position(|p| (z - p).norm() <= 1e-14 * scale)
        {
            return Err(Error::OnBoundary { node });
        }
        Ok(self.source.robin_constant - self.source.potential(z))
    }

    /// `∂g/∂x` on the real axis.
    pub fn real_derivative(&self, x: f64) -> f64 {
        let b = &self.source.boundary;
        b.points
            .iter()
            .zip(&self.source.mu_weights)
            .map(|(p, w)| {
                let d = Complex64::new(x, 0.0) - p;
                w * d.re / d.norm_sqr()
            })
            .sum()
    }

    /// `Σ_j g(z_j*)` over the stored critical points.
    pub fn critical_sum(&self) -> f64 {
        self.critical_points.iter().map(|c| c.value).sum()
    }
}

/// Distance from `x` to the closest node and the spacing of the two
/// closest nodes, used to keep the gap scan clear of the discrete boundary.
fn local_spacing(gd: &GreenData, x: f64) -> f64 {
    let mut d: Vec<f64> = gd
        .source
        .boundary
        .points
        .iter()
        .map(|p| (Complex64::new(x, 0.0) - p).norm())
        .collect();
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    d[0].max(d[1] - d[0]).max(f64::EPSILON)
}

/// Locates the `p − 1` critical points of `g`, one per real gap, by a sign
/// scan of `∂g/∂x` followed by bisection. Stores them in `gd` and returns them.
pub fn critical_points(gd: &mut GreenData, sys: &CompactSystem) -> Result<Vec<CriticalPoint>> {
    const SCAN: usize = 128;
    let mut found = Vec::new();
    for (gap, (left, right)) in sys.gaps().into_iter().enumerate() {
        if right <= left {
            return Err(Error::InvalidInput(format!(
                "gap {gap} is empty: ({left}, {right})"
            )));
        }
        let lo = left + 4.0 * local_spacing(gd, left);
        let hi = right - 4.0 * local_spacing(gd, right);
        if lo >= hi {
            return Err(Error::NoCriticalPoint { gap, left, right });
        }
        let xs: Vec<f64> = (0..=SCAN)
            .map(|i| lo + (hi - lo) * i as f64 / SCAN as f64)
            .collect();
        let ds: Vec<f64> = xs.iter().map(|&x| gd.real_derivative(x)).collect();
        let bracket = (0..SCAN).find(|&i| ds[i] > 0.0 && ds[i + 1] <= 0.0);
        let Some(i) = bracket else {
            return Err(Error::NoCriticalPoint { gap, left, right });
        };
        let (mut a, mut b) = (xs[i], xs[i + 1]);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if gd.real_derivative(mid) > 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        let location = 0.5 * (a + b);
        let value = gd.eval(Complex64::new(location, 0.0))?;
        found.push(CriticalPoint {
            gap,
            location,
            value,
        });
    }
    gd.critical_points = found.clone();
    Ok(found)
}
