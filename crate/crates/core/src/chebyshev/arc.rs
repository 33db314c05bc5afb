use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{DiscretizedBoundary, Parametrization, MIN_NODES_PER_COMPONENT};

/// The circular arc `{center + radius·e^{iφ} : |φ| ≤ half_angle}`, an open
/// piece parametrized by `φ = half_angle·cos θ`, `θ ∈ [0, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircularArc {
    pub center: f64,
    pub radius: f64,
    pub half_angle: f64,
}

impl CircularArc {
    pub fn new(center: f64, radius: f64, half_angle: f64) -> Result<Self> {
        if !(radius > 0.0) || !(half_angle > 0.0 && half_angle < std::f64::consts::PI) {
            return Err(Error::InvalidInput(format!(
                "arc needs radius > 0 and half angle in (0, π), got {radius}, {half_angle}"
            )));
        }
        Ok(CircularArc {
            center,
            radius,
            half_angle,
        })
    }

    /// `C = radius·sin(half_angle/2)`.
    pub fn capacity(&self) -> f64 {
        self.radius * (0.5 * self.half_angle).sin()
    }
}

impl Parametrization for CircularArc {
    fn point(&self, t: f64) -> Complex64 {
        Complex64::new(self.center, 0.0) + Complex64::from_polar(self.radius, self.half_angle * t.cos())
    }

    fn derivative(&self, t: f64) -> Complex64 {
        let phi = self.half_angle * t.cos();
        Complex64::new(0.0, 1.0) * Complex64::from_polar(self.radius, phi) * (-self.half_angle * t.sin())
    }

    fn is_closed(&self) -> bool {
        false
    }
}

/// Discretizes the arc with the open-piece node rule.
pub fn arc_boundary(arc: &CircularArc, nodes: usize) -> Result<DiscretizedBoundary> {
    if nodes < MIN_NODES_PER_COMPONENT {
        return Err(Error::TooCoarse {
            requested: nodes,
            minimum: MIN_NODES_PER_COMPONENT,
        });
    }
    Ok(DiscretizedBoundary::from_pieces(
        vec![Arc::new(*arc) as Arc<dyn Parametrization>],
        &[nodes],
    ))
}

/// Limit of `M_n / C^n` on an arc of half angle `α`: `2 cos²(α/4)`.
pub fn arc_limit_ratio(half_angle: f64) -> f64 {
    2.0 * (0.25 * half_angle).cos().powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::solve_equilibrium;
    use std::f64::consts::PI;

    #[test]
    fn arc_capacity_from_equilibrium() {
        let arc = CircularArc::new(0.0, 1.0, 0.5 * PI).unwrap();
        let sol = solve_equilibrium(&arc_boundary(&arc, 256).unwrap()).unwrap();
        assert!((sol.capacity - arc.capacity()).abs() < 1e-10, "{}", sol.capacity);
    }

    #[test]
    fn limit_ratio_endpoints() {
        assert!((arc_limit_ratio(0.5 * PI) - 1.7071067811865475).abs() < 1e-15);
        assert!((arc_limit_ratio(1e-9) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let arc = CircularArc::new(0.5, 2.0, 1.0).unwrap();
        let (t, h) = (1.1, 1e-6);
        let fd = (arc.point(t + h) - arc.point(t - h)) / (2.0 * h);
        assert!((fd - arc.derivative(t)).norm() < 1e-8);
    }
}
