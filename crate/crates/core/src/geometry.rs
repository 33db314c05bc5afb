//! Compact sets made of real intervals and real-symmetric closed curves, and
//! their boundary discretizations.
//!
//! Every component carries a parametrization. Intervals are parametrized by
//! `θ ∈ [0, π]` through `x = mid + half·cos θ`, so that the inverse square
//! root endpoint behaviour of equilibrium-type densities becomes bounded in
//! `θ`. Closed curves are parametrized by `t ∈ [0, 2π)` with
//! `p(2π − t) = conj(p(t))`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest per-component node count accepted by [`discretize`].
pub const MIN_NODES_PER_COMPONENT: usize = 8;

/// A parametrized boundary piece. Open pieces run over `[0, π]` in the
/// endpoint-clustering parameter; closed pieces over `[0, 2π)`.
pub trait Parametrization: fmt::Debug + Send + Sync {
    fn point(&self, t: f64) -> Complex64;

    /// `dp/dt`.
    fn derivative(&self, t: f64) -> Complex64;

    fn is_closed(&self) -> bool;

    fn domain(&self) -> (f64, f64) {
        if self.is_closed() {
            (0.0, 2.0 * PI)
        } else {
            (0.0, PI)
        }
    }
}

/// One connected component of the set `E`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Component {
    Interval { left: f64, right: f64 },
    Circle { center: f64, radius: f64 },
    Ellipse { center: f64, semi_x: f64, semi_y: f64 },
}

impl Component {
    pub fn interval(left: f64, right: f64) -> Self {
        Component::Interval { left, right }
    }

    pub fn circle(center: f64, radius: f64) -> Self {
        Component::Circle { center, radius }
    }

    pub fn ellipse(center: f64, semi_x: f64, semi_y: f64) -> Self {
        Component::Ellipse {
            center,
            semi_x,
            semi_y,
        }
    }

    /// True for arc components (real intervals).
    pub fn is_arc(&self) -> bool {
        matches!(self, Component::Interval { .. })
    }

    pub fn is_curve(&self) -> bool {
        !self.is_arc()
    }

    /// Checks the per-component invariants.
    pub fn check(&self) -> std::result::Result<(), String> {
        let finite = |v: f64| v.is_finite();
        match *self {
            Component::Interval { left, right } => {
                if !(finite(left) && finite(right)) {
                    return Err("non-finite endpoint".into());
                }
                if left >= right {
                    return Err(format!("interval endpoints not increasing: {left} >= {right}"));
                }
            }
            Component::Circle { center, radius } => {
                if !(finite(center) && finite(radius)) {
                    return Err("non-finite circle parameter".into());
                }
                if radius <= 0.0 {
                    return Err(format!("circle radius must be positive, got {radius}"));
                }
            }
            Component::Ellipse {
                center,
                semi_x,
                semi_y,
            } => {
                if !(finite(center) && finite(semi_x) && finite(semi_y)) {
                    return Err("non-finite ellipse parameter".into());
                }
                if semi_x <= 0.0 || semi_y <= 0.0 {
                    return Err(format!(
                        "ellipse semi-axes must be positive, got ({semi_x}, {semi_y})"
                    ));
                }
            }
        }
        Ok(())
    }

    /// Intersection of the component (filled, for curves) with the real line.
    pub fn real_extent(&self) -> (f64, f64) {
        match *self {
            Component::Interval { left, right } => (left, right),
            Component::Circle { center, radius } => (center - radius, center + radius),
            Component::Ellipse { center, semi_x, .. } => (center - semi_x, center + semi_x),
        }
    }

    /// Largest `|Im z|` on the component.
    pub fn imaginary_extent(&self) -> f64 {
        match *self {
            Component::Interval { .. } => 0.0,
            Component::Circle { radius, .. } => radius,
            Component::Ellipse { semi_y, .. } => semi_y,
        }
    }

    /// Total parameter length: `π` for intervals, `2π` for curves.
    pub fn parameter_length(&self) -> f64 {
        if self.is_closed() {
            2.0 * PI
        } else {
            PI
        }
    }

    /// Image under `z ↦ scale·z + shift` with real `scale > 0` and real `shift`.
    pub fn affine(&self, scale: f64, shift: f64) -> Component {
        match *self {
            Component::Interval { left, right } => Component::Interval {
                left: scale * left + shift,
                right: scale * right + shift,
            },
            Component::Circle { center, radius } => Component::Circle {
                center: scale * center + shift,
                radius: scale * radius,
            },
            Component::Ellipse {
                center,
                semi_x,
                semi_y,
            } => Component::Ellipse {
                center: scale * center + shift,
                semi_x: scale * semi_x,
                semi_y: scale * semi_y,
            },
        }
    }

    /// Distance from `z` to the component's locus. Exact for intervals and
    /// circles; for ellipses the normalized implicit residual scaled by the
    /// smaller semi-axis, which vanishes exactly on the curve.
    pub fn distance_to(&self, z: Complex64) -> f64 {
        match *self {
            Component::Interval { left, right } => {
                let x = z.re.clamp(left, right);
                (z - Complex64::new(x, 0.0)).norm()
            }
            Component::Circle { center, radius } => {
                ((z - Complex64::new(center, 0.0)).norm() - radius).abs()
            }
            Component::Ellipse {
                center,
                semi_x,
                semi_y,
            } => {
                let u = (z.re - center) / semi_x;
                let v = z.im / semi_y;
                let r = (u * u + v * v).sqrt();
                (r - 1.0).abs() * semi_x.min(semi_y)
            }
        }
    }

    /// Parameters of the `count` quadrature nodes of this component.
    ///
    /// Intervals: `θ_j = (j − ½)π/count`, `j = 1..count` (Gauss–Chebyshev).
    /// Curves: `t_j = 2πj/count`, `j = 0..count−1`.
    pub fn node_parameters(&self, count: usize) -> Vec<f64> {
        node_parameters(self.is_closed(), count)
    }

    /// Node locations for `count` nodes (any `count ≥ 1`).
    pub fn nodes(&self, count: usize) -> Vec<Complex64> {
        self.node_parameters(count)
            .into_iter()
            .map(|t| self.point(t))
            .collect()
    }
}

impl Parametrization for Component {
    fn point(&self, t: f64) -> Complex64 {
        match *self {
            Component::Interval { left, right } => {
                let mid = 0.5 * (left + right);
                let half = 0.5 * (right - left);
                Complex64::new(mid + half * t.cos(), 0.0)
            }
            Component::Circle { center, radius } => {
                Complex64::new(center + radius * t.cos(), radius * t.sin())
            }
            Component::Ellipse {
                center,
                semi_x,
                semi_y,
            } => Complex64::new(center + semi_x * t.cos(), semi_y * t.sin()),
        }
    }

    fn derivative(&self, t: f64) -> Complex64 {
        match *self {
            Component::Interval { left, right } => {
                Complex64::new(-0.5 * (right - left) * t.sin(), 0.0)
            }
            Component::Circle { radius, .. } => {
                Complex64::new(-radius * t.sin(), radius * t.cos())
            }
            Component::Ellipse { semi_x, semi_y, .. } => {
                Complex64::new(-semi_x * t.sin(), semi_y * t.cos())
            }
        }
    }

    fn is_closed(&self) -> bool {
        !self.is_arc()
    }
}

/// Quadrature node parameters for an open (`θ ∈ (0, π)`) or closed
/// (`t ∈ [0, 2π)`) piece.
pub fn node_parameters(closed: bool, count: usize) -> Vec<f64> {
    let n = count as f64;
    if closed {
        (0..count).map(|j| 2.0 * PI * j as f64 / n).collect()
    } else {
        (1..=count).map(|j| (j as f64 - 0.5) * PI / n).collect()
    }
}

/// Sampling parameters that include the endpoints of open pieces
/// (`θ_j = jπ/count`, `j = 0..=count`); closed pieces are sampled as nodes.
pub fn sampling_parameters(closed: bool, count: usize) -> Vec<f64> {
    if closed {
        node_parameters(true, count)
    } else {
        (0..=count).map(|j| j as f64 * PI / count as f64).collect()
    }
}

/// One violated invariant of a [`CompactSystem`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    Empty,
    InvalidComponent { index: usize, reason: String },
    Overlap { first: usize, second: usize },
    Unordered { first: usize, second: usize },
    NotSymmetric { index: usize, residual: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "system has no components"),
            Violation::InvalidComponent { index, reason } => {
                write!(f, "component {index}: {reason}")
            }
            Violation::Overlap { first, second } => {
                write!(f, "components {first} and {second} intersect or are nested")
            }
            Violation::Unordered { first, second } => write!(
                f,
                "components {first} and {second} are not listed in increasing real order"
            ),
            Violation::NotSymmetric { index, residual } => write!(
                f,
                "component {index} violates p(2π − t) = conj p(t) (residual {residual:e})"
            ),
        }
    }
}

/// Outcome of [`CompactSystem::validate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub component_count: usize,
    /// Indices of the arc (interval) components.
    pub arc_indices: Vec<usize>,
    /// Real gaps `(β_k, α_{k+1})` between consecutive components.
    pub gaps: Vec<(f64, f64)>,
    /// Smallest sampled distance between two distinct components.
    pub min_separation: Option<f64>,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Converts a failing report into an error listing every violation.
    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            let msg = self
                .violations
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; ");
            Err(Error::InvalidInput(msg))
        }
    }
}

/// The compact set `E` as an ordered list of components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompactSystem {
    components: Vec<Component>,
}

impl CompactSystem {
    pub fn new(components: Vec<Component>) -> Self {
        CompactSystem { components }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn arc_indices(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&k| self.components[k].is_arc())
            .collect()
    }

    pub fn curve_indices(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&k| self.components[k].is_curve())
            .collect()
    }

    pub fn is_real(&self) -> bool {
        self.components.iter().all(Component::is_arc)
    }

    /// Real gaps between consecutive components.
    pub fn gaps(&self) -> Vec<(f64, f64)> {
        self.components
            .windows(2)
            .map(|w| (w[0].real_extent().1, w[1].real_extent().0))
            .collect()
    }

    /// `(min Re, max Re, max |Im|)` over `E`.
    pub fn bounding_box(&self) -> (f64, f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut im = 0.0_f64;
        for c in &self.components {
            let (a, b) = c.real_extent();
            lo = lo.min(a);
            hi = hi.max(b);
            im = im.max(c.imaginary_extent());
        }
        (lo, hi, im)
    }

    /// Image of the system under `z ↦ scale·z + shift`.
    pub fn affine(&self, scale: f64, shift: f64) -> CompactSystem {
        CompactSystem::new(
            self.components
                .iter()
                .map(|c| c.affine(scale, shift))
                .collect(),
        )
    }

    /// Checks disjointness, ordering and real-line symmetry. Never fails;
    /// callers decide whether to refuse an invalid system.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.components.is_empty() {
            violations.push(Violation::Empty);
        }
        let mut well_formed = true;
        for (index, c) in self.components.iter().enumerate() {
            if let Err(reason) = c.check() {
                violations.push(Violation::InvalidComponent { index, reason });
                well_formed = false;
            }
        }

        let mut min_separation = None;
        if well_formed {
            // All shapes are convex and symmetric about R, so two of them are
            // disjoint and mutually exterior iff their real extents are disjoint.
            for i in 0..self.len() {
                for j in (i + 1)..self.len() {
                    let (a0, b0) = self.components[i].real_extent();
                    let (a1, b1) = self.components[j].real_extent();
                    if a1 <= b0 && a0 <= b1 {
                        violations.push(Violation::Overlap {
                            first: i,
                            second: j,
                        });
                    } else if a1 < a0 {
                        violations.push(Violation::Unordered {
                            first: i,
                            second: j,
                        });
                    }
                }
            }
            for (index, c) in self.components.iter().enumerate() {
                let residual = reflection_residual(c, 64);
                if residual > 1e-12 * (1.0 + c.real_extent().1.abs()) {
                    violations.push(Violation::NotSymmetric { index, residual });
                }
            }
            if self.len() > 1 {
                min_separation = Some(self.sampled_separation(256));
            }
        }

        ValidationReport {
            component_count: self.len(),
            arc_indices: self.arc_indices(),
            gaps: if well_formed { self.gaps() } else { Vec::new() },
            min_separation,
            violations,
        }
    }

    /// Minimum pairwise distance between components sampled at `count` points each.
    pub fn sampled_separation(&self, count: usize) -> f64 {
        let samples: Vec<Vec<Complex64>> = self
            .components
            .iter()
            .map(|c| {
                sampling_parameters(c.is_closed(), count)
                    .into_iter()
                    .map(|t| c.point(t))
                    .collect()
            })
            .collect();
        let mut best = f64::INFINITY;
        for i in 0..samples.len() {
            for j in (i + 1)..samples.len() {
                for a in &samples[i] {
                    for b in &samples[j] {
                        best = best.min((a - b).norm());
                    }
                }
            }
        }
        best
    }
}

/// `max_t |p(2π − t) − conj p(t)|` on a grid; zero for intervals.
fn reflection_residual(c: &Component, count: usize) -> f64 {
    if !c.is_closed() {
        return 0.0;
    }
    node_parameters(true, count)
        .into_iter()
        .map(|t| (c.point(2.0 * PI - t) - c.point(t).conj()).norm())
        .fold(0.0, f64::max)
}

/// A boundary piece inside a [`DiscretizedBoundary`]: its shape and the
/// range of node indices it owns.
#[derive(Debug, Clone)]
pub struct Piece {
    pub shape: Arc<dyn Parametrization>,
    pub nodes: Range<usize>,
}

/// Quadrature nodes on `∂E` with their parameter-space weights.
#[derive(Debug, Clone)]
pub struct DiscretizedBoundary {
    pub points: Vec<Complex64>,
    pub params: Vec<f64>,
    /// Parameter-space quadrature weights (`π/N` on intervals, `2π/N` on curves).
    pub weights: Vec<f64>,
    /// Index of the piece owning each node.
    pub piece_of: Vec<usize>,
    /// Set on the two outermost nodes at each end of an open piece.
    pub singular: Vec<bool>,
    pub pieces: Vec<Piece>,
}

impl DiscretizedBoundary {
    /// Discretizes arbitrary parametrized pieces with the standard node rule.
    pub fn from_pieces(shapes: Vec<Arc<dyn Parametrization>>, counts: &[usize]) -> Self {
        assert_eq!(shapes.len(), counts.len());
        let total: usize = counts.iter().sum();
        let mut out = DiscretizedBoundary {
            points: Vec::with_capacity(total),
            params: Vec::with_capacity(total),
            weights: Vec::with_capacity(total),
            piece_of: Vec::with_capacity(total),
            singular: Vec::with_capacity(total),
            pieces: Vec::with_capacity(shapes.len()),
        };
        for (k, (shape, &count)) in shapes.into_iter().zip(counts).enumerate() {
            let start = out.points.len();
            let closed = shape.is_closed();
            let weight = if closed { 2.0 * PI } else { PI } / count as f64;
            for (j, t) in node_parameters(closed, count).into_iter().enumerate() {
                out.points.push(shape.point(t));
                out.params.push(t);
                out.weights.push(weight);
                out.piece_of.push(k);
                out.singular.push(!closed && (j < 2 || j + 2 >= count));
            }
            out.pieces.push(Piece {
                shape,
                nodes: start..out.points.len(),
            });
        }
        out
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    /// Sum of the quadrature weights of piece `k`.
    pub fn weight_sum(&self, k: usize) -> f64 {
        self.pieces[k].nodes.clone().map(|i| self.weights[i]).sum()
    }

    /// `|dp/dt|` at every node.
    pub fn speeds(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| {
                self.pieces[self.piece_of[i]]
                    .shape
                    .derivative(self.params[i])
                    .norm()
            })
            .collect()
    }

    /// True when the node multiset is closed under conjugation within `tol`.
    pub fn is_conjugation_symmetric(&self, tol: f64) -> bool {
        let mut sorted: Vec<Complex64> = self.points.clone();
        let key = |z: &Complex64| (z.re, z.im);
        sorted.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        let mut conj: Vec<Complex64> = self.points.iter().map(|z| z.conj()).collect();
        conj.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        // Sorting by (re, im) can interleave nearly equal real parts, so fall
        // back to a nearest-neighbour search when the fast path disagrees.
        if sorted
            .iter()
            .zip(&conj)
            .all(|(a, b)| (a - b).norm() <= tol)
        {
            return true;
        }
        self.points.iter().all(|z| {
            let c = z.conj();
            self.points.iter().any(|w| (w - c).norm() <= tol)
        })
    }
}

/// Discretizes every component of `sys` with `nodes_per_component` nodes.
pub fn discretize(sys: &CompactSystem, nodes_per_component: usize) -> Result<DiscretizedBoundary> {
    if nodes_per_component < MIN_NODES_PER_COMPONENT {
        return Err(Error::TooCoarse {
            requested: nodes_per_component,
            minimum: MIN_NODES_PER_COMPONENT,
        });
    }
    if sys.is_empty() {
        return Err(Error::InvalidInput("system has no components".into()));
    }
    for (k, c) in sys.components().iter().enumerate() {
        c.check()
            .map_err(|reason| Error::InvalidInput(format!("component {k}: {reason}")))?;
    }
    let shapes: Vec<Arc<dyn Parametrization>> = sys
        .components()
        .iter()
        .map(|c| Arc::new(*c) as Arc<dyn Parametrization>)
        .collect();
    let counts = vec![nodes_per_component; sys.len()];
    Ok(DiscretizedBoundary::from_pieces(shapes, &counts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn interval_node_rule() {
        let nodes = Component::interval(-1.0, 1.0).nodes(4);
        let expected = [PI / 8.0, 3.0 * PI / 8.0, 5.0 * PI / 8.0, 7.0 * PI / 8.0].map(f64::cos);
        for (z, e) in nodes.iter().zip(expected) {
            assert_abs_diff_eq!(z.re, e, epsilon = 1e-15);
            assert_eq!(z.im, 0.0);
        }
    }

    #[test]
    fn circle_node_rule() {
        let nodes = Component::circle(0.0, 1.0).nodes(4);
        let expected = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ];
        for (z, e) in nodes.iter().zip(expected) {
            assert!((z - e).norm() < 1e-15);
        }
    }

    #[test]
    fn shifted_interval_nodes_are_translates() {
        let base = Component::interval(-1.0, 1.0).nodes(4);
        let moved = Component::interval(0.0, 2.0).nodes(4);
        for (a, b) in base.iter().zip(&moved) {
            assert_abs_diff_eq!(a.re + 1.0, b.re, epsilon = 1e-15);
        }
    }

    #[test]
    fn single_interval_is_valid() {
        let report = CompactSystem::new(vec![Component::interval(-1.0, 1.0)]).validate();
        assert!(report.is_valid());
        assert_eq!(report.component_count, 1);
        assert_eq!(report.arc_indices, vec![0]);
        assert!(report.gaps.is_empty());
    }

    #[test]
    fn interval_and_circle_have_one_gap() {
        let sys = CompactSystem::new(vec![
            Component::interval(-1.0, -0.2),
            Component::circle(1.0, 0.3),
        ]);
        let report = sys.validate();
        assert!(report.is_valid(), "{:?}", report.violations);
        assert_eq!(report.gaps.len(), 1);
        assert_abs_diff_eq!(report.gaps[0].0, -0.2);
        assert_abs_diff_eq!(report.gaps[0].1, 0.7, epsilon = 1e-15);
        assert!(report.min_separation.unwrap() > 0.89);
    }

    #[test]
    fn overlapping_intervals_are_rejected() {
        let sys = CompactSystem::new(vec![
            Component::interval(-1.0, 0.0),
            Component::interval(-0.5, 1.0),
        ]);
        let report = sys.validate();
        assert_eq!(
            report.violations,
            vec![Violation::Overlap {
                first: 0,
                second: 1
            }]
        );
        assert!(report.into_result().is_err());
    }

    #[test]
    fn report_lists_every_violation() {
        let sys = CompactSystem::new(vec![
            Component::interval(1.0, 0.0),
            Component::circle(0.0, -1.0),
        ]);
        let report = sys.validate();
        assert_eq!(report.violations.len(), 2);
    }

    #[test]
    fn unordered_and_nested_components() {
        let sys = CompactSystem::new(vec![
            Component::interval(2.0, 3.0),
            Component::interval(-1.0, 1.0),
        ]);
        assert!(matches!(
            sys.validate().violations[0],
            Violation::Unordered { .. }
        ));
        let nested = CompactSystem::new(vec![
            Component::circle(0.0, 1.0),
            Component::circle(0.0, 3.0),
        ]);
        assert!(matches!(
            nested.validate().violations[0],
            Violation::Overlap { .. }
        ));
    }

    #[test]
    fn discretize_refuses_coarse_requests() {
        let sys = CompactSystem::new(vec![Component::interval(-1.0, 1.0)]);
        assert_eq!(
            discretize(&sys, 4).unwrap_err(),
            Error::TooCoarse {
                requested: 4,
                minimum: 8
            }
        );
    }

    #[test]
    fn nodes_lie_on_components_and_weights_sum() {
        let sys = CompactSystem::new(vec![
            Component::interval(-1.0, -0.2),
            Component::circle(1.0, 0.3),
            Component::ellipse(3.0, 0.5, 0.2),
        ]);
        let b = discretize(&sys, 64).unwrap();
        assert_eq!(b.len(), 192);
        for i in 0..b.len() {
            let c = sys.components()[b.piece_of[i]];
            assert!(c.distance_to(b.points[i]) < 1e-12 * (1.0 + b.points[i].norm()));
            assert!(b.weights[i] > 0.0);
        }
        for (k, c) in sys.components().iter().enumerate() {
            assert_abs_diff_eq!(b.weight_sum(k), c.parameter_length(), epsilon = 1e-10);
        }
        assert!(b.is_conjugation_symmetric(1e-14));
        let flagged: Vec<usize> = (0..b.len()).filter(|&i| b.singular[i]).collect();
        assert_eq!(flagged, vec![0, 1, 62, 63]);
    }

    #[test]
    fn ellipse_reflection_identity() {
        let e = Component::ellipse(0.5, 2.0, 0.7);
        assert!(reflection_residual(&e, 128) < 1e-14);
    }
}
