//! Logarithmic potential theory on discretized compact sets: equilibrium
//! measure, Robin constant and capacity, harmonic measure at infinity,
//! Green's function with pole at infinity and its critical points, and the
//! condenser modulus of a doubly connected complement.

mod green;
mod kernel;

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{discretize, CompactSystem, DiscretizedBoundary};

pub use green::{critical_points, greens_function, CriticalPoint, GreenData};

/// Discrete approximation of the equilibrium measure `ν_E`.
///
/// Sign convention: `∫ log(1/|z − t|) dν(t) = robin_constant` on `E`, so
/// `capacity = exp(−robin_constant)`.
#[derive(Debug, Clone)]
pub struct EquilibriumSolution {
    pub boundary: DiscretizedBoundary,
    /// Node masses (quadrature weight times density), summing to one.
    pub mu_weights: Vec<f64>,
    pub robin_constant: f64,
    pub capacity: f64,
    /// `ν_E(E_k)` per piece.
    pub component_mass: Vec<f64>,
}

/// Per-component equilibrium masses together with the arc total.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentMasses {
    pub masses: Vec<f64>,
    /// `ν_E(E_arc)`: the mass carried by the interval components.
    pub arc_mass: f64,
}

/// Condenser with plates `plate0` (potential 0) and `plate1` (potential 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CondenserData {
    pub plate0: usize,
    pub plate1: usize,
    /// `mod(Ω)`, normalized so the annulus `r1 < |w| < r2` gives `ln(r2/r1)/2π`.
    pub modulus: f64,
    /// `1/modulus`.
    pub cap: f64,
}

/// LU factorization of the bordered system `[A 1; 1ᵀ 0]`.
///
/// The equilibrium problem is the right-hand side `(0, …, 0, 1)` (the last
/// unknown is then `−F`), while harmonic measures use `(f, 0)` with the last
/// unknown equal to the value at infinity.
struct BorderedOperator {
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    size: usize,
}

impl BorderedOperator {
    fn new(boundary: &DiscretizedBoundary) -> Result<Self> {
        check_distinct(boundary)?;
        let a = kernel::assemble(boundary);
        let m = boundary.len();
        let mut k = DMatrix::<f64>::zeros(m + 1, m + 1);
        k.view_mut((0, 0), (m, m)).copy_from(&a);
        for i in 0..m {
            k[(i, m)] = 1.0;
            k[(m, i)] = 1.0;
        }
        Ok(BorderedOperator {
            lu: k.lu(),
            size: m,
        })
    }

    fn solve(&self, rhs: DVector<f64>) -> Result<DVector<f64>> {
        let x = self
            .lu
            .solve(&rhs)
            .ok_or_else(|| Error::Degenerate("singular collocation system".into()))?;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Degenerate("non-finite collocation solution".into()));
        }
        Ok(x)
    }

    fn equilibrium(&self) -> Result<(Vec<f64>, f64)> {
        let mut rhs = DVector::zeros(self.size + 1);
        rhs[self.size] = 1.0;
        let x = self.solve(rhs)?;
        Ok((x.rows(0, self.size).iter().copied().collect(), -x[self.size]))
    }

    /// Charge-neutral density with boundary values `values`; returns the
    /// density and the value at infinity.
    fn dirichlet(&self, values: &[f64]) -> Result<(Vec<f64>, f64)> {
        let mut rhs = DVector::zeros(self.size + 1);
        rhs.rows_mut(0, self.size).copy_from_slice(values);
        let x = self.solve(rhs)?;
        Ok((x.rows(0, self.size).iter().copied().collect(), x[self.size]))
    }
}

fn check_distinct(boundary: &DiscretizedBoundary) -> Result<()> {
    if boundary.is_empty() {
        return Err(Error::Degenerate("empty boundary".into()));
    }
    let scale = boundary
        .points
        .iter()
        .map(|z| z.norm())
        .fold(1.0, f64::max);
    let mut sorted: Vec<(f64, usize)> = boundary
        .points
        .iter()
        .enumerate()
        .map(|(i, z)| (z.re, i))
        .collect();
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let tol = 1e-13 * scale;
    for (w, &(x, i)) in sorted.iter().enumerate() {
        for &(y, j) in &sorted[w + 1..] {
            if y - x > tol {
                break;
            }
            if (boundary.points[i] - boundary.points[j]).norm() <= tol {
                return Err(Error::Degenerate(format!("nodes {i} and {j} coincide")));
            }
        }
    }
    Ok(())
}

fn masses_per_piece(boundary: &DiscretizedBoundary, weights: &[f64]) -> Vec<f64> {
    boundary
        .pieces
        .iter()
        .map(|p| p.nodes.clone().map(|i| weights[i]).sum())
        .collect()
}

/// Solves for the equilibrium measure of the discretized set.
pub fn solve_equilibrium(boundary: &DiscretizedBoundary) -> Result<EquilibriumSolution> {
    let op = BorderedOperator::new(boundary)?;
    let (mu, robin) = op.equilibrium()?;
    let component_mass = masses_per_piece(boundary, &mu);
    Ok(EquilibriumSolution {
        boundary: boundary.clone(),
        mu_weights: mu,
        robin_constant: robin,
        capacity: (-robin).exp(),
        component_mass,
    })
}

/// Convenience: discretize `sys` and solve for its equilibrium measure.
pub fn equilibrium_of(sys: &CompactSystem, nodes_per_component: usize) -> Result<EquilibriumSolution> {
    let boundary = discretize(sys, nodes_per_component)?;
    solve_equilibrium(&boundary)
}

/// `ν_E(E_k)` for every component and `ν_E(E_arc)`.
pub fn component_masses(sol: &EquilibriumSolution) -> ComponentMasses {
    let arc_mass = sol
        .boundary
        .pieces
        .iter()
        .zip(&sol.component_mass)
        .filter(|(p, _)| !p.shape.is_closed())
        .map(|(_, m)| m)
        .sum();
    ComponentMasses {
        masses: sol.component_mass.clone(),
        arc_mass,
    }
}

/// Harmonic measure of component `k` evaluated at infinity, from the
/// Dirichlet problem (1 on `E_k`, 0 elsewhere) in charge-neutral
/// single-layer form.
pub fn harmonic_measure_at_infinity(
    sys: &CompactSystem,
    k: usize,
    nodes_per_component: usize,
) -> Result<f64> {
    if k >= sys.len() {
        return Err(Error::InvalidInput(format!(
            "component index {k} out of range for a {}-component system",
            sys.len()
        )));
    }
    let boundary = discretize(sys, nodes_per_component)?;
    let op = BorderedOperator::new(&boundary)?;
    let values: Vec<f64> = boundary
        .piece_of
        .iter()
        .map(|&p| if p == k { 1.0 } else { 0.0 })
        .collect();
    Ok(op.dirichlet(&values)?.1)
}

/// Modulus of the doubly connected complement of a two-component system.
///
/// Only component invariants and non-intersection are required, so nested
/// configurations such as concentric circles are accepted for calibration.
pub fn condenser_modulus(sys: &CompactSystem, nodes_per_component: usize) -> Result<CondenserData> {
    if sys.len() != 2 {
        return Err(Error::InvalidInput(format!(
            "condenser modulus needs exactly two components, got {}",
            sys.len()
        )));
    }
    let boundary = discretize(sys, nodes_per_component)?;
    if sys.sampled_separation(256) <= 0.0 {
        return Err(Error::InvalidInput("condenser plates intersect".into()));
    }
    let op = BorderedOperator::new(&boundary)?;
    let values: Vec<f64> = boundary
        .piece_of
        .iter()
        .map(|&p| if p == 1 { 1.0 } else { 0.0 })
        .collect();
    let (density, _) = op.dirichlet(&values)?;
    let charge: f64 = boundary.pieces[1].nodes.clone().map(|i| density[i]).sum();
    let cap = 2.0 * PI * charge;
    if !(cap > 0.0) {
        return Err(Error::Degenerate(format!(
            "non-positive condenser capacity {cap:e}"
        )));
    }
    Ok(CondenserData {
        plate0: 0,
        plate1: 1,
        modulus: 1.0 / cap,
        cap,
    })
}

impl EquilibriumSolution {
    /// `∫ log(1/|z − t|) dν(t)` at parameter `t` of piece `k`, evaluated
    /// with the same product integration as the solver.
    pub fn boundary_potential(&self, k: usize, t: f64) -> f64 {
        let b = &self.boundary;
        let z = b.pieces[k].shape.point(t);
        let own = kernel::self_row(b, k, t);
        let range = b.pieces[k].nodes.clone();
        let mut total: f64 = range
            .clone()
            .zip(own)
            .map(|(j, a)| a * self.mu_weights[j])
            .sum();
        for j in 0..b.len() {
            if !range.contains(&j) {
                total -= self.mu_weights[j] * (z - b.points[j]).norm().ln();
            }
        }
        total
    }

    /// Point-mass potential `Σ μ_j log(1/|z − z_j|)` off the boundary.
    pub fn potential(&self, z: Complex64) -> f64 {
        kernel::point_potential(&self.boundary.points, &self.mu_weights, z)
    }
}
