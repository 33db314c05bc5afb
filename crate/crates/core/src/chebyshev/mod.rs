//! Monic minimax (Chebyshev) polynomials and Chebyshev numbers `M_n`.
//!
//! Two solvers are provided: a Remez exchange for sets made of real
//! intervals, and a linear-programming solver for general symmetric sets
//! that relaxes `|p| ≤ t` by finitely many half-planes and tightens the
//! relaxation by cutting planes at the continuous maxima of `|p|`.

mod arc;
mod basis;
mod extrema;
mod ipm;
mod lp;
mod remez;

pub use arc::{arc_boundary, arc_limit_ratio, CircularArc};
pub use basis::{BasisKind, ConditionedBasis, MonicPolynomial};
pub use lp::{minimax_lp, DEFAULT_DIRECTIONS};
pub use remez::remez_real;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{discretize, CompactSystem};

/// Which algorithm produced a [`MinimaxResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Remez,
    Lp,
}

/// Solver bookkeeping attached to every result.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub method: Method,
    /// Remez exchanges, or total interior-point iterations.
    pub iterations: usize,
    /// Relative levelling gap (Remez) or the final relative gap between the
    /// relaxation value and the refined maximum (LP).
    pub gap: f64,
    /// Cutting-plane rounds after the discrete program (LP only).
    pub cutting_rounds: usize,
    /// Discrete polygonal program value, in absolute units (LP only).
    pub lp_epsilon: Option<f64>,
    /// `lp_epsilon · sec(π/m)`: bound on the node maximum implied by the
    /// `m`-direction polygon (LP only).
    pub lp_epsilon_corrected: Option<f64>,
    /// Whether the Lawson reweighting improved on the cutting-plane solution.
    pub lawson_accepted: bool,
    pub warnings: Vec<String>,
}

/// A point where `|T_n|` comes within `1 − 1e−6` of `M_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtremePoint {
    pub re: f64,
    pub im: f64,
    /// `|T_n(z)| / M_n`.
    pub relative_value: f64,
    /// Sign of `T_n(z)` for real-valued polynomials on the real line.
    pub sign: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct MinimaxResult {
    pub degree: usize,
    /// `M_n = ‖T_n‖_E`, evaluated on refined boundary samples.
    pub cheb_number: f64,
    /// `log M_n`, accurate even when `M_n` underflows.
    pub log_cheb_number: f64,
    /// A lower bound for `M_n` certified by the solver (levelled error or
    /// relaxation value), in log form.
    pub log_lower_bound: f64,
    pub polynomial: MonicPolynomial,
    pub extreme_points: Vec<ExtremePoint>,
    pub diagnostics: Diagnostics,
}

impl MinimaxResult {
    /// Widom ratio bracket `(lower, upper)` for the given capacity.
    pub fn ratio_bracket(&self, capacity: f64) -> (f64, f64) {
        let n = self.degree as f64;
        (
            (self.log_lower_bound - n * capacity.ln()).exp(),
            (self.log_cheb_number - n * capacity.ln()).exp(),
        )
    }
}

/// Solver selection for [`chebyshev_number`] and [`widom_ratio`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    Remez,
    Lp {
        nodes_per_component: usize,
        directions: usize,
    },
}

/// Runs the selected solver on `sys`.
pub fn chebyshev_number(sys: &CompactSystem, n: usize, solver: Solver) -> Result<MinimaxResult> {
    match solver {
        Solver::Remez => remez_real(sys, n),
        Solver::Lp {
            nodes_per_component,
            directions,
        } => {
            sys.validate().into_result()?;
            minimax_lp(&discretize(sys, nodes_per_component)?, n, directions)
        }
    }
}

/// `M_n / C(E)^n`, formed in log space.
pub fn widom_ratio(sys: &CompactSystem, n: usize, solver: Solver, capacity: f64) -> Result<f64> {
    if !(capacity > 0.0) {
        return Err(Error::InvalidInput(format!("capacity must be positive, got {capacity}")));
    }
    let res = chebyshev_number(sys, n, solver)?;
    Ok(ratio_of(&res, capacity))
}

/// `M_n / C^n` for an existing result.
pub fn ratio_of(res: &MinimaxResult, capacity: f64) -> f64 {
    (res.log_cheb_number - res.degree as f64 * capacity.ln()).exp()
}

pub(crate) fn extreme_points(
    maxima: &[extrema::Extremum],
    top: f64,
    sign: impl Fn(Complex64) -> Option<f64>,
) -> Vec<ExtremePoint> {
    let mut pts: Vec<ExtremePoint> = maxima
        .iter()
        .filter(|e| e.value >= (1.0 - 1e-6) * top)
        .map(|e| ExtremePoint {
            re: e.point.re,
            im: e.point.im,
            relative_value: e.value / top,
            sign: sign(e.point),
        })
        .collect();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts
}
