//! Closed-form asymptotics of Widom factors and their comparison with
//! computed Chebyshev numbers.

use std::f64::consts::{LN_2, PI};

use rayon::prelude::*;
use serde::Serialize;

use crate::chebyshev::{minimax_lp, ratio_of};
use crate::elliptic::{build_elliptic_data, theta0, EllipticData};
use crate::error::{Error, Result};
use crate::geometry::{discretize, CompactSystem};
use crate::potential::{
    component_masses, condenser_modulus, critical_points, equilibrium_of, greens_function, EquilibriumSolution,
    GreenData,
};

/// Fractional parts closer than this to an integer are snapped to zero
/// and flagged.
pub const WRAP_GUARD: f64 = 1e-12;
/// First degree of the asymptotic tail.
pub const DEFAULT_TAIL_START: usize = 20;
/// Margin used by [`check_theorem1`] when no prediction is available.
pub const DEFAULT_MARGIN: f64 = 0.01;
/// Smallest `β` accepted as evidence of `liminf M_n/C(E)^n ≥ 1 + β`.
pub const MIN_BETA: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EllipticPrediction {
    pub n: usize,
    /// `{n·ω(∞) + |τ′|·ln2/π}` in `[0, 1)`.
    pub phase: f64,
    pub predicted_ratio: f64,
    /// Set when the raw phase fell within [`WRAP_GUARD`] of an integer.
    pub near_wrap: bool,
    pub ingredients: EllipticData,
}

/// `{raw}` with the near-integer guard band; returns `(phase, near_wrap)`.
pub fn guarded_fraction(raw: f64) -> (f64, bool) {
    let frac = raw - raw.floor();
    if frac < WRAP_GUARD || 1.0 - frac < WRAP_GUARD {
        (0.0, true)
    } else {
        (frac, false)
    }
}

/// `2^ω · |ϑ0((phase + ω)/2 | τ′) / ϑ0((phase − ω)/2 | τ′)|`, defined for
/// `ω ∈ [0, 1)` so that the degenerate `ω = 0` limit can be evaluated.
pub fn elliptic_ratio(phase: f64, omega: f64, abs_tau_prime: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&omega) {
        return Err(Error::InvalidInput(format!("ω(∞) must lie in [0, 1), got {omega}")));
    }
    let num = theta0(0.5 * (phase + omega), abs_tau_prime)?;
    let den = theta0(0.5 * (phase - omega), abs_tau_prime)?;
    Ok(2f64.powf(omega) * (num / den).abs())
}

/// Asymptotic Widom factor of degree `n` for an elliptic configuration.
pub fn predict_elliptic(ed: &EllipticData, n: usize) -> Result<EllipticPrediction> {
    let raw = n as f64 * ed.omega_infinity + ed.abs_tau_prime * LN_2 / PI;
    let (phase, near_wrap) = guarded_fraction(raw);
    Ok(EllipticPrediction {
        n,
        phase,
        predicted_ratio: elliptic_ratio(phase, ed.omega_infinity, ed.abs_tau_prime)?,
        near_wrap,
        ingredients: *ed,
    })
}

/// Positive lower bound `2^ω · min ϑ0 / max ϑ0` for every prediction.
pub fn prediction_floor(ed: &EllipticData) -> Result<f64> {
    let lo = theta0(0.0, ed.abs_tau_prime)?;
    let hi = theta0(0.5, ed.abs_tau_prime)?;
    Ok(2f64.powf(ed.omega_infinity) * lo / hi)
}

/// Interval containing the limit points of `M_n / C(E)^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WidomInterval {
    /// `2^{ν_E(E_arc)}`.
    pub lower: f64,
    /// `2^{ν_E(E_arc)} · exp(Σ_j g(z_j*))`.
    pub upper: f64,
    pub arc_mass: f64,
    pub critical_sum: f64,
}

impl WidomInterval {
    pub fn contains(&self, x: f64, slack: f64) -> bool {
        x >= self.lower - slack && x <= self.upper + slack
    }
}

pub fn interval_bounds(sol: &EquilibriumSolution, gd: &GreenData) -> WidomInterval {
    let arc_mass = component_masses(sol).arc_mass;
    let lower = 2f64.powf(arc_mass);
    let critical_sum = gd.critical_sum();
    WidomInterval {
        lower,
        upper: lower * critical_sum.exp(),
        arc_mass,
        critical_sum,
    }
}

/// Equilibrium, Green's function critical points and the Widom interval of
/// `sys` in one call.
pub fn widom_interval_of(sys: &CompactSystem, nodes_per_component: usize) -> Result<WidomInterval> {
    let sol = equilibrium_of(sys, nodes_per_component)?;
    let mut gd = greens_function(&sol);
    critical_points(&mut gd, sys)?;
    Ok(interval_bounds(&sol, &gd))
}

/// Which lower bound [`check_theorem1`] applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerCheck {
    /// `tail min > 1 + β` with `β ≥` [`MIN_BETA`] (at least one arc).
    Beta,
    /// Only `ratio ≥ 1` (no arc components).
    AtLeastOne,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem1Report {
    /// Reason the check does not apply, if any.
    pub skipped: Option<String>,
    pub tail_start: usize,
    pub tail_len: usize,
    pub tail_max: f64,
    pub tail_min: f64,
    pub margin: f64,
    /// `tail_max < 2 − margin`.
    pub upper_passed: bool,
    /// `tail_min − 1`.
    pub beta: f64,
    pub lower_check: LowerCheck,
    pub lower_passed: bool,
}

impl Theorem1Report {
    pub fn passed(&self) -> bool {
        self.skipped.is_none() && self.upper_passed && self.lower_passed
    }
}

/// Checks `limsup M_n/C(E)^n < 2` and `liminf ≥ 1 + β` on the tail of a
/// ratio sweep. `predicted_upper`, when given, is the largest predicted
/// limit point `θ`, and the margin becomes `(2 − θ)/2`.
pub fn check_theorem1(
    sys: &CompactSystem,
    ratios: &[(usize, f64)],
    tail_start: usize,
    predicted_upper: Option<f64>,
) -> Theorem1Report {
    let mut report = Theorem1Report {
        skipped: None,
        tail_start,
        tail_len: 0,
        tail_max: f64::NAN,
        tail_min: f64::NAN,
        margin: predicted_upper.map_or(DEFAULT_MARGIN, |theta| 0.5 * (2.0 - theta)),
        upper_passed: false,
        beta: f64::NAN,
        lower_check: if sys.arc_indices().is_empty() {
            LowerCheck::AtLeastOne
        } else {
            LowerCheck::Beta
        },
        lower_passed: false,
    };
    if sys.curve_indices().is_empty() {
        report.skipped = Some("hypothesis unmet: the system has no Jordan curve component".into());
        return report;
    }
    let tail: Vec<f64> = ratios.iter().filter(|(n, _)| *n >= tail_start).map(|(_, r)| *r).collect();
    if tail.is_empty() {
        report.skipped = Some(format!("no ratios with n ≥ {tail_start}"));
        return report;
    }
    report.tail_len = tail.len();
    report.tail_max = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    report.tail_min = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    report.upper_passed = report.tail_max < 2.0 - report.margin;
    report.beta = report.tail_min - 1.0;
    report.lower_passed = match report.lower_check {
        LowerCheck::Beta => report.beta > MIN_BETA,
        LowerCheck::AtLeastOne => report.tail_min >= 1.0 - 1e-9,
    };
    report
}

/// Resolution knobs for [`compare_prediction`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareOptions {
    /// Nodes per component for the minimax solver.
    pub lp_nodes: usize,
    pub directions: usize,
    /// Nodes per component for capacity, masses and modulus.
    pub potential_nodes: usize,
    pub tail_start: usize,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            lp_nodes: 256,
            directions: crate::chebyshev::DEFAULT_DIRECTIONS,
            potential_nodes: 512,
            tail_start: DEFAULT_TAIL_START,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub n: usize,
    pub phase: f64,
    pub computed_ratio: f64,
    /// Certified lower end of the computed ratio.
    pub computed_lower: f64,
    pub predicted_ratio: f64,
    pub rel_dev: f64,
    pub near_wrap: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub capacity: f64,
    pub elliptic: EllipticData,
    pub rows: Vec<ComparisonRow>,
    /// Largest relative deviation over unflagged tail rows.
    pub max_tail_deviation: f64,
    /// Pearson correlation of computed and predicted tail ratios.
    pub tail_correlation: f64,
}

/// Pearson correlation coefficient of two equally long samples.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    sxy / (sxx * syy).sqrt()
}

/// Elliptic ingredients of an interval-plus-curve system: capacity,
/// `ω(∞)` from the equilibrium masses and `mod(Ω)` from the condenser.
pub fn elliptic_data_of(sys: &CompactSystem, potential_nodes: usize) -> Result<(f64, EllipticData)> {
    let arcs = sys.arc_indices();
    if sys.len() != 2 || arcs.len() != 1 || sys.curve_indices().len() != 1 {
        return Err(Error::Unsupported(
            "the elliptic formula needs exactly one real interval and one closed curve".into(),
        ));
    }
    sys.validate().into_result()?;
    let sol = equilibrium_of(sys, potential_nodes)?;
    let omega = sol.component_mass[arcs[0]];
    let modulus = condenser_modulus(sys, potential_nodes)?.modulus;
    Ok((sol.capacity, build_elliptic_data(modulus, omega)?))
}

/// Computed versus predicted Widom factors over `degrees`, solved in
/// parallel; row order follows `degrees`.
pub fn compare_prediction(
    sys: &CompactSystem,
    degrees: impl IntoIterator<Item = usize>,
    opts: &CompareOptions,
) -> Result<Comparison> {
    let (capacity, ed) = elliptic_data_of(sys, opts.potential_nodes)?;
    let boundary = discretize(sys, opts.lp_nodes)?;
    let degrees: Vec<usize> = degrees.into_iter().collect();
    let rows: Vec<ComparisonRow> = degrees
        .par_iter()
        .map(|&n| -> Result<ComparisonRow> {
            let res = minimax_lp(&boundary, n, opts.directions)?;
            let pred = predict_elliptic(&ed, n)?;
            let computed = ratio_of(&res, capacity);
            Ok(ComparisonRow {
                n,
                phase: pred.phase,
                computed_ratio: computed,
                computed_lower: res.ratio_bracket(capacity).0,
                predicted_ratio: pred.predicted_ratio,
                rel_dev: (computed - pred.predicted_ratio).abs() / pred.predicted_ratio,
                near_wrap: pred.near_wrap,
            })
        })
        .collect::<Result<_>>()?;
    let tail: Vec<&ComparisonRow> = rows.iter().filter(|r| r.n >= opts.tail_start && !r.near_wrap).collect();
    let max_tail_deviation = tail.iter().map(|r| r.rel_dev).fold(0.0, f64::max);
    let computed: Vec<f64> = tail.iter().map(|r| r.computed_ratio).collect();
    let predicted: Vec<f64> = tail.iter().map(|r| r.predicted_ratio).collect();
    let tail_correlation = if tail.len() >= 2 { pearson(&computed, &predicted) } else { f64::NAN };
    Ok(Comparison {
        capacity,
        elliptic: ed,
        rows,
        max_tail_deviation,
        tail_correlation,
    })
}
