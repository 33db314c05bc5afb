use rayon::prelude::*;
use thiserror::Error;

use super::config::{ExperimentConfig, ExperimentKind, SolverChoice};
use crate::asymptotics::{compare_prediction, interval_bounds, CompareOptions};
use crate::chebyshev::{chebyshev_number, ratio_of, Method, Solver};
use crate::elliptic::build_elliptic_data;
use crate::error::Error;
use crate::geometry::{CompactSystem, Component};
use crate::potential::{
    component_masses, condenser_modulus, critical_points, equilibrium_of, greens_function,
    harmonic_measure_at_infinity,
};

/// Slack allowed when testing computed ratios against the Widom interval.
pub const COROLLARY_SLACK: f64 = 1e-2;

/// One output cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

/// Everything an experiment writes: header block and data table.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub version: String,
    pub config: Vec<String>,
    pub derived: Vec<(String, Value)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

/// A solver failure tagged with the module and operation that raised it.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{module}::{operation}: {source}")]
pub struct RunError {
    pub module: &'static str,
    pub operation: &'static str,
    pub source: Error,
}

fn at<T>(module: &'static str, operation: &'static str, r: crate::Result<T>) -> Result<T, RunError> {
    r.map_err(|source| RunError {
        module,
        operation,
        source,
    })
}

fn component_type(c: &Component) -> &'static str {
    match c {
        Component::Interval { .. } => "interval",
        Component::Circle { .. } => "circle",
        Component::Ellipse { .. } => "ellipse",
    }
}

fn solver_for(cfg: &ExperimentConfig, sys: &CompactSystem) -> Solver {
    let lp = Solver::Lp {
        nodes_per_component: cfg.lp_nodes,
        directions: cfg.directions,
    };
    match cfg.solver {
        SolverChoice::Remez => Solver::Remez,
        SolverChoice::Lp => lp,
        SolverChoice::Auto if sys.is_real() => Solver::Remez,
        SolverChoice::Auto => lp,
    }
}

/// Runs one experiment and collects its report. Degree sweeps use the
/// ambient rayon pool; rows always come out in degree order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report, RunError> {
    let sys = cfg.system();
    let npc = cfg.nodes_per_component;
    let sol = at("potential", "solve_equilibrium", equilibrium_of(&sys, npc))?;
    let masses = component_masses(&sol);

    let mut derived: Vec<(String, Value)> = vec![
        ("capacity".into(), sol.capacity.into()),
        ("robin_constant".into(), sol.robin_constant.into()),
    ];
    for (k, m) in masses.masses.iter().enumerate() {
        derived.push((format!("nu[{k}]"), (*m).into()));
    }
    derived.push(("nu_arc".into(), masses.arc_mass.into()));
    if sys.len() == 2 {
        let cond = at("potential", "condenser_modulus", condenser_modulus(&sys, npc))?;
        let arcs = sys.arc_indices();
        let k = if arcs.len() == 1 { arcs[0] } else { 0 };
        let omega = masses.masses[k];
        derived.push(("modulus_omega".into(), cond.modulus.into()));
        derived.push((format!("omega_infinity[{k}]"), omega.into()));
        let ed = at("elliptic", "build_elliptic_data", build_elliptic_data(cond.modulus, omega))?;
        derived.push(("abs_tau_prime".into(), ed.abs_tau_prime.into()));
        derived.push(("nome_h".into(), ed.nome_h.into()));
    }

    let (columns, rows): (Vec<&'static str>, Vec<Vec<Value>>) = match cfg.kind {
        ExperimentKind::Capacity => (
            vec!["robin_constant", "capacity"],
            vec![vec![sol.robin_constant.into(), sol.capacity.into()]],
        ),
        ExperimentKind::Equilibrium => {
            let mut rows = Vec::new();
            for (k, c) in sys.components().iter().enumerate() {
                let hm = at(
                    "potential",
                    "harmonic_measure_at_infinity",
                    harmonic_measure_at_infinity(&sys, k, npc),
                )?;
                rows.push(vec![k.into(), component_type(c).into(), masses.masses[k].into(), hm.into()]);
            }
            (vec!["component", "type", "mass", "harmonic_measure"], rows)
        }
        ExperimentKind::Green => {
            let mut gd = greens_function(&sol);
            let cps = at("potential", "critical_points", critical_points(&mut gd, &sys))?;
            let wi = interval_bounds(&sol, &gd);
            derived.push(("critical_sum".into(), wi.critical_sum.into()));
            derived.push(("widom_lower".into(), wi.lower.into()));
            derived.push(("widom_upper".into(), wi.upper.into()));
            let rows = cps
                .iter()
                .map(|c| vec![c.gap.into(), c.location.into(), c.value.into()])
                .collect();
            (vec!["gap", "location", "green_value"], rows)
        }
        ExperimentKind::RatioSweep | ExperimentKind::CorollaryCheck => {
            let solver = solver_for(cfg, &sys);
            let degrees: Vec<usize> = cfg.degrees().collect();
            let results = degrees
                .par_iter()
                .map(|&n| chebyshev_number(&sys, n, solver))
                .collect::<crate::Result<Vec<_>>>();
            let operation = if solver == Solver::Remez { "remez_real" } else { "minimax_lp" };
            let results = at("chebyshev", operation, results)?;
            if cfg.kind == ExperimentKind::RatioSweep {
                let rows = results
                    .iter()
                    .map(|r| {
                        let (lo, _) = r.ratio_bracket(sol.capacity);
                        let method = match r.diagnostics.method {
                            Method::Remez => "remez",
                            Method::Lp => "lp",
                        };
                        vec![
                            r.degree.into(),
                            method.into(),
                            r.cheb_number.into(),
                            ratio_of(r, sol.capacity).into(),
                            lo.into(),
                            r.diagnostics.gap.into(),
                        ]
                    })
                    .collect();
                (vec!["n", "method", "cheb_number", "ratio", "ratio_lower", "solver_gap"], rows)
            } else {
                let mut gd = greens_function(&sol);
                at("potential", "critical_points", critical_points(&mut gd, &sys))?;
                let wi = interval_bounds(&sol, &gd);
                derived.push(("widom_lower".into(), wi.lower.into()));
                derived.push(("widom_upper".into(), wi.upper.into()));
                derived.push(("containment_slack".into(), COROLLARY_SLACK.into()));
                let rows = results
                    .iter()
                    .map(|r| {
                        let ratio = ratio_of(r, sol.capacity);
                        vec![
                            r.degree.into(),
                            ratio.into(),
                            wi.lower.into(),
                            wi.upper.into(),
                            wi.contains(ratio, COROLLARY_SLACK).into(),
                        ]
                    })
                    .collect();
                (vec!["n", "ratio", "lower", "upper", "contained"], rows)
            }
        }
        ExperimentKind::EllipticCompare => {
            let opts = CompareOptions {
                lp_nodes: cfg.lp_nodes,
                directions: cfg.directions,
                potential_nodes: npc,
                tail_start: cfg.tail_start,
            };
            let cmp = at("asymptotics", "compare_prediction", compare_prediction(&sys, cfg.degrees(), &opts))?;
            derived.push(("max_tail_deviation".into(), cmp.max_tail_deviation.into()));
            derived.push(("tail_correlation".into(), cmp.tail_correlation.into()));
            let rows = cmp
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.into(),
                        r.phase.into(),
                        r.computed_ratio.into(),
                        r.predicted_ratio.into(),
                        r.rel_dev.into(),
                        r.near_wrap.into(),
                    ]
                })
                .collect();
            (
                vec!["n", "phase", "computed_ratio", "predicted_ratio", "rel_dev", "near_wrap"],
                rows,
            )
        }
    };

    Ok(Report {
        version: format!("widom {}", env!("CARGO_PKG_VERSION")),
        config: cfg.echo(),
        derived,
        columns,
        rows,
    })
}
