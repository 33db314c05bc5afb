//! Flat key–value experiment configuration.
//!
//! ```text
//! # two intervals, Widom factors for n = 2..24
//! kind = ratio_sweep
//! degree_min = 2
//! degree_max = 24
//!
//! [component]
//! type = interval
//! left = -1
//! right = -0.5
//!
//! [component]
//! type = interval
//! left = 0.5
//! right = 1
//! ```
//!
//! Top-level keys come before the first section. Every `[component]`
//! section describes one component; unknown keys and sections are errors.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

use crate::geometry::{CompactSystem, Component, MIN_NODES_PER_COMPONENT};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Capacity,
    Equilibrium,
    Green,
    RatioSweep,
    EllipticCompare,
    CorollaryCheck,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Capacity => "capacity",
            ExperimentKind::Equilibrium => "equilibrium",
            ExperimentKind::Green => "green",
            ExperimentKind::RatioSweep => "ratio_sweep",
            ExperimentKind::EllipticCompare => "elliptic_compare",
            ExperimentKind::CorollaryCheck => "corollary_check",
        }
    }
}

impl FromStr for ExperimentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "capacity" => ExperimentKind::Capacity,
            "equilibrium" => ExperimentKind::Equilibrium,
            "green" => ExperimentKind::Green,
            "ratio_sweep" => ExperimentKind::RatioSweep,
            "elliptic_compare" => ExperimentKind::EllipticCompare,
            "corollary_check" => ExperimentKind::CorollaryCheck,
            other => return Err(format!("unknown experiment kind `{other}`")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown output format `{other}` (expected csv or json)")),
        }
    }
}

/// Minimax solver choice for degree sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverChoice {
    /// Remez for all-interval systems, LP otherwise.
    #[default]
    Auto,
    Remez,
    Lp,
}

impl SolverChoice {
    pub fn name(self) -> &'static str {
        match self {
            SolverChoice::Auto => "auto",
            SolverChoice::Remez => "remez",
            SolverChoice::Lp => "lp",
        }
    }
}

impl FromStr for SolverChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(SolverChoice::Auto),
            "remez" => Ok(SolverChoice::Remez),
            "lp" => Ok(SolverChoice::Lp),
            other => Err(format!("unknown solver `{other}` (expected auto, remez or lp)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub components: Vec<Component>,
    /// Nodes per component for the potential-theory solvers.
    pub nodes_per_component: usize,
    /// Nodes per component for the minimax LP.
    pub lp_nodes: usize,
    pub directions: usize,
    pub degree_min: usize,
    pub degree_max: usize,
    pub tail_start: usize,
    pub solver: SolverChoice,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
    /// Reserved; every algorithm is deterministic.
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            kind: ExperimentKind::Capacity,
            components: Vec::new(),
            nodes_per_component: 512,
            lp_nodes: 256,
            directions: 64,
            degree_min: 1,
            degree_max: 10,
            tail_start: 20,
            solver: SolverChoice::Auto,
            output: None,
            format: OutputFormat::Csv,
            seed: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn system(&self) -> CompactSystem {
        CompactSystem::new(self.components.clone())
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<usize> {
        self.degree_min..=self.degree_max
    }

    /// Canonical `key = value` lines, used as the echoed configuration.
    pub fn echo(&self) -> Vec<String> {
        let mut lines = vec![
            format!("kind = {}", self.kind.name()),
            format!("nodes_per_component = {}", self.nodes_per_component),
            format!("lp_nodes = {}", self.lp_nodes),
            format!("directions = {}", self.directions),
            format!("degree_min = {}", self.degree_min),
            format!("degree_max = {}", self.degree_max),
            format!("tail_start = {}", self.tail_start),
            format!("solver = {}", self.solver.name()),
            format!("format = {}", self.format.name()),
            format!("seed = {}", self.seed),
        ];
        if let Some(p) = &self.output {
            lines.push(format!("output = {}", p.display()));
        }
        for c in &self.components {
            lines.push(match *c {
                Component::Interval { left, right } => format!("component = interval left={left} right={right}"),
                Component::Circle { center, radius } => format!("component = circle center={center} radius={radius}"),
                Component::Ellipse { center, semi_x, semi_y } => {
                    format!("component = ellipse center={center} semi_x={semi_x} semi_y={semi_y}")
                }
            });
        }
        lines
    }
}

/// One located configuration problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigIssue {
    /// 1-based line number; 0 for whole-file problems.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid configuration: {}", .issues.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; "))]
pub struct ConfigError {
    pub issues: Vec<ConfigIssue>,
}

const TOP_LEVEL_KEYS: &[&str] = &[
    "kind",
    "nodes_per_component",
    "lp_nodes",
    "directions",
    "degree_min",
    "degree_max",
    "tail_start",
    "solver",
    "output",
    "format",
    "seed",
];

/// Key–value pairs of one `[component]` section.
#[derive(Default)]
struct Section {
    line: usize,
    entries: Vec<(usize, String, String)>,
}

impl Section {
    fn number(&self, key: &str, issues: &mut Vec<ConfigIssue>) -> Option<f64> {
        let Some((line, _, raw)) = self.entries.iter().find(|(_, k, _)| k == key) else {
            issues.push(ConfigIssue {
                line: self.line,
                message: format!("component is missing required key `{key}`"),
            });
            return None;
        };
        match raw.parse::<f64>() {
            Ok(v) if v.is_finite() => Some(v),
            _ => {
                issues.push(ConfigIssue {
                    line: *line,
                    message: format!("malformed number `{raw}` for `{key}`"),
                });
                None
            }
        }
    }

    fn component(&self, issues: &mut Vec<ConfigIssue>) -> Option<Component> {
        let Some((tline, _, kind)) = self.entries.iter().find(|(_, k, _)| k == "type") else {
            issues.push(ConfigIssue {
                line: self.line,
                message: "component is missing required key `type`".into(),
            });
            return None;
        };
        let allowed: &[&str] = match kind.as_str() {
            "interval" => &["type", "left", "right"],
            "circle" => &["type", "center", "radius"],
            "ellipse" => &["type", "center", "semi_x", "semi_y"],
            other => {
                issues.push(ConfigIssue {
                    line: *tline,
                    message: format!("unknown component type `{other}` (expected interval, circle or ellipse)"),
                });
                return None;
            }
        };
        let before = issues.len();
        for (line, key, _) in &self.entries {
            if !allowed.contains(&key.as_str()) {
                issues.push(ConfigIssue {
                    line: *line,
                    message: format!("unknown key `{key}` for a {kind} component"),
                });
            }
        }
        let c = match kind.as_str() {
            "interval" => {
                let (l, r) = (self.number("left", issues), self.number("right", issues));
                Component::interval(l?, r?)
            }
            "circle" => {
                let (c, r) = (self.number("center", issues), self.number("radius", issues));
                Component::circle(c?, r?)
            }
            _ => {
                let (c, a, b) = (
                    self.number("center", issues),
                    self.number("semi_x", issues),
                    self.number("semi_y", issues),
                );
                Component::ellipse(c?, a?, b?)
            }
        };
        if issues.len() > before {
            return None;
        }
        if let Err(reason) = c.check() {
            issues.push(ConfigIssue {
                line: self.line,
                message: reason,
            });
            return None;
        }
        Some(c)
    }
}

fn parse_value<T: FromStr>(raw: &str, key: &str, line: usize, issues: &mut Vec<ConfigIssue>) -> Option<T> {
    match raw.parse::<T>() {
        Ok(v) => Some(v),
        Err(_) => {
            issues.push(ConfigIssue {
                line,
                message: format!("malformed value `{raw}` for `{key}`"),
            });
            None
        }
    }
}

/// Parses and validates a configuration file.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut cfg = ExperimentConfig::default();
    let mut issues = Vec::new();
    let mut sections: Vec<Section> = Vec::new();
    let mut seen: Vec<&str> = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            if name.trim() == "component" {
                sections.push(Section {
                    line,
                    entries: Vec::new(),
                });
            } else {
                issues.push(ConfigIssue {
                    line,
                    message: format!("unknown section `[{}]`", name.trim()),
                });
            }
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            issues.push(ConfigIssue {
                line,
                message: format!("expected `key = value`, found `{content}`"),
            });
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        if let Some(section) = sections.last_mut() {
            if section.entries.iter().any(|(_, k, _)| k == key) {
                issues.push(ConfigIssue {
                    line,
                    message: format!("duplicate key `{key}` in component"),
                });
            }
            section.entries.push((line, key.to_string(), value.to_string()));
            continue;
        }
        let Some(&known) = TOP_LEVEL_KEYS.iter().find(|k| **k == key) else {
            issues.push(ConfigIssue {
                line,
                message: format!("unknown key `{key}`"),
            });
            continue;
        };
        if seen.contains(&known) {
            issues.push(ConfigIssue {
                line,
                message: format!("duplicate key `{key}`"),
            });
            continue;
        }
        seen.push(known);
        let issues = &mut issues;
        match known {
            "kind" => {
                match value.parse() {
                    Ok(k) => cfg.kind = k,
                    Err(message) => issues.push(ConfigIssue { line, message }),
                }
            }
            "solver" => match value.parse() {
                Ok(s) => cfg.solver = s,
                Err(message) => issues.push(ConfigIssue { line, message }),
            },
            "format" => match value.parse() {
                Ok(f) => cfg.format = f,
                Err(message) => issues.push(ConfigIssue { line, message }),
            },
            "output" => cfg.output = Some(PathBuf::from(value)),
            "seed" => cfg.seed = parse_value(value, key, line, issues).unwrap_or(cfg.seed),
            "nodes_per_component" => {
                cfg.nodes_per_component = parse_value(value, key, line, issues).unwrap_or(cfg.nodes_per_component)
            }
            "lp_nodes" => cfg.lp_nodes = parse_value(value, key, line, issues).unwrap_or(cfg.lp_nodes),
            "directions" => cfg.directions = parse_value(value, key, line, issues).unwrap_or(cfg.directions),
            "degree_min" => cfg.degree_min = parse_value(value, key, line, issues).unwrap_or(cfg.degree_min),
            "degree_max" => cfg.degree_max = parse_value(value, key, line, issues).unwrap_or(cfg.degree_max),
            "tail_start" => cfg.tail_start = parse_value(value, key, line, issues).unwrap_or(cfg.tail_start),
            _ => unreachable!("key list and match arms agree"),
        }
    }

    for section in &sections {
        if let Some(c) = section.component(&mut issues) {
            cfg.components.push(c);
        }
    }
    if issues.is_empty() {
        validate(&cfg, &mut issues);
    }
    if issues.is_empty() {
        Ok(cfg)
    } else {
        Err(ConfigError { issues })
    }
}

/// Documented ranges of the numeric knobs and per-kind requirements.
fn validate(cfg: &ExperimentConfig, issues: &mut Vec<ConfigIssue>) {
    let mut fail = |message: String| issues.push(ConfigIssue { line: 0, message });
    if cfg.components.is_empty() {
        fail("at least one [component] section is required".into());
        return;
    }
    for (key, value) in [("nodes_per_component", cfg.nodes_per_component), ("lp_nodes", cfg.lp_nodes)] {
        if !(MIN_NODES_PER_COMPONENT..=8192).contains(&value) {
            fail(format!("{key} = {value} is outside [{MIN_NODES_PER_COMPONENT}, 8192]"));
        }
    }
    if !(32..=4096).contains(&cfg.directions) {
        fail(format!("directions = {} is outside [32, 4096]", cfg.directions));
    }
    if cfg.degree_min < 1 || cfg.degree_max > 80 || cfg.degree_min > cfg.degree_max {
        fail(format!(
            "degree range {}..={} must satisfy 1 ≤ degree_min ≤ degree_max ≤ 80",
            cfg.degree_min, cfg.degree_max
        ));
    }
    let report = cfg.system().validate();
    for v in &report.violations {
        fail(format!("invalid system: {v}"));
    }
    let sys = cfg.system();
    match cfg.kind {
        ExperimentKind::EllipticCompare => {
            if sys.len() != 2 || sys.arc_indices().len() != 1 {
                fail(format!(
                    "elliptic_compare needs two components (one interval and one closed curve), got {}",
                    sys.len()
                ));
            }
        }
        ExperimentKind::RatioSweep | ExperimentKind::CorollaryCheck
            if cfg.solver == SolverChoice::Remez && !sys.is_real() =>
        {
            fail("solver = remez requires every component to be an interval".into());
        }
        _ => {}
    }
}
