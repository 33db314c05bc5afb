//! Configuration-driven experiment runner behind the `widom` binary.

mod config;
mod output;
mod run;

pub use config::{
    parse_config, ConfigError, ConfigIssue, ExperimentConfig, ExperimentKind, OutputFormat, SolverChoice,
};
pub use output::{error_record, render, render_csv, render_json, run_error_record};
pub use run::{run_experiment, Report, RunError, Value, COROLLARY_SLACK};

use std::path::{Path, PathBuf};

/// Command-line overrides applied on top of a parsed configuration.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub output: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub jobs: usize,
}

/// Outcome of [`run_file`]: rendered text plus where it should go.
#[derive(Debug, Clone)]
pub struct Rendered {
    pub text: String,
    pub output: Option<PathBuf>,
}

/// Parses `path`, applies overrides and runs the experiment on a pool of
/// `jobs` threads (1 = sequential). Errors come back as JSON records.
pub fn run_file(path: &Path, overrides: &Overrides) -> Result<Rendered, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| error_record("cli", "read_config", &format!("{}: {e}", path.display())))?;
    let mut cfg = parse_config(&text).map_err(|e| error_record("cli", "parse_config", &e.to_string()))?;
    if let Some(f) = overrides.format {
        cfg.format = f;
    }
    if let Some(o) = &overrides.output {
        cfg.output = Some(o.clone());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(overrides.jobs.max(1))
        .build()
        .map_err(|e| error_record("cli", "thread_pool", &e.to_string()))?;
    let report = pool
        .install(|| run_experiment(&cfg))
        .map_err(|e| run_error_record(&e))?;
    Ok(Rendered {
        text: render(&report, cfg.format),
        output: cfg.output.clone(),
    })
}
