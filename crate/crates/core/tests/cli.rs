use std::path::Path;
use std::process::Command;

use widom::cli::{parse_config, run_experiment, ExperimentKind, OutputFormat, SolverChoice, Value};
use widom::geometry::Component;

const BIN: &str = env!("CARGO_BIN_EXE_widom");

const INTERVAL: &str = "[component]\ntype = interval\nleft = -1\nright = 1\n";
const TWO_INTERVALS: &str =
    "[component]\ntype = interval\nleft = -1\nright = -0.5\n[component]\ntype = interval\nleft = 0.5\nright = 1\n";

fn float(v: &Value) -> f64 {
    match v {
        Value::Float(x) => *x,
        other => panic!("expected a float, got {other:?}"),
    }
}

#[test]
fn minimal_config_defaults_to_capacity() {
    let cfg = parse_config(INTERVAL).unwrap();
    assert_eq!(cfg.kind, ExperimentKind::Capacity);
    assert_eq!(cfg.components, vec![Component::interval(-1.0, 1.0)]);
    assert_eq!(cfg.nodes_per_component, 512);
    assert_eq!(cfg.directions, 64);
    assert_eq!(cfg.format, OutputFormat::Csv);
    assert_eq!(cfg.solver, SolverChoice::Auto);
    let report = run_experiment(&cfg).unwrap();
    assert_eq!(report.columns, vec!["robin_constant", "capacity"]);
    assert!((float(&report.rows[0][1]) - 0.5).abs() < 1e-12);
}

#[test]
fn unknown_key_is_located() {
    let err = parse_config("kind = capacity\ncolour = blue\n").unwrap_err();
    assert_eq!(err.issues.len(), 1);
    assert_eq!(err.issues[0].line, 2);
    assert!(err.issues[0].message.contains("colour"));
}

#[test]
fn elliptic_compare_needs_two_components() {
    let err = parse_config(&format!("kind = elliptic_compare\n{INTERVAL}")).unwrap_err();
    assert!(err.to_string().contains("two"), "{err}");
}

#[test]
fn ratio_sweep_on_interval_is_constant_two() {
    let cfg = parse_config(&format!("kind = ratio_sweep\ndegree_min = 1\ndegree_max = 10\n{INTERVAL}")).unwrap();
    let report = run_experiment(&cfg).unwrap();
    assert_eq!(report.rows.len(), 10);
    let col = report.columns.iter().position(|c| *c == "ratio").unwrap();
    for row in &report.rows {
        assert!((float(&row[col]) - 2.0).abs() < 1e-9, "{row:?}");
    }
}

#[test]
fn corollary_check_reports_containment() {
    let cfg = parse_config(&format!("kind = corollary_check\ndegree_max = 8\n{TWO_INTERVALS}")).unwrap();
    let report = run_experiment(&cfg).unwrap();
    assert_eq!(report.columns, vec!["n", "ratio", "lower", "upper", "contained"]);
    assert_eq!(report.rows.len(), 8);
    for row in &report.rows {
        assert_eq!(row[4], Value::Bool(true), "{row:?}");
        assert!((float(&row[2]) - 2.0).abs() < 1e-9);
    }
    let names: Vec<&str> = report.derived.iter().map(|(n, _)| n.as_str()).collect();
    for key in ["capacity", "nu[0]", "nu[1]", "modulus_omega", "omega_infinity[0]", "nome_h"] {
        assert!(names.contains(&key), "missing {key}");
    }
}

#[test]
fn elliptic_compare_schema() {
    let cfg = parse_config(
        "kind = elliptic_compare\ndegree_min = 2\ndegree_max = 4\nlp_nodes = 128\nnodes_per_component = 256\n\
         [component]\ntype = interval\nleft = -1\nright = -0.2\n\
         [component]\ntype = circle\ncenter = 1\nradius = 0.3\n",
    )
    .unwrap();
    let report = run_experiment(&cfg).unwrap();
    assert_eq!(
        report.columns,
        vec!["n", "phase", "computed_ratio", "predicted_ratio", "rel_dev", "near_wrap"]
    );
    assert_eq!(report.rows.len(), 3);
    assert!(matches!(report.rows[0][5], Value::Bool(_)));
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn binary_output_is_deterministic_across_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.cfg", &format!("kind = corollary_check\ndegree_max = 12\n{TWO_INTERVALS}"));
    // stdout, so the echoed config is identical for every run
    let outputs: Vec<String> = ["1", "1", "4"]
        .iter()
        .map(|jobs| {
            let out = Command::new(BIN)
                .args(["run", cfg.to_str().unwrap(), "--jobs", jobs])
                .output()
                .unwrap();
            assert!(out.status.success());
            String::from_utf8(out.stdout).unwrap()
        })
        .collect();
    assert!(outputs[0] == outputs[1], "repeat run differs");
    assert!(outputs[0] == outputs[2], "parallel run differs");

    let file = dir.path().join("out.csv");
    let status = Command::new(BIN)
        .args(["run", cfg.to_str().unwrap(), "--output", file.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let written = std::fs::read_to_string(&file).unwrap();
    assert!(written.contains(&format!("# config: output = {}", file.display())));
    let text = &outputs[0];
    assert!(text.starts_with("# widom "));
    assert!(text.contains("# config: component = interval left=0.5 right=1"));
    assert!(text.contains("\nn,ratio,lower,upper,contained\n"));
}

#[test]
fn binary_json_output_parses() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "e.cfg", &format!("kind = equilibrium\n{TWO_INTERVALS}"));
    let out = Command::new(BIN)
        .args(["run", cfg.to_str().unwrap(), "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["version"].as_str().unwrap().starts_with("widom "));
    assert_eq!(doc["columns"][2], "mass");
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for row in rows {
        let mass = row[2].as_f64().unwrap();
        let hm = row[3].as_f64().unwrap();
        assert!((mass - 0.5).abs() < 1e-6 && (hm - mass).abs() < 1e-3);
    }
}

#[test]
fn binary_reports_machine_readable_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.cfg", "colour = blue\n");
    let out = Command::new(BIN).args(["validate", bad.to_str().unwrap()]).output().unwrap();
    assert!(!out.status.success());
    let rec: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(rec["error"]["operation"], "parse_config");
    assert!(rec["error"]["message"].as_str().unwrap().contains("line 1"));

    // 16 nodes cannot carry a degree-10 polynomial: the LP solver refuses
    let coarse = write(
        dir.path(),
        "coarse.cfg",
        &format!("kind = ratio_sweep\nsolver = lp\nlp_nodes = 16\ndegree_max = 10\n{INTERVAL}"),
    );
    let out = Command::new(BIN).args(["run", coarse.to_str().unwrap()]).output().unwrap();
    assert!(!out.status.success());
    assert!(out.stdout.is_empty());
    let rec: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(rec["error"]["module"], "chebyshev");
    assert_eq!(rec["error"]["operation"], "minimax_lp");

    let good = write(dir.path(), "good.cfg", INTERVAL);
    let out = Command::new(BIN).args(["validate", good.to_str().unwrap()]).output().unwrap();
    assert!(out.status.success());
}
