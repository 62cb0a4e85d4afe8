use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trig-approx"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn record<'a>(json: &'a Value, key: &str, name: &str) -> &'a Value {
    json.as_array()
        .unwrap()
        .iter()
        .find(|r| r[key] == name)
        .unwrap_or_else(|| panic!("no {key} = {name}"))
}

#[test]
fn classify_inline() {
    let out = run(&["classify", "1", "1", "1"]);
    assert!(out.status.success());
    let json = stdout_json(&out);
    for class in ["NIS", "NDS", "NIMS", "NDMS"] {
        assert_eq!(record(&json, "class", class)["member"], true);
    }
    assert_eq!(record(&json, "class", "RBVS")["K"], 0.0);
    assert_eq!(record(&json, "class", "HBVS")["K"], 0.0);

    let json = stdout_json(&run(&["classify", "1", "2", "1", "1"]));
    assert_eq!(record(&json, "class", "AMDS")["K"], 2.0);

    let json = stdout_json(&run(&["classify", "3", "2", "1"]));
    assert_eq!(record(&json, "class", "NIS")["member"], true);
    assert_eq!(record(&json, "class", "NIMS")["member"], true);
}

#[test]
fn classify_from_file_with_row_semantics() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("seq.txt");
    fs::write(&path, "0.5\n0.25\n0.125\n").unwrap();
    let out = run(&["classify", "--row", "--input", path.to_str().unwrap()]);
    assert!(out.status.success());
    let json = stdout_json(&out);
    assert_eq!(record(&json, "class", "RBVS")["K"], 1.0);
}

#[test]
fn classify_rejects_bad_input() {
    let out = run(&["classify", "1", "x"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["classify", "1", "-0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("negative"));
}

const CONFIG: &str = r#"
grid_size = 4096
functions = ["weierstrass(0.5,8)"]
families = ["cesaro"]
p = [2.0]
n_range = { lo = 16, hi = 512 }

[[band]]
slope_min = -0.65
slope_max = -0.35
"#;

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("config.toml");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn rate_writes_deterministic_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), CONFIG);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for (out, jobs) in [(&a, "1"), (&b, "3")] {
        let res = run(&[
            "rate",
            "--config",
            &config,
            "--out",
            out.to_str().unwrap(),
            "--jobs",
            jobs,
            "--quiet",
        ]);
        assert!(
            res.status.success(),
            "{}",
            String::from_utf8_lossy(&res.stderr)
        );
    }
    for name in ["errors.csv", "fits.json", "clauses.json", "report.json"] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "{name} differs between runs"
        );
    }
    let csv = fs::read_to_string(a.join("errors.csv")).unwrap();
    assert!(csv.starts_with("matrix,function,p,n,error\n"));
    assert_eq!(csv.lines().count(), 12);
    let fits: Value =
        serde_json::from_str(&fs::read_to_string(a.join("fits.json")).unwrap()).unwrap();
    let slope = fits[0]["slope"].as_f64().unwrap();
    assert!((-0.65..=-0.35).contains(&slope));
    assert!(fits[0]["intercept"].is_f64() && fits[0]["r2"].is_f64());
    let clauses: Value =
        serde_json::from_str(&fs::read_to_string(a.join("clauses.json")).unwrap()).unwrap();
    let verdict = &clauses[0]["clauses"][0];
    assert_eq!(verdict["clause"], "i");
    assert!(verdict["holds"].is_boolean() && verdict.get("sup_constant").is_some());
    let report: Value =
        serde_json::from_str(&fs::read_to_string(a.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn rate_reproduces_trig_poly_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"
grid_size = 256
functions = ["trig_poly(1; 0.5,0,-1; 2,0.25,0)"]
families = ["identity"]
p = [2.0]
n = [3, 5, 8, 16, 32]

[[band]]
max_error = 1e-10
"#,
    );
    let out = dir.path().join("out");
    let res = run(&[
        "rate",
        "--config",
        &config,
        "--out",
        out.to_str().unwrap(),
        "--quiet",
    ]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
}

#[test]
fn rate_band_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &CONFIG.replace("-0.35", "-0.64"));
    let out = dir.path().join("out");
    let res = run(&[
        "rate",
        "--config",
        &config,
        "--out",
        out.to_str().unwrap(),
        "--quiet",
    ]);
    assert_eq!(res.status.code(), Some(1));
    // partial results are still written
    assert!(out.join("report.json").exists());
}

#[test]
fn rate_config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &CONFIG.replace("4096", "512"));
    let res = run(&["rate", "--config", &config, "--quiet"]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("grid too small"));

    let config = write_config(dir.path(), &format!("{CONFIG}\nunexpected = true\n"));
    let res = run(&["rate", "--config", &config, "--quiet"]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("unexpected"));
}

#[test]
fn modulus_command() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "modulus",
        "sine(1)",
        "--p",
        "2",
        "--deltas",
        "pi/8,pi/4,pi/2,3*pi/4,pi",
        "--grid",
        "1024",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("modulus.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("delta,omega"));
    for line in lines {
        let (d, w) = line.split_once(',').unwrap();
        let (d, w): (f64, f64) = (d.parse().unwrap(), w.parse().unwrap());
        let exact = 2f64.sqrt() * (d / 2.0).sin();
        assert!((w - exact).abs() <= 1e-6 * exact);
    }

    let out = run(&[
        "modulus",
        "constant(2)",
        "--grid",
        "1024",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let fit: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("lipfit.json")).unwrap()).unwrap();
    assert!(fit["alpha_hat"].is_null());
    assert!(fit["diagnostic"].as_str().unwrap().contains("undefined"));
}

#[test]
fn check_matrix_examples() {
    let json = stdout_json(&run(&[
        "check-matrix",
        "cesaro",
        "--alpha",
        "0.5",
        "--p",
        "1",
    ]));
    let v = record(&json["clauses"], "clause", "v");
    assert_eq!(v["holds"], true);
    assert_eq!(v["applicable"], true);

    let json = stdout_json(&run(&[
        "check-matrix",
        "norlund(k+1)",
        "--alpha",
        "1",
        "--p",
        "1",
    ]));
    let vi = record(&json["clauses"], "clause", "vi");
    assert_eq!(vi["holds"], true);
    assert!(vi["passing_exponents"]
        .as_array()
        .unwrap()
        .contains(&Value::from(1.0)));

    let json = stdout_json(&run(&[
        "check-matrix",
        "norlund(2^k)",
        "--alpha",
        "1",
        "--p",
        "1",
    ]));
    assert_eq!(record(&json["clauses"], "clause", "3")["holds"], false);
}

#[test]
fn kernel_and_embed_commands() {
    let out = run(&["kernel", "cesaro", "--ns", "4,16"]);
    assert!(out.status.success());
    let json = stdout_json(&out);
    for split in json.as_array().unwrap() {
        let total = split["near"].as_f64().unwrap() + split["far"].as_f64().unwrap();
        assert!((total - std::f64::consts::FRAC_PI_2).abs() < 1e-6);
    }
    let out = run(&[
        "embed",
        "--samples",
        "100",
        "--max-len",
        "32",
        "--seed",
        "9",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out), Value::Array(vec![]));
}
