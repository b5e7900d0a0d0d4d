use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lambda-osc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn temp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lambda-osc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn simulate_writes_trajectory_and_summary() {
    let out = temp_path("traj.csv");
    let o = run(&[
        "simulate",
        "--model",
        "ml1d",
        "--lambda",
        "0.3",
        "--alpha",
        "1",
        "--x0",
        "1",
        "--v0",
        "0",
        "--t-end",
        "50",
        "--every",
        "100",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows = csv_rows(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(rows[0], ["t", "q1", "v1"]);
    assert_eq!(rows.len(), 502);
    let last: f64 = rows.last().unwrap()[0].parse().unwrap();
    assert_eq!(last, 50.0);
    let summary: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(summary["model"], "ml1d");
    assert!(summary["max_drift"].as_f64().unwrap() < 1e-10);
    assert_eq!(summary["config"]["command"], "simulate");
}

#[test]
fn planar_models_and_invariants() {
    let o = run(&[
        "invariants",
        "--model",
        "plane",
        "--lambda",
        "-0.2",
        "--x0",
        "0.5",
        "--y0",
        "0.3",
        "--vx0",
        "0.1",
        "--vy0",
        "0.4",
        "--t-end",
        "5",
        "--every",
        "500",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0][0], "t");
    assert!(rows[0].len() >= 4, "{:?}", rows[0]);
    let summary: serde_json::Value = serde_json::from_str(&stderr(&o)).unwrap();
    assert!(summary["max_drift"].as_f64().unwrap() < 1e-9);

    let o = run(&[
        "simulate",
        "--model",
        "curved_sw",
        "--kappa",
        "0.5",
        "--k2",
        "0.05",
        "--x0",
        "0.6",
        "--y0",
        "0.4",
        "--vy0",
        "0.3",
        "--t-end",
        "2",
        "--method",
        "rk45",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows[0]["q1"], 0.6);
}

#[test]
fn domain_exit_is_exit_code_two() {
    let o = run(&[
        "simulate", "--model", "ml1d", "--lambda", "-1", "--x0", "0.999", "--v0", "100", "--t-end",
        "5",
    ]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("error[domain_exit]"), "{}", stderr(&o));
}

#[test]
fn usage_errors_are_exit_code_one() {
    let o = run(&["simulate", "--lambda", "0.3", "--x0", "1", "--t-end", "1"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("--model"));
    assert_eq!(code(&run(&["simulate", "--model", "nope"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(
        code(&run(&[
            "spectrum1d",
            "--lambda",
            "0.1",
            "--beta",
            "-1",
            "--levels",
            "2"
        ])),
        1
    );
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn spectrum1d_compares_three_sources() {
    let o = run(&[
        "spectrum1d",
        "--beta",
        "1",
        "--lambda",
        "-0.2",
        "--levels",
        "5",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(
        rows[0],
        [
            "lambda",
            "n",
            "series",
            "ladder",
            "oracle",
            "oracle_error",
            "discrepancy",
            "status"
        ]
    );
    assert_eq!(rows.len(), 6);
    for r in &rows[1..] {
        assert_eq!(r[7], "ok");
        assert!(r[6].parse::<f64>().unwrap() < 1e-4);
    }

    let o = run(&[
        "spectrum1d",
        "--beta",
        "1",
        "--lambda",
        "1",
        "--levels",
        "5",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let status: Vec<String> = csv_rows(&stdout(&o))[1..]
        .iter()
        .map(|r| r[7].clone())
        .collect();
    assert_eq!(
        status,
        [
            "ok",
            "non_normalizable",
            "non_normalizable",
            "excluded",
            "excluded"
        ]
    );
}

#[test]
fn spectrum1d_discrepancy_beyond_tolerance_is_exit_three() {
    let o = run(&[
        "spectrum1d",
        "--lambda",
        "0.1",
        "--levels",
        "3",
        "--points",
        "1000",
        "--tolerance",
        "1e-14",
    ]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert!(stderr(&o).contains("error[check_failed]"));
}

#[test]
fn spectrum1d_sweeps_several_lambdas_in_order() {
    let o = run(&[
        "spectrum1d",
        "--lambda",
        "0.1,-0.1,0",
        "--levels",
        "2",
        "--points",
        "400",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let lambdas: Vec<f64> = csv_rows(&stdout(&o))[1..]
        .iter()
        .map(|r| r[0].parse().unwrap())
        .collect();
    assert_eq!(lambdas, [0.1, 0.1, -0.1, -0.1, 0.0, 0.0]);
}

#[test]
fn spectrum2d_listing() {
    let o = run(&["spectrum2d", "--Lambda", "0.1", "--max-N", "4"]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0], ["m", "n", "N", "energy", "provenance"]);
    assert_eq!(rows.len(), 16);
    assert_eq!(
        rows[1],
        ["0", "0", "0", "1.0000000000000000e0", "closed_form"]
    );
    for r in &rows[1..] {
        let (m, n, total): (u64, u64, u64) = (
            r[0].parse().unwrap(),
            r[1].parse().unwrap(),
            r[2].parse().unwrap(),
        );
        assert_eq!(m + n, total);
    }
}

#[test]
fn polynomials_table() {
    let o = run(&["polynomials", "--Lambda", "0", "--max-degree", "2"]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0], ["degree", "c0", "c1", "c2"]);
    assert_eq!(rows.len(), 4);
    let c: Vec<f64> = rows[3][1..].iter().map(|v| v.parse().unwrap()).collect();
    // proportional to H_2 = 4 y^2 - 2
    assert!((c[2] / c[0] + 2.0).abs() < 1e-15 && c[1] == 0.0);
}

#[test]
fn chart_round_trip_and_integrals() {
    let o = run(&[
        "chart", "--chart", "zx_y", "--lambda", "0.3", "--x", "0.4", "--y", "-0.7", "--vx", "0.2",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(
        rows[0][..7],
        ["chart", "lambda", "x", "y", "u1", "u2", "round_trip_error"]
    );
    assert!(rows[1][6].parse::<f64>().unwrap() < 1e-15);
    let (i1, i2, e): (f64, f64, f64) = (
        rows[1][7].parse().unwrap(),
        rows[1][8].parse().unwrap(),
        rows[1][9].parse().unwrap(),
    );
    assert!((0.5 * (i1 + i2) - e).abs() < 1e-15);

    let o = run(&[
        "chart", "--chart", "gnomonic", "--x", "0.1", "--y", "0.1", "--vx", "1",
    ]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("unsupported_chart"));
    assert_eq!(
        code(&run(&["chart", "--chart", "polar", "--x", "0", "--y", "0"])),
        2
    );
}

#[test]
fn verify_groups_and_tolerance_override() {
    let o = run(&["verify", "--only", "ktrig"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(
        rows[0],
        [
            "check",
            "group",
            "criterion",
            "measured",
            "tolerance",
            "status",
            "error"
        ]
    );
    assert!(rows.len() > 1);
    assert!(rows[1..].iter().all(|r| r[1] == "ktrig" && r[5] == "pass"));

    let o = run(&["verify", "--only", "ktrig", "--tolerance", "1e-15"]);
    assert_eq!(code(&o), 3);
    assert!(csv_rows(&stdout(&o))[1..].iter().any(|r| r[5] == "fail"));

    let o = run(&["verify", "--criterion", "7", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.as_array().unwrap().iter().all(|r| r["criterion"] == 7));

    assert_eq!(code(&run(&["verify", "--only", "nope"])), 1);
}

#[test]
fn config_file_with_flag_override() {
    let cfg = temp_path("run.json");
    std::fs::write(
        &cfg,
        r#"{"command": "spectrum2d", "Lambda": 0.2, "max_N": 3, "format": "json"}"#,
    )
    .unwrap();
    let o = run(&[
        "spectrum2d",
        "--config",
        cfg.to_str().unwrap(),
        "--max-N",
        "1",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    assert!((v[1]["energy"].as_f64().unwrap() - 1.8).abs() < 1e-14);

    std::fs::write(&cfg, r#"{"levels": 3}"#).unwrap();
    assert_eq!(
        code(&run(&["spectrum2d", "--config", cfg.to_str().unwrap()])),
        1
    );
    std::fs::write(&cfg, "not json").unwrap();
    assert_eq!(
        code(&run(&["spectrum2d", "--config", cfg.to_str().unwrap()])),
        1
    );
}

#[test]
fn reruns_are_byte_identical() {
    let args = [
        "simulate", "--model", "plane", "--lambda", "0.4", "--k2", "0.05", "--x0", "0.7", "--y0",
        "0.2", "--vy0", "0.5", "--t-end", "3", "--method", "rk45",
    ];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);

    let sweep = [
        "spectrum1d",
        "--lambda",
        "-0.3,0.2",
        "--levels",
        "3",
        "--points",
        "400",
    ];
    let one = Command::new(env!("CARGO_BIN_EXE_lambda-osc"))
        .args(sweep)
        .env("LAMBDA_OSC_THREADS", "1")
        .output()
        .unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_lambda-osc"))
        .args(sweep)
        .env("LAMBDA_OSC_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn bad_thread_count_is_rejected() {
    let o = Command::new(env!("CARGO_BIN_EXE_lambda-osc"))
        .args(["spectrum2d", "--Lambda", "0", "--max-N", "0"])
        .env("LAMBDA_OSC_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
}
