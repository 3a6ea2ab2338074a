mod common;

use std::process::{Command, Output};

use common::check_schema;
use serde_json::Value;

fn evacsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evacsim"))
        .args(args)
        .env_remove("EVACSIM_THREADS")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "status {:?}: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn evaluate_exit_at_vertex_b() {
    let v = json_of(&evacsim(&[
        "evaluate",
        "--shape",
        "triangle",
        "--k",
        "2",
        "--protocol",
        "detour1",
        "--param",
        "z=0.70745",
        "--exit-at-vertex",
        "B",
    ]));
    assert!((v["evac_time"].as_f64().unwrap() - 2.3866).abs() < 5e-4);
    check_schema("evacuation_result", &v).unwrap();
}

#[test]
fn evaluate_start_side_midpoint() {
    let v = json_of(&evacsim(&[
        "evaluate",
        "--protocol",
        "detour1",
        "--param",
        "z=0.70745",
        "--exit-arc",
        "0.5",
    ]));
    let y = 3f64.sqrt() / 6.0;
    assert!((v["evac_time"].as_f64().unwrap() - y).abs() < 1e-12);
}

#[test]
fn bad_input_exits_with_status_2() {
    for args in [
        &[
            "evaluate",
            "--protocol",
            "detour1",
            "--param",
            "z:0.7",
            "--exit-arc",
            "0",
        ][..],
        &[
            "evaluate",
            "--protocol",
            "detour1",
            "--param",
            "z=1.5",
            "--exit-arc",
            "0",
        ],
        &[
            "build",
            "--shape",
            "square",
            "--protocol",
            "detour1",
            "--param",
            "z=0.7",
        ],
        &["build", "--shape", "hexagon", "--protocol", "equal"],
        &[
            "evaluate",
            "--protocol",
            "equal",
            "--k",
            "3",
            "--exit-at-vertex",
            "D",
        ],
    ] {
        let out = evacsim(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = evacsim(&["build", "--protocol", "detour1", "--param", "z=1.5"]);
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("0.5 < z < 1"), "{msg}");
}

#[test]
fn worstcase_writes_report_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("curve.csv");
    let svg = dir.path().join("fig.svg");
    let v = json_of(&evacsim(&[
        "worstcase",
        "--shape",
        "square",
        "--protocol",
        "square-detour",
        "--param",
        "p=0.1556",
        "--param",
        "q=0.5010",
        "--samples",
        "2000",
        "--csv",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]));
    check_schema("worst_case_report", &v).unwrap();
    assert!((v["worst_time"].as_f64().unwrap() - 3.4644).abs() < 5e-4);
    assert!((v["margin"].as_f64().unwrap() - 0.343).abs() < 1e-3);
    let bps = v["breakpoints_probed"].as_array().unwrap().len();
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,evac_time"));
    assert_eq!(lines.count(), 2000 * 4 + 2 * bps);
    let fig = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(fig.matches("class=\"robot\"").count(), 2);
    assert!(fig.contains("class=\"worst-exit\""));
}

#[test]
fn build_document_round_trips_through_protocol_file() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("p.json");
    let out = evacsim(&[
        "build",
        "--k",
        "3",
        "--protocol",
        "early",
        "--param",
        "p1=0.38601",
        "--out",
        doc.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&doc).unwrap();
    check_schema("protocol", &serde_json::from_str(&text).unwrap()).unwrap();
    let a = json_of(&evacsim(&[
        "evaluate",
        "--protocol-file",
        doc.to_str().unwrap(),
        "--exit-arc",
        "2.2",
    ]));
    let b = json_of(&evacsim(&[
        "evaluate",
        "--k",
        "3",
        "--protocol",
        "early",
        "--param",
        "p1=0.38601",
        "--exit-arc",
        "2.2",
    ]));
    assert_eq!(a, b);
}

#[test]
fn custom_trajectories_from_text() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.txt");
    let h = 3f64.sqrt() / 6.0;
    let x = 3f64.sqrt() / 3.0;
    // two robots split the triangle at the midpoint of BC and return to O
    let text = format!(
        "# split at F\n0: (0.5,{h})@0; (0.5,0)@{h}; (0,0)@{a}; (0.5,{v})@{b}; (0.5,{h})@{c}\n\
         1: (0.5,{h})@0; (0.5,0)@{h}; (1,0)@{a}; (0.5,{v})@{b}; (0.5,{h})@{c}\n",
        a = h + 0.5,
        b = h + 1.5,
        c = h + 1.5 + x,
        v = 3f64.sqrt() / 2.0,
    );
    std::fs::write(&path, text).unwrap();
    let v = json_of(&evacsim(&[
        "worstcase",
        "--protocol",
        "custom",
        "--trajectories",
        path.to_str().unwrap(),
        "--samples",
        "1000",
    ]));
    assert_eq!(v["protocol"], "custom");
    std::fs::write(&path, "0: (0.5,0.2)@0; (0.5,0)@0.1\n").unwrap();
    let out = evacsim(&[
        "build",
        "--protocol",
        "custom",
        "--trajectories",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn optimize_early_meeting_five_robots() {
    let v = json_of(&evacsim(&["optimize", "--k", "5", "--protocol", "early"]));
    check_schema("opt_result", &v).unwrap();
    assert!((v["best_time"].as_f64().unwrap() - 1.8760).abs() < 1e-3);
}

#[test]
fn optimize_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    let cfg = r#"{"family": "detour1", "space": [{"name": "z", "lo": 0.6, "hi": 0.8, "step": 0.001}],
                 "objective": {"kind": "critical-formula-max"}, "refine": true, "refine_tol": 1e-10}"#;
    check_schema("opt_config", &serde_json::from_str(cfg).unwrap()).unwrap();
    std::fs::write(&path, cfg).unwrap();
    let v = json_of(&evacsim(&["optimize", "--config", path.to_str().unwrap()]));
    assert!((v["best_params"]["z"].as_f64().unwrap() - 0.70745).abs() < 1e-3);
    assert!((v["best_time"].as_f64().unwrap() - 2.3866).abs() < 5e-4);
    std::fs::write(&path, r#"{"family": "detour1"}"#).unwrap();
    assert_eq!(
        evacsim(&["optimize", "--config", path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn optimize_empty_grid_is_rejected() {
    let out = evacsim(&[
        "optimize",
        "--shape",
        "square",
        "--protocol",
        "square-detour",
        "--range",
        "p=0.3:0.4:0.05",
        "--range",
        "q=0.3:0.5:0.1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn thread_count_does_not_change_output() {
    let args = [
        "optimize",
        "--shape",
        "square",
        "--protocol",
        "square-detour",
        "--range",
        "p=0.14:0.17:0.001",
        "--range",
        "q=0.45:0.55:0.001",
    ];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_evacsim"))
            .args(args)
            .env("EVACSIM_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    let many = run("5");
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
    let flag = evacsim(&[&args[..], &["--threads", "3"]].concat());
    assert_eq!(one.stdout, flag.stdout);
}
