use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ideal-conv"))
        .args(args)
        .env_remove("ICONV_WINDOW")
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json")
}

#[test]
fn one_over_n_converges_to_zero() {
    let r = report(&["analyze", "--seq", "closed(1/n)", "--ideal", "fin", "--limit", "0"]);
    assert_eq!(r["convergence"]["verdict"], "converges");
}

#[test]
fn alternating_fibers_are_eventually_zero_under_i1() {
    let r = report(&["analyze", "--seq", "fibers{0:arith(1,2);1:arith(0,2)}", "--ideal", "i1", "--eventually-constant"]);
    assert_eq!(r["eventually_constant"]["value"], "0");
    let r = report(&["analyze", "--seq", "fibers{0:arith(1,2);1:arith(0,2)}", "--ideal", "fin", "--eventually-constant"]);
    assert!(r["eventually_constant"].is_null());
}

#[test]
fn sign_sequence_clusters_at_both_signs() {
    let r = report(&["analyze", "--seq", "closed((-1)^n)", "--ideal", "fin", "--cluster", "-1,0,1"]);
    assert_eq!(r["cluster_points"], serde_json::json!(["-1", "1"]));
}

#[test]
fn density_of_a_block_is_exact() {
    let r = report(&["density", "--set", "block(3)", "--window", "65536"]);
    assert_eq!(r["density"]["value"]["exact"], "1/8");
    assert_eq!(r["count_prefix"], 8192);
}

#[test]
fn window_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_ideal-conv"))
        .args(["density", "--set", "odds"])
        .env("ICONV_WINDOW", "100")
        .output()
        .unwrap();
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["window"], 100);
    assert_eq!(r["count_prefix"], 50);
}

#[test]
fn ideal_membership_and_warning() {
    let r = report(&["ideal", "--ideal", "i2", "--set", "odds", "--admissible"]);
    assert_eq!(r["membership"]["verdict"], "in");
    assert_eq!(r["admissible"]["admissible"], true);
    let r = report(&["ideal", "--ideal", "restrict(fin, evens)", "--set", "block(2)"]);
    assert_eq!(r["membership"]["verdict"], "out");
}

#[test]
fn shrink_commands() {
    let r = report(&["shrink", "c-witness", "--ideal", "i1", "--set", "tail(1)"]);
    assert_eq!(r["verify"]["verdict"], "consistent");
    let r = report(&["shrink", "verify", "--ideal", "id", "--set", "tail(1)", "--b", "evens"]);
    assert_eq!(r["verify"]["verdict"], "refuted");
    let r = report(&["shrink", "b-witness", "--ideal", "i3", "--family", "tails"]);
    assert_eq!(r["check"]["holds"], true);
}

#[test]
fn topolab_and_onepoint() {
    let r = report(&["topolab", "check", "--n", "3", "--ideal", "i2", "--property", "us-t1"]);
    assert_eq!(r["topology_counts"], serde_json::json!([1, 4, 29]));
    assert_eq!(r["pass"], true);
    let sierpinski = "space{points: a,b; opens: {}, {a}, {a,b}}";
    let r = report(&["topolab", "inspect", "--space", sierpinski, "--ideal", "fin"]);
    assert_eq!(r["t1"], false);
    let r = report(&["onepoint", "build", "--space", sierpinski, "--ideal", "fin"]);
    assert_eq!(r["extension"]["points"], serde_json::json!(["a", "b", "α"]));
    assert_eq!(r["hausdorff"], false);
    let r = report(&["onepoint", "extend", "--source", sierpinski, "--target", sierpinski, "--map", "a,b", "--ideal", "fin"]);
    assert_eq!(r["homeomorphism"], true);
}

#[test]
fn space_can_be_read_from_a_file() {
    let path = std::env::temp_dir().join(format!("ideal-conv-space-{}.txt", std::process::id()));
    std::fs::write(&path, "space{points: x; opens: {}, {x}}\n").unwrap();
    let r = report(&["onepoint", "build", "--space", path.to_str().unwrap(), "--ideal", "fin"]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(r["hausdorff"], true);
}

#[test]
fn parallel_and_serial_agree_byte_for_byte() {
    let args = ["topolab", "check", "--n", "4", "--ideal", "id", "--property", "closure-collapse"];
    let a = run(&args);
    let mut p = args.to_vec();
    p.push("--parallel");
    let b = run(&p);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, run(&args).stdout);
}

#[test]
fn malformed_input_exits_with_two() {
    for args in [
        vec!["density", "--set", "union(odds,"],
        vec!["density", "--set", "odds", "--window", "0"],
        vec!["ideal", "--ideal", "i9", "--set", "odds"],
        vec!["analyze", "--seq", "closed(1/)", "--ideal", "fin", "--limit", "0"],
        vec!["analyze", "--seq", "closed(1/n)", "--ideal", "fin"],
        vec!["topolab", "check", "--n", "9", "--ideal", "fin", "--property", "compact"],
        vec!["topolab", "inspect", "--space", "space{points: a; opens: {a}}", "--ideal", "fin"],
        vec!["onepoint", "circle", "--scenario", "other"],
        vec!["scenario", "missing"],
        vec!["no-such-command"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn parse_errors_report_positions() {
    let out = run(&["density", "--set", "union(odds,"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("position 11"));
}
