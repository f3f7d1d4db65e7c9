use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn thinpos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thinpos"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let p = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn width_of_trefoil() {
    let o = thinpos(&["width", fixture("trefoil.morse").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "width: 8\n");
}

#[test]
fn validate_exit_codes() {
    let ok = thinpos(&["validate", fixture("wiggled.morse").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).starts_with("valid: 9 events"));

    let illegal = scratch("illegal.morse", "cup 0\ncap 3\n");
    let o = thinpos(&["validate", illegal.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2:1"));

    let garbled = scratch("garbled.morse", "cup 0\nswirl 1\n");
    assert_eq!(thinpos(&["validate", garbled.to_str().unwrap()]).status.code(), Some(2));
    // other subcommands treat any unreadable input as a usage error
    assert_eq!(thinpos(&["width", illegal.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(thinpos(&["width", "/nonexistent/file.morse"]).status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert_eq!(thinpos(&[]).status.code(), Some(2));
    assert_eq!(thinpos(&["frobnicate"]).status.code(), Some(2));
    let f = fixture("trefoil.morse");
    let f = f.to_str().unwrap();
    assert_eq!(
        thinpos(&["search", f, "--strategy", "sideways", "--budget", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        thinpos(&["search", f, "--strategy", "greedy", "--budget", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        thinpos(&["search", f, "--strategy", "anneal", "--budget", "5", "--decay", "1.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(thinpos(&["profile", f, "--json", "--csv"]).status.code(), Some(2));
    assert_eq!(thinpos(&["oracle", "--punctures", "3"]).status.code(), Some(2));
    assert_eq!(thinpos(&["--help"]).status.code(), Some(0));
}

#[test]
fn profile_formats() {
    let f = fixture("wiggled.morse");
    let f = f.to_str().unwrap();
    let json = stdout(&thinpos(&["profile", f, "--json"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["width"], 14);
    assert_eq!(v["ladder"], serde_json::json!([2]));
    assert_eq!(v["gaps"][2]["class"], "thin");
    let keys: Vec<&str> = json.split('"').skip(1).step_by(2).take(1).collect();
    assert_eq!(keys, ["gaps"]);

    let csv = stdout(&thinpos(&["profile", f, "--csv"]));
    assert_eq!(csv.lines().next(), Some("gap_index,count,class"));
    assert_eq!(csv.lines().nth(3), Some("2,2,thin"));

    let plain = stdout(&thinpos(&["profile", f]));
    assert!(plain.starts_with("width: 14\nladder: [2]\n"));
}

#[test]
fn budget_exhaustion_exits_3() {
    let f = fixture("ladder.morse");
    let o = thinpos(&[
        "search",
        f.to_str().unwrap(),
        "--strategy",
        "exhaustive",
        "--budget",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("budget exhausted"));
}

#[test]
fn search_output_is_deterministic() {
    let f = fixture("wiggled.morse");
    let f = f.to_str().unwrap();
    for strategy in ["exhaustive", "greedy", "anneal"] {
        let args = ["search", f, "--strategy", strategy, "--budget", "500", "--seed", "11"];
        let a = thinpos(&args);
        let b = thinpos(&args);
        assert_eq!(a.stdout, b.stdout, "{strategy}");
    }
    let inline = thinpos(&["search", f, "--strategy", "exhaustive", "--budget", "500"]);
    let pooled = thinpos(&[
        "search",
        f,
        "--strategy",
        "exhaustive",
        "--budget",
        "500",
        "--threads",
        "3",
    ]);
    assert_eq!(inline.stdout, pooled.stdout);
}

#[test]
fn search_writes_trace_and_best() {
    let f = fixture("wiggled.morse");
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR"));
    let (trace, best) = (dir.join("cli_trace.json"), dir.join("cli_best.morse"));
    let o = thinpos(&[
        "search",
        f.to_str().unwrap(),
        "--strategy",
        "greedy",
        "--budget",
        "100",
        "--trace",
        trace.to_str().unwrap(),
        "--output",
        best.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&thinpos(&["width", best.to_str().unwrap()])), "width: 8\n");
    let replay = thinpos(&["verify-trace", f.to_str().unwrap(), trace.to_str().unwrap()]);
    assert_eq!(replay.status.code(), Some(0));

    // replaying against a different start diverges
    let other = fixture("trefoil.morse");
    let bad = thinpos(&["verify-trace", other.to_str().unwrap(), trace.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("step 0"));
}

#[test]
fn oracle_json_and_split_colours() {
    let o = thinpos(&["oracle", "--max-events", "6", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["violations"], serde_json::json!([]));
    assert!(v["configs"].as_u64().unwrap() > 0);

    let split = thinpos(&["oracle", "--max-events", "8", "--allow-split"]);
    assert_eq!(split.status.code(), Some(1));
    assert!(stdout(&split).contains("violation ["));
}

#[test]
fn verify_twoside_errors() {
    let bad = scratch("bad.twoside", "alpha: 2 | + +\nbeta: 2 | -\n");
    assert_eq!(
        thinpos(&["verify-twoside", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );
    let big = scratch(
        "big.twoside",
        "alpha: 2 | + + + + + - - - - - -\nbeta: 2 | + + + - - - -\n",
    );
    assert_eq!(
        thinpos(&["verify-twoside", big.to_str().unwrap()]).status.code(),
        Some(3)
    );
}

#[test]
fn strands_listing() {
    let f = fixture("ladder.morse");
    let o = thinpos(&["strands", f.to_str().unwrap(), "9", "below"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("potentially alternating: [5, 2]\n"));
    assert!(out.contains("strand 2: punctures [4, 5]"));
    assert_eq!(
        thinpos(&["strands", f.to_str().unwrap(), "0", "above"]).status.code(),
        Some(2)
    );
}

#[test]
fn check_disks_json_and_bad_input() {
    let pres = fixture("ladder.morse");
    let certs = fixture("consistent_pair.json");
    let o = thinpos(&["check-disks", pres.to_str().unwrap(), certs.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pairs"][0]["status"], "consistent");
    assert_eq!(v["pairs"][0]["a_u"], 13);

    let unknown = scratch("unknown.json", r#"[{"sphere": 9, "side": "above", "strands": [40]}]"#);
    assert_eq!(
        thinpos(&["check-disks", pres.to_str().unwrap(), unknown.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let broken = scratch("broken.json", "{ not json");
    assert_eq!(
        thinpos(&["check-disks", pres.to_str().unwrap(), broken.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn report_json_and_bridge_position() {
    let f = fixture("ladder.morse");
    let o = thinpos(&["report", f.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let gaps: Vec<u64> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["gap"].as_u64().unwrap())
        .collect();
    assert_eq!(gaps, [2, 5, 9, 13, 16]);
    assert_eq!(v[0]["verdicts"][0]["tag"], "Wu");
    assert_eq!(v[0]["verdicts"][0]["claim"], "incompressible");

    let bridge = thinpos(&["report", fixture("trefoil.morse").to_str().unwrap()]);
    assert_eq!(bridge.status.code(), Some(0));
    assert_eq!(stdout(&bridge), "no thin gaps\n");
}
