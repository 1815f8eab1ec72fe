use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const TWO_BY_TWO: &str = "c two by two\np ot 2 2 4\nd 1 1\nd 2 1\ns 1 1\ns 2 1\na 1 1 -1\na 1 2 -2\na 2 1 -2\na 2 2 -1\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_auction-ot"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

#[test]
fn solve_two_by_two() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "t.ot", TWO_BY_TWO);
    let out = run(&["solve", &f, "-a", "ga", "-e", "0.25"]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["cost"], 2.0);
    assert!(r["gap"].as_f64().unwrap() <= 0.5);
    assert!(r.get("plan").is_none());

    let exact = json(&run(&["solve", &f, "-a", "exact"]));
    assert_eq!(exact["cost"], 2.0);
    assert_eq!(exact["gap"], 0.0);
}

#[test]
fn solve_is_deterministic_apart_from_time() {
    let dir = TempDir::new().unwrap();
    let f = path(&dir, "g.ot");
    assert!(run(&[
        "generate", "--family", "random", "-n", "9", "-m", "7", "--seed", "4", "-o", &f
    ])
    .status
    .success());
    for alg in ["ga", "ga-scaled", "exact"] {
        let mut a = json(&run(&["solve", &f, "-a", alg, "--plan"]));
        let mut b = json(&run(&["solve", &f, "-a", alg, "--plan"]));
        a["elapsed"] = Value::Null;
        b["elapsed"] = Value::Null;
        assert_eq!(a, b, "{alg}");
    }
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let real = write(&dir, "r.ot", "p ot 1 1 1\nd 1 1.5\ns 1 1.5\na 1 1 -2\n");
    let out = run(&["solve", &real, "-a", "sop"]);
    assert_eq!(out.status.code(), Some(4));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "constraint");
    assert!(err["message"]
        .as_str()
        .unwrap()
        .contains("integer weights required"));

    let bad = write(&dir, "b.ot", "p ot 1 1 2\nd 1 1\ns 1 1\na 1 1 -1\n");
    let out = run(&["solve", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("header declares 2 arcs but 1 found"));

    let stuck = write(
        &dir,
        "i.ot",
        "p ot 2 2 2\nd 1 1\nd 2 1\ns 1 1\ns 2 1\na 1 1 -1\na 2 1 -1\n",
    );
    assert_eq!(run(&["solve", &stuck]).status.code(), Some(3));

    let t = write(&dir, "t.ot", TWO_BY_TWO);
    assert_eq!(
        run(&["solve", &t, "-e", "0.001", "--max-bids", "1"])
            .status
            .code(),
        Some(5)
    );
    assert_eq!(
        run(&["solve", &t, "-a", "sop", "--expansion-cap", "1"])
            .status
            .code(),
        Some(5)
    );
}

#[test]
fn negate_flag_reads_minimization_costs() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "m.ot",
        "p ot 2 2 4\nd 1 1\nd 2 1\ns 1 1\ns 2 1\na 1 1 1\na 1 2 2\na 2 1 2\na 2 2 1\n",
    );
    assert_eq!(run(&["solve", &f]).status.code(), Some(2));
    let r = json(&run(&["solve", &f, "--negate", "-a", "exact"]));
    assert_eq!(r["cost"], 2.0);
}

#[test]
fn verify_pass_tamper_and_skip() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "t.ot", TWO_BY_TWO);
    let rep = path(&dir, "r.json");
    assert!(run(&["solve", &f, "-e", "0.25", "--plan", "-o", &rep])
        .status
        .success());
    let out = run(&["verify", &f, &rep]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["oracle_cost"], 2.0);

    let mut stored: Value = serde_json::from_str(&fs::read_to_string(&rep).unwrap()).unwrap();
    stored["plan"][0]["quantity"] = Value::from(0.5);
    let tampered = write(&dir, "bad.json", &stored.to_string());
    let out = run(&["verify", &f, &tampered]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["complete"], false);

    let out = bin()
        .args(["verify", &f, &rep])
        .env("AUCTION_OT_ORACLE_BUDGET", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = json(&out);
    assert!(v["oracle_cost"].is_null());
    assert!(v["oracle_skipped"].as_str().unwrap().contains("budget"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("oracle skipped"));
}

#[test]
fn generated_files_parse_back() {
    let dir = TempDir::new().unwrap();
    let families: [&[&str]; 5] = [
        &["--family", "assignment", "-n", "12", "--density", "0.5"],
        &[
            "--family",
            "asymmetric",
            "-m",
            "10",
            "-n",
            "30",
            "--weights",
            "range",
        ],
        &[
            "--family",
            "weight-scaled",
            "-n",
            "10",
            "--total-weight",
            "40",
        ],
        &["--family", "real-valued", "-n", "6"],
        &[
            "--family",
            "random",
            "-n",
            "5",
            "-m",
            "4",
            "--weights",
            "integer:4",
        ],
    ];
    for (k, flags) in families.iter().enumerate() {
        let f = path(&dir, &format!("f{k}.ot"));
        let mut args = vec!["generate", "-o", &f, "--seed", "3"];
        args.extend_from_slice(flags);
        assert!(run(&args).status.success(), "{flags:?}");
        let text = fs::read_to_string(&f).unwrap();
        let header = text.lines().next().unwrap();
        assert!(header.starts_with("c family="), "{header}");
        let spec = header.trim_start_matches("c ");
        let again = path(&dir, &format!("again{k}.ot"));
        assert!(run(&["generate", "--spec", spec, "-o", &again])
            .status
            .success());
        assert_eq!(fs::read_to_string(&again).unwrap(), text);
        assert!(run(&["solve", &f, "-a", "exact"]).status.success());
    }
}

#[test]
fn compare_ga_against_exact_and_sop() {
    let out = run(&[
        "compare",
        "--family",
        "random",
        "-n",
        "8",
        "-m",
        "6",
        "--instances",
        "20",
        "-a",
        "ga,exact",
        "-e",
        "0.05",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["agree"], true);
    assert_eq!(v["records"].as_array().unwrap().len(), 40);

    let out = run(&[
        "compare",
        "--family",
        "assignment",
        "-n",
        "10",
        "--density",
        "0.4",
        "--instances",
        "5",
        "-a",
        "ga,sop",
        "-e",
        "0.09",
        "--repetitions",
        "3",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    let records = v["records"].as_array().unwrap();
    for pair in records.chunks(2) {
        assert_eq!(pair[0]["cost"], pair[1]["cost"]);
        assert_eq!(pair[0]["runs"], 3);
    }
}

#[test]
fn bench_csv_and_json() {
    let dir = TempDir::new().unwrap();
    let csv = path(&dir, "b.csv");
    let out = run(&[
        "bench",
        "fixed-ratio",
        "--sizes",
        "6,8,10",
        "--min-time",
        "0",
        "--max-runs",
        "2",
        "-o",
        &csv,
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert!(text.starts_with("suite,spec,n,algorithm,elapsed"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("fit ga:"));

    let out = run(&[
        "bench",
        "real-valued",
        "--sizes",
        "5,10,15",
        "--min-time",
        "0",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert!(v["records"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["verified"] == true));
    assert_eq!(v["fits"].as_array().unwrap().len(), 1);

    let out = run(&["bench", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!Path::new(&path(&dir, "nope")).exists());
}
