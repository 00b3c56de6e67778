use std::process::{Command, Output};

use gentrig::report::{from_json_str, read_csv};
use gentrig::Verdict;

fn gentrig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gentrig")).args(args).env_remove("GENTRIG_THREADS").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const SIN_CONCAVE: &[&str] = &[
    "scan",
    "--property",
    "concave",
    "--kind",
    "sin",
    "--p-min",
    "1.5",
    "--p-max",
    "4",
    "--p-steps",
    "4",
    "--y-min",
    "0.1",
    "--y-max",
    "0.9",
    "--y-steps",
    "3",
];

#[test]
fn eval_matches_classical_sine() {
    let o = gentrig(&["eval", "--kind", "sin", "--p", "2", "--y", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("kind,p,y,value,deviation,one_minus,residual,abs_err"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let value: f64 = row[3].parse().unwrap();
    assert!((value - 1f64.sin()).abs() < 1e-12, "{value}");
}

#[test]
fn derivs_json_has_schema_version() {
    let o = gentrig(&["derivs", "--kind", "sin", "--p", "2", "--y", "0.5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert!(v["d2g_dp2"].as_f64().unwrap() < 0.0);
}

#[test]
fn certified_scan_exits_zero() {
    let o = gentrig(SIN_CONCAVE);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = read_csv(o.stdout.as_slice()).unwrap();
    assert_eq!((r.p_grid.len(), r.y_grid.len()), (4, 3));
    assert_eq!(r.overall(), Verdict::Holds);
}

#[test]
fn negative_control_exits_one() {
    let o = gentrig(&[
        "scan",
        "--property",
        "log-convex",
        "--kind",
        "tan",
        "--p-min",
        "0.1",
        "--p-max",
        "0.95",
        "--p-steps",
        "4",
        "--y-min",
        "0.1",
        "--y-max",
        "0.6",
        "--y-steps",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains(",fails\n"));
}

#[test]
fn loose_tolerance_exits_three() {
    let o = gentrig(&[
        "scan",
        "--property",
        "concave",
        "--kind",
        "sin",
        "--p-min",
        "1.5",
        "--p-max",
        "1.5",
        "--p-steps",
        "1",
        "--y-min",
        "0.9",
        "--y-max",
        "0.9",
        "--y-steps",
        "1",
        "--tol",
        "0.5",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains(",inconclusive\n"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(gentrig(&["scan", "--kind", "sin"]).status.code(), Some(2));
    assert_eq!(gentrig(&["eval", "--kind", "sec", "--p", "2", "--y", "1"]).status.code(), Some(2));
    let reversed = gentrig(&["scan", "--property", "concave", "--kind", "sin", "--p-min", "2", "--p-max", "1"]);
    assert_eq!(reversed.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&reversed.stderr).contains("min < max"));
    assert_eq!(gentrig(&["turan", "--kind", "cosh", "--p", "3", "--y", "0.5"]).status.code(), Some(2));
    assert_eq!(gentrig(&["eval", "--kind", "sin", "--p", "-1", "--y", "0.5"]).status.code(), Some(2));
}

#[test]
fn file_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("scan.csv");
    let json_path = dir.path().join("scan.json");
    let mut args = SIN_CONCAVE.to_vec();
    let csv_str = csv_path.to_str().unwrap();
    args.extend(["--output", csv_str]);
    let o = gentrig(&args);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let from_csv = read_csv(std::fs::File::open(&csv_path).unwrap()).unwrap();

    let mut args = SIN_CONCAVE.to_vec();
    let json_str = json_path.to_str().unwrap();
    args.extend(["--format", "json", "-o", json_str]);
    assert_eq!(gentrig(&args).status.code(), Some(0));
    let from_json = from_json_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert!(from_json.same_table(&from_csv));
    assert!(from_json.meta.is_some());

    let leftovers = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(leftovers, 2, "temporary files left behind");
}

#[test]
fn thread_count_does_not_change_output() {
    let serial =
        Command::new(env!("CARGO_BIN_EXE_gentrig")).args(SIN_CONCAVE).env("GENTRIG_THREADS", "1").output().unwrap();
    let parallel =
        Command::new(env!("CARGO_BIN_EXE_gentrig")).args(SIN_CONCAVE).env("GENTRIG_THREADS", "4").output().unwrap();
    assert_eq!(serial.status.code(), Some(0));
    assert_eq!(serial.stdout, parallel.stdout);

    let bad =
        Command::new(env!("CARGO_BIN_EXE_gentrig")).args(SIN_CONCAVE).env("GENTRIG_THREADS", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn turan_lemma3_and_find_p0_run() {
    let t = gentrig(&["turan", "--kind", "sin", "--p", "3", "--y", "0.5"]);
    assert_eq!(t.status.code(), Some(0));
    assert!(stdout(&t).contains("turan-sin,sin,"));

    let l = gentrig(&["lemma3", "--p-steps", "2", "--s-steps", "2"]);
    assert_eq!(l.status.code(), Some(0));
    assert_eq!(stdout(&l).lines().count(), 5);

    let f = gentrig(&["find-p0", "--y-steps", "2"]);
    assert_eq!(f.status.code(), Some(0));
    let text = stdout(&f);
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[1], "threshold");
        let p: f64 = cols[2].parse().unwrap();
        assert!(p > 0.05 && p < 1.0, "{p}");
    }
}
