use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genuslab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn enumerate_to(dir: &Path, extra: &[&str]) -> String {
    let series = dir.join("series.json");
    let path = series.to_str().unwrap().to_string();
    let mut args = vec!["enumerate", "--group", "2", "--bound", "50", "--out", &path];
    args.extend_from_slice(extra);
    stdout(&args);
    path
}

#[test]
fn quadratic_fields_up_to_fifty() {
    let dir = tempfile::tempdir().unwrap();
    let records = dir.path().join("records.csv");
    let series = enumerate_to(dir.path(), &["--records", records.to_str().unwrap()]);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(series).unwrap()).unwrap();
    let last = v["checkpoints"].as_array().unwrap().last().unwrap();
    assert_eq!(last["bound"], 50);
    assert_eq!(last["count"], 30);
    let rows = std::fs::read_to_string(records).unwrap();
    assert_eq!(rows.lines().count(), 31);
    assert!(rows.starts_with("conductor,"));
}

#[test]
fn conditions_file_filters() {
    let dir = tempfile::tempdir().unwrap();
    let cond = dir.path().join("cond.txt");
    std::fs::write(&cond, "3 unramified\ninf split\n").unwrap();
    let series = enumerate_to(dir.path(), &["--conditions", cond.to_str().unwrap()]);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(series).unwrap()).unwrap();
    let count = v["checkpoints"].as_array().unwrap().last().unwrap()["count"]
        .as_u64()
        .unwrap();
    // Real quadratic fields of conductor <= 50 prime to 3: 5, 8, 13, 17, 28, 29, 37, 40, 41, 44.
    assert_eq!(count, 10);
}

#[test]
fn bad_condition_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cond = dir.path().join("cond.txt");
    std::fs::write(&cond, "4 unramified\n").unwrap();
    let out = run(&[
        "enumerate",
        "--group",
        "2",
        "--bound",
        "50",
        "--conditions",
        cond.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
}

#[test]
fn thread_count_does_not_change_output() {
    let a = stdout(&[
        "enumerate",
        "--group",
        "2,2",
        "--bound",
        "3000",
        "--threads",
        "1",
    ]);
    let b = stdout(&[
        "enumerate",
        "--group",
        "2,2",
        "--bound",
        "3000",
        "--threads",
        "3",
    ]);
    assert_eq!(a, b);
}

#[test]
fn oracle_csv() {
    let out = stdout(&["oracle", "--dmax", "100"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("D,h,genus_forms,genus_furuta,match"));
    let rows: Vec<_> = lines.collect();
    assert!(rows.iter().all(|r| r.ends_with(",true")));
    assert!(rows.contains(&"-84,4,4,4,true"));
}

#[test]
fn frobmean_json() {
    let v = json(&["frobmean", "--group", "2", "--qmax", "1000"]);
    assert_eq!(v["predicted"], 3.0);
    assert_eq!(v["empirical"], 3.0);
    assert_eq!(v["samples"], 167);
    let v = json(&[
        "frobmean",
        "--group",
        "3",
        "--subgroup",
        "-1",
        "--qmax",
        "20000",
    ]);
    assert_eq!(v["predicted"], 4.0);
    assert!((v["empirical"].as_f64().unwrap() - 4.0).abs() < 0.1);
}

#[test]
fn fit_density_and_predict() {
    let dir = tempfile::tempdir().unwrap();
    let series = dir.path().join("s.json");
    let path = series.to_str().unwrap();
    stdout(&[
        "enumerate",
        "--group",
        "2",
        "--bound",
        "100000",
        "--checkpoints",
        "quarter",
        "--out",
        path,
    ]);

    let fit = json(&["fit", "--series", path, "--stat", "count"]);
    assert_eq!(fit["predicted"], 1.0);
    assert!((fit["exponent"].as_f64().unwrap() - 1.0).abs() < 0.1);
    let table = stdout(&["fit", "--series", path, "--stat", "mean_genus", "--csv"]);
    assert!(table.starts_with("bound,value,fitted\n"));

    let density = json(&["density", "--series", path, "--genus", "1"]);
    let rows = density["rows"].as_array().unwrap();
    let first = rows.first().unwrap()["genus_proportion"].as_f64().unwrap();
    let last = rows.last().unwrap()["genus_proportion"].as_f64().unwrap();
    assert!(last < first);

    let predict = json(&[
        "predict", "--group", "2", "--qmax", "100000", "--series", path,
    ]);
    assert!((predict["surjection_constant"].as_f64().unwrap() - 0.1075303).abs() < 1e-6);
    assert!(!predict["ratios"].as_array().unwrap().is_empty());
}

#[test]
fn unknown_statistic_fails() {
    let dir = tempfile::tempdir().unwrap();
    let series = enumerate_to(dir.path(), &[]);
    assert!(!run(&["fit", "--series", &series, "--stat", "nonsense"])
        .status
        .success());
}
