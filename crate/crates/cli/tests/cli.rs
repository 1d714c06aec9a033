use std::path::Path;
use std::process::{Command, Output};

const CONFIG: &str = r#"
algorithm = "al_q_ik"
trials = 10
seed = 7

[problem]
k = 1
rho = 0.1
eps = 0.1
delta = 0.1

[arms]
kind = "uniform"

[sweep]
param = "k"
values = [1, 2, 4]
"#;

const HEADER: &str = "algorithm,k,rho,m,n,eps,delta,bound,prior,trial,seed,samples,success,wall_ms";

fn qexplore(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qexplore"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn run_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "a.toml", CONFIG);
    let out = dir.path().join("out.csv");
    let o = qexplore(&["run", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().next().unwrap(), HEADER);
    assert_eq!(csv.lines().count(), 31);
    let summary = String::from_utf8(o.stdout).unwrap();
    assert!(summary.contains("mean_samples"));
    assert_eq!(summary.lines().count(), 4);

    let again = dir.path().join("again.csv");
    let o = qexplore(&["run", &cfg, "--out", again.to_str().unwrap(), "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(csv, std::fs::read_to_string(&again).unwrap());
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "a.toml", CONFIG);
    let o = qexplore(&["run", &cfg, "--trials", "2", "--seed", "99"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = String::from_utf8(o.stdout).unwrap();
    assert_eq!(csv.lines().count(), 7);
    let o7 = qexplore(&["run", &cfg, "--trials", "2"]);
    assert_ne!(csv, String::from_utf8(o7.stdout).unwrap());
}

#[test]
fn config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "e.toml", &CONFIG.replace("[1, 2, 4]", "[]"));
    let o = qexplore(&["run", &empty]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("empty sweep axis"));

    let bad = write(
        dir.path(),
        "b.toml",
        &CONFIG.replace("eps = 0.1", "eps = 2.0"),
    );
    let o = qexplore(&["run", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`problem`"));

    let o = qexplore(&["run", "/nonexistent/config.toml"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let row = |trial: usize, success: bool| {
        format!("al_q_ik,1,0.1,,,0.1,0.1,none,uniform,{trial},{trial},100,{success},0")
    };
    let good: Vec<String> = (0..100).map(|t| row(t, t >= 10)).collect();
    let good = write(
        dir.path(),
        "good.csv",
        &format!("{HEADER}\n{}\n", good.join("\n")),
    );
    let o = qexplore(&["verify", &good]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stdout)
    );
    assert!(String::from_utf8_lossy(&o.stdout).contains("pass"));

    let bad: Vec<String> = (0..100).map(|t| row(t, t >= 30)).collect();
    let bad = write(
        dir.path(),
        "bad.csv",
        &format!("{HEADER}\n{}\n", bad.join("\n")),
    );
    let o = qexplore(&["verify", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));

    let junk = write(dir.path(), "junk.csv", "a,b\n1,2\n");
    assert_eq!(qexplore(&["verify", &junk]).status.code(), Some(1));
}

#[test]
fn run_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "a.toml",
        &CONFIG.replace("trials = 10", "trials = 30"),
    );
    let out = dir.path().join("out.csv");
    assert_eq!(
        qexplore(&["run", &cfg, "--out", out.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
    let o = qexplore(&["verify", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn compare_reports_ratios() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.toml", CONFIG);
    let b = write(dir.path(), "b.toml", &CONFIG.replace("al_q_ik", "iur"));
    let o = qexplore(&["compare", &a, &b]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("k = 1") && text.contains("k = 4"));
    assert!(text.contains("iur") && text.contains("ratio"));

    let c = write(dir.path(), "c.toml", &CONFIG.replace("[1, 2, 4]", "[1, 2]"));
    let o = qexplore(&["compare", &a, &c]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sweep"));
}
