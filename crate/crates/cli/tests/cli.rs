use std::path::PathBuf;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moldsched"))
        .args(args)
        .env_remove("MOLDSCHED_SEED")
        .output()
        .unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("moldsched-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn text(o: &Output) -> (String, String) {
    (
        String::from_utf8_lossy(&o.stdout).into_owned(),
        String::from_utf8_lossy(&o.stderr).into_owned(),
    )
}

fn value(line: &str, key: &str) -> f64 {
    let v = line
        .split_whitespace()
        .find_map(|kv| kv.strip_prefix(&format!("{key}=")))
        .unwrap();
    match v.split_once('/') {
        Some((a, b)) => a.parse::<f64>().unwrap() / b.parse::<f64>().unwrap(),
        None => v.parse().unwrap(),
    }
}

#[test]
fn solve_round_trip_and_ratio() {
    let inst = scratch("inst.json");
    let sched = scratch("sched.json");
    let opt_sched = scratch("opt.json");
    let i = inst.to_str().unwrap();
    assert!(
        bin(&["gen", "random", "--n", "4", "--m", "6", "--seed", "11", "--out", i])
            .status
            .success()
    );
    assert!(bin(&["validate", i]).status.success());

    let o = bin(&[
        "solve",
        "--algo",
        "auto",
        "--eps",
        "0.5",
        i,
        "--out",
        sched.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{:?}", text(&o));
    let makespan = value(&text(&o).0, "makespan");

    let o = bin(&["validate", i, "--schedule", sched.to_str().unwrap()]);
    assert!(o.status.success(), "{:?}", text(&o));
    assert_eq!(
        value(text(&o).0.lines().last().unwrap(), "makespan"),
        makespan
    );

    let o = bin(&["oracle", i, "--out", opt_sched.to_str().unwrap()]);
    assert!(o.status.success());
    let opt = value(&text(&o).0, "opt");
    assert!(makespan <= 2.0 * opt + 1e-9, "{makespan} vs OPT {opt}");

    for algo in ["mrt-simple", "mrt-bounded", "mrt-linear"] {
        let o = bin(&["solve", "--algo", algo, "--eps", "1/10", i]);
        assert!(o.status.success(), "{algo}");
        let schedule: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(schedule.as_object().unwrap().len(), 4);
        assert!(value(&text(&o).1, "makespan") <= 1.6 * opt + 1e-9);
    }
}

#[test]
fn input_errors_exit_one() {
    let bad = scratch("bad.json");
    std::fs::write(
        &bad,
        r#"{"m":3,"jobs":[{"id":"x","oracle":{"kind":"table","times":["6","2","1"]}}]}"#,
    )
    .unwrap();
    let o = bin(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(text(&o).1.contains("k=2"), "{:?}", text(&o));

    let broken = scratch("broken.json");
    std::fs::write(&broken, "{\"m\": 3,").unwrap();
    assert_eq!(
        bin(&["validate", broken.to_str().unwrap()]).status.code(),
        Some(1)
    );

    let fine = scratch("fine.json");
    std::fs::write(
        &fine,
        r#"{"m":2,"jobs":[{"id":"p","oracle":{"kind":"power","t1":"7/2","theta":0.5}}]}"#,
    )
    .unwrap();
    let o = bin(&["solve", "--algo", "fptas", fine.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "m below 8n/eps is a domain error");
    assert_eq!(
        bin(&["solve", "--eps", "0", fine.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn generators() {
    let o = bin(&["gen", "fourpartition", "--numbers", "3,3,3,3", "--B", "12"]);
    assert!(o.status.success());
    let inst: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(inst["m"], 1);
    assert_eq!(inst["jobs"][0]["oracle"]["kind"], "reduction");
    assert!(text(&o).1.contains("target=12"));

    let o = bin(&["gen", "fourpartition", "--numbers", "3,3,3,4", "--B", "14"]);
    assert!(o.status.success());
    assert!(text(&o).0.starts_with("no-instance"));

    let a = bin(&[
        "gen", "random", "--n", "3", "--m", "4", "--family", "table", "--seed", "5",
    ]);
    let b = Command::new(env!("CARGO_BIN_EXE_moldsched"))
        .args(["gen", "random", "--n", "3", "--m", "4", "--family", "table"])
        .env("MOLDSCHED_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bench_csv() {
    let o = bin(&[
        "bench",
        "--suite",
        "scaling",
        "--sizes",
        "50,100",
        "--threads",
        "2",
    ]);
    assert!(o.status.success(), "{:?}", text(&o));
    let out = text(&o).0;
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,m,eps,algo,makespan,lower_bound,ratio_vs_lb,wall_time,makespan_exact,lower_bound_exact"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2);
    for r in &rows {
        assert_eq!(r.len(), 10);
        assert_eq!(r[1], "1099511627776");
        assert!(r[6].parse::<f64>().unwrap() >= 1.0);
    }
}

#[test]
fn hidden_selftest() {
    let o = bin(&["kpc-selftest", "--count", "100", "--seed", "3"]);
    assert!(o.status.success());
    assert!(text(&o).0.contains("0 violations"));
}
