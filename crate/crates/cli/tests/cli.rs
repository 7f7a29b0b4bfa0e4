use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_resp-dde"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value(out: &str, key: &str) -> String {
    out.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no `{key}` in output:\n{out}"))
        .to_string()
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn equilibrium_summary() {
    let o = run(&["equilibrium", "--alpha", "0.5", "--beta", "0.8"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(value(&s, "x*"), "29.1842");
    assert_eq!(value(&s, "y*"), "18.2401");
}

#[test]
fn critical_summary() {
    let o = run(&["critical", "--alpha", "0.6", "--beta", "0.6"]);
    assert!(o.status.success());
    assert_eq!(value(&stdout(&o), "tau*"), "24.9072");
}

#[test]
fn simulate_csv_ends_near_equilibrium() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "traj.csv");
    let o = run(&[
        "simulate", "--alpha", "0.5", "--beta", "0.8", "--tau", "15", "--tmax", "3000", "--out",
        &out,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x,y,V"));
    let last: Vec<f64> = text
        .lines()
        .last()
        .unwrap()
        .split(',')
        .map(|c| c.parse().unwrap())
        .collect();
    assert_eq!(last[0], 3000.0);
    assert!((last[1] - 29.1842).abs() < 1e-2, "{last:?}");
    assert!((last[2] - 18.2401).abs() < 1e-2, "{last:?}");
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["equilibrium", "--alpha", "-1"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["spectrum", "--tau", "-2"]).status.code(), Some(1));
    assert_eq!(run(&["table", "--taus", "1:0:1"]).status.code(), Some(1));
    // history far outside the physiological range blows up on the first step
    let blow = run(&["simulate", "--tau", "15", "--x0", "1e6", "--y0", "1000"]);
    assert_eq!(blow.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&blow.stderr).contains("non-finite"));
}

#[test]
fn unknown_command_or_flag_prints_usage() {
    for args in [
        &["frobnicate"][..],
        &["equilibrium", "--gamma", "1"][..],
        &[][..],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(
            String::from_utf8_lossy(&o.stderr).contains("Usage"),
            "{args:?}"
        );
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["equilibrium"],
        vec!["spectrum", "--tau", "30"],
        vec!["critical"],
        vec!["cooke"],
        vec!["hopf"],
        vec!["chart", "--points", "6"],
        vec!["chart", "--kind", "surface", "--grid", "4"],
        vec!["simulate", "--tau", "31", "--tmax", "500"],
        vec![
            "bifurcation",
            "--tau-from",
            "29",
            "--tau-to",
            "33",
            "--tau-step",
            "2",
            "--tmax",
            "1500",
        ],
        vec!["table", "--taus", "30,31"],
    ];
    for (i, case) in cases.iter().enumerate() {
        let mut contents = Vec::new();
        for round in 0..2 {
            let csv = p(dir.path(), &format!("{i}-{round}.csv"));
            let json = p(dir.path(), &format!("{i}-{round}.json"));
            let mut args = case.clone();
            args.extend(["--out", &csv, "--json", &json]);
            let o = run(&args);
            assert!(
                o.status.success(),
                "{case:?}: {}",
                String::from_utf8_lossy(&o.stderr)
            );
            contents.push((std::fs::read(&csv).unwrap(), std::fs::read(&json).unwrap()));
        }
        assert_eq!(contents[0], contents[1], "{case:?}");
    }
}

#[test]
fn sequential_and_parallel_write_the_same_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = p(dir.path(), "par.json");
    let b = p(dir.path(), "seq.json");
    assert!(
        run(&["chart", "--kind", "surface", "--grid", "5", "--json", &a])
            .status
            .success()
    );
    assert!(run(&[
        "--sequential",
        "chart",
        "--kind",
        "surface",
        "--grid",
        "5",
        "--json",
        &b
    ])
    .status
    .success());
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn json_round_trips_canonically() {
    let dir = tempfile::tempdir().unwrap();
    for case in [
        &["hopf"][..],
        &["spectrum", "--tau", "25"][..],
        &["critical", "--n-max", "2"][..],
    ] {
        let json = p(dir.path(), "r.json");
        let mut args = case.to_vec();
        args.extend(["--json", &json]);
        assert!(run(&args).status.success());
        let text = std::fs::read_to_string(&json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let mut again = serde_json::to_string_pretty(&v).unwrap();
        again.push('\n');
        assert_eq!(again, text, "{case:?}");
        assert_eq!(v["tool"]["name"], "resp-dde");
        assert_eq!(v["command"], case[0]);
        assert!(v["parameters"].is_object());
        assert!(v["tolerances"].is_object());
    }
}

#[test]
fn hopf_json_fields() {
    let dir = tempfile::tempdir().unwrap();
    let json = p(dir.path(), "h.json");
    assert!(
        run(&["hopf", "--alpha", "0.5", "--beta", "0.8", "--json", &json])
            .status
            .success()
    );
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    let r = &v["result"];
    assert!(r["mu2"].as_f64().unwrap() > 0.0);
    assert!(r["beta2"].as_f64().unwrap() < 0.0);
    assert!((r["tau_star"].as_f64().unwrap() - 30.8017).abs() < 1e-2);
}

#[test]
fn csv_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], &str); 6] = [
        (&["spectrum", "--tau", "30"], "re,im,residual"),
        (&["chart", "--points", "3"], "param,branch,n,tau"),
        (
            &["chart", "--kind", "surface", "--grid", "3"],
            "alpha,beta,tau_star",
        ),
        (&["table", "--taus", "30"], "alpha,beta,tau,max_re"),
        (
            &[
                "bifurcation",
                "--tau-from",
                "34",
                "--tau-to",
                "35",
                "--tmax",
                "1000",
            ],
            "tau,variable,extremum",
        ),
        (&["critical"], "branch,n,tau,residual"),
    ];
    for (args, header) in cases {
        let csv = p(dir.path(), "s.csv");
        let mut a = args.to_vec();
        a.extend(["--out", &csv]);
        let o = run(&a);
        assert!(
            o.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let text = std::fs::read_to_string(&csv).unwrap();
        assert_eq!(text.lines().next(), Some(header), "{args:?}");
        assert!(text.lines().count() > 1, "{args:?}");
    }
}

#[test]
fn svg_written() {
    let dir = tempfile::tempdir().unwrap();
    let svg = p(dir.path(), "t.svg");
    assert!(
        run(&["simulate", "--tau", "35", "--tmax", "800", "--svg", &svg])
            .status
            .success()
    );
    let text = std::fs::read_to_string(svg).unwrap();
    assert!(text.starts_with("<svg") && text.contains("<polyline"));
}

#[test]
fn config_file_sets_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = p(dir.path(), "run.conf");
    std::fs::write(
        &cfg,
        "# pair used in the chart examples\nalpha = 0.6\nbeta = 0.6\n",
    )
    .unwrap();
    let o = run(&["--config", &cfg, "critical"]);
    assert!(o.status.success());
    assert_eq!(value(&stdout(&o), "tau*"), "24.9072");
    let o = run(&[
        "--config", &cfg, "critical", "--alpha", "0.5", "--beta", "0.8",
    ]);
    assert_eq!(value(&stdout(&o), "tau*"), "30.8017");

    std::fs::write(&cfg, "gamma = 2\n").unwrap();
    assert_eq!(run(&["--config", &cfg, "critical"]).status.code(), Some(1));
}

#[test]
fn thread_env_is_validated() {
    let o = bin()
        .env("RESP_DDE_THREADS", "two")
        .arg("equilibrium")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = bin()
        .env("RESP_DDE_THREADS", "1")
        .arg("equilibrium")
        .output()
        .unwrap();
    assert!(o.status.success());
}
