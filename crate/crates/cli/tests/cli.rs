use std::process::{Command, Output};

fn flipchain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flipchain"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn count_sphere_four() {
    let o = flipchain(&["count", "--n", "4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "32");
}

#[test]
fn gen_lists_every_class_member() {
    let o = flipchain(&["gen", "--n", "4"]);
    assert_eq!(stdout(&o).lines().count(), 32);
    let o = flipchain(&["gen", "--n", "2", "--p", "1"]);
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn sample_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.tri");
    let b = dir.path().join("b.tri");
    for p in [&a, &b] {
        let o = flipchain(&["sample", "--n", "1000", "--seed", "7", "--out", p.to_str().unwrap()]);
        assert!(o.status.success());
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    assert!(x.starts_with(b"TRI1 "));
    let o = flipchain(&["sample", "--n", "1000", "--seed", "8"]);
    assert_ne!(o.stdout, x);
}

#[test]
fn exact_mixing_report_flags() {
    let o = flipchain(&["exact", "--n", "4", "--report", "mixing"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["states"], 32);
    assert_eq!(v["connected"], true);
    for flag in ["symmetric", "doubly_stochastic", "uniform_stationary", "irreducible", "aperiodic"] {
        assert_eq!(v["stationarity"][flag], true, "{flag}");
    }
    assert!(v["t_mix_quarter"].as_u64().unwrap() > 0);
    let tv = v["tv_curve"].as_array().unwrap();
    assert!((tv[0].as_f64().unwrap() - (1.0 - 1.0 / 32.0)).abs() < 1e-12);
}

#[test]
fn exit_codes_for_bad_input() {
    assert_eq!(flipchain(&["count", "--n", "4", "--p", "0"]).status.code(), Some(2));
    assert_eq!(flipchain(&["exact", "--n", "7"]).status.code(), Some(2));
    assert_eq!(flipchain(&["nonsense"]).status.code(), Some(2));
    assert_eq!(flipchain(&["scaling", "--sizes", ""]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tri");
    std::fs::write(&bad, "TRI1 2 0 S\n0 0 1\n1 1 0\n").unwrap();
    let o = flipchain(&["cycles", "--input", bad.to_str().unwrap(), "--len-max", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn chain_and_frontier_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("steps.csv");
    let arr = dir.path().join("arr.csv");
    let o = flipchain(&[
        "frontier", "--n", "40", "--steps", "200", "--replicas", "3", "--out",
        out.to_str().unwrap(), "--arrivals", arr.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config="));
    assert_eq!(lines.next().unwrap(), "replica,k,Ptilde,Vtilde,event");
    assert_eq!(lines.count(), 3 * 201);
    let arrivals = std::fs::read_to_string(&arr).unwrap();
    assert_eq!(arrivals.lines().nth(1).unwrap(), "replica,j,tau_j,P_j,V_j");
    assert!(arrivals.lines().nth(2).unwrap().starts_with("0,0,0,"));

    let run = || flipchain(&["chain", "--n", "30", "--steps", "50", "--replicas", "4", "--seed", "3"]);
    let (a, b) = (run(), run());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 2 + 4 * 50);
}

#[test]
fn cycles_on_glued_start_finds_the_loop() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("g.tri");
    let o = flipchain(&["sample", "--n", "201", "--glued", "--out", m.to_str().unwrap()]);
    assert!(o.status.success());
    let o = flipchain(&["cycles", "--input", m.to_str().unwrap(), "--len-max", "1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["found"], true);
    assert_eq!(v["witness"]["length"], 1);
    assert_eq!(v["witness"]["side_a"].as_u64().unwrap() + v["witness"]["side_b"].as_u64().unwrap(), 200);
}

#[test]
fn lowerbound_signal_with_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("lb.cfg");
    std::fs::write(&cfg, "# small run\nn = 301\nschedule = 0\nell = 1\nreplicas = 3\nseed = 5\n").unwrap();
    let out = dir.path().join("lb.csv");
    let sum = dir.path().join("lb.json");
    let args = [
        "lowerbound-signal", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(),
        "--summary", sum.to_str().unwrap(),
    ];
    assert!(flipchain(&args).status.success());
    let first = std::fs::read(&out).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&sum).unwrap()).unwrap();
    assert_eq!(v["freq_chain"], 1.0);
    assert_eq!(v["seed"], 5);
    let text = String::from_utf8(first.clone()).unwrap();
    assert!(text.starts_with(&format!("# config={} seed=5", v["config_hash"].as_str().unwrap())));
    assert!(flipchain(&args).status.success());
    assert_eq!(std::fs::read(&out).unwrap(), first);
}
