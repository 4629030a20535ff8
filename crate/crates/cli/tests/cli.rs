use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

fn fgft(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fgft")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn ok(args: &[&str]) -> Output {
    let out = fgft(args);
    assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn signal_values(text: &str) -> Vec<f64> {
    text.lines().skip(1).map(|l| l.trim().parse().unwrap()).collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&fgft(&["--help"])), 0);
    assert_eq!(code(&fgft(&[])), 1);
    assert_eq!(code(&fgft(&["frobnicate"])), 1);
    assert_eq!(code(&fgft(&["generate", "--model", "nope", "--out", "x"])), 1);
    assert_eq!(code(&fgft(&["reproduce", "fig9", "--out", "x"])), 1);
    let out = fgft(&[
        "generate",
        "--model",
        "erdos_renyi",
        "--n",
        "8",
        "--p",
        "1.5",
        "--out",
        "x",
    ]);
    assert_eq!(code(&out), 1);
    assert!(!out.stderr.is_empty());
}

#[test]
fn io_errors_exit_three() {
    let tmp = tempfile::tempdir().unwrap();
    let missing = tmp.path().join("missing.graph");
    let out = fgft(&[
        "factorize",
        path(&missing),
        "--J",
        "5",
        "--out",
        path(&tmp.path().join("t")),
    ]);
    assert_eq!(code(&out), 3);
    let bad = tmp.path().join("bad.graph");
    std::fs::write(&bad, "n 3\n1 9 1\n").unwrap();
    let out = fgft(&["eig", path(&bad)]);
    assert_eq!(code(&out), 3);
}

#[test]
fn factorize_then_apply_conserves_energy() {
    let tmp = tempfile::tempdir().unwrap();
    let graph = tmp.path().join("p3.graph");
    std::fs::write(&graph, "n 3\n1 2 1\n2 3 1\n").unwrap();
    let t = tmp.path().join("p3.fgft");
    ok(&["factorize", path(&graph), "--J", "50", "--out", path(&t)]);
    let x = tmp.path().join("x.csv");
    std::fs::write(&x, "n=3 domain=vertex\n1.0\n-2.0\n0.5\n").unwrap();
    let spectral = ok(&["apply", path(&t), path(&x)]);
    let text = String::from_utf8(spectral.stdout).unwrap();
    assert!(text.starts_with("n=3 domain=spectral\n"));
    let y = signal_values(&text);
    assert!((norm(&y) - norm(&[1.0, -2.0, 0.5])).abs() < 1e-12);

    let xt = tmp.path().join("xt.csv");
    std::fs::write(&xt, &text).unwrap();
    let back = tmp.path().join("back.csv");
    ok(&["apply", path(&t), path(&xt), "--inverse", "--out", path(&back)]);
    let z = signal_values(&std::fs::read_to_string(&back).unwrap());
    for (a, b) in z.iter().zip([1.0, -2.0, 0.5]) {
        assert!((a - b).abs() < 1e-12);
    }
    // a spectral signal is not a valid forward input
    assert_eq!(code(&fgft(&["apply", path(&t), path(&xt)])), 1);
}

#[test]
fn generate_eig_analyze_pipeline() {
    let tmp = tempfile::tempdir().unwrap();
    let graph = tmp.path().join("g.graph");
    ok(&[
        "generate",
        "--model",
        "sensor",
        "--n",
        "20",
        "--tau",
        "0.4",
        "--seed",
        "3",
        "--out",
        path(&graph),
    ]);
    assert!(tmp.path().join("g.graph.json").exists());

    let eig = tmp.path().join("eig.csv");
    ok(&["eig", path(&graph), "--out", path(&eig)]);
    let text = std::fs::read_to_string(&eig).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.starts_with("k,lambda,u1,"));
    assert_eq!(text.lines().count(), 21);

    let t = tmp.path().join("g.fgft");
    ok(&["factorize", path(&graph), "--converge", "--out", path(&t)]);
    let errors = ok(&["analyze", path(&graph), path(&t)]);
    let csv = String::from_utf8(errors.stdout).unwrap();
    assert_eq!(csv.lines().count(), 21);
    for line in csv.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!(cols[3].abs() < 1e-6 || cols[3] <= 4.0);
        assert!(
            (cols[1] - cols[2]).abs() < 1e-9,
            "converged transform recovers the spectrum"
        );
    }
}

#[test]
fn experiment_smoke_run() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let start = Instant::now();
    ok(&[
        "experiment",
        "--model",
        "erdos_renyi",
        "--n",
        "16",
        "--draws",
        "2",
        "--j-grid",
        "0,10",
        "--out",
        path(&out),
        "--gnuplot",
    ]);
    assert!(start.elapsed() < Duration::from_secs(1));
    for name in [
        "config.json",
        "err1.csv",
        "err2.csv",
        "err1_norm.csv",
        "err2_norm.csv",
        "density.csv",
        "baselines.csv",
        "summary.json",
        "plot.gp",
    ] {
        assert!(out.join(name).exists(), "{name}");
    }
    let err1 = std::fs::read_to_string(out.join("err1.csv")).unwrap();
    assert_eq!(err1.lines().next().unwrap(), "k\\J,0,10");
    assert_eq!(err1.lines().count(), 17);
}

#[test]
fn experiment_from_config_file() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"model":"sbm","n":16,"m":2,"c":3,"epsilon":0.1,"draws":2,"j_grid":[0,4,8],"seed":5}"#,
    )
    .unwrap();
    let out = tmp.path().join("run");
    ok(&["experiment", "--config", path(&cfg), "--out", path(&out)]);
    let err2 = std::fs::read_to_string(out.join("err2.csv")).unwrap();
    assert_eq!(err2.lines().next().unwrap(), "k\\J,0,4,8");
    std::fs::write(&cfg, r#"{"model":"sbm","unknown":1}"#).unwrap();
    assert_eq!(
        code(&fgft(&["experiment", "--config", path(&cfg), "--out", path(&out)])),
        3
    );
}

#[test]
fn reproduce_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    ok(&["reproduce", "fig2c", "--draws", "2", "--seed", "7", "--out", path(&a)]);
    ok(&["reproduce", "fig2c", "--draws", "2", "--seed", "7", "--out", path(&b)]);
    for name in ["err1.csv", "err1_norm.csv", "density.csv", "plot.gp", "preset.json"] {
        assert_eq!(
            std::fs::read(a.join(name)).unwrap(),
            std::fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }
}
