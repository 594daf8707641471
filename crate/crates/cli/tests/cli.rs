use std::path::Path;
use std::process::{Command, Output};

fn osinfo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_osinfo")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn measures_profile_rows() {
    let out = stdout(&osinfo(&["measures", "--dist", "salt-pepper:150,0.3,0.05", "--n", "16", "--m", "1", "--base", "2"]));
    assert!(out.lines().any(|l| l == "12,0.999970727"), "{out}");
    assert_eq!(out.lines().count(), 17);

    let out = stdout(&osinfo(&["measures", "--dist", "cauchy:0,0.0002", "--n", "25", "--m", "3"]));
    assert!(out.lines().any(|l| l == "1,inf"));
    assert!(out.lines().any(|l| l == "25,inf"));

    let out = stdout(&osinfo(&["measures", "--dist", "bernoulli:0.5", "--n", "1", "--m", "3"]));
    assert!(out.lines().any(|l| l == "1,0.25"));
}

#[test]
fn config_is_echoed_to_stderr() {
    let out = osinfo(&["measures", "--dist", "bernoulli:0.5", "--n", "3"]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bernoulli:0.5") && err.contains("n: 3"), "{err}");
}

#[test]
fn select_bernoulli_listings() {
    let out = stdout(&osinfo(&["select", "--dist", "bernoulli:0.5", "--n", "19", "--m", "1", "--k", "4"]));
    for line in [
        "marginal,4,10 9 11 8",
        "joint,2,9 11",
        "joint,3,8 10 12",
        "joint,4,8 9 10 12",
        "sequential,4,10 8 12 9",
    ] {
        assert!(out.lines().any(|l| l == line), "missing {line}: {out}");
    }
}

#[test]
fn select_k1_agrees_across_approaches() {
    let out = stdout(&osinfo(&["select", "--dist", "uniform:0,1", "--n", "7", "--m", "3", "--k", "1"]));
    let firsts: Vec<&str> = out.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(firsts, ["4", "4", "4"]);
}

#[test]
fn coeffs_csv_sums_to_one() {
    let out = stdout(&osinfo(&["coeffs", "--w", "3", "--rates", "0.7,0.3"]));
    let total: f64 = out.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-8);
    let out = stdout(&osinfo(&["coeffs", "--w", "3", "--filter", "median"]));
    assert!(out.contains("5,1\n"));
    let out = stdout(&osinfo(&["coeffs", "--w", "5", "--noise", "cauchy:0,2"]));
    assert!(out.contains("1,0\n") && out.contains("25,0\n"));
}

#[test]
fn bad_inputs_fail_with_one_line() {
    for args in [
        &["measures", "--dist", "weibull:1,2", "--n", "4"][..],
        &["measures", "--dist", "bernoulli:2", "--n", "4"],
        &["quality", "--reference", "/nonexistent.pgm", "--image", "/nonexistent.pgm"],
    ] {
        let out = osinfo(args);
        assert!(!out.status.success());
        let err = String::from_utf8_lossy(&out.stderr);
        let diag: Vec<&str> = err.lines().filter(|l| l.starts_with("error:")).collect();
        assert_eq!(diag.len(), 1, "{err}");
    }
}

#[test]
fn image_round_trip_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let clean = path(dir.path(), "clean.pgm");
    let noisy = path(dir.path(), "noisy.pgm");
    let same = path(dir.path(), "same.pgm");
    let fixed = path(dir.path(), "fixed.pgm");
    let median = path(dir.path(), "median.pgm");

    stdout(&osinfo(&["synth", "--width", "96", "--height", "96", "--seed", "4", "--out", &clean]));
    stdout(&osinfo(&["addnoise", "--input", &clean, "--out", &same, "--sp", "0,0"]));
    assert_eq!(std::fs::read(&clean).unwrap(), std::fs::read(&same).unwrap());

    stdout(&osinfo(&["addnoise", "--input", &clean, "--out", &noisy, "--sp", "0.7,0.3", "--seed", "9"]));
    stdout(&osinfo(&["denoise", "--input", &noisy, "--out", &fixed, "--w", "5", "--coeffs", "entropy"]));
    stdout(&osinfo(&["denoise", "--input", &noisy, "--out", &median, "--w", "5", "--filter", "median"]));

    let mse = |img: &str| -> f64 {
        let out = stdout(&osinfo(&["quality", "--reference", &clean, "--image", img]));
        out.lines().find_map(|l| l.strip_prefix("mse,")).unwrap().parse().unwrap()
    };
    assert!(mse(&fixed) < mse(&median));

    let out = stdout(&osinfo(&["quality", "--reference", &clean, "--image", &clean]));
    for line in ["mse,0", "ssim,1", "iqi,1"] {
        assert!(out.lines().any(|l| l == line), "{out}");
    }
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let clean = path(dir.path(), "c.pgm");
    stdout(&osinfo(&["synth", "--width", "40", "--height", "30", "--seed", "1", "--out", &clean]));
    let mut outputs = Vec::new();
    for run in 0..2 {
        let noisy = path(dir.path(), &format!("n{run}.pgm"));
        let fixed = path(dir.path(), &format!("f{run}.pgm"));
        stdout(&osinfo(&["addnoise", "--input", &clean, "--out", &noisy, "--sp", "0.4,0.5", "--seed", "3"]));
        stdout(&osinfo(&["denoise", "--input", &noisy, "--out", &fixed, "--w", "3", "--coeffs", "sequential", "--d", "3"]));
        outputs.push((std::fs::read(&noisy).unwrap(), std::fs::read(&fixed).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    let a = stdout(&osinfo(&["measures", "--dist", "gmix:-2/0.15/0.5,2/0.1/0.5", "--n", "9", "--m", "2", "--seed", "5"]));
    let b = stdout(&osinfo(&["measures", "--dist", "gmix:-2/0.15/0.5,2/0.1/0.5", "--n", "9", "--m", "2", "--seed", "5"]));
    assert_eq!(a, b);
}

#[test]
fn even_window_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let clean = path(dir.path(), "c.pgm");
    let out_path = path(dir.path(), "o.pgm");
    stdout(&osinfo(&["synth", "--width", "16", "--height", "16", "--out", &clean]));
    let out = osinfo(&["denoise", "--input", &clean, "--out", &out_path, "--w", "4", "--filter", "median"]);
    assert!(!out.status.success());
}
