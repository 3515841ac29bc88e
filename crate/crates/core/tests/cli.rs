use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tempfile::TempDir;

const ALANINE: &str = "\
# 13C alanine, transmitter on CA
spin 1 C' 12580
spin 2 CA 0
spin 3 CB -3443
J 1 2 54.2
J 2 3 35.1
J 1 3 1.2
";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spinsim"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn spinsim")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn report_value(report: &str, key: &str) -> String {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key} ")))
        .unwrap_or_else(|| panic!("no {key} in report:\n{report}"))
        .to_owned()
}

#[test]
fn convert_three_body_coefficient() {
    let dir = TempDir::new().unwrap();
    let input = write(
        dir.path(),
        "a.txt",
        "n=3 kind=alpha\n0\n0\n0\n0\n0\n0\n0\n2.5\n",
    );
    let out = run(&["convert", s(&input)]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let values: Vec<f64> = text.lines().skip(1).map(|l| l.parse().unwrap()).collect();
    assert_eq!(text.lines().next(), Some("n=3 kind=xi"));
    assert_eq!(values, [2.5, -2.5, -2.5, 2.5, -2.5, 2.5, 2.5, -2.5]);
}

#[test]
fn convert_zero_vector() {
    let dir = TempDir::new().unwrap();
    let input = write(dir.path(), "x.txt", "n=2 kind=xi\n0\n0\n0\n0\n");
    let out = dir.path().join("a.txt");
    assert!(run(&["convert", s(&input), "--out", s(&out)])
        .status
        .success());
    let text = fs::read_to_string(out).unwrap();
    assert_eq!(
        text,
        "n=2 kind=alpha\n0.00000000000e0\n0.00000000000e0\n0.00000000000e0\n0.00000000000e0\n"
    );
}

#[test]
fn convert_twice_reproduces_the_text() {
    // values on a dyadic grid transcode without rounding, so the text is stable
    let mut rng = StdRng::seed_from_u64(7);
    let dir = TempDir::new().unwrap();
    let mut text = String::from("n=3 kind=xi\n");
    for _ in 0..8 {
        text.push_str(&format!(
            "{:.11e}\n",
            rng.gen_range(-4096i32..4096) as f64 / 64.0
        ));
    }
    let x = write(dir.path(), "x.txt", &text);
    let a = dir.path().join("a.txt");
    let x2 = dir.path().join("x2.txt");
    assert!(run(&["convert", s(&x), "--out", s(&a)]).status.success());
    assert!(run(&["convert", s(&a), "--out", s(&x2)]).status.success());
    assert_eq!(fs::read_to_string(x2).unwrap(), text);
}

#[test]
fn convert_generic_values_round_trip_numerically() {
    let mut rng = StdRng::seed_from_u64(8);
    let dir = TempDir::new().unwrap();
    let orig: Vec<f64> = (0..8).map(|_| rng.gen_range(-100.0..100.0)).collect();
    let mut text = String::from("n=3 kind=alpha\n");
    for v in &orig {
        text.push_str(&format!("{v:.11e}\n"));
    }
    let a = write(dir.path(), "a.txt", &text);
    let x = dir.path().join("x.txt");
    let a2 = dir.path().join("a2.txt");
    assert!(run(&["convert", s(&a), "--out", s(&x)]).status.success());
    assert!(run(&["convert", s(&x), "--out", s(&a2)]).status.success());
    let back: Vec<f64> = fs::read_to_string(a2)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.parse().unwrap())
        .collect();
    for (b, o) in back.iter().zip(&orig) {
        assert!((b - o).abs() <= 1e-9, "{b} vs {o}");
    }
}

#[test]
fn malformed_vector_reports_line() {
    let dir = TempDir::new().unwrap();
    let input = write(dir.path(), "bad.txt", "n=1 kind=xi\n1\nnope\n");
    let out = run(&["convert", s(&input)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn compile_three_body_on_alanine() {
    let dir = TempDir::new().unwrap();
    let sys = write(dir.path(), "ala.sys", ALANINE);
    let tgt = write(
        dir.path(),
        "zzz.tgt",
        "time 0.0142450142\nterm 1,2,3 35.1\n",
    );
    let out_dir = dir.path().join("out");
    let out = run(&[
        "compile",
        "--sys",
        s(&sys),
        "--target",
        s(&tgt),
        "--out",
        s(&out_dir),
        "--tol",
        "1e-10",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = fs::read_to_string(out_dir.join("report.txt")).unwrap();
    assert_eq!(report_value(&report, "delays"), "3");
    assert_eq!(report_value(&report, "pulses"), "5");
    assert_eq!(report_value(&report, "status"), "pass");
    assert!(report_value(&report, "distance").parse::<f64>().unwrap() <= 1e-10);

    // the written sequence verifies on its own
    let seq = out_dir.join("sequence.txt");
    let out = run(&[
        "verify",
        s(&seq),
        "--sys",
        s(&sys),
        "--target",
        s(&tgt),
        "--tol",
        "1e-10",
    ]);
    assert!(out.status.success());

    // and fails in realistic mode without refocusing
    let out = run(&[
        "verify",
        s(&seq),
        "--sys",
        s(&sys),
        "--target",
        s(&tgt),
        "--mode",
        "realistic",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(
        report_value(&String::from_utf8(out.stdout).unwrap(), "status"),
        "fail"
    );
}

#[test]
fn compile_realistic_mode_refocuses() {
    let dir = TempDir::new().unwrap();
    let sys = write(dir.path(), "ala.sys", ALANINE);
    let tgt = write(dir.path(), "zzz.tgt", "time 0.01\nterm 1,2,3 35.1\n");
    let out = run(&[
        "compile",
        "--sys",
        s(&sys),
        "--target",
        s(&tgt),
        "--mode",
        "realistic",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let seq = String::from_utf8(out.stdout).unwrap();
    assert!(seq.lines().any(|l| l.ends_with("FULL")));
}

#[test]
fn identity_target_gives_empty_sequence() {
    let dir = TempDir::new().unwrap();
    let sys = write(dir.path(), "ala.sys", ALANINE);
    let tgt = write(dir.path(), "id.tgt", "time 0.02\n");
    let out = run(&["compile", "--sys", s(&sys), "--target", s(&tgt)]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "n=3\n");
}

#[test]
fn five_body_chain() {
    let dir = TempDir::new().unwrap();
    let mut chain = String::new();
    for i in 1..=5 {
        chain.push_str(&format!("spin {i} S{i} 0\n"));
    }
    for i in 1..5 {
        chain.push_str(&format!("J {i} {} 50\n", i + 1));
    }
    let sys = write(dir.path(), "chain.sys", &chain);
    let tgt = write(dir.path(), "t.tgt", "time 0.004\nterm 1,2,3,4,5 20\n");
    let out_dir = dir.path().join("o");
    let out = run(&[
        "compile",
        "--sys",
        s(&sys),
        "--target",
        s(&tgt),
        "--out",
        s(&out_dir),
    ]);
    assert!(out.status.success());
    let report = fs::read_to_string(out_dir.join("report.txt")).unwrap();
    assert_eq!(report_value(&report, "delays"), "7");
}

#[test]
fn unroutable_target_exits_with_routing_code() {
    let dir = TempDir::new().unwrap();
    let sys = write(
        dir.path(),
        "open.sys",
        "spin 1 A 0\nspin 2 B 0\nspin 3 C 0\nJ 1 2 40\n",
    );
    let tgt = write(dir.path(), "t.tgt", "time 0.01\nterm 1,3 10\n");
    let out = run(&["compile", "--sys", s(&sys), "--target", s(&tgt)]);
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("spins 3 and 1"), "{err}");
}

#[test]
fn parse_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let sys = write(dir.path(), "bad.sys", "spin 1 A 0\ncolour 2\n");
    let tgt = write(dir.path(), "t.tgt", "time 1\n");
    let out = run(&["compile", "--sys", s(&sys), "--target", s(&tgt)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 2"));
    assert_eq!(run(&["compile", "--sys", s(&sys)]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

fn spectrum_rows(path: &Path) -> Vec<(f64, f64, f64)> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (v[0], v[1], v[2])
        })
        .collect()
}

#[test]
fn simulate_theta_series() {
    let dir = TempDir::new().unwrap();
    let sys = write(dir.path(), "ala.sys", ALANINE);
    let out_dir = dir.path().join("sim");
    let out = run(&[
        "simulate",
        "--sys",
        s(&sys),
        "--theta",
        "0,pi/2,2pi",
        "--out",
        s(&out_dir),
        "--points",
        "1024",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let zero = spectrum_rows(&out_dir.join("spectrum_000.csv"));
    let half = spectrum_rows(&out_dir.join("spectrum_001.csv"));
    let full = spectrum_rows(&out_dir.join("spectrum_002.csv"));
    assert_eq!(zero.len(), 1024);
    let real_sum = |rows: &[(f64, f64, f64)]| rows.iter().map(|r| r.1).sum::<f64>();
    assert!(real_sum(&half).abs() <= 1e-6 * real_sum(&zero));
    let rms = (zero
        .iter()
        .zip(&full)
        .map(|(a, b)| (a.1 - b.1).powi(2) + (a.2 - b.2).powi(2))
        .sum::<f64>()
        / zero.len() as f64)
        .sqrt();
    assert!(rms <= 1e-6);
    // θ = 0: four positive lines
    for f in [-44.65, -9.55, 9.55, 44.65] {
        let near: f64 = zero
            .iter()
            .filter(|r| (r.0 - f).abs() < 8.0)
            .map(|r| r.1)
            .sum();
        assert!(near > 0.0);
    }
    let index = fs::read_to_string(out_dir.join("thetas.csv")).unwrap();
    assert_eq!(index.lines().count(), 4);
    assert!(out_dir.join("fid_001.csv").exists());
}

#[test]
fn simulate_is_byte_deterministic() {
    let dir = TempDir::new().unwrap();
    let sys = write(dir.path(), "ala.sys", ALANINE);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for d in [&a, &b] {
        let out = run(&[
            "simulate",
            "--sys",
            s(&sys),
            "--theta",
            "0:2pi:6",
            "--out",
            s(d),
            "--points",
            "256",
        ]);
        assert!(out.status.success());
    }
    for k in 0..6 {
        let name = format!("spectrum_{k:03}.csv");
        assert_eq!(
            fs::read(a.join(&name)).unwrap(),
            fs::read(b.join(&name)).unwrap()
        );
    }
}

#[test]
fn simulate_sequence_file_matches_theta_run() {
    let dir = TempDir::new().unwrap();
    let sys = write(dir.path(), "ala.sys", ALANINE);
    let tgt = write(dir.path(), "t.tgt", "time 0.0142450142\nterm 1,2,3 35.1\n");
    let c = dir.path().join("c");
    assert!(run(&[
        "compile",
        "--sys",
        s(&sys),
        "--target",
        s(&tgt),
        "--out",
        s(&c)
    ])
    .status
    .success());
    let from_seq = dir.path().join("s");
    let out = run(&[
        "simulate",
        "--sys",
        s(&sys),
        s(&c.join("sequence.txt")),
        "--out",
        s(&from_seq),
        "--points",
        "512",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    // π·35.1·0.0142450142 ≈ π/2
    let from_theta = dir.path().join("t");
    assert!(run(&[
        "simulate",
        "--sys",
        s(&sys),
        "--theta",
        "pi/2",
        "--out",
        s(&from_theta),
        "--points",
        "512"
    ])
    .status
    .success());
    let a = spectrum_rows(&from_seq.join("spectrum.csv"));
    let b = spectrum_rows(&from_theta.join("spectrum_000.csv"));
    let worst = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x.1 - y.1).abs().max((x.2 - y.2).abs()))
        .fold(0.0, f64::max);
    assert!(worst < 1e-6, "{worst}");
}

#[test]
fn simulate_rejects_bad_sampling() {
    let dir = TempDir::new().unwrap();
    let sys = write(dir.path(), "ala.sys", ALANINE);
    let out = run(&[
        "simulate",
        "--sys",
        s(&sys),
        "--theta",
        "0",
        "--out",
        s(&dir.path().join("x")),
        "--points",
        "1000",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&[
        "simulate",
        "--sys",
        s(&sys),
        "--theta",
        "zero",
        "--out",
        s(&dir.path().join("x")),
    ]);
    assert_eq!(out.status.code(), Some(2));
}
