use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ratio-sparse"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ratio-sparse-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn toy_reports_figure_argmins() {
    let o = run(bin().arg("toy"));
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("t,l1,l1_over_l2\n"));
    assert_eq!(text.lines().count(), 2002);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("L1 argmin t = 10 (value 32)"));
    assert!(err.contains("L1/L2 argmin t = 0"));
}

#[test]
fn gen_then_solve_recovers_signal() {
    let dir = scratch("gen-solve");
    let o = run(bin().args(["gen", "--m", "32", "--n", "128", "--sparsity", "3", "--seed", "5", "--out"]).arg(&dir));
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["A.bin", "A.csv", "x.bin", "x.csv", "b.bin", "b.csv"] {
        assert!(dir.join(f).exists(), "{f}");
    }
    let out = dir.join("solve");
    let o = run(bin()
        .arg("solve")
        .arg("--matrix")
        .arg(dir.join("A.bin"))
        .arg("--rhs")
        .arg(dir.join("b.csv"))
        .args(["--box", "-1", "1", "--out"])
        .arg(&out));
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let log = fs::read_to_string(out.join("log.csv")).unwrap();
    assert!(log.starts_with("iter,objective,feasibility,res_y,res_z\n"));
    let x: Vec<f64> = fs::read_to_string(dir.join("x.csv")).unwrap().lines().map(|l| l.parse().unwrap()).collect();
    let sol: Vec<f64> =
        fs::read_to_string(out.join("solution.csv")).unwrap().lines().map(|l| l.parse().unwrap()).collect();
    let err: f64 = x.iter().zip(&sol).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let norm: f64 = x.iter().map(|a| a * a).sum::<f64>().sqrt();
    assert!(err / norm < 1e-3, "relative error {}", err / norm);
}

#[test]
fn theory_verbs_and_exit_codes() {
    let dir = scratch("theory");
    let small = dir.join("small.csv");
    fs::write(&small, "1,0,1\n0,1,1\n").unwrap();
    let o = run(bin().args(["theory", "nsp", "--s", "1", "--matrix"]).arg(&small));
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("check,holds,margin,support,witness_vector\n"));
    assert!(text.contains("nsp,true,"));

    let o = run(bin().args(["theory", "coherence", "--matrix"]).arg(&small));
    assert_eq!(o.status.code(), Some(0));
    let mu: f64 = stdout(&o).trim().parse().unwrap();
    assert!((mu - 0.5f64.sqrt()).abs() < 1e-12);

    let wide = dir.join("wide.csv");
    let row: Vec<String> = (1..=15).map(|k| k.to_string()).collect();
    fs::write(&wide, format!("{}\n", row.join(","))).unwrap();
    let o = run(bin().args(["theory", "snsp", "--s", "1", "--matrix"]).arg(&wide));
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn config_errors_exit_with_two() {
    let dir = scratch("config");
    let cfg = dir.join("bad.cfg");
    fs::write(&cfg, "unknown_key = 3\n").unwrap();
    let o = run(bin().arg("bench").arg("--config").arg(&cfg).arg("--out").arg(&dir));
    assert_eq!(o.status.code(), Some(2));
    let o = run(bin().args(["bench", "--sparsity", "4,2", "--out"]).arg(&dir));
    assert_eq!(o.status.code(), Some(2));
    let o = run(bin().args(["mri", "--size", "8", "--out"]).arg(&dir));
    assert_eq!(o.status.code(), Some(2));
    let o = run(bin().args(["gen", "--bogus"]));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_is_deterministic_and_honours_config() {
    let dir = scratch("bench");
    let cfg = dir.join("sweep.cfg");
    fs::write(&cfg, "# small sweep\nmatrix = gaussian\nr = 0.1\nm = 16\nn = 48\nsparsity = 1,3\ntrials = 3\nseed = 9\n").unwrap();
    let mut outputs = Vec::new();
    for (k, threads) in ["1", "2"].iter().enumerate() {
        let out = dir.join(format!("run{k}"));
        let o = run(bin()
            .arg("bench")
            .arg("--config")
            .arg(&cfg)
            .args(["--deterministic", "--threads", threads, "--out"])
            .arg(&out));
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(fs::read(out.join("summary.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs.remove(0)).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("sparsity,trials,success_rate,model_failure_rate,algorithm_failure_rate,errored,mean_iters,mean_seconds")
    );
    assert_eq!(lines.count(), 2);
}

#[test]
fn mri_writes_outputs() {
    let dir = scratch("mri");
    let o = run(bin().args(["mri", "--size", "32", "--lines", "12", "--max-iter", "300", "--out"]).arg(&dir));
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(fs::read(dir.join("image.pgm")).unwrap().starts_with(b"P5\n32 32\n65535\n"));
    assert!(fs::read(dir.join("mask.pbm")).unwrap().starts_with(b"P4\n32 32\n"));
    assert!(fs::read_to_string(dir.join("log.csv")).unwrap().starts_with("iter,objective,data_residual,rel_change\n"));
    assert_eq!(fs::read(dir.join("image.bin")).unwrap().len(), 24 + 8 * 32 * 32);
}

#[test]
fn ratio_vs_f_rows() {
    let o = run(bin().args(["ratio-vs-f", "--f-grid", "1,3", "--realizations", "2", "--m", "6", "--n", "16", "--restarts", "1"]));
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("F,mean_bound,std_bound,errored\n"));
}
