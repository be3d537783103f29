//! `ratio-sparse` command-line entry point.
//!
//! Exit codes: 0 on completion, 2 for configuration or input errors, 3 when an
//! exhaustive check is asked for an instance beyond its size limit, 1 for
//! numerical failures (rank-deficient or degenerate systems).

mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ratio_sparse::bench::{
    ratio_vs_f_csv, resolve_threads, run_experiment, run_ratio_vs_f, toy_landscape, ExperimentConfig, MatrixSpec,
    RatioVsFConfig, SolverChoice, Timing,
};
use ratio_sparse::grad2d::{measure, radial_mask, shepp_logan, solve_grad, solve_tv, GradSolverConfig};
use ratio_sparse::instancegen::{gen_dct, gen_gaussian, gen_sparse_signal, Instance, SensingMatrix};
use ratio_sparse::ratio_admm::{objective, solve, BoxConstraint, InitStrategy, SolverConfig};
use ratio_sparse::theory::{
    check_nsp, check_snsp, coherence, kernel_ratio_bound, l0_oracle, verify_local_min, BoundConfig,
};
use ratio_sparse::{io, Error, Result};

use crate::config::{parse_list, FlatConfig, BENCH_KEYS};

#[derive(Parser)]
#[command(name = "ratio-sparse", version, about = "Sparse recovery by L1/L2 minimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a sensing matrix, sparse signal and measurements.
    Gen(GenArgs),
    /// Solve min ‖x‖₁/‖x‖₂ subject to Ax = b.
    Solve(SolveArgs),
    /// Reconstruct a Shepp-Logan phantom from radial Fourier samples.
    Mri(MriArgs),
    /// Recovery-condition checks on small matrices.
    Theory(TheoryArgs),
    /// Success-rate sweep over sparsity levels.
    Bench(BenchArgs),
    /// Objective landscape along the toy instance's solution line.
    Toy(ToyArgs),
    /// Kernel ratio bound against DCT oversampling factor.
    RatioVsF(RatioVsFArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Dct,
    Gaussian,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value = "dct")]
    kind: KindArg,
    #[arg(long, default_value_t = 64)]
    m: usize,
    #[arg(long, default_value_t = 1024)]
    n: usize,
    /// DCT oversampling factor.
    #[arg(long, default_value_t = 5.0)]
    f: f64,
    /// Gaussian row correlation.
    #[arg(long, default_value_t = 0.0)]
    r: f64,
    #[arg(long, default_value_t = 5)]
    sparsity: usize,
    #[arg(long)]
    min_sep: Option<usize>,
    /// Matrix seed; the signal uses seed + 1000000.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum InitArg {
    L1,
    LeastNorm,
}

#[derive(Args)]
struct SolveArgs {
    /// Matrix file (`.csv` or binary container).
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    rhs: PathBuf,
    #[arg(long, default_value_t = 100.0)]
    rho1: f64,
    #[arg(long, default_value_t = 100.0)]
    rho2: f64,
    #[arg(long, default_value_t = 1e-8)]
    eps: f64,
    /// Defaults to ten times the signal length.
    #[arg(long)]
    max_iter: Option<usize>,
    /// Box constraint `LOWER UPPER`.
    #[arg(long = "box", num_args = 2, value_names = ["LOWER", "UPPER"], allow_negative_numbers = true)]
    bounds: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value = "l1")]
    init: InitArg,
    /// Start from this vector instead (overrides --init).
    #[arg(long)]
    init_file: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MriSolver {
    Ratio,
    Tv,
}

#[derive(Args)]
struct MriArgs {
    #[arg(long, default_value_t = 128)]
    size: usize,
    #[arg(long, default_value_t = 8)]
    lines: usize,
    #[arg(long, value_enum, default_value = "ratio")]
    solver: MriSolver,
    #[arg(long, default_value_t = 1e3)]
    lambda: f64,
    #[arg(long, default_value_t = 10.0)]
    rho1: f64,
    #[arg(long, default_value_t = 10.0)]
    rho2: f64,
    #[arg(long, default_value_t = 1.0)]
    rho3: f64,
    #[arg(long, default_value_t = 1e-8)]
    eps: f64,
    #[arg(long, default_value_t = 20_000)]
    max_iter: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TheoryArgs {
    #[command(subcommand)]
    verb: TheoryVerb,
}

#[derive(Args)]
struct MatrixArg {
    #[arg(long)]
    matrix: PathBuf,
}

#[derive(Subcommand)]
enum TheoryVerb {
    /// Mutual coherence of the columns.
    Coherence(MatrixArg),
    /// Null space property of order s (exhaustive).
    Nsp {
        #[command(flatten)]
        matrix: MatrixArg,
        #[arg(long)]
        s: usize,
    },
    /// Strong null space property of order s (exhaustive).
    Snsp {
        #[command(flatten)]
        matrix: MatrixArg,
        #[arg(long)]
        s: usize,
    },
    /// Upper estimate of the minimal L1/L2 ratio over the kernel.
    RatioBound {
        #[command(flatten)]
        matrix: MatrixArg,
        #[arg(long, default_value_t = 5)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sparsest solution by support enumeration.
    L0 {
        #[command(flatten)]
        matrix: MatrixArg,
        #[arg(long)]
        rhs: PathBuf,
        #[arg(long)]
        s_max: usize,
    },
    /// Sampled local-minimality check of a feasible point.
    Localmin {
        #[command(flatten)]
        matrix: MatrixArg,
        #[arg(long)]
        rhs: PathBuf,
        #[arg(long)]
        x: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Step sizes as fractions of the adaptive radius, comma separated.
        #[arg(long, default_value = "0.25,0.5,0.75,1")]
        t_grid: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    L1l2,
    L1l2Box,
    L1,
}

#[derive(Args)]
struct BenchArgs {
    /// Flat `key = value` file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    matrix: Option<KindArg>,
    #[arg(long)]
    f: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated sparsity levels.
    #[arg(long)]
    sparsity: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    solver: Option<SolverArg>,
    #[arg(long, allow_negative_numbers = true)]
    box_lower: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    box_upper: Option<f64>,
    #[arg(long)]
    rho1: Option<f64>,
    #[arg(long)]
    rho2: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    min_sep: Option<usize>,
    #[arg(long)]
    threads: Option<usize>,
    /// Write `NA` in timing columns so reruns are byte-identical.
    #[arg(long)]
    deterministic: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ToyArgs {
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    t_min: f64,
    #[arg(long, default_value_t = 15.0, allow_negative_numbers = true)]
    t_max: f64,
    #[arg(long, default_value_t = 2001)]
    steps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RatioVsFArgs {
    #[arg(long, default_value = "1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16,17,18,19,20")]
    f_grid: String,
    #[arg(long, default_value_t = 50)]
    realizations: usize,
    #[arg(long, default_value_t = 64)]
    m: usize,
    #[arg(long, default_value_t = 1024)]
    n: usize,
    #[arg(long, default_value_t = 5)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::UnsupportedSize(_) => 3,
        Error::Parameter(_) | Error::Format(_) | Error::Io(_) => 2,
        Error::Rank(_) | Error::Degenerate(_) => 1,
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Gen(a) => cmd_gen(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Mri(a) => cmd_mri(a),
        Command::Theory(a) => cmd_theory(a.verb),
        Command::Bench(a) => cmd_bench(a),
        Command::Toy(a) => cmd_toy(a),
        Command::RatioVsF(a) => cmd_ratio_vs_f(a),
    }
}

fn write(dir: &Path, name: &str, bytes: impl AsRef<[u8]>) -> Result<()> {
    Ok(fs::write(dir.join(name), bytes)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    let matrix: SensingMatrix<f64> = match a.kind {
        KindArg::Dct => gen_dct(a.m, a.n, a.f, a.seed)?,
        KindArg::Gaussian => gen_gaussian(a.m, a.n, a.r, a.seed)?,
    };
    let truth = gen_sparse_signal(a.n, a.sparsity, a.min_sep, a.seed.wrapping_add(1_000_000))?;
    let inst = Instance::from_truth(matrix, truth)?;
    fs::create_dir_all(&a.out)?;
    let x = &inst.truth.as_ref().expect("built from truth").values;
    io::write_matrix_bin(a.out.join("A.bin"), &inst.matrix.entries)?;
    write(&a.out, "A.csv", io::matrix_to_csv(&inst.matrix.entries))?;
    io::write_vector_bin(a.out.join("x.bin"), x)?;
    write(&a.out, "x.csv", io::vector_to_csv(x))?;
    io::write_vector_bin(a.out.join("b.bin"), &inst.rhs)?;
    write(&a.out, "b.csv", io::vector_to_csv(&inst.rhs))?;
    println!("wrote {}x{} instance with {} nonzeros to {}", a.m, a.n, a.sparsity, a.out.display());
    Ok(())
}

fn cmd_solve(a: SolveArgs) -> Result<()> {
    let matrix = SensingMatrix::explicit(io::read_matrix(&a.matrix)?)?;
    let inst = Instance::from_rhs(matrix, io::read_vector(&a.rhs)?)?;
    let mut cfg = SolverConfig {
        rho1: a.rho1,
        rho2: a.rho2,
        eps: a.eps,
        max_iter: a.max_iter,
        seed: a.seed,
        ..SolverConfig::default()
    };
    cfg.init = match (&a.init_file, a.init) {
        (Some(p), _) => InitStrategy::Explicit(io::read_vector(p)?),
        (None, InitArg::L1) => InitStrategy::L1BasisPursuit,
        (None, InitArg::LeastNorm) => InitStrategy::LeastNorm,
    };
    if let Some(b) = &a.bounds {
        cfg.bounds = Some(BoxConstraint::new(b[0], b[1])?);
    }
    let report = solve(&inst, &cfg)?;
    fs::create_dir_all(&a.out)?;
    io::write_vector_bin(a.out.join("solution.bin"), &report.solution)?;
    write(&a.out, "solution.csv", io::vector_to_csv(&report.solution))?;
    write(&a.out, "log.csv", io::signal_log_csv(&report))?;
    println!(
        "{:?} after {} iterations, objective {:.6}, residual {:.3e}",
        report.status,
        report.iterations,
        objective(report.solution.view()),
        inst.residual_norm(&report.solution)
    );
    Ok(())
}

fn cmd_mri(a: MriArgs) -> Result<()> {
    if a.lines == 0 {
        return Err(Error::Parameter("lines must be at least 1".into()));
    }
    let truth = shepp_logan::<f64>(a.size)?;
    let mask = radial_mask(a.size, a.size, a.lines);
    let data = measure(&truth, &mask)?;
    let cfg = GradSolverConfig {
        lambda: a.lambda,
        rho1: a.rho1,
        rho2: a.rho2,
        rho3: a.rho3,
        eps: a.eps,
        max_iter: a.max_iter,
        seed: a.seed,
        ..GradSolverConfig::default()
    };
    let report = match a.solver {
        MriSolver::Ratio => solve_grad(&data, &mask, &cfg)?,
        MriSolver::Tv => solve_tv(&data, &mask, &cfg)?,
    };
    fs::create_dir_all(&a.out)?;
    write(&a.out, "image.pgm", io::encode_pgm16(&report.image))?;
    io::write_matrix_bin(a.out.join("image.bin"), &report.image.pixels)?;
    write(&a.out, "log.csv", io::grad_log_csv(&report))?;
    write(&a.out, "mask.pbm", io::encode_pbm(&mask))?;
    println!(
        "{:?} after {} iterations, {:.2}% of frequencies, relative error {:.3e}",
        report.status,
        report.iterations,
        100.0 * mask.fraction(),
        report.image.relative_error(&truth)
    );
    Ok(())
}

fn load_matrix(m: &MatrixArg) -> Result<SensingMatrix<f64>> {
    SensingMatrix::explicit(io::read_matrix(&m.matrix)?)
}

fn cmd_theory(verb: TheoryVerb) -> Result<()> {
    match verb {
        TheoryVerb::Coherence(m) => println!("{}", coherence(load_matrix(&m)?.entries.view())?),
        TheoryVerb::Nsp { matrix, s } => {
            let v = check_nsp(load_matrix(&matrix)?.entries.view(), s)?;
            println!("{}\n{}", io::THEORY_HEADER, io::theory_row("nsp", &v));
        }
        TheoryVerb::Snsp { matrix, s } => {
            let v = check_snsp(load_matrix(&matrix)?.entries.view(), s)?;
            println!("{}\n{}", io::THEORY_HEADER, io::theory_row("snsp", &v));
        }
        TheoryVerb::RatioBound { matrix, restarts, seed } => {
            let cfg = BoundConfig { restarts, seed, ..BoundConfig::default() };
            println!("{}", kernel_ratio_bound(load_matrix(&matrix)?.entries.view(), &cfg)?.value);
        }
        TheoryVerb::L0 { matrix, rhs, s_max } => {
            let inst = Instance::from_rhs(load_matrix(&matrix)?, io::read_vector(&rhs)?)?;
            let sol = l0_oracle(&inst, s_max)?;
            println!("sparsity,{}", sol.sparsity);
            print!("{}", io::vector_to_csv(&sol.x));
        }
        TheoryVerb::Localmin { matrix, rhs, x, trials, t_grid, seed } => {
            let inst = Instance::from_rhs(load_matrix(&matrix)?, io::read_vector(&rhs)?)?;
            let grid: Vec<f64> = parse_list(&t_grid)?;
            let v = verify_local_min(&inst, &io::read_vector(&x)?, trials, &grid, seed)?;
            println!("{}\n{}", io::THEORY_HEADER, io::theory_row("localmin", &v));
        }
    }
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> Result<()> {
    let file = match &a.config {
        Some(p) => FlatConfig::load(p, BENCH_KEYS)?,
        None => FlatConfig::default(),
    };
    let defaults = ExperimentConfig::default();
    let kind = match a.matrix {
        Some(k) => k,
        None => match file.get_str("matrix") {
            None | Some("dct") => KindArg::Dct,
            Some("gaussian") => KindArg::Gaussian,
            Some(other) => return Err(Error::Parameter(format!("unknown matrix kind {other:?}"))),
        },
    };
    let matrix = match kind {
        KindArg::Dct => MatrixSpec::Dct { f: pick(a.f, &file, "f", 5.0)? },
        KindArg::Gaussian => MatrixSpec::Gaussian { r: pick(a.r, &file, "r", 0.0)? },
    };
    let solver_name = match a.solver {
        Some(SolverArg::L1l2) => "l1l2".to_string(),
        Some(SolverArg::L1l2Box) => "l1l2-box".to_string(),
        Some(SolverArg::L1) => "l1".to_string(),
        None => file.get_str("solver").unwrap_or("l1l2-box").to_string(),
    };
    let solver = match solver_name.as_str() {
        "l1l2" => SolverChoice::L1L2,
        "l1" => SolverChoice::L1,
        "l1l2-box" => SolverChoice::L1L2Box {
            lower: pick(a.box_lower, &file, "box_lower", -1.0)?,
            upper: pick(a.box_upper, &file, "box_upper", 1.0)?,
        },
        other => return Err(Error::Parameter(format!("unknown solver {other:?}"))),
    };
    let sparsity_grid = match a.sparsity.as_deref().or(file.get_str("sparsity")) {
        Some(list) => parse_list(list)?,
        None => defaults.sparsity_grid.clone(),
    };
    let mut solver_params = SolverConfig::default();
    solver_params.rho1 = pick(a.rho1, &file, "rho1", solver_params.rho1)?;
    solver_params.rho2 = pick(a.rho2, &file, "rho2", solver_params.rho2)?;
    solver_params.eps = pick(a.eps, &file, "eps", solver_params.eps)?;
    solver_params.max_iter = a.max_iter.or(file.get("max_iter")?);
    let threads = resolve_threads(a.threads.or(file.get("threads")?))?;
    let cfg = ExperimentConfig {
        matrix,
        m: pick(a.m, &file, "m", defaults.m)?,
        n: pick(a.n, &file, "n", defaults.n)?,
        sparsity_grid,
        trials: pick(a.trials, &file, "trials", defaults.trials)?,
        base_seed: pick(a.seed, &file, "seed", defaults.base_seed)?,
        solver,
        solver_params,
        min_sep: a.min_sep.or(file.get("min_sep")?),
        threads,
    };
    cfg.validate()?;
    let result = run_experiment(&cfg)?;
    let timing = if a.deterministic { Timing::Omit } else { Timing::Include };
    fs::create_dir_all(&a.out)?;
    write(&a.out, "summary.csv", result.summary_csv(timing))?;
    write(&a.out, "trials.csv", result.records_csv(timing))?;
    let errored: usize = result.summary.iter().map(|r| r.errored).sum();
    if errored > 0 {
        eprintln!("warning: {errored} trials errored and were excluded from the rates");
    }
    print!("{}", result.summary_csv(timing));
    Ok(())
}

fn pick<T: std::str::FromStr>(flag: Option<T>, file: &FlatConfig, key: &str, default: T) -> Result<T> {
    Ok(match flag {
        Some(v) => v,
        None => file.get(key)?.unwrap_or(default),
    })
}

fn cmd_toy(a: ToyArgs) -> Result<()> {
    let land = toy_landscape(a.t_min, a.t_max, a.steps)?;
    emit(a.out.as_deref(), &land.to_csv())?;
    eprintln!(
        "L1 argmin t = {} (value {}); L1/L2 argmin t = {} (value {})",
        land.argmin_l1.0, land.argmin_l1.1, land.argmin_ratio.0, land.argmin_ratio.1
    );
    Ok(())
}

fn cmd_ratio_vs_f(a: RatioVsFArgs) -> Result<()> {
    let cfg = RatioVsFConfig {
        f_grid: parse_list(&a.f_grid)?,
        realizations: a.realizations,
        m: a.m,
        n: a.n,
        base_seed: a.seed,
        bound: BoundConfig { restarts: a.restarts, ..BoundConfig::default() },
        threads: resolve_threads(a.threads)?,
    };
    let rows = run_ratio_vs_f(&cfg)?;
    emit(a.out.as_deref(), &ratio_vs_f_csv(&rows))
}
