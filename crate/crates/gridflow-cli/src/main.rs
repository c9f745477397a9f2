use std::fs::{create_dir_all, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gridflow_cli::config::{FileConfig, NumOrList};
use gridflow_cli::{
    cauchy_convergence, complexity_study, evolve, resolve_complexity, resolve_converge,
    resolve_evolve, HarnessError,
};

#[derive(Parser)]
#[command(name = "gridflow", version, about = "Solver experiments on periodic grids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cauchy convergence table along the refinement path s = h^2 / 10
    Converge(ConvergeArgs),
    /// Iteration-count traces on a manufactured solution
    Complexity(CommonArgs),
    /// Long-time evolution with CSV diagnostics and snapshots
    Evolve(EvolveArgs),
}

#[derive(Args, Default)]
struct CommonArgs {
    /// JSON config file; the other flags override its keys
    #[arg(long)]
    config: Option<PathBuf>,
    /// Cells per axis (comma list runs a sweep where supported)
    #[arg(long)]
    n: Option<String>,
    /// Domain edge length
    #[arg(long = "L")]
    l: Option<f64>,
    /// p-Laplacian exponent (comma list where supported)
    #[arg(long)]
    p: Option<String>,
    /// Surface-diffusion coefficient (comma list where supported)
    #[arg(long)]
    eps: Option<String>,
    /// Time step / nonlinear-solve weight (comma list where supported)
    #[arg(long)]
    s: Option<String>,
    /// Random seed for initial data
    #[arg(long)]
    seed: Option<u64>,
    /// Final time
    #[arg(long)]
    tmax: Option<f64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Tolerance (solver-relative, or the error target for `complexity`)
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct ConvergeArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Problem family: p4 or p6
    #[arg(long)]
    kind: Option<String>,
    /// Comma-separated doubling resolutions, e.g. 16,32,64
    #[arg(long)]
    levels: Option<String>,
}

#[derive(Args)]
struct EvolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Model: thin-film or spfc
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    gamma0: Option<f64>,
    #[arg(long)]
    gamma1: Option<f64>,
    /// Initial data: random or sinusoidal
    #[arg(long)]
    init: Option<String>,
    /// Amplitude of the random initial data
    #[arg(long)]
    amplitude: Option<f64>,
    /// Comma-separated snapshot times
    #[arg(long)]
    snapshots: Option<String>,
}

fn parse_list_usize(text: &str) -> Result<Vec<usize>, HarnessError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| HarnessError::Config(format!("cannot parse integer list {text:?}")))
        })
        .collect()
}

fn parse_list_f64(text: &str) -> Result<Vec<f64>, HarnessError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| HarnessError::Config(format!("cannot parse number list {text:?}")))
        })
        .collect()
}

/// Load the config file (if given) and overlay the CLI flags.
fn build_config(common: &CommonArgs) -> Result<FileConfig, HarnessError> {
    let mut cfg = match &common.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let mut over = FileConfig::default();
    if let Some(n) = &common.n {
        over.n = Some(NumOrList::parse(n)?);
    }
    over.l = common.l;
    if let Some(p) = &common.p {
        over.p = Some(NumOrList::parse(p)?);
    }
    if let Some(eps) = &common.eps {
        over.eps = Some(NumOrList::parse(eps)?);
    }
    if let Some(s) = &common.s {
        over.s = Some(NumOrList::parse(s)?);
    }
    over.seed = common.seed;
    over.tmax = common.tmax;
    over.out = common.out.clone();
    over.tol = common.tol;
    cfg.merge(over);
    Ok(cfg)
}

fn run_converge(args: &ConvergeArgs) -> Result<(), HarnessError> {
    let mut cfg = build_config(&args.common)?;
    if args.kind.is_some() {
        cfg.kind = args.kind.clone();
    }
    if let Some(levels) = &args.levels {
        cfg.levels = Some(parse_list_usize(levels)?);
    }
    let params = resolve_converge(&cfg)?;
    let rows = cauchy_convergence(&params)?;

    let mut stdout = std::io::stdout().lock();
    gridflow_cli::converge::write_rate_table(&mut stdout, &rows)?;
    if let Some(dir) = &params.out {
        create_dir_all(dir)?;
        let mut file = BufWriter::new(File::create(dir.join("rate_table.csv"))?);
        gridflow_cli::converge::write_rate_table(&mut file, &rows)?;
        file.flush()?;
    }
    Ok(())
}

fn run_complexity(args: &CommonArgs) -> Result<(), HarnessError> {
    let cfg = build_config(args)?;
    let params = resolve_complexity(&cfg)?;
    let traces = complexity_study(&params)?;
    let mut stdout = std::io::stdout().lock();
    writeln!(stdout, "p,eps,s,n,iterations,converged")?;
    for trace in &traces {
        writeln!(
            stdout,
            "{},{},{},{},{},{}",
            trace.p,
            trace.eps,
            trace.s,
            trace.n,
            trace.iterations(),
            trace.converged
        )?;
    }
    if let Some(dir) = &params.out {
        create_dir_all(dir)?;
        for trace in &traces {
            let mut file =
                BufWriter::new(File::create(dir.join(format!("complexity_{}.csv", trace.label())))?);
            gridflow_cli::complexity::write_trace(&mut file, trace)?;
            file.flush()?;
        }
    }
    Ok(())
}

fn run_evolve(args: &EvolveArgs) -> Result<(), HarnessError> {
    let mut cfg = build_config(&args.common)?;
    if args.kind.is_some() {
        cfg.kind = args.kind.clone();
    }
    if args.gamma0.is_some() {
        cfg.gamma0 = args.gamma0;
    }
    if args.gamma1.is_some() {
        cfg.gamma1 = args.gamma1;
    }
    if args.init.is_some() {
        cfg.init = args.init.clone();
    }
    if args.amplitude.is_some() {
        cfg.amplitude = args.amplitude;
    }
    if let Some(snaps) = &args.snapshots {
        cfg.snapshot_times = Some(parse_list_f64(snaps)?);
    }
    let params = resolve_evolve(&cfg)?;
    let summary = evolve(&params)?;
    println!(
        "wrote {} steps to {}; roughness slope {:?}, energy slope {:?}",
        summary.records.len() - 1,
        summary.out_dir.display(),
        summary.roughness_slope,
        summary.energy_slope
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Converge(args) => run_converge(args),
        Command::Complexity(args) => run_complexity(args),
        Command::Evolve(args) => run_evolve(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
