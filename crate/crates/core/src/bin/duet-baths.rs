//! Command-line driver for the two-oscillator / two-bath simulator.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use duet_baths::error::Error;
use duet_baths::run::{self, Operation, RunConfig, SweepSpec};

#[derive(Parser)]
#[command(
    name = "duet-baths",
    version,
    about = "Non-equilibrium dynamics of two \
coupled oscillators damped by two independent thermal baths"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Flat key-value configuration file.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory (default: $DUET_BATHS_OUT or ./out).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Sweep worker threads.
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
    /// Relative quadrature tolerance.
    #[arg(long, value_name = "X")]
    tol: Option<f64>,
    /// Clamp momentum correlators to τ ≥ 1/Λ instead of rejecting τ = 0.
    #[arg(long)]
    tau_min_lambda: bool,
    /// Config overrides, e.g. --set bath1.gamma=0.2 (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Time evolution of the equal-time correlators from the factorized
    /// ground state.
    Evolve(Common),
    /// Stationary two-time correlators on a τ grid.
    Stationary(Common),
    /// Finite-bath oracle run: exact covariance dynamics, analytic
    /// cross-check, log-negativity.
    Oracle(Common),
    /// Sweep one config key, one summary row per point.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Dotted config key to sweep.
        #[arg(long, value_name = "KEY")]
        axis: String,
        /// Explicit comma-separated values.
        #[arg(long, value_name = "V1,V2,...", value_delimiter = ',')]
        values: Vec<f64>,
        /// Uniform range start,stop,points (alternative to --values).
        #[arg(long, value_name = "START,STOP,N", value_delimiter = ',')]
        range: Option<Vec<f64>>,
    },
    /// Strong-coupling transient-coherence preset (γ₁=0.1, γ₂ ∈ {0.01, 0.03}).
    Fig1(Common),
    /// One-bath memory preset (γ₂ = 0, asymptote −0.25).
    Fig2(Common),
    /// Weak-coupling interference-beats preset (Δ = 0.25).
    Fig3(Common),
}

fn load_config(common: &Common) -> Result<RunConfig, Error> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::parse(&std::fs::read_to_string(path)?)?,
        None => RunConfig::default(),
    };
    for ov in &common.overrides {
        let (k, v) = ov
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got '{ov}'")))?;
        cfg.set(k.trim(), v.trim())?;
    }
    if let Some(w) = common.workers {
        cfg.workers = w.max(1);
    }
    if let Some(t) = common.tol {
        cfg.tol = t;
    }
    if common.tau_min_lambda {
        cfg.tau_min_lambda = true;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn out_dir(common: &Common) -> PathBuf {
    common
        .out
        .clone()
        .or_else(|| std::env::var_os("DUET_BATHS_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn execute() -> Result<(), Error> {
    let cli = Cli::parse();
    let (common, op, sweep_spec) = match &cli.command {
        Command::Evolve(c) => (c, Operation::Evolve, None),
        Command::Stationary(c) => (c, Operation::Stationary, None),
        Command::Oracle(c) => (c, Operation::Oracle, None),
        Command::Fig1(c) => (c, Operation::Fig1, None),
        Command::Fig2(c) => (c, Operation::Fig2, None),
        Command::Fig3(c) => (c, Operation::Fig3, None),
        Command::Sweep {
            common,
            axis,
            values,
            range,
        } => {
            let vals = if let Some(r) = range {
                if r.len() != 3 {
                    return Err(Error::Config("--range expects START,STOP,N".into()));
                }
                let n = r[2] as usize;
                run::GridSpec {
                    start: r[0],
                    stop: r[1],
                    points: n,
                }
                .values()
            } else {
                values.clone()
            };
            if vals.is_empty() {
                return Err(Error::Config("sweep needs --values or --range".into()));
            }
            (
                common,
                Operation::Evolve,
                Some(SweepSpec {
                    key: axis.clone(),
                    values: vals,
                }),
            )
        }
    };
    let cfg = load_config(common)?;
    let dir = out_dir(common);
    let output = match sweep_spec {
        Some(spec) => run::sweep(&cfg, &spec, &dir)?,
        None => run::run(&cfg, op, &dir)?,
    };
    for f in &output.files {
        println!("wrote {}", f.display());
    }
    for (k, v) in &output.summary {
        println!("{k} = {v}");
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
