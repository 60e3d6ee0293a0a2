//! Command-line driver: simulation grids, single-matrix estimation, bound
//! reports, real-data evaluation, width estimation and the packing
//! construction. All stochastic subcommands take an explicit seed and
//! produce byte-identical output for identical inputs.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use conepower::analysis::{evaluate_bounds, gauss_width_mc, k2_packing};
use conepower::cones::ConeSpec;
use conepower::estimators::{cone_power_iteration_double, IterConfig};
use conepower::linalg::normalize;
use conepower::rng::stream_rng;

use conepower_cli::config::parse_config_file;
use conepower_cli::csvio::{fmt_float, load_matrix_csv, load_vector_csv};
use conepower_cli::grid::simulate_to_files;
use conepower_cli::timeseries::{run_realdata, write_realdata_csv};

#[derive(Parser)]
#[command(
    name = "conepower",
    about = "Cone constrained principal eigenvector estimation",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation grid from a key=value config file.
    Simulate {
        /// Config file (keys: p_list, n_rules, nu_rules, xbar, cone,
        /// trials, seed, delta).
        #[arg(long)]
        config: PathBuf,
        /// Results CSV (deterministic for a fixed seed).
        #[arg(long)]
        out: PathBuf,
        /// Optional wall-clock sidecar CSV.
        #[arg(long)]
        timings: Option<PathBuf>,
    },
    /// Estimate the constrained principal eigenvector of a matrix.
    Estimate {
        /// Square numeric CSV, no header; symmetrized on load.
        #[arg(long)]
        matrix: PathBuf,
        /// Cone: monotone, nonneg, subspace:1,2,5 or full.
        #[arg(long)]
        cone: ConeSpecArg,
        /// Stopping criterion Δ.
        #[arg(long, default_value_t = 1e-6)]
        delta: f64,
        /// Output CSV; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate every computable bound for a matrix and claimed target.
    Analyze {
        #[arg(long)]
        matrix: PathBuf,
        /// Target direction CSV (one value per line or one row); normalized
        /// on load.
        #[arg(long)]
        xbar: PathBuf,
        #[arg(long)]
        cone: ConeSpecArg,
        #[arg(long, default_value_t = 1e-6)]
        delta: f64,
        /// Sample count behind the matrix, enabling the expected-noise
        /// rate.
        #[arg(long)]
        n: Option<usize>,
        /// Monte Carlo trials for restricted-norm and width estimates.
        #[arg(long, default_value_t = 64)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Train/test explained-variance comparison on a time-series CSV.
    Realdata {
        /// Dataset: header "entity,<t1>,..."; empty cells are missing.
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        cone: ConeSpecArg,
        #[arg(long, default_value_t = 1e-6)]
        delta: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Monte Carlo Gaussian width of a cone.
    Width {
        #[arg(long)]
        cone: ConeSpecArg,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Greedy packing indices of the three-piece monotone family.
    Packing {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        eps: f64,
    },
}

#[derive(Clone)]
struct ConeSpecArg(ConeSpec);

impl std::str::FromStr for ConeSpecArg {
    type Err = conepower::Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(ConeSpecArg)
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    match cli.command {
        Command::Simulate {
            config,
            out,
            timings,
        } => {
            let cfg = parse_config_file(&config)?;
            simulate_to_files(&cfg, &out, timings.as_deref())?;
        }
        Command::Estimate {
            matrix,
            cone,
            delta,
            out,
        } => {
            let a = load_matrix_csv(&matrix)?;
            let cone = cone.0.build(a.dim())?;
            let cfg = IterConfig {
                delta,
                ..Default::default()
            };
            let res = cone_power_iteration_double(&a, &cone, &cfg).context("estimation failed")?;
            let mut buf = Vec::new();
            writeln!(buf, "#schema=estimate-v1")?;
            writeln!(buf, "#iters={}", res.iters)?;
            writeln!(buf, "#stop_reason={}", res.stop_reason.as_str())?;
            writeln!(buf, "#objective={}", fmt_float(res.objective()))?;
            writeln!(buf, "index,value")?;
            for (i, v) in res.v.iter().enumerate() {
                writeln!(buf, "{i},{}", fmt_float(*v))?;
            }
            match out {
                Some(path) => std::fs::write(&path, buf)
                    .with_context(|| format!("cannot write {}", path.display()))?,
                None => stdout.lock().write_all(&buf)?,
            }
        }
        Command::Analyze {
            matrix,
            xbar,
            cone,
            delta,
            n,
            trials,
            seed,
        } => {
            let a = load_matrix_csv(&matrix)?;
            let raw = load_vector_csv(&xbar)?;
            let target = normalize(&raw).context("target direction is zero")?;
            let deviation = (conepower::linalg::norm(&raw) - 1.0).abs();
            if deviation > 1e-8 {
                eprintln!("note: target renormalized (deviation {deviation:.3e})");
            }
            let cone = cone.0.build(a.dim())?;
            let report = evaluate_bounds(&a, &target, &cone, delta, n, trials, seed)?;
            let opt = |v: Option<f64>| v.map(fmt_float).unwrap_or_default();
            let mut lock = stdout.lock();
            writeln!(lock, "#schema=boundreport-v1")?;
            writeln!(
                lock,
                "lambda,mu,nu,norm_k,norm_k_method,norm_tangent,norm_tangent_method,c0,delta,\
                 c_minus1,c_1,iteration_cap,idealized_bound_pos,idealized_bound_neg,single_start_error_bound,double_start_b1,double_start_b2,\
                 expected_noise_rate,width_value,width_std_error,width_trials"
            )?;
            writeln!(
                lock,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                fmt_float(report.lambda),
                fmt_float(report.mu),
                fmt_float(report.nu),
                fmt_float(report.norm_k),
                report.norm_k_method.as_str(),
                fmt_float(report.norm_tangent),
                report.norm_tangent_method.as_str(),
                fmt_float(report.c0),
                fmt_float(report.delta),
                opt(report.c_minus1),
                opt(report.c_1),
                report.iteration_cap,
                fmt_float(report.idealized_bound_pos),
                fmt_float(report.idealized_bound_neg),
                opt(report.single_start_error_bound),
                opt(report.double_start_b1),
                opt(report.double_start_b2),
                opt(report.expected_noise_rate),
                opt(report.width.as_ref().map(|w| w.value)),
                opt(report.width.as_ref().map(|w| w.std_error)),
                report
                    .width
                    .as_ref()
                    .map(|w| w.trials.to_string())
                    .unwrap_or_default(),
            )?;
        }
        Command::Realdata {
            data,
            cone,
            delta,
            out,
        } => {
            let rows = run_realdata(&data, &cone.0, delta)?;
            let mut buf = Vec::new();
            write_realdata_csv(&rows, &mut buf)?;
            std::fs::write(&out, buf).with_context(|| format!("cannot write {}", out.display()))?;
        }
        Command::Width {
            cone,
            p,
            trials,
            seed,
        } => {
            let cone = cone.0.build(p)?;
            let est = gauss_width_mc(&cone, trials, &mut stream_rng(seed, 0))?;
            let mut lock = stdout.lock();
            writeln!(lock, "#schema=width-v1")?;
            writeln!(lock, "p,trials,value,std_error")?;
            writeln!(
                lock,
                "{p},{},{},{}",
                est.trials,
                fmt_float(est.value),
                fmt_float(est.std_error)
            )?;
        }
        Command::Packing { p, eps } => {
            let packing = k2_packing(p, eps)?;
            let mut lock = stdout.lock();
            writeln!(lock, "#schema=packing-v1")?;
            writeln!(lock, "#cardinality={}", packing.cardinality())?;
            writeln!(lock, "k,index")?;
            for (k, idx) in packing.indices.iter().enumerate() {
                writeln!(lock, "{k},{idx}")?;
            }
        }
    }
    Ok(())
}
