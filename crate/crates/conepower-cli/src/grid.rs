//! Seeded simulation grids: for every (p, n, ν, trial) cell, draw a spiked
//! instance and run the double-start cone iteration, ordinary power
//! iteration and the truncated baseline, recording the sign-invariant loss
//! against the planted vector. Trials are embarrassingly parallel; each
//! one derives its random stream from its grid position, so the output is
//! identical regardless of worker count.

use std::io::Write;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{Context, Result};
use ndarray::Array1;
use rayon::prelude::*;

use conepower::analysis::{cone_norm_mc, loss, operator_norm, tangent_cone};
use conepower::cones::Cone;
use conepower::estimators::{
    cone_power_iteration_double_detailed, power_iteration, truncated_power_iteration,
    EstimateResult, IterConfig,
};
use conepower::rng::stream_rng;
use conepower::spiked::{
    make_nonsparse_monotone, make_sparse_monotone, sample_spiked_with, sparse_support_split,
    SpikedInstance, SpikedSpec,
};

use crate::config::{GridConfig, XbarKind};
use crate::csvio::fmt_float;

/// Operational iteration cap for grid runs. A method that has not met the
/// Δ stopping rule by then is recorded with `max_iter`; at Δ = 10⁻⁶ the
/// theoretical cap is astronomically larger, so this only trims runs that
/// are wandering in a gapless bulk spectrum.
pub const GRID_MAX_ITER: usize = 600;

/// Monte Carlo pair samples per restricted-norm estimate in diagnostics.
pub const NORM_MC_TRIALS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    ConeDouble,
    Ordinary,
    Truncated,
}

impl Algorithm {
    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::ConeDouble => "cone_double",
            Algorithm::Ordinary => "ordinary",
            Algorithm::Truncated => "truncated",
        }
    }
}

/// One algorithm run on one grid cell.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub p: usize,
    pub n: usize,
    pub nu: f64,
    pub xbar_kind: XbarKind,
    pub algorithm: Algorithm,
    pub trial: usize,
    pub loss: f64,
    pub iters: usize,
    pub wall_time_ns: u64,
    pub stop_reason: String,
}

/// Per-trial data consumed by bound-compliance checks: every launched
/// single-start branch with its start value, the power-iteration estimate
/// of the top eigenvalue, the plus-branch loss, and optional restricted
/// norm estimates for the realized noise matrix.
#[derive(Debug, Clone)]
pub struct TrialDiagnostics {
    pub p: usize,
    pub n: usize,
    pub nu: f64,
    pub trial: usize,
    /// `(iterations, v₀ᵀAv₀)` for each single-start branch that ran.
    pub branch_runs: Vec<(usize, f64)>,
    /// Rayleigh estimate of `λ_max(A)` (from the ordinary run's final
    /// quotient; a lower estimate, which only tightens cap checks).
    pub lambda_est: f64,
    /// Loss of the plus branch (the single-start run from the default
    /// start), when it ran.
    pub algo1_loss: Option<f64>,
    /// Alignment of the default start with the planted vector.
    pub c0: f64,
    /// Monte Carlo ascent estimate of `‖E‖_K` (no slack applied).
    pub norm_k_est: Option<f64>,
    /// Estimate of `‖E‖_{T_K(x̄)}`: operator norm when the tangent cone is
    /// the full space, Monte Carlo ascent otherwise.
    pub norm_tangent_est: Option<f64>,
}

/// Everything a grid run produces.
#[derive(Debug, Clone)]
pub struct GridOutcome {
    pub records: Vec<TrialRecord>,
    pub diagnostics: Vec<TrialDiagnostics>,
}

/// Runs the grid, returning one record per (cell, trial, algorithm).
pub fn run_grid(cfg: &GridConfig) -> Result<Vec<TrialRecord>> {
    Ok(run_grid_full(cfg, false)?.records)
}

struct Task {
    index: usize,
    p: usize,
    n: usize,
    nu: f64,
    trial: usize,
    truncation: usize,
    xbar: Arc<Array1<f64>>,
    cone: Arc<Cone>,
}

/// Runs the grid, optionally estimating restricted noise norms per trial
/// (used by compliance checks; roughly doubles the per-trial cost).
pub fn run_grid_full(cfg: &GridConfig, with_norm_estimates: bool) -> Result<GridOutcome> {
    cfg.validate().map_err(|e| anyhow::anyhow!(e))?;

    let mut tasks = Vec::new();
    let mut index = 0;
    for &p in &cfg.p_list {
        let xbar = Arc::new(match cfg.xbar_kind {
            XbarKind::NonSparse => make_nonsparse_monotone(p)?,
            XbarKind::Sparse => make_sparse_monotone(p)?,
        });
        let truncation = match cfg.xbar_kind {
            XbarKind::NonSparse => p,
            XbarKind::Sparse => p - sparse_support_split(p),
        };
        let cone = Arc::new(cfg.cone.build(p)?);
        for n_rule in &cfg.n_rules {
            let n = n_rule.eval(p);
            for nu_rule in &cfg.nu_rules {
                let nu = nu_rule.eval(p);
                for trial in 0..cfg.trials {
                    tasks.push(Task {
                        index,
                        p,
                        n,
                        nu,
                        trial,
                        truncation,
                        xbar: Arc::clone(&xbar),
                        cone: Arc::clone(&cone),
                    });
                    index += 1;
                }
            }
        }
    }

    let seed = cfg.seed;
    let delta = cfg.delta;
    let mut results: Vec<(usize, (Vec<TrialRecord>, TrialDiagnostics))> = tasks
        .par_iter()
        .map(|task| {
            (
                task.index,
                run_trial(task, seed, delta, with_norm_estimates),
            )
        })
        .collect();
    results.sort_by_key(|(index, _)| *index);

    let mut records = Vec::with_capacity(results.len() * 3);
    let mut diagnostics = Vec::with_capacity(results.len());
    for (_, (recs, diag)) in results {
        records.extend(recs);
        diagnostics.push(diag);
    }
    Ok(GridOutcome {
        records,
        diagnostics,
    })
}

fn run_trial(
    task: &Task,
    seed: u64,
    delta: f64,
    with_norm_estimates: bool,
) -> (Vec<TrialRecord>, TrialDiagnostics) {
    // Streams 8k, 8k+1, ... belong to task k.
    let stream_base = (task.index as u64) * 8;
    let spec = SpikedSpec::new(task.p, task.n, task.nu, (*task.xbar).clone(), seed)
        .expect("validated by config");
    let instance = sample_spiked_with(&spec, &mut stream_rng(seed, stream_base)).expect("sampling");

    let make_record = |algorithm: Algorithm,
                       outcome: &conepower::Result<EstimateResult>,
                       wall: u64|
     -> TrialRecord {
        let (losst, iters, stop) = match outcome {
            Ok(res) => (
                loss(&res.v, &task.xbar).expect("dims"),
                res.iters,
                res.stop_reason.as_str().to_string(),
            ),
            Err(e) => (f64::NAN, 0, format!("error: {e}")),
        };
        TrialRecord {
            p: task.p,
            n: task.n,
            nu: task.nu,
            xbar_kind: if task.truncation == task.p {
                XbarKind::NonSparse
            } else {
                XbarKind::Sparse
            },
            algorithm,
            trial: task.trial,
            loss: losst,
            iters,
            wall_time_ns: wall,
            stop_reason: stop,
        }
    };

    let iter_cfg = IterConfig {
        delta,
        max_iter: Some(GRID_MAX_ITER),
        v0: None,
    };

    let t0 = Instant::now();
    let double = cone_power_iteration_double_detailed(&instance.a_hat, &task.cone, &iter_cfg);
    let wall_double = t0.elapsed().as_nanos() as u64;
    let double_result = double
        .as_ref()
        .map(|d| d.chosen().clone())
        .map_err(|e| e.clone());

    let t0 = Instant::now();
    let ordinary = power_iteration(&instance.a_hat, &iter_cfg);
    let wall_ordinary = t0.elapsed().as_nanos() as u64;

    let t0 = Instant::now();
    let truncated = truncated_power_iteration(&instance.a_hat, task.truncation, &iter_cfg);
    let wall_truncated = t0.elapsed().as_nanos() as u64;

    let records = vec![
        make_record(Algorithm::ConeDouble, &double_result, wall_double),
        make_record(Algorithm::Ordinary, &ordinary, wall_ordinary),
        make_record(Algorithm::Truncated, &truncated, wall_truncated),
    ];

    let diagnostics = build_diagnostics(
        task,
        &instance,
        double.as_ref().ok(),
        ordinary.as_ref().ok(),
        seed,
        stream_base,
        with_norm_estimates,
    );
    (records, diagnostics)
}

fn build_diagnostics(
    task: &Task,
    instance: &SpikedInstance,
    double: Option<&conepower::estimators::DoubleRunDetail>,
    ordinary: Option<&EstimateResult>,
    seed: u64,
    stream_base: u64,
    with_norm_estimates: bool,
) -> TrialDiagnostics {
    let mut branch_runs = Vec::new();
    let mut algo1_loss = None;
    if let Some(detail) = double {
        if let Some(plus) = &detail.plus {
            branch_runs.push((plus.iters, plus.rayleigh_trace[0]));
            algo1_loss = Some(loss(&plus.v, &task.xbar).expect("dims"));
        }
        if let Some(minus) = &detail.minus {
            branch_runs.push((minus.iters, minus.rayleigh_trace[0]));
        }
    }
    let lambda_est = ordinary
        .map(|res| res.objective())
        .or_else(|| double.map(|d| d.chosen().objective()))
        .unwrap_or(f64::NAN);
    let c0 = conepower::estimators::default_start(&task.cone)
        .map(|v0| v0.dot(&*task.xbar))
        .unwrap_or(f64::NAN);
    let (norm_k_est, norm_tangent_est) = if with_norm_estimates {
        let mut rng = stream_rng(seed, stream_base + 1);
        let k = cone_norm_mc(&instance.e, &*task.cone, NORM_MC_TRIALS, &mut rng)
            .map(|est| est.value)
            .ok();
        let t = match tangent_cone(&task.cone, &task.xbar) {
            Ok(tc) if tc.is_full_space() => Some(operator_norm(&instance.e, 1e-6, 300)),
            Ok(tc) => {
                let mut rng = stream_rng(seed, stream_base + 2);
                cone_norm_mc(&instance.e, &tc, NORM_MC_TRIALS, &mut rng)
                    .map(|est| est.value)
                    .ok()
            }
            Err(_) => None,
        };
        (k, t)
    } else {
        (None, None)
    };
    TrialDiagnostics {
        p: task.p,
        n: task.n,
        nu: task.nu,
        trial: task.trial,
        branch_runs,
        lambda_est,
        algo1_loss,
        c0,
        norm_k_est,
        norm_tangent_est,
    }
}

/// Writes the deterministic results CSV (everything except wall times).
pub fn write_records_csv(records: &[TrialRecord], out: &mut impl Write) -> Result<()> {
    writeln!(out, "#schema=trialrecord-v1")?;
    writeln!(out, "p,n,nu,xbar,algorithm,trial,loss,iters,stop_reason")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.p,
            r.n,
            fmt_float(r.nu),
            r.xbar_kind.as_str(),
            r.algorithm.as_str(),
            r.trial,
            fmt_float(r.loss),
            r.iters,
            r.stop_reason
        )?;
    }
    Ok(())
}

/// Writes the wall-clock sidecar CSV. Kept out of the main file so results
/// are byte-identical across runs; timings never are.
pub fn write_timings_csv(records: &[TrialRecord], out: &mut impl Write) -> Result<()> {
    writeln!(out, "#schema=trialtiming-v1")?;
    writeln!(out, "p,n,nu,xbar,algorithm,trial,wall_time_ns")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.p,
            r.n,
            fmt_float(r.nu),
            r.xbar_kind.as_str(),
            r.algorithm.as_str(),
            r.trial,
            r.wall_time_ns
        )?;
    }
    Ok(())
}

/// Runs a grid and writes the results file (plus optional timing sidecar).
pub fn simulate_to_files(cfg: &GridConfig, out: &Path, timings: Option<&Path>) -> Result<()> {
    let records = run_grid(cfg)?;
    let mut buf = Vec::new();
    write_records_csv(&records, &mut buf)?;
    std::fs::write(out, &buf).with_context(|| format!("cannot write {}", out.display()))?;
    if let Some(tpath) = timings {
        let mut tbuf = Vec::new();
        write_timings_csv(&records, &mut tbuf)?;
        std::fs::write(tpath, &tbuf)
            .with_context(|| format!("cannot write {}", tpath.display()))?;
    }
    Ok(())
}
