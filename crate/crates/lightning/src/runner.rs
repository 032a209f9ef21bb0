use std::time::Instant;

use lightning_core::analysis::{cluster_count, cluster_count_auto, mc_sweep, simulate, PercolationEstimates};
use lightning_core::lattice::{edge_map, sample_potentials};
use lightning_core::psi::{outer_edge_break_rate, property_summary, PsiParams};
use lightning_core::spectral::{
    build_operator_matrix, certify, max_certified_epsilon, saw_count, spectral_radius, IntervalPartition,
};
use lightning_core::{BoxRegion, Epsilon, McEstimate, RngSeed};
use serde_json::Value;

use crate::config::{Command, ExperimentSpec};
use crate::error::{CliError, CliResult};
use crate::output::ResultRecord;

/// Runs `spec` on a pool of `spec.threads` workers, or on the global pool.
pub fn run_with_threads(spec: &ExperimentSpec) -> CliResult<Vec<ResultRecord>> {
    match spec.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::validation(format!("thread pool: {e}")))?
            .install(|| run(spec)),
        None => run(spec),
    }
}

pub fn run(spec: &ExperimentSpec) -> CliResult<Vec<ResultRecord>> {
    let started = Instant::now();
    let mut records = match spec.command {
        Command::Simulate => vec![run_simulate(spec)?],
        Command::Sweep => return run_sweep(spec),
        Command::Spectral => vec![run_spectral(spec)?],
        Command::Certify => vec![run_certify(spec)?],
        Command::PsiVerify => vec![run_psi(spec)?],
        Command::Saw => vec![run_saw(spec)?],
        Command::ClusterCount => vec![run_cluster(spec)?],
    };
    for r in &mut records {
        r.duration = started.elapsed();
    }
    Ok(records)
}

fn eps_of(value: f64) -> CliResult<Epsilon> {
    Ok(Epsilon::new(value)?)
}

fn required<T: Copy>(value: Option<T>, what: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::validation(format!("missing {what}")))
}

fn rng(spec: &ExperimentSpec) -> RngSeed {
    RngSeed::new(spec.seed, 0)
}

fn with_estimate(rec: ResultRecord, keys: [&'static str; 3], e: &McEstimate) -> ResultRecord {
    rec.metric(keys[0], e.point_estimate).metric(keys[1], e.ci_half_width).metric(keys[2], e.successes)
}

fn percolation_record(spec: &ExperimentSpec, eps: f64, est: &PercolationEstimates) -> ResultRecord {
    let rec = ResultRecord::new(spec.command, Some(spec.seed))
        .param("eps", eps)
        .param("r", spec.r)
        .param("trials", spec.trials);
    let rec = if spec.command == Command::Sweep { rec.param("coupled", spec.coupled) } else { rec };
    let rec = with_estimate(rec, ["weak", "weak_ci", "weak_successes"], &est.weak);
    let rec = with_estimate(rec, ["strong", "strong_ci", "strong_successes"], &est.strong);
    with_estimate(rec, ["attracting", "attracting_ci", "attracting_successes"], &est.attracting)
}

fn run_simulate(spec: &ExperimentSpec) -> CliResult<ResultRecord> {
    let eps = required(spec.eps, "eps")?;
    let est = simulate(eps_of(eps)?, required(spec.r, "r")?, required(spec.trials, "trials")?, rng(spec))?;
    Ok(percolation_record(spec, eps, &est))
}

/// Coupled sweeps share trial `t`'s field across the grid; otherwise grid
/// point `i` draws from `substream(i)`.
fn run_sweep(spec: &ExperimentSpec) -> CliResult<Vec<ResultRecord>> {
    let grid = spec.eps_grid.as_deref().ok_or_else(|| CliError::validation("missing eps grid"))?;
    let (r, trials) = (required(spec.r, "r")?, required(spec.trials, "trials")?);
    if spec.coupled {
        let started = Instant::now();
        let eps: Vec<Epsilon> = grid.iter().map(|&e| eps_of(e)).collect::<CliResult<_>>()?;
        let ests = mc_sweep(&eps, r, trials, rng(spec))?;
        let elapsed = started.elapsed();
        return Ok(grid
            .iter()
            .zip(&ests)
            .map(|(&e, est)| ResultRecord { duration: elapsed, ..percolation_record(spec, e, est) })
            .collect());
    }
    grid.iter()
        .enumerate()
        .map(|(i, &e)| {
            let started = Instant::now();
            let est = simulate(eps_of(e)?, r, trials, rng(spec).substream(i as u64))?;
            Ok(ResultRecord { duration: started.elapsed(), ..percolation_record(spec, e, &est) })
        })
        .collect()
}

fn run_spectral(spec: &ExperimentSpec) -> CliResult<ResultRecord> {
    let eps = required(spec.eps, "eps")?;
    let partition = IntervalPartition::new(eps_of(eps)?)?;
    let radius = spectral_radius(&build_operator_matrix(partition)?, spec.tol)?;
    Ok(ResultRecord::new(spec.command, None)
        .param("eps", eps)
        .param("tol", spec.tol)
        .metric("blocks", partition.blocks())
        .metric("dim", partition.dim())
        .metric("rho", radius.rho)
        .metric("rho_lower", radius.lower)
        .metric("rho_upper", radius.upper)
        .metric("iterations", radius.iterations))
}

fn run_certify(spec: &ExperimentSpec) -> CliResult<ResultRecord> {
    let rec = ResultRecord::new(spec.command, None).param("lambda", spec.lambda).param("tol", spec.tol);
    if let Some(step) = spec.grid_step {
        let scan = max_certified_epsilon(spec.lambda, step, spec.tol)?;
        return Ok(rec
            .param("grid_step", step)
            .metric("eps0", scan.eps0)
            .metric("found", scan.found)
            .metric("points_checked", scan.points_checked)
            .metric("truncated_at", scan.truncated_at.map_or(Value::Null, Value::from)));
    }
    let eps = required(spec.eps, "eps")?;
    let c = certify(eps_of(eps)?, spec.lambda, spec.tol)?;
    Ok(rec
        .param("eps", eps)
        .metric("rho", c.rho)
        .metric("rho_tolerance", c.rho_tolerance)
        .metric("lambda_rho_upper", c.lambda_bound * (c.rho + c.rho_tolerance))
        .metric("certified", c.certified))
}

fn run_psi(spec: &ExperimentSpec) -> CliResult<ResultRecord> {
    let eps = required(spec.eps, "eps")?;
    let (n, fields) = (required(spec.n, "n")?, required(spec.trials, "trials")?);
    let params = PsiParams::canonical(eps_of(eps)?, n)?;
    let s = property_summary(&params, fields, rng(spec))?;
    let outer = outer_edge_break_rate(params.eps(), n, spec.edge_trials, RngSeed::new(spec.seed, 1))?;
    let bound = params.eta() / 2.0;
    let within = outer.point_estimate <= bound + 3.0 * outer.std_error();
    let floor = eps.powf(8.0 / eps);
    let holds = s.central_bidirectional == s.fields
        && s.broken_lateral + s.broken_inwards + s.broken_deep_outwards + s.broken_exterior + s.unlocalized == 0
        && within;
    Ok(ResultRecord::new(spec.command, Some(spec.seed))
        .param("eps", eps)
        .param("n", n)
        .param("trials", fields)
        .param("edge_trials", spec.edge_trials)
        .metric("eta", params.eta())
        .metric("fields", s.fields)
        .metric("central_bidirectional", s.central_bidirectional)
        .metric("no_break", s.no_break)
        .metric("no_break_fraction", s.no_break as f64 / s.fields as f64)
        .metric("asymptotic_floor", floor)
        .metric("broken_edges", s.broken_edges)
        .metric("broken_lateral", s.broken_lateral)
        .metric("broken_inwards", s.broken_inwards)
        .metric("broken_deep_outwards", s.broken_deep_outwards)
        .metric("broken_exterior", s.broken_exterior)
        .metric("unlocalized", s.unlocalized)
        .metric("outer_break_rate", outer.point_estimate)
        .metric("outer_break_ci", outer.ci_half_width)
        .metric("outer_break_bound", bound)
        .metric("outer_within_bound", within)
        .metric("properties_hold", holds))
}

fn run_saw(spec: &ExperimentSpec) -> CliResult<ResultRecord> {
    let n = required(spec.n, "n")?;
    let mu = saw_count(n).ok_or_else(|| CliError::validation("walk length out of range"))?;
    let bound = 4 * 3u64.pow(n - 1);
    Ok(ResultRecord::new(spec.command, None)
        .param("n", n)
        .metric("mu", mu)
        .metric("bound", bound)
        .metric("within_bound", mu <= bound))
}

/// Samples a field on `B_r`; with `auto`, `r` is the largest radius tried.
fn run_cluster(spec: &ExperimentSpec) -> CliResult<ResultRecord> {
    let eps = required(spec.eps, "eps")?;
    let (m, n, r) = (required(spec.m, "m")?, required(spec.n, "n")?, required(spec.r, "r")?);
    if r > BoxRegion::MAX_HALF_WIDTH {
        return Err(CliError::validation("r too large"));
    }
    let config = edge_map(&sample_potentials(BoxRegion::new(r), rng(spec)), eps_of(eps)?);
    let res = if spec.auto { cluster_count_auto(&config, m, n)? } else { cluster_count(&config, m, n, r)? };
    Ok(ResultRecord::new(spec.command, Some(spec.seed))
        .param("eps", eps)
        .param("m", m)
        .param("n", n)
        .param("r", r)
        .param("auto", spec.auto)
        .metric("count", res.count)
        .metric("r_used", res.r)
        .metric("stabilized", res.stabilized)
        .metric("unchanged_from_previous", res.unchanged_from_previous))
}
