//! Subcommand dispatch, the worker pool, and all output writing.
//!
//! Every run writes its manifest before the long computation starts, then
//! CSV tables and FNLS1 fields with fixed names into the output directory.
//! All randomness flows from the single `seed` key via (seed, stream-id)
//! counter streams, so results are byte-identical across runs and across
//! worker counts.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use fnls_core::analysis::{self, StabilityRow, SubaddRow};
use fnls_core::dynamics::{self, EvolveConfig};
use fnls_core::functional::{self, gn_check, gn_exponent, Params, State};
use fnls_core::grid::{Field, Grid};
use fnls_core::groundstate::{
    minimize, scalar_ground_state, InitMode, MinimizeConfig, MinimizerResult, ScalarResult,
};
use fnls_core::rng::StreamRng;
use fnls_core::Complex64;

use crate::config::{params_from_config, params_to_kv, Config, ConfigError};
use crate::fnls1;
use crate::verify;

pub const COMMANDS: [&str; 8] = [
    "groundstate",
    "scalar",
    "evolve",
    "stability",
    "scan-subadd",
    "check-gn",
    "concentration",
    "verify-ops",
];

#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Numerical(String),
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

impl From<fnls_core::CoreError> for RunError {
    fn from(e: fnls_core::CoreError) -> Self {
        RunError::Numerical(e.to_string())
    }
}

impl From<fnls1::FnlsError> for RunError {
    fn from(e: fnls1::FnlsError) -> Self {
        RunError::Numerical(e.to_string())
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Numerical(format!("io error: {e}"))
    }
}

/// Worker count: FRAC_NLS_WORKERS overrides the machine default.
pub fn worker_count(rows: usize) -> usize {
    let configured = std::env::var("FRAC_NLS_WORKERS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1);
    let available = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    configured.unwrap_or(available).min(rows.max(1))
}

/// Index-addressed parallel map: results land in input order no matter how
/// the pool schedules, so output bytes cannot depend on the worker count.
pub fn parallel_map<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> R + Sync,
{
    let n = items.len();
    if workers <= 1 || n <= 1 {
        return items.iter().enumerate().map(|(i, t)| f(i, t)).collect();
    }
    let slots: Mutex<Vec<Option<R>>> = Mutex::new((0..n).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let r = f(i, &items[i]);
                slots.lock().unwrap()[i] = Some(r);
            });
        }
    });
    slots.into_inner().unwrap().into_iter().map(|slot| slot.unwrap()).collect()
}

fn fmt(x: f64) -> String {
    format!("{x}")
}

fn write_csv(path: &Path, header: &str, rows: &[Vec<String>]) -> std::io::Result<()> {
    let mut out = String::with_capacity(rows.len() * 32 + header.len() + 1);
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    fs::write(path, out)
}

fn write_kv(path: &Path, pairs: &[(&str, String)]) -> std::io::Result<()> {
    let mut out = String::new();
    for (k, v) in pairs {
        out.push_str(k);
        out.push_str(" = ");
        out.push_str(v);
        out.push('\n');
    }
    fs::write(path, out)
}

fn manifest_start(
    out_dir: &Path,
    command: &str,
    config_path: &Path,
    cfg: &Config,
) -> std::io::Result<PathBuf> {
    let path = out_dir.join("manifest.txt");
    let mut out = String::new();
    out.push_str(&format!("command = {command}\n"));
    out.push_str(&format!("config_path = {}\n", config_path.display()));
    out.push_str(&format!("tool = fnls {}\n", env!("CARGO_PKG_VERSION")));
    let started = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    out.push_str(&format!("started_unix = {started}\n"));
    for (k, v) in cfg.keys() {
        out.push_str(&format!("config.{k} = {v}\n"));
    }
    fs::write(&path, out)?;
    Ok(path)
}

fn manifest_finish(path: &Path, status: &str, wall: f64) {
    let line = format!("status = {status}\nwall_seconds = {wall:.3}\n");
    let _ = fs::OpenOptions::new().append(true).open(path).map(|mut f| {
        use std::io::Write;
        let _ = f.write_all(line.as_bytes());
    });
}

fn grid_from_config(cfg: &Config) -> Result<Grid, RunError> {
    let dim = cfg.require_usize("grid.dim")?;
    let points = cfg.require_usize("grid.points")?;
    let length = cfg.require_f64("grid.length")?;
    Ok(Grid::new(dim, points, length)?)
}

fn minimize_config(cfg: &Config, seed: u64) -> Result<MinimizeConfig, RunError> {
    let init = match cfg.get("minimize.init").unwrap_or("gaussian-bumps") {
        "gaussian-bumps" => InitMode::GaussianBumps,
        "scalar-product" => InitMode::ScalarProduct,
        other => {
            return Err(RunError::Config(ConfigError {
                line: 0,
                message: format!(
                    "minimize.init '{other}' not one of gaussian-bumps, scalar-product \
                     (provided-state is only reachable through the library API)"
                ),
            }))
        }
    };
    Ok(MinimizeConfig {
        step_init: cfg.f64_or("minimize.step", 0.5)?,
        shrink: cfg.f64_or("minimize.shrink", 0.5)?,
        armijo: cfg.f64_or("minimize.armijo", 1e-4)?,
        tol: cfg.f64_or("minimize.tol", 1e-6)?,
        max_iters: cfg.usize_or("minimize.max_iters", 20_000)?,
        seed,
        init,
    })
}

fn evolve_config(cfg: &Config) -> Result<EvolveConfig, RunError> {
    Ok(EvolveConfig {
        dt: cfg.f64_or("evolve.dt", 1e-3)?,
        horizon: cfg.f64_or("evolve.horizon", 5.0)?,
        stride: cfg.usize_or("evolve.stride", 50)?,
        store_states: cfg.bool_or("evolve.store_states", false)?,
    })
}

fn validated_params(cfg: &Config, grid: &Grid) -> Result<Params, RunError> {
    let params = params_from_config(cfg, "params.")?;
    let warnings = params.validate(grid.dim())?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok(params)
}

fn minimizer_meta(res: &MinimizerResult, params: &Params, seed: u64) -> Vec<(&'static str, String)> {
    // Multiplier signs and L^p floors are reported, not asserted: positivity
    // of λ is a theory-level claim this artifact measures.
    vec![
        ("energy", fmt(res.energy)),
        ("lambda1", fmt(res.lambda.0)),
        ("lambda2", fmt(res.lambda.1)),
        ("lambda_signs", format!(
            "{}{}",
            if res.lambda.0 > 0.0 { "+" } else { "-" },
            if res.lambda.1 > 0.0 { "+" } else { "-" }
        )),
        ("residual1", fmt(res.residual.0)),
        ("residual2", fmt(res.residual.1)),
        ("iterations", res.iterations.to_string()),
        ("converged", res.converged.to_string()),
        ("mass1", fmt(functional::mass(&res.state.u1))),
        ("mass2", fmt(functional::mass(&res.state.u2))),
        ("lp_norm1", fmt(functional::lp_norm(&res.state.u1, params.p1))),
        ("lp_norm2", fmt(functional::lp_norm(&res.state.u2, params.p2))),
        ("tail_mass1", fmt(res.tail_mass.0)),
        ("tail_mass2", fmt(res.tail_mass.1)),
        ("seed", seed.to_string()),
        ("params", params_to_kv(params).replace('\n', "; ")),
    ]
}

fn trace_rows(trace: &[f64]) -> Vec<Vec<String>> {
    trace.iter().enumerate().map(|(i, e)| vec![i.to_string(), fmt(*e)]).collect()
}

fn run_groundstate(cfg: &Config, out: &Path) -> Result<(), RunError> {
    let grid = grid_from_config(cfg)?;
    let params = validated_params(cfg, &grid)?;
    let seed = cfg.u64_or("seed", 7)?;
    let mcfg = minimize_config(cfg, seed)?;
    let res = minimize(&params, &mcfg, &grid)?;
    fnls1::write_fields(
        &out.join("groundstate.fnls1"),
        &[&res.state.u1, &res.state.u2],
        params.alpha,
    )?;
    write_csv(&out.join("trace.csv"), "iteration,energy", &trace_rows(&res.trace))?;
    write_kv(
        &out.join("groundstate_meta.txt"),
        &minimizer_meta(&res, &params, seed)
            .iter()
            .map(|(k, v)| (*k, v.clone()))
            .collect::<Vec<_>>(),
    )?;
    if res.converged {
        Ok(())
    } else {
        Err(RunError::Numerical(format!(
            "minimizer did not converge (residuals {:?})",
            res.residual
        )))
    }
}

fn scalar_meta(res: &ScalarResult, seed: u64) -> Vec<(&'static str, String)> {
    vec![
        ("energy", fmt(res.energy)),
        ("omega", fmt(res.omega)),
        ("residual", fmt(res.residual)),
        ("iterations", res.iterations.to_string()),
        ("converged", res.converged.to_string()),
        ("mass", fmt(functional::mass(&res.field))),
        ("tail_mass", fmt(res.tail_mass)),
        ("seed", seed.to_string()),
    ]
}

fn run_scalar(cfg: &Config, out: &Path) -> Result<(), RunError> {
    let grid = grid_from_config(cfg)?;
    let alpha = cfg.require_f64("params.alpha")?;
    let mu = cfg.require_f64("params.mu1")?;
    let p = cfg.require_f64("params.p1")?;
    let tau = cfg.require_f64("params.tau1")?;
    let seed = cfg.u64_or("seed", 7)?;
    let mcfg = minimize_config(cfg, seed)?;
    let res = scalar_ground_state(alpha, mu, p, tau, &mcfg, &grid)?;
    fnls1::write_fields(&out.join("scalar.fnls1"), &[&res.field], alpha)?;
    write_csv(&out.join("trace.csv"), "iteration,energy", &trace_rows(&res.trace))?;
    write_kv(
        &out.join("scalar_meta.txt"),
        &scalar_meta(&res, seed).iter().map(|(k, v)| (*k, v.clone())).collect::<Vec<_>>(),
    )?;
    if res.converged {
        Ok(())
    } else {
        Err(RunError::Numerical(format!(
            "scalar solve did not converge (residual {})",
            res.residual
        )))
    }
}

fn state_from_file(path: &Path, grid_hint: Option<&Grid>) -> Result<State, RunError> {
    let file = fnls1::read_fields(path)?;
    if let Some(expected) = grid_hint {
        if &file.grid != expected {
            return Err(RunError::Numerical(format!(
                "field file {} uses a different grid than the config",
                path.display()
            )));
        }
    }
    let mut comps = file.components.into_iter();
    let u1 = comps
        .next()
        .ok_or_else(|| RunError::Numerical("field file has no components".into()))?;
    let u2 = comps.next().unwrap_or_else(|| Field::zeros(u1.grid()));
    Ok(State::new(u1, u2)?)
}

fn trajectory_rows(traj: &dynamics::Trajectory) -> Vec<Vec<String>> {
    (0..traj.times.len())
        .map(|i| {
            vec![
                fmt(traj.times[i]),
                fmt(traj.mass1[i]),
                fmt(traj.mass2[i]),
                fmt(traj.energy[i]),
                traj.orbit_distance
                    .as_ref()
                    .map(|d| fmt(d[i]))
                    .unwrap_or_default(),
            ]
        })
        .collect()
}

fn run_evolve(cfg: &Config, out: &Path) -> Result<(), RunError> {
    let grid = grid_from_config(cfg)?;
    let params = validated_params(cfg, &grid)?;
    let initial_path = PathBuf::from(cfg.require("evolve.initial")?);
    let state = state_from_file(&initial_path, Some(&grid))?;
    let reference = match cfg.get("evolve.reference") {
        Some(path) => Some(state_from_file(Path::new(path), Some(&grid))?),
        None => None,
    };
    let ecfg = evolve_config(cfg)?;
    let reference_state = reference.as_ref().or(Some(&state));
    let traj = dynamics::evolve_tracked(&state, &params, &ecfg, reference_state)?;
    write_csv(
        &out.join("trajectory.csv"),
        "t,m1,m2,energy,orbit_distance",
        &trajectory_rows(&traj),
    )?;
    if let Some(states) = &traj.states {
        for (i, s) in states.iter().enumerate() {
            let name = format!("state_{i:05}.fnls1");
            fnls1::write_fields(&out.join(name), &[&s.u1, &s.u2], params.alpha)?;
        }
    }
    match traj.aborted_at_step {
        None => Ok(()),
        Some(step) => Err(RunError::Numerical(format!(
            "evolution aborted on non-finite values at step {step}"
        ))),
    }
}

fn run_stability(cfg: &Config, out: &Path) -> Result<(), RunError> {
    let grid = grid_from_config(cfg)?;
    let params = validated_params(cfg, &grid)?;
    let seed = cfg.u64_or("seed", 7)?;
    let mcfg = minimize_config(cfg, seed)?;
    let reference = minimize(&params, &mcfg, &grid)?;
    fnls1::write_fields(
        &out.join("reference.fnls1"),
        &[&reference.state.u1, &reference.state.u2],
        params.alpha,
    )?;
    write_kv(
        &out.join("reference_meta.txt"),
        &minimizer_meta(&reference, &params, seed)
            .iter()
            .map(|(k, v)| (*k, v.clone()))
            .collect::<Vec<_>>(),
    )?;
    if !reference.converged {
        return Err(RunError::Numerical("reference minimizer did not converge".into()));
    }
    let deltas = match cfg.get("analysis.deltas") {
        Some(_) => cfg.f64_list("analysis.deltas")?,
        None => vec![0.0, 1e-3, 1e-2],
    };
    let ecfg = evolve_config(cfg)?;
    let workers = worker_count(deltas.len());
    let rows: Vec<Result<StabilityRow, String>> =
        parallel_map(&deltas, workers, |i, &delta| {
            analysis::stability_row(&reference, delta, &params, &ecfg, seed, i as u64)
                .map_err(|e| e.to_string())
        });
    let mut csv_rows = Vec::new();
    let mut sups: Vec<(f64, f64)> = Vec::new();
    for row in rows {
        let row = row.map_err(RunError::Numerical)?;
        sups.push((row.delta, row.sup_distance));
        csv_rows.push(vec![
            fmt(row.delta),
            fmt(row.sup_distance),
            fmt(row.mass_drift.0),
            fmt(row.mass_drift.1),
            fmt(row.energy_drift),
            row.aborted.to_string(),
        ]);
    }
    write_csv(
        &out.join("stability.csv"),
        "delta,sup_distance,mass_drift1,mass_drift2,energy_drift,aborted",
        &csv_rows,
    )?;
    // Soft expectation, reported rather than asserted: larger perturbations
    // should not wander less.
    let mut by_delta = sups.clone();
    by_delta.sort_by(|a, b| a.0.total_cmp(&b.0));
    for pair in by_delta.windows(2) {
        if pair[1].1 < pair[0].1 {
            eprintln!(
                "warning: sup-distance not monotone in delta ({} -> {} as delta {} -> {})",
                pair[0].1, pair[1].1, pair[0].0, pair[1].0
            );
        }
    }
    Ok(())
}

fn run_scan_subadd(cfg: &Config, out: &Path) -> Result<(), RunError> {
    let grid = grid_from_config(cfg)?;
    let params = validated_params(cfg, &grid)?;
    let seed = cfg.u64_or("seed", 7)?;
    let mcfg = minimize_config(cfg, seed)?;
    let points = cfg.mass_pairs("scan.masses")?;

    // Collect every mass pair any row needs, in deterministic encounter
    // order, then solve the unique set in parallel.
    type MassPair = (f64, f64);
    let mut combos: Vec<(MassPair, MassPair, MassPair)> = Vec::new();
    let mut unique: Vec<(f64, f64)> = Vec::new();
    let note = |m: (f64, f64), unique: &mut Vec<(f64, f64)>| {
        if !unique.contains(&m) {
            unique.push(m);
        }
    };
    for i in 0..points.len() {
        for j in i..points.len() {
            let sigma = points[i];
            let tau = points[j];
            if sigma == (0.0, 0.0) || tau == (0.0, 0.0) {
                continue;
            }
            let sum = (sigma.0 + tau.0, sigma.1 + tau.1);
            if !(sum.0 > 0.0 && sum.1 > 0.0) {
                continue;
            }
            note(sigma, &mut unique);
            note(tau, &mut unique);
            note(sum, &mut unique);
            combos.push((sigma, tau, sum));
        }
    }
    let workers = worker_count(unique.len());
    let solved: Vec<Option<f64>> = parallel_map(&unique, workers, |_, &masses| {
        analysis::constrained_infimum(masses, &params, &mcfg, &grid)
    });
    let lookup = |m: (f64, f64)| -> Option<f64> {
        unique.iter().position(|&u| u == m).and_then(|i| solved[i])
    };
    let mut rows: Vec<SubaddRow> = Vec::new();
    for (sigma, tau, sum) in combos {
        let (e_sigma, e_tau, e_sum) = (lookup(sigma), lookup(tau), lookup(sum));
        let valid = e_sigma.is_some() && e_tau.is_some() && e_sum.is_some();
        let (a, b, c) = (
            e_sigma.unwrap_or(f64::NAN),
            e_tau.unwrap_or(f64::NAN),
            e_sum.unwrap_or(f64::NAN),
        );
        rows.push(SubaddRow {
            sigma,
            tau,
            e_sigma: a,
            e_tau: b,
            e_sum: c,
            margin: c - a - b,
            valid,
        });
    }
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                fmt(r.sigma.0),
                fmt(r.sigma.1),
                fmt(r.tau.0),
                fmt(r.tau.1),
                fmt(r.e_sigma),
                fmt(r.e_tau),
                fmt(r.e_sum),
                fmt(r.margin),
                r.valid.to_string(),
            ]
        })
        .collect();
    write_csv(
        &out.join("subadd.csv"),
        "sigma1,sigma2,tau1,tau2,e_sigma,e_tau,e_sum,margin,valid",
        &csv_rows,
    )?;
    for r in &rows {
        if r.valid && r.margin >= 0.0 {
            eprintln!(
                "warning: non-negative subadditivity margin {} at sigma=({},{}), tau=({},{})",
                r.margin, r.sigma.0, r.sigma.1, r.tau.0, r.tau.1
            );
        }
    }
    if rows.iter().any(|r| r.valid) {
        Ok(())
    } else {
        Err(RunError::Numerical("no subadditivity row converged".into()))
    }
}

fn run_check_gn(cfg: &Config, out: &Path) -> Result<(), RunError> {
    let grid = grid_from_config(cfg)?;
    let alpha = cfg.require_f64("params.alpha")?;
    let p = cfg.f64_or("analysis.gn_p", 3.0)?;
    let q = cfg.f64_or("analysis.gn_q", 2.0)?;
    let samples = cfg.usize_or("analysis.samples", 100)?;
    let seed = cfg.u64_or("seed", 7)?;
    let lambda = gn_exponent(p, q, grid.dim(), alpha)?;
    let m = grid.points_per_axis();
    let mut rows = Vec::with_capacity(samples);
    let mut max_ratio = 0.0f64;
    for sample in 0..samples {
        let mut rng = StreamRng::new(seed, 200 + sample as u64);
        let spec: Vec<Complex64> = (0..grid.node_count())
            .map(|flat| {
                let idx = grid.unflatten(flat);
                let ok = (0..grid.dim()).all(|a| idx[a].min(m - idx[a]) <= m / 8);
                if ok {
                    Complex64::new(rng.normal(), rng.normal())
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        let field = Field::from_spectrum(&grid, spec);
        let ratio = gn_check(&field, p, q, alpha)?;
        max_ratio = max_ratio.max(ratio);
        rows.push(vec![sample.to_string(), fmt(ratio)]);
    }
    write_csv(&out.join("gn.csv"), "sample,ratio", &rows)?;
    write_kv(
        &out.join("gn_meta.txt"),
        &[
            ("p", fmt(p)),
            ("q", fmt(q)),
            ("alpha", fmt(alpha)),
            ("lambda", fmt(lambda)),
            ("samples", samples.to_string()),
            ("max_ratio", fmt(max_ratio)),
        ],
    )?;
    Ok(())
}

fn run_concentration(cfg: &Config, out: &Path) -> Result<(), RunError> {
    let field_path = PathBuf::from(cfg.require("analysis.field")?);
    let state = state_from_file(&field_path, None)?;
    let radii = cfg.f64_list("analysis.radii")?;
    let table = analysis::concentration_function(&state, &radii)?;
    let rows: Vec<Vec<String>> =
        table.iter().map(|(t, q)| vec![fmt(*t), fmt(*q)]).collect();
    write_csv(&out.join("concentration.csv"), "radius,q", &rows)?;
    Ok(())
}

fn run_verify_ops(cfg: &Config, out: &Path) -> Result<(), RunError> {
    let seed = cfg.u64_or("seed", 7)?;
    let rows = verify::run_all(seed);
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.name.to_string(),
                fmt(r.value),
                fmt(r.reference),
                fmt(r.error),
                fmt(r.tolerance),
                r.pass.to_string(),
            ]
        })
        .collect();
    write_csv(&out.join("verify.csv"), "check,value,reference,error,tolerance,pass", &csv_rows)?;
    let mut failures = 0;
    for r in &rows {
        println!(
            "{} {} (value {:.6e}, error {:.3e}, tolerance {:.1e})",
            if r.pass { "ok  " } else { "FAIL" },
            r.name,
            r.value,
            r.error,
            r.tolerance
        );
        if !r.pass {
            failures += 1;
        }
    }
    if failures == 0 {
        Ok(())
    } else {
        Err(RunError::Numerical(format!("{failures} operator checks failed")))
    }
}

/// Execute one subcommand. Exit codes: 0 success, 2 unknown command,
/// 3 config error, 4 numerical failure (manifest still written).
pub fn run(command: &str, config_path: &Path, out_dir: &Path) -> i32 {
    if !COMMANDS.contains(&command) {
        eprintln!(
            "error: unknown command '{command}' (expected one of {})",
            COMMANDS.join(", ")
        );
        return 2;
    }
    let text = match fs::read_to_string(config_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read config {}: {e}", config_path.display());
            return 3;
        }
    };
    let cfg = match Config::parse(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 3;
        }
    };
    if let Err(e) = fs::create_dir_all(out_dir) {
        eprintln!("error: cannot create output dir {}: {e}", out_dir.display());
        return 4;
    }
    let manifest = match manifest_start(out_dir, command, config_path, &cfg) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot write manifest: {e}");
            return 4;
        }
    };
    let started = Instant::now();
    let outcome = match command {
        "groundstate" => run_groundstate(&cfg, out_dir),
        "scalar" => run_scalar(&cfg, out_dir),
        "evolve" => run_evolve(&cfg, out_dir),
        "stability" => run_stability(&cfg, out_dir),
        "scan-subadd" => run_scan_subadd(&cfg, out_dir),
        "check-gn" => run_check_gn(&cfg, out_dir),
        "concentration" => run_concentration(&cfg, out_dir),
        "verify-ops" => run_verify_ops(&cfg, out_dir),
        _ => unreachable!("command list checked above"),
    };
    let wall = started.elapsed().as_secs_f64();
    match outcome {
        Ok(()) => {
            manifest_finish(&manifest, "ok", wall);
            0
        }
        Err(RunError::Config(e)) => {
            manifest_finish(&manifest, "config-error", wall);
            eprintln!("error: {e}");
            3
        }
        Err(RunError::Numerical(msg)) => {
            manifest_finish(&manifest, "numerical-failure", wall);
            eprintln!("error: {msg}");
            4
        }
    }
}
