//! Evaluates scenarios point by point, in parallel, into result tables.
//! Per-point failures become rows with a nonempty `error` column; the run
//! continues. Rows are emitted in deterministic order (sweep value, then
//! method name) regardless of scheduling.

use std::collections::BTreeMap;
use std::sync::{Condvar, Mutex};

use anyhow::Context;
use rayon::prelude::*;

use qheat_core::engine::{Bath, EngineParams, SpectralDensity};
use qheat_core::exact::{exact_steady_report, ExactOptions};
use qheat_core::gaussian::two_mode_fidelity;
use qheat_core::global::global_report;
use qheat_core::local::{local_heat_current, local_report, local_steady_closed};
use qheat_core::qubit::{qubit_steady_comparison, QubitMachineParams};
use qheat_core::report::{Method, SteadyReport};

use crate::scenario::{Scenario, ScenarioKind, SweepVariable};
use crate::table::{Cell, Table};

/// Worker-pool controls.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    /// Worker threads; 0 uses the number of CPUs.
    pub jobs: usize,
    /// Memory budget bounding how many exact-benchmark evaluations may run
    /// at once.
    pub exact_memory_mb: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            jobs: 0,
            exact_memory_mb: 2048,
        }
    }
}

/// Counting semaphore bounding concurrent exact evaluations.
struct Semaphore {
    permits: Mutex<usize>,
    cv: Condvar,
}

impl Semaphore {
    fn new(permits: usize) -> Self {
        Self {
            permits: Mutex::new(permits.max(1)),
            cv: Condvar::new(),
        }
    }

    fn run<T>(&self, f: impl FnOnce() -> T) -> T {
        let mut permits = self.permits.lock().unwrap();
        while *permits == 0 {
            permits = self.cv.wait(permits).unwrap();
        }
        *permits -= 1;
        drop(permits);
        let out = f();
        *self.permits.lock().unwrap() += 1;
        self.cv.notify_one();
        out
    }
}

/// Rough per-run working-set estimate for the exact benchmark.
fn exact_job_bytes(n: usize) -> usize {
    let modes = 2 * (n + 2);
    28 * modes * modes * 8
}

fn exact_permits(opts: &RunOptions, n: usize, jobs: usize) -> usize {
    let budget = opts.exact_memory_mb.saturating_mul(1_000_000);
    (budget / exact_job_bytes(n).max(1)).clamp(1, jobs.max(1))
}

const OSCILLATOR_COLUMNS: [&str; 27] = [
    "sweep_var",
    "sweep_value",
    "method",
    "omega_c",
    "omega_h",
    "g",
    "kappa_c",
    "kappa_h",
    "kT_c",
    "kT_h",
    "n_h",
    "n_c",
    "Re_s",
    "Im_s",
    "J_h",
    "J_c",
    "P",
    "eta",
    "J_h_plus",
    "J_h_minus",
    "eta_plus",
    "eta_minus",
    "n",
    "omega_cut",
    "horizon",
    "fidelity_vs_exact",
    "error",
];

const QUBIT_COLUMNS: [&str; 22] = [
    "sweep_var",
    "sweep_value",
    "method",
    "omega",
    "g",
    "kappa_c",
    "kappa_h",
    "kT_c",
    "kT_h",
    "J_h",
    "fidelity_local_global",
    "rho00",
    "rho01",
    "rho02",
    "rho03",
    "rho11",
    "rho12",
    "rho13",
    "rho22",
    "rho23",
    "rho33",
    "error",
];

const CONVERGENCE_COLUMNS: [&str; 7] = [
    "sweep_var",
    "sweep_value",
    "n",
    "omega_cut",
    "J_h",
    "J_h_local",
    "error",
];

/// Runs a scenario to a table inside a dedicated thread pool.
pub fn run_scenario(scenario: &Scenario, opts: &RunOptions) -> anyhow::Result<Table> {
    scenario.validate()?;
    let jobs = if opts.jobs == 0 {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    } else {
        opts.jobs
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .context("building worker pool")?;
    pool.install(|| match &scenario.kind {
        ScenarioKind::Oscillator {
            params,
            methods,
            sweep,
        } => run_oscillator(scenario, params, methods, sweep, opts, jobs),
        ScenarioKind::Qubit { params, sweep } => run_qubit(params, sweep),
        ScenarioKind::Convergence {
            params,
            n_list,
            omega_cut_list,
            n_sweep_horizon_factor,
        } => run_convergence(
            scenario,
            params,
            n_list,
            omega_cut_list,
            *n_sweep_horizon_factor,
            opts,
            jobs,
        ),
    })
}

/// Index-uniform subsample of the sweep grid for the exact method.
fn exact_subgrid_indices(points: usize, subgrid: usize) -> Vec<usize> {
    if subgrid == 0 || subgrid >= points {
        return (0..points).collect();
    }
    if subgrid == 1 {
        return vec![points - 1];
    }
    let mut idx: Vec<usize> = (0..subgrid)
        .map(|i| (i as f64 * (points - 1) as f64 / (subgrid - 1) as f64).round() as usize)
        .collect();
    idx.dedup();
    idx
}

fn apply_oscillator_sweep(
    base: &EngineParams,
    exact: &ExactOptions,
    variable: SweepVariable,
    value: f64,
) -> (EngineParams, ExactOptions) {
    let mut p = *base;
    let mut e = *exact;
    match variable {
        SweepVariable::G => p.g = value,
        SweepVariable::KTh => p.kt_h = value,
        SweepVariable::OmegaH => p.omega_h = value,
        SweepVariable::BathModes => e.n = value as usize,
        SweepVariable::Cutoff => e.omega_cut = value,
    }
    (p, e)
}

fn run_oscillator(
    scenario: &Scenario,
    base: &EngineParams,
    methods: &[Method],
    sweep: &crate::scenario::Sweep,
    opts: &RunOptions,
    jobs: usize,
) -> anyhow::Result<Table> {
    let exact_points = exact_subgrid_indices(sweep.grid.len(), scenario.exact_subgrid);
    let semaphore = Semaphore::new(exact_permits(opts, scenario.exact.n, jobs));

    // Enumerate (point, method) tasks; exact only on its subgrid.
    let mut tasks: Vec<(usize, Method)> = Vec::new();
    for (idx, _) in sweep.grid.iter().enumerate() {
        for &m in methods {
            if m == Method::Exact && !exact_points.contains(&idx) {
                continue;
            }
            tasks.push((idx, m));
        }
    }

    let results: BTreeMap<(usize, Method), Result<SteadyReport, String>> = tasks
        .par_iter()
        .map(|&(idx, method)| {
            let (p, e) =
                apply_oscillator_sweep(base, &scenario.exact, sweep.variable, sweep.grid[idx]);
            let outcome = match method {
                Method::Local => local_report(&p).map_err(|err| err.to_string()),
                Method::Global => SpectralDensity::for_bath(&p, Bath::Cold, e.omega_cut)
                    .and_then(|sd_c| {
                        let sd_h = SpectralDensity::for_bath(&p, Bath::Hot, e.omega_cut)?;
                        global_report(&p, &sd_c, &sd_h)
                    })
                    .map_err(|err| err.to_string()),
                Method::Exact => {
                    semaphore.run(|| exact_steady_report(&p, &e).map_err(|err| err.to_string()))
                }
            };
            ((idx, method), outcome)
        })
        .collect();

    let mut table = Table::new(OSCILLATOR_COLUMNS.to_vec());
    for (idx, &value) in sweep.grid.iter().enumerate() {
        let exact_cov = results
            .get(&(idx, Method::Exact))
            .and_then(|r| r.as_ref().ok())
            .map(|r| r.covariance.clone());
        for &m in methods {
            let Some(outcome) = results.get(&(idx, m)) else {
                continue;
            };
            let mut row: Vec<Cell> = vec![
                Cell::Str(sweep.variable.as_str().into()),
                Cell::Float(value),
                Cell::Str(m.as_str().into()),
            ];
            match outcome {
                Ok(report) => {
                    let p = &report.params;
                    row.extend([
                        Cell::Float(p.omega_c),
                        Cell::Float(p.omega_h),
                        Cell::Float(p.g),
                        Cell::Float(p.kappa_c),
                        Cell::Float(p.kappa_h),
                        Cell::Float(p.kt_c),
                        Cell::Float(p.kt_h),
                        Cell::Float(report.n_h),
                        Cell::Float(report.n_c),
                        Cell::Float(report.coherence.re),
                        Cell::Float(report.coherence.im),
                        Cell::Float(report.j_h),
                        Cell::Float(report.j_c),
                        Cell::Float(report.power),
                        report.efficiency.into(),
                    ]);
                    match &report.channels {
                        Some(ch) => row.extend([
                            Cell::Float(ch.j_h_plus),
                            Cell::Float(ch.j_h_minus),
                            Cell::Float(ch.eta_plus),
                            Cell::Float(ch.eta_minus),
                        ]),
                        None => row.extend([Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty]),
                    }
                    match &report.exact_meta {
                        Some(meta) => row.extend([
                            Cell::Int(meta.n as u64),
                            Cell::Float(meta.omega_cut),
                            Cell::Float(meta.horizon),
                        ]),
                        None => row.extend([Cell::Empty, Cell::Empty, Cell::Empty]),
                    }
                    let fidelity = exact_cov
                        .as_ref()
                        .and_then(|ec| two_mode_fidelity(&report.covariance, ec).ok());
                    row.push(fidelity.into());
                    row.push(Cell::Empty);
                }
                Err(message) => {
                    let (p, e) =
                        apply_oscillator_sweep(base, &scenario.exact, sweep.variable, value);
                    row.extend([
                        Cell::Float(p.omega_c),
                        Cell::Float(p.omega_h),
                        Cell::Float(p.g),
                        Cell::Float(p.kappa_c),
                        Cell::Float(p.kappa_h),
                        Cell::Float(p.kt_c),
                        Cell::Float(p.kt_h),
                    ]);
                    // n_h .. eta (8), channel (4), exact-meta (3) columns.
                    row.extend(vec![Cell::Empty; 15]);
                    if m == Method::Exact {
                        row[22] = Cell::Int(e.n as u64);
                        row[23] = Cell::Float(e.omega_cut);
                    }
                    row.push(Cell::Empty); // fidelity
                    row.push(Cell::Str(message.clone()));
                }
            }
            table.push(row);
        }
    }
    Ok(table)
}

fn run_qubit(base: &QubitMachineParams, sweep: &crate::scenario::Sweep) -> anyhow::Result<Table> {
    let results: BTreeMap<usize, Result<qheat_core::qubit::QubitComparison, String>> = sweep
        .grid
        .par_iter()
        .enumerate()
        .map(|(idx, &value)| {
            let mut p = *base;
            match sweep.variable {
                SweepVariable::G => p.g = value,
                SweepVariable::KTh => p.kt_h = value,
                _ => unreachable!("validated"),
            }
            (
                idx,
                qubit_steady_comparison(&p).map_err(|err| err.to_string()),
            )
        })
        .collect();

    let mut table = Table::new(QUBIT_COLUMNS.to_vec());
    for (idx, &value) in sweep.grid.iter().enumerate() {
        let mut p = *base;
        match sweep.variable {
            SweepVariable::G => p.g = value,
            SweepVariable::KTh => p.kt_h = value,
            _ => unreachable!("validated"),
        }
        let outcome = &results[&idx];
        // Alphabetical method order: global before local.
        for method in ["global", "local"] {
            let mut row: Vec<Cell> = vec![
                Cell::Str(sweep.variable.as_str().into()),
                Cell::Float(value),
                Cell::Str(method.into()),
                Cell::Float(p.omega),
                Cell::Float(p.g),
                Cell::Float(p.nu_c * p.omega),
                Cell::Float(p.nu_h * p.omega),
                Cell::Float(p.kt_c),
                Cell::Float(p.kt_h),
            ];
            match outcome {
                Ok(cmp) => {
                    let (j_h, rho) = if method == "global" {
                        (cmp.j_h_global, &cmp.rho_global)
                    } else {
                        (cmp.j_h_local, &cmp.rho_local)
                    };
                    row.push(Cell::Float(j_h));
                    row.push(Cell::Float(cmp.fidelity_local_global));
                    for v in rho.upper_triangle_reals() {
                        row.push(Cell::Float(v));
                    }
                    row.push(Cell::Empty);
                }
                Err(message) => {
                    row.extend(vec![Cell::Empty; 12]);
                    row.push(Cell::Str(message.clone()));
                }
            }
            table.push(row);
        }
    }
    Ok(table)
}

#[allow(clippy::too_many_arguments)]
fn run_convergence(
    scenario: &Scenario,
    params: &EngineParams,
    n_list: &[usize],
    omega_cut_list: &[f64],
    n_sweep_horizon_factor: f64,
    opts: &RunOptions,
    jobs: usize,
) -> anyhow::Result<Table> {
    let st = local_steady_closed(params);
    let j_h_local = local_heat_current(params, &st, Bath::Hot);
    let max_n = n_list
        .iter()
        .copied()
        .max()
        .unwrap_or(scenario.exact.n)
        .max(scenario.exact.n);
    let semaphore = Semaphore::new(exact_permits(opts, max_n, jobs));

    enum Point {
        Modes(usize),
        Cutoff(f64),
    }
    let mut points: Vec<Point> = n_list.iter().map(|&n| Point::Modes(n)).collect();
    points.extend(omega_cut_list.iter().map(|&w| Point::Cutoff(w)));

    let results: BTreeMap<usize, (SweepVariable, f64, ExactOptions, Result<f64, String>)> = points
        .par_iter()
        .enumerate()
        .map(|(idx, point)| {
            let (var, value, exact) = match point {
                Point::Modes(n) => (
                    SweepVariable::BathModes,
                    *n as f64,
                    ExactOptions {
                        n: *n,
                        horizon_factor: n_sweep_horizon_factor,
                        ..scenario.exact
                    },
                ),
                Point::Cutoff(w) => (
                    SweepVariable::Cutoff,
                    *w,
                    ExactOptions {
                        omega_cut: *w,
                        ..scenario.exact
                    },
                ),
            };
            let j_h = semaphore.run(|| {
                exact_steady_report(params, &exact)
                    .map(|r| r.j_h)
                    .map_err(|err| err.to_string())
            });
            (idx, (var, value, exact, j_h))
        })
        .collect();

    let mut table = Table::new(CONVERGENCE_COLUMNS.to_vec());
    for idx in 0..points.len() {
        let (var, value, exact, outcome) = &results[&idx];
        let mut row = vec![
            Cell::Str(var.as_str().into()),
            Cell::Float(*value),
            Cell::Int(exact.n as u64),
            Cell::Float(exact.omega_cut),
        ];
        match outcome {
            Ok(j_h) => {
                row.push(Cell::Float(*j_h));
                row.push(Cell::Float(j_h_local));
                row.push(Cell::Empty);
            }
            Err(message) => {
                row.push(Cell::Empty);
                row.push(Cell::Float(j_h_local));
                row.push(Cell::Str(message.clone()));
            }
        }
        table.push(row);
    }
    Ok(table)
}
