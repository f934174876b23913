//! Built-in scenarios reproducing the reference figures: equilibrium and
//! thermal-bias coupling sweeps, the engine regime, temperature and drive
//! sweeps, the qubit machine and the discretization robustness study.

use qheat_core::engine::EngineParams;
use qheat_core::exact::ExactOptions;
use qheat_core::qubit::QubitMachineParams;
use qheat_core::report::Method;

use crate::scenario::{Scenario, ScenarioKind, Sweep, SweepVariable};

/// 60 log-spaced coupling values.
fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let ratio = hi / lo;
    (0..points)
        .map(|i| lo * ratio.powf(i as f64 / (points - 1) as f64))
        .collect()
}

fn linear_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect()
}

fn engine(omega_h: f64, g: f64, kt_h: f64) -> EngineParams {
    EngineParams {
        omega_c: 1.0,
        omega_h,
        g,
        kappa_c: 0.05,
        kappa_h: 0.05,
        kt_c: 0.5,
        kt_h,
    }
}

const ALL_METHODS: [Method; 3] = [Method::Exact, Method::Global, Method::Local];

fn g_sweep(name: &str, omega_h: f64, kt_h: f64) -> Scenario {
    Scenario {
        name: name.to_string(),
        kind: ScenarioKind::Oscillator {
            params: engine(omega_h, 0.1, kt_h),
            methods: ALL_METHODS.to_vec(),
            sweep: Sweep {
                variable: SweepVariable::G,
                grid: log_grid(1e-3, 0.5, 60),
            },
        },
        exact: ExactOptions::default(),
        exact_subgrid: 12,
    }
}

fn kt_sweep(name: &str, omega_h: f64, g: f64) -> Scenario {
    Scenario {
        name: name.to_string(),
        kind: ScenarioKind::Oscillator {
            params: engine(omega_h, g, 5.0),
            methods: ALL_METHODS.to_vec(),
            sweep: Sweep {
                variable: SweepVariable::KTh,
                grid: linear_grid(0.5, 10.0, 20),
            },
        },
        exact: ExactOptions::default(),
        exact_subgrid: 6,
    }
}

/// Looks up a figure preset by name.
pub fn preset(name: &str) -> Option<Scenario> {
    let scenario = match name {
        // Equilibrium: both baths at kT = 0.5, no drive.
        "fig2" => g_sweep("fig2", 1.0, 0.5),
        // Thermal bias without drive.
        "fig3" => g_sweep("fig3", 1.0, 5.0),
        // Engine regime: thermal bias plus drive. fig5 is the state
        // comparison over the same data.
        "fig4" => g_sweep("fig4", 2.0, 5.0),
        "fig5" => g_sweep("fig5", 2.0, 5.0),
        // Temperature sweeps, with and without drive; insets at strong
        // coupling.
        "fig6a" => kt_sweep("fig6a", 1.0, 0.1),
        "fig6b" => kt_sweep("fig6b", 2.0, 0.1),
        "fig6a_inset" => kt_sweep("fig6a_inset", 1.0, 0.5),
        "fig6b_inset" => kt_sweep("fig6b_inset", 2.0, 0.5),
        // Drive-frequency sweep across the reversibility point
        // Ω_h/kT_h = Ω_c/kT_c (at Ω_h = 2 here).
        "fig7" => Scenario {
            name: "fig7".to_string(),
            kind: ScenarioKind::Oscillator {
                params: engine(1.0, 0.1, 1.0),
                methods: ALL_METHODS.to_vec(),
                sweep: Sweep {
                    variable: SweepVariable::OmegaH,
                    grid: linear_grid(1.0, 3.0, 21),
                },
            },
            exact: ExactOptions::default(),
            exact_subgrid: 11,
        },
        // Two-qubit machine.
        "fig8" => Scenario {
            name: "fig8".to_string(),
            kind: ScenarioKind::Qubit {
                params: QubitMachineParams {
                    omega: 1.0,
                    g: 0.05,
                    nu_c: 0.005,
                    nu_h: 0.005,
                    kt_c: 0.5,
                    kt_h: 5.0,
                },
                sweep: Sweep {
                    variable: SweepVariable::G,
                    grid: log_grid(1e-4, 0.5, 60),
                },
            },
            exact: ExactOptions::default(),
            exact_subgrid: 0,
        },
        // Discretization robustness: J_h over bath sizes and cutoffs. The
        // n-sweep runs at a shorter horizon so the smallest bath stays
        // below its recurrence time.
        "figA1" => Scenario {
            name: "figA1".to_string(),
            kind: ScenarioKind::Convergence {
                params: engine(1.0, 0.1, 5.0),
                n_list: vec![100, 200, 400],
                omega_cut_list: vec![1.0, 1.5, 2.0, 3.0, 4.0, 5.0],
                n_sweep_horizon_factor: 8.0,
            },
            exact: ExactOptions::default(),
            exact_subgrid: 0,
        },
        _ => return None,
    };
    Some(scenario)
}

/// Names accepted by [`preset`].
pub const PRESET_NAMES: [&str; 11] = [
    "fig2",
    "fig3",
    "fig4",
    "fig5",
    "fig6a",
    "fig6b",
    "fig6a_inset",
    "fig6b_inset",
    "fig7",
    "fig8",
    "figA1",
];
