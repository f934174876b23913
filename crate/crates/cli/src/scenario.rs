//! Scenario descriptions: what to sweep, with which methods, at which
//! discretization. Parsed from TOML config files or built by the presets.

use anyhow::{bail, Context};
use serde::Deserialize;

use qheat_core::engine::EngineParams;
use qheat_core::exact::ExactOptions;
use qheat_core::qubit::QubitMachineParams;
use qheat_core::report::Method;

/// Swept quantity. `BathModes` and `Cutoff` vary the exact discretization
/// and are only meaningful for exact-only scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    G,
    KTh,
    OmegaH,
    BathModes,
    Cutoff,
}

impl SweepVariable {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepVariable::G => "g",
            SweepVariable::KTh => "kT_h",
            SweepVariable::OmegaH => "omega_h",
            SweepVariable::BathModes => "n",
            SweepVariable::Cutoff => "omega_cut",
        }
    }

    fn parse(s: &str) -> anyhow::Result<Self> {
        Ok(match s {
            "g" => SweepVariable::G,
            "kT_h" => SweepVariable::KTh,
            "omega_h" => SweepVariable::OmegaH,
            "n" => SweepVariable::BathModes,
            "omega_cut" => SweepVariable::Cutoff,
            other => bail!("unknown sweep variable {other:?}"),
        })
    }
}

#[derive(Debug, Clone)]
pub struct Sweep {
    pub variable: SweepVariable,
    pub grid: Vec<f64>,
}

impl Sweep {
    fn validate(&self) -> anyhow::Result<()> {
        if self.grid.is_empty() {
            bail!("sweep grid must be nonempty");
        }
        if self.grid.windows(2).any(|w| w[1] <= w[0]) {
            bail!("sweep grid must be strictly increasing");
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub enum ScenarioKind {
    Oscillator {
        params: EngineParams,
        methods: Vec<Method>,
        sweep: Sweep,
    },
    Qubit {
        params: QubitMachineParams,
        sweep: Sweep,
    },
    /// Discretization robustness study: exact J_h over n and ω_cut grids
    /// against the local reference.
    Convergence {
        params: EngineParams,
        n_list: Vec<usize>,
        omega_cut_list: Vec<f64>,
        /// Horizon factor for the n-sweep; kept below the recurrence bound
        /// of the smallest bath.
        n_sweep_horizon_factor: f64,
    },
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub kind: ScenarioKind,
    pub exact: ExactOptions,
    /// Number of sweep points at which the exact method runs (index-uniform
    /// subsample); 0 runs it on every point.
    pub exact_subgrid: usize,
}

impl Scenario {
    pub fn validate(&self) -> anyhow::Result<()> {
        match &self.kind {
            ScenarioKind::Oscillator {
                params,
                methods,
                sweep,
            } => {
                params.validate().context("oscillator params")?;
                sweep.validate()?;
                if methods.is_empty() {
                    bail!("at least one method is required");
                }
                let exact_only = matches!(
                    sweep.variable,
                    SweepVariable::BathModes | SweepVariable::Cutoff
                );
                if exact_only && methods.iter().any(|m| *m != Method::Exact) {
                    bail!(
                        "sweep variable {:?} varies the exact discretization; methods must be [\"exact\"]",
                        sweep.variable.as_str()
                    );
                }
            }
            ScenarioKind::Qubit { params, sweep } => {
                params.validate().context("qubit params")?;
                sweep.validate()?;
                if !matches!(sweep.variable, SweepVariable::G | SweepVariable::KTh) {
                    bail!(
                        "qubit scenarios can only sweep g or kT_h, not {:?}",
                        sweep.variable.as_str()
                    );
                }
            }
            ScenarioKind::Convergence {
                params,
                n_list,
                omega_cut_list,
                ..
            } => {
                params.validate().context("convergence params")?;
                if n_list.is_empty() && omega_cut_list.is_empty() {
                    bail!("convergence study needs at least one grid");
                }
            }
        }
        Ok(())
    }
}

// ---- config file parsing ----------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: String,
    kind: String,
    #[serde(default)]
    methods: Option<Vec<String>>,
    params: toml::Value,
    sweep: Option<RawSweep>,
    exact: Option<RawExact>,
    convergence: Option<RawConvergence>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    variable: String,
    grid: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExact {
    n: Option<usize>,
    omega_cut: Option<f64>,
    horizon_factor: Option<f64>,
    window_fraction: Option<f64>,
    subgrid: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConvergence {
    n_list: Vec<usize>,
    omega_cut_list: Vec<f64>,
    n_sweep_horizon_factor: Option<f64>,
}

fn parse_methods(raw: &Option<Vec<String>>) -> anyhow::Result<Vec<Method>> {
    let names = match raw {
        None => return Ok(vec![Method::Exact, Method::Global, Method::Local]),
        Some(v) => v,
    };
    let mut methods = Vec::new();
    for name in names {
        let m = match name.as_str() {
            "local" => Method::Local,
            "global" => Method::Global,
            "exact" => Method::Exact,
            other => bail!("unknown method {other:?}"),
        };
        if !methods.contains(&m) {
            methods.push(m);
        }
    }
    methods.sort();
    Ok(methods)
}

/// Parses a scenario from TOML. The `[params]` table mirrors the machine
/// parameter struct of the chosen kind.
pub fn parse_config(text: &str) -> anyhow::Result<Scenario> {
    let raw: RawConfig = toml::from_str(text).context("parsing scenario config")?;
    let mut exact = ExactOptions::default();
    let mut subgrid = 12usize;
    if let Some(e) = &raw.exact {
        if let Some(n) = e.n {
            exact.n = n;
        }
        if let Some(w) = e.omega_cut {
            exact.omega_cut = w;
        }
        if let Some(h) = e.horizon_factor {
            exact.horizon_factor = h;
        }
        if let Some(f) = e.window_fraction {
            exact.window_fraction = f;
        }
        if let Some(s) = e.subgrid {
            subgrid = s;
        }
    }
    let kind = match raw.kind.as_str() {
        "oscillator" => {
            let params: EngineParams = raw
                .params
                .clone()
                .try_into()
                .context("parsing [params] as oscillator parameters")?;
            let sweep_raw = raw
                .sweep
                .as_ref()
                .context("oscillator scenarios need a [sweep] table")?;
            ScenarioKind::Oscillator {
                params,
                methods: parse_methods(&raw.methods)?,
                sweep: Sweep {
                    variable: SweepVariable::parse(&sweep_raw.variable)?,
                    grid: sweep_raw.grid.clone(),
                },
            }
        }
        "qubit" => {
            let params: QubitMachineParams = raw
                .params
                .clone()
                .try_into()
                .context("parsing [params] as qubit parameters")?;
            if let Some(methods) = &raw.methods {
                if methods.iter().any(|m| m == "exact") {
                    bail!("the exact benchmark is not available for the qubit machine");
                }
            }
            let sweep_raw = raw
                .sweep
                .as_ref()
                .context("qubit scenarios need a [sweep] table")?;
            ScenarioKind::Qubit {
                params,
                sweep: Sweep {
                    variable: SweepVariable::parse(&sweep_raw.variable)?,
                    grid: sweep_raw.grid.clone(),
                },
            }
        }
        "convergence" => {
            let params: EngineParams = raw
                .params
                .clone()
                .try_into()
                .context("parsing [params] as oscillator parameters")?;
            let conv = raw
                .convergence
                .as_ref()
                .context("convergence scenarios need a [convergence] table")?;
            ScenarioKind::Convergence {
                params,
                n_list: conv.n_list.clone(),
                omega_cut_list: conv.omega_cut_list.clone(),
                n_sweep_horizon_factor: conv.n_sweep_horizon_factor.unwrap_or(8.0),
            }
        }
        other => bail!("unknown scenario kind {other:?}"),
    };
    let scenario = Scenario {
        name: raw.name,
        kind,
        exact,
        exact_subgrid: subgrid,
    };
    scenario.validate()?;
    Ok(scenario)
}
