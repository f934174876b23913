//! Scenario runner for the heat-engine library: built-in figure presets,
//! TOML scenario configs, parallel sweeps and deterministic CSV/JSON
//! tables.

pub mod presets;
pub mod runner;
pub mod scenario;
pub mod table;

pub use presets::{preset, PRESET_NAMES};
pub use runner::{run_scenario, RunOptions};
pub use scenario::{parse_config, Scenario, ScenarioKind, Sweep, SweepVariable};
pub use table::{emit, Cell, Format, Table};
