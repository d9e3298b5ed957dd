//! Scenario configuration, the end-to-end pipeline, and run comparison.
//!
//! A scenario file is a sectioned `key = value` description (sections
//! `[density]`, `[mfg]`, `[epidemic]`, `[output]`); every omitted key takes the reference
//! default, and the resolved configuration is echoed next to the outputs so
//! runs are reproducible from their artifacts alone. The built-in scenarios
//! `fig3`, `fig4`, and `fig5` pin the three reference experiments.

mod compare;
mod config;
mod pipeline;

pub use compare::{compare_runs, CompareReport, LOCALIZATION_RADIUS};
pub use config::{builtin_scenario, parse_config, render_config, DensitySpec, ScenarioConfig};
pub use pipeline::{parse_summary, render_summary, run_pipeline, RunArtifacts};
