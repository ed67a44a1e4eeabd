//! Scenario runner for the `qpair` library: TOML scenarios in, CSV/JSON
//! tables and SVG plots out.

pub mod config;
pub mod plot;
pub mod presets;
pub mod run;
pub mod table;

use qpair::Error;

pub use config::ScenarioConfig;
pub use presets::{list_presets, load, preset};
pub use run::{run_scenario, run_with_workers, write_bundle, Bundle};

/// Process exit code for an error.
///
/// | code | meaning |
/// |------|---------|
/// | 2 | invalid configuration or parameter |
/// | 3 | frequency crossing |
/// | 4 | a solver did not converge |
/// | 5 | file i/o |
/// | 1 | anything else |
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::InvalidParameter { .. } | Error::InvalidState(_) => 2,
        Error::CrossingSingularity { .. } => 3,
        Error::NoConvergence(_)
        | Error::QuadratureNonConvergence { .. }
        | Error::StepFailure { .. }
        | Error::DegenerateSteadyState { .. } => 4,
        Error::Io(_) => 5,
        Error::NotParityBlocked { .. } => 1,
    }
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
pub mod guide_cli {}
