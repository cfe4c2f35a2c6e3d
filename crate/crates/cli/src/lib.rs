//! Scenario-driven front end for the growth-lab experiments.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod manifest;
pub mod run;
pub mod scenario;

pub use error::{CliError, CliResult, EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, EXIT_VIOLATION};
pub use run::{candidate_model, execute, Command, Outcome, RunOptions};
pub use scenario::{load_scenario, parse_scenario, Constraint, Scenario};

pub const SEED_ENV: &str = "GROWTH_LAB_SEED";

/// Reads the seed override from the environment, if set.
pub fn seed_from_env() -> CliResult<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => {
            v.trim().parse().map(Some).map_err(|e| CliError::Config(format!("{SEED_ENV}: cannot parse `{v}`: {e}")))
        }
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(CliError::Config(format!("{SEED_ENV}: {e}"))),
    }
}
