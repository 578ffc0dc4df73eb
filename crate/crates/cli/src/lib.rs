// Copyright 2026 The coupled-emitters Authors
// SPDX-License-Identifier: Apache-2.0

//! Configuration, scenarios and CSV output behind the `coupled-emitters`
//! command.

pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod scenario;

use std::path::{Path, PathBuf};

pub use config::{parse_config, render, RunConfig, Scenario};
pub use error::CliError;

/// Runs `cfg` and writes its tables into `out_dir`, returning the paths.
/// Nothing is left behind on failure.
pub fn run(cfg: &RunConfig, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    cfg.validate()?;
    let tables = scenario::run_scenario(cfg)?;
    output::write_tables(out_dir, &tables, &render(cfg))
}
