// Copyright 2026 The coupled-emitters Authors
// SPDX-License-Identifier: Apache-2.0

//! Built-in configurations, one per published figure panel.

use crate::config::{parse_config, RunConfig};
use crate::error::CliError;

#[derive(Debug)]
pub struct Preset {
    pub name: &'static str,
    pub text: &'static str,
}

macro_rules! presets {
    ($($name:literal),* $(,)?) => {
        &[$(Preset { name: $name, text: include_str!(concat!("../presets/", $name, ".toml")) }),*]
    };
}

pub const PRESETS: &[Preset] = presets![
    "fig2a", "fig2b", "fig2c", "fig3a", "fig3d", "fig4a", "fig4b", "fig4c", "fig4d", "fig4e", "fig4f",
    "fig5a", "fig5b", "fig5c", "thresholds", "coupling",
];

impl Preset {
    /// First comment line of the preset file.
    pub fn summary(&self) -> &'static str {
        self.text
            .lines()
            .next()
            .and_then(|l| l.strip_prefix('#'))
            .map(str::trim)
            .unwrap_or("")
    }

    pub fn config(&self) -> Result<RunConfig, CliError> {
        parse_config(self.text)
    }
}

pub fn find(name: &str) -> Result<&'static Preset, CliError> {
    PRESETS.iter().find(|p| p.name == name).ok_or_else(|| {
        let known: Vec<&str> = PRESETS.iter().map(|p| p.name).collect();
        CliError::Config(format!("unknown preset `{name}` (known: {})", known.join(", ")))
    })
}
