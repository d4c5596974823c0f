//! Command implementations behind the `thermolink` binary.
//!
//! Each command returns its stdout payload as a `String` so the logic
//! stays testable without spawning processes; `main` only parses
//! arguments, prints, and maps errors onto exit codes.

pub mod args;
pub mod commands;
pub mod sweeps;

use thermolink::{Error, Result};

/// Parse a temperature argument with an explicit unit suffix,
/// e.g. `44C` or `317.15K`.
pub fn parse_temperature(text: &str) -> Result<f64> {
    let trimmed = text.trim();
    let (number, unit) = trimmed.split_at(trimmed.len().saturating_sub(1));
    let value: f64 = number.trim().parse().map_err(|_| {
        Error::validation(
            "temperature",
            format!("expected a number with a C or K suffix, got `{text}`"),
        )
    })?;
    match unit {
        "C" | "c" => Ok(thermolink::params::celsius_to_kelvin(value)),
        "K" | "k" => Ok(value),
        _ => Err(Error::validation(
            "temperature",
            format!("missing C or K suffix in `{text}`"),
        )),
    }
}

/// Load the scenario named by `--config`, or the built-in defaults.
pub fn load_config(config: Option<&std::path::Path>) -> Result<thermolink::Scenario> {
    match config {
        Some(path) => thermolink::load_scenario(path),
        None => thermolink::scenario_from_config_str("", "<defaults>"),
    }
}
