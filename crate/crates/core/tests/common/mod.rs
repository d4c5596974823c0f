//! Shared fixtures for the integration suites.

use thermolink::{PowerModel, RadioLinkParams, Scenario, TemperatureSet, ThermalParams};

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Reference experiment: handset defaults, thresholds at 30 / 45 / 44 C
/// over a 25 C environment, 15 dB uniform SNR, one terabit payload.
pub fn reference_scenario() -> Scenario {
    let thermal = ThermalParams::handset_defaults();
    let temps = TemperatureSet::new(298.15, 303.15, 318.15, 317.15).unwrap();
    let link = RadioLinkParams::uniform_snr_db(256, 4, 1e9, 15.0).unwrap();
    let power = PowerModel::handset_defaults();
    Scenario::new(thermal, link, power, temps, 1e12).unwrap()
}

/// Reference scenario with the three experiment axes overridden.
pub fn scenario_with(snr_db: f64, t_wait_k: f64, payload_bits: f64) -> Scenario {
    reference_scenario()
        .with_uniform_snr_db(snr_db)
        .unwrap()
        .with_wait_temperature(t_wait_k)
        .unwrap()
        .with_payload_bits(payload_bits)
        .unwrap()
}
