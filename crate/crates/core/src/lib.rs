//! Thermal-outage modeling for high-rate wireless downlinks.
//!
//! A handheld receiver drawing gigabits per second heats up faster than
//! free convection can cool it; when the back plate hits its safety
//! limit the radio shuts off, cools to a resume temperature, and starts
//! again. This crate derives that schedule in closed form (phase
//! durations, outage count, total transmission time, average rate) and
//! cross-validates every formula against a discrete-time integration of
//! the underlying energy balance.

pub mod error;
pub mod link;
pub mod params;
pub mod power;
pub mod schedule;
pub mod simulate;
pub mod thermal;

pub use error::{Error, Result};
pub use link::{downlink_rate, ideal_time, snr_db_to_linear, DownlinkRate};
pub use params::{
    load_scenario, scenario_from_config_str, PowerModel, RadioLinkParams, Scenario, TemperatureSet,
    ThermalParams,
};
pub use power::{heat_budget, HeatBudget};
pub use schedule::{
    build_schedule, calibrate_chip_power, gamma_phi, select_wait_temperature, transmission_count,
    Calibration, Phase, PhaseKind, ScheduleMode, TransmissionReport,
};
pub use simulate::{export_trace, simulate, simulate_sampled, TemperatureTrace};
pub use thermal::{
    chip_from_surface, conduction_path, phase_duration, surface_from_chip, surface_temperature,
    ConductionPath, ThermalState,
};
