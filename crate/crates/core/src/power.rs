//! Chip heat-generation power in communication and outage modes.
//!
//! The chip dissipates everything it computes: baseband power scales
//! linearly with the downlink rate through a per-switch energy pinned
//! to a multiple of the Landauer limit, system power holds the initial
//! thermal equilibrium, and a fraction of LNA heat leaks into the chip
//! while the radio is on.

use crate::error::{Error, Result};
use crate::link::{downlink_rate, DownlinkRate};
use crate::params::{
    PowerModel, RadioLinkParams, Scenario, TemperatureSet, ThermalParams, BOLTZMANN_J_PER_K,
};

/// All power terms of a scenario, in both operating modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatBudget {
    /// Total chip heat while communicating (W).
    pub q_total_comm: f64,
    /// Total chip heat during an outage (W).
    pub q_total_outage: f64,
    /// Baseband computation power (W).
    pub p_bb: f64,
    /// System operation power (W).
    pub p_system: f64,
    /// Heat generated by the LNAs (W); only the configured fraction of
    /// it reaches the chip.
    pub q_lna: f64,
    /// Per-transistor switching energy (J).
    pub e_switch: f64,
}

/// Heat produced by `ue_antennas` LNAs: `M_R * P_LNA * (1 - eta)`.
pub fn lna_heat_w(ue_antennas: u32, lna_power_w: f64, lna_efficiency: f64) -> f64 {
    ue_antennas as f64 * lna_power_w * (1.0 - lna_efficiency)
}

/// Heat transferred from the LNAs toward the chip path.
pub fn lna_heat(link: &RadioLinkParams, power: &PowerModel) -> f64 {
    lna_heat_w(
        link.ue_antennas(),
        power.lna_power_w(),
        power.lna_efficiency(),
    )
}

/// Per-switch energy as a multiple of the Landauer limit at the
/// environment temperature: `gap * k_B * T_env * ln 2`.
pub fn landauer_switch_energy(gap: f64, t_env: f64) -> f64 {
    gap * BOLTZMANN_J_PER_K * t_env * std::f64::consts::LN_2
}

pub fn switch_energy(power: &PowerModel, t_env: f64) -> f64 {
    landauer_switch_energy(power.landauer_gap(), t_env)
}

/// Baseband computation power: rate times switches per bit times energy
/// per switch.
pub fn baseband_power_w(rate_bps: f64, logic_activity_product: f64, e_switch: f64) -> f64 {
    rate_bps * logic_activity_product * e_switch
}

pub fn baseband_power(rate: DownlinkRate, power: &PowerModel, t_env: f64) -> f64 {
    baseband_power_w(
        rate.bits_per_second(),
        power.logic_activity_product(),
        switch_energy(power, t_env),
    )
}

/// System operation power, pinned by the initial thermal equilibrium:
/// `h_air * A * (T_sur0 - T_env)`.
pub fn system_power_w(
    air_convection_coeff: f64,
    area_m2: f64,
    t_sur0: f64,
    t_env: f64,
) -> Result<f64> {
    if t_sur0 < t_env {
        return Err(Error::validation(
            "t_sur0",
            format!("initial equilibrium assumption broken: t_sur0 ({t_sur0} K) below t_env ({t_env} K)"),
        ));
    }
    Ok(air_convection_coeff * area_m2 * (t_sur0 - t_env))
}

pub fn system_power(thermal: &ThermalParams, temps: &TemperatureSet) -> Result<f64> {
    system_power_w(
        thermal.air_convection_coeff(),
        thermal.sink_area_m2(),
        temps.t_sur0(),
        temps.t_env(),
    )
}

/// Assemble the full heat budget for a scenario.
pub fn heat_budget(scenario: &Scenario) -> Result<HeatBudget> {
    let rate = downlink_rate(scenario.link());
    let t_env = scenario.temps().t_env();
    let e_switch = switch_energy(scenario.power(), t_env);
    let p_bb = baseband_power(rate, scenario.power(), t_env);
    let p_system = system_power(scenario.thermal(), scenario.temps())?;
    let q_lna = lna_heat(scenario.link(), scenario.power());
    let q_total_comm = p_bb + p_system + scenario.power().lna_heat_fraction() * q_lna;
    Ok(HeatBudget {
        q_total_comm,
        q_total_outage: p_system,
        p_bb,
        p_system,
        q_lna,
        e_switch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::scenario_from_config_str;

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn lna_heat_matches_hand_arithmetic() {
        // 4 antennas, 24.3 mW each, 59 % efficient
        let q = lna_heat_w(4, 0.0243, 0.59);
        assert!(rel_err(q, 0.039852) < 1e-12);
        // degenerate limits of the same formula
        assert_eq!(lna_heat_w(4, 0.0243, 1.0), 0.0);
        assert_eq!(lna_heat_w(0, 0.0243, 0.59), 0.0);
    }

    #[test]
    fn switch_energy_matches_hand_arithmetic() {
        let e = landauer_switch_energy(454.2, 298.15);
        let expected = 454.2 * 1.380649e-23 * 298.15 * std::f64::consts::LN_2;
        assert_eq!(e, expected);
        assert!(rel_err(e, 1.2953e-18) < 1e-3);
        // bare limit at 300 K
        assert!(rel_err(landauer_switch_energy(1.0, 300.0), 2.8710e-21) < 1e-3);
        assert_eq!(landauer_switch_energy(0.0, 300.0), 0.0);
    }

    #[test]
    fn baseband_power_is_linear_in_rate() {
        let e = landauer_switch_energy(454.2, 298.15);
        let p1 = baseband_power_w(2.0111e10, 1.608e8, e);
        let p2 = baseband_power_w(2.0 * 2.0111e10, 1.608e8, e);
        assert!(rel_err(p2, 2.0 * p1) < 1e-12);
        assert_eq!(baseband_power_w(0.0, 1.608e8, e), 0.0);
    }

    #[test]
    fn system_power_from_initial_equilibrium() {
        let p = system_power_w(26.3, 1e-4, 303.15, 298.15).unwrap();
        assert!(rel_err(p, 0.01315) < 1e-12);
        assert_eq!(system_power_w(26.3, 1e-4, 298.15, 298.15).unwrap(), 0.0);
        let p10 = system_power_w(26.3, 1e-4, 308.15, 298.15).unwrap();
        assert!(rel_err(p10, 2.0 * p) < 1e-12);
        assert!(system_power_w(26.3, 1e-4, 290.0, 298.15).is_err());
    }

    #[test]
    fn budget_identity_holds_exactly() {
        let s = scenario_from_config_str(
            "snr_db = 15\nt_sur0_celsius = 30\nt_safe_celsius = 45\n",
            "<mem>",
        )
        .unwrap();
        let b = heat_budget(&s).unwrap();
        let lambda = s.power().lna_heat_fraction();
        assert_eq!(b.q_total_comm - b.q_total_outage, b.p_bb + lambda * b.q_lna);
        assert_eq!(b.q_total_outage, b.p_system);
        assert!(b.q_total_comm >= b.q_total_outage);
    }

    #[test]
    fn zero_rate_budget_reduces_to_system_plus_lna() {
        let s = scenario_from_config_str("snr_linear = 0,0,0,0", "<mem>").unwrap();
        let b = heat_budget(&s).unwrap();
        assert_eq!(b.p_bb, 0.0);
        let lambda = s.power().lna_heat_fraction();
        assert_eq!(b.q_total_comm, b.p_system + lambda * b.q_lna);
    }

    #[test]
    fn no_lna_fraction_drops_the_lna_term() {
        let s = scenario_from_config_str("lna_heat_fraction = 0", "<mem>").unwrap();
        let b = heat_budget(&s).unwrap();
        assert_eq!(b.q_total_comm, b.p_bb + b.p_system);
    }

    #[test]
    fn reference_budget_matches_the_calibrated_chip() {
        let s = crate::fixtures::reference_scenario();
        let b = heat_budget(&s).unwrap();
        assert!(rel_err(b.q_total_comm, 4.211) < 1e-3);
        assert!(rel_err(b.q_total_outage, 0.01315) < 1e-12);
        assert!(rel_err(b.p_bb, 4.186) < 1e-3);
        assert!(rel_err(b.q_lna, 0.039852) < 1e-12);
        assert!(rel_err(b.e_switch, 1.2953e-18) < 1e-3);
    }

    #[test]
    fn comm_heat_increases_with_snr() {
        let base = scenario_from_config_str("", "<mem>").unwrap();
        let mut last = 0.0;
        for db in [-13.0, -5.0, 5.0, 15.0] {
            let s = base.with_uniform_snr_db(db).unwrap();
            let q = heat_budget(&s).unwrap().q_total_comm;
            assert!(q > last, "q_total_comm must increase with SNR");
            last = q;
        }
    }
}
