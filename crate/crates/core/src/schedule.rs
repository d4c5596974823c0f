//! Derives the full data-receiving schedule: phase sequence, outage
//! count, total transmission time, and average rate.
//!
//! A transmission alternates four phase types. Reception first heats
//! the back plate from its initial temperature to the shutdown
//! threshold; each outage then cools it back to the resume temperature
//! with the radio off, and each restarted transmission reheats it from
//! resume to shutdown, until the payload is exhausted by a final
//! (generally partial) transmit phase. With `n_w` outages the total
//! time is the ideal time plus `n_w` cooling periods.
//!
//! Two scheduling modes exist. `Ceiling` takes the resume temperature
//! as given and carries a residual final phase. `ExactWait` requires a
//! resume temperature calibrated (see [`select_wait_temperature`]) so
//! the reheat phases divide the remaining payload evenly, which is the
//! regime where the closed-form total-time identity holds.

use crate::error::{Error, Result};
use crate::link::{downlink_rate, ideal_time};
use crate::params::{PowerModel, RadioLinkParams, Scenario, TemperatureSet, ThermalParams};
use crate::power::{heat_budget, lna_heat, switch_energy};
use crate::thermal::{conduction_path, phase_duration, surface_temperature};

/// Largest residual (s) accepted by `ExactWait` between the remaining
/// payload time and an integer number of reheat phases. Calibrated
/// resume temperatures land orders of magnitude below this.
pub const EXACT_WAIT_RESIDUAL_TOL_S: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseKind {
    FirstTransmit,
    Outage,
    Restart,
    LastTransmit,
}

impl PhaseKind {
    pub fn is_transmit(&self) -> bool {
        !matches!(self, PhaseKind::Outage)
    }

    pub fn label(&self) -> &'static str {
        match self {
            PhaseKind::FirstTransmit => "first_transmit",
            PhaseKind::Outage => "outage",
            PhaseKind::Restart => "restart",
            PhaseKind::LastTransmit => "last_transmit",
        }
    }
}

/// One segment of the data-receiving process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phase {
    pub kind: PhaseKind,
    pub duration_s: f64,
    /// Back-plate temperature entering the phase (K).
    pub t_start_k: f64,
    /// Back-plate temperature leaving the phase (K).
    pub t_end_k: f64,
    /// Chip heat generation during the phase (W).
    pub q_total_w: f64,
    /// Bits delivered during the phase; zero for outages.
    pub bits_delivered: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleMode {
    /// Integer outage count from the ceiling rule, residual final phase.
    Ceiling,
    /// Resume temperature assumed calibrated for exact divisibility.
    ExactWait,
}

/// The derived schedule for one payload delivery.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionReport {
    pub phases: Vec<Phase>,
    /// Number of transmit phases.
    pub n_t: u64,
    /// Number of outages; always `n_t - 1` when any occur.
    pub n_w: u64,
    pub t_ideal_s: f64,
    pub t_total_s: f64,
    pub r_average_bps: f64,
    /// Cooling minus reheat duration (s); `None` when the link never
    /// overheats.
    pub gamma_s: Option<f64>,
    /// First-heat minus reheat duration (s); `None` when the link never
    /// overheats.
    pub phi_s: Option<f64>,
    pub mode: ScheduleMode,
    /// Set when the comm-mode steady state stays at or below the
    /// shutdown threshold, so the whole payload moves in one phase.
    pub never_overheats: bool,
}

/// The three recurring phase durations of a schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseDurations {
    /// First transmission: initial temperature up to shutdown (s).
    pub first_transmit_s: f64,
    /// Outage: shutdown down to resume with the radio off (s).
    pub outage_s: f64,
    /// Restarted transmission: resume up to shutdown (s).
    pub restart_s: f64,
}

/// Thin wrappers around the generic trajectory inversion for the three
/// recurring phases.
pub fn phase_durations(scenario: &Scenario) -> Result<PhaseDurations> {
    let budget = heat_budget(scenario)?;
    let path = conduction_path(scenario.thermal());
    let temps = scenario.temps();
    let t_env = temps.t_env();
    Ok(PhaseDurations {
        first_transmit_s: phase_duration(
            temps.t_sur0(),
            temps.t_safe(),
            budget.q_total_comm,
            &path,
            t_env,
        )?,
        outage_s: phase_duration(
            temps.t_safe(),
            temps.t_wait(),
            budget.q_total_outage,
            &path,
            t_env,
        )?,
        restart_s: phase_duration(
            temps.t_wait(),
            temps.t_safe(),
            budget.q_total_comm,
            &path,
            t_env,
        )?,
    })
}

/// Cooling-vs-reheat gap `gamma = t_outage - t_restart` and heat-up
/// head start `phi = t_first - t_restart`.
pub fn gamma_phi(scenario: &Scenario) -> Result<(f64, f64)> {
    let d = phase_durations(scenario)?;
    Ok((d.outage_s - d.restart_s, d.first_transmit_s - d.restart_s))
}

/// Number of transmit phases and the duration of the final one.
///
/// Returns `(1, 0)` when the payload fits inside the first heat-up.
pub fn transmission_count(scenario: &Scenario, mode: ScheduleMode) -> Result<(u64, f64)> {
    let rate = downlink_rate(scenario.link());
    let t_ideal = ideal_time(scenario.payload_bits(), rate)?;
    let d = phase_durations(scenario)?;
    if d.first_transmit_s >= t_ideal {
        return Ok((1, 0.0));
    }
    let remaining = t_ideal - d.first_transmit_s;
    let quotient = remaining / d.restart_s;
    match mode {
        ScheduleMode::Ceiling => {
            let n_t = quotient.ceil() as u64 + 1;
            let t_last = remaining - (n_t - 2) as f64 * d.restart_s;
            Ok((n_t, t_last))
        }
        ScheduleMode::ExactWait => {
            let k = quotient.round();
            let residual = (remaining - k * d.restart_s).abs();
            if k < 1.0 || residual > EXACT_WAIT_RESIDUAL_TOL_S {
                return Err(Error::Numeric(format!(
                    "wait temperature not calibrated for exact divisibility: \
                     {remaining} s of reheat splits into {quotient} phases of {} s",
                    d.restart_s
                )));
            }
            Ok((k as u64 + 1, d.restart_s))
        }
    }
}

fn single_phase_report(
    scenario: &Scenario,
    t_ideal: f64,
    q_comm: f64,
    t_end: f64,
    gamma_phi_s: Option<(f64, f64)>,
    mode: ScheduleMode,
    never_overheats: bool,
) -> TransmissionReport {
    let temps = scenario.temps();
    let phases = vec![Phase {
        kind: PhaseKind::FirstTransmit,
        duration_s: t_ideal,
        t_start_k: temps.t_sur0(),
        t_end_k: t_end,
        q_total_w: q_comm,
        bits_delivered: scenario.payload_bits(),
    }];
    TransmissionReport {
        phases,
        n_t: 1,
        n_w: 0,
        t_ideal_s: t_ideal,
        t_total_s: t_ideal,
        r_average_bps: scenario.payload_bits() / t_ideal,
        gamma_s: gamma_phi_s.map(|(g, _)| g),
        phi_s: gamma_phi_s.map(|(_, p)| p),
        mode,
        never_overheats,
    }
}

/// Emit the full phase list and schedule totals for a scenario.
pub fn build_schedule(scenario: &Scenario, mode: ScheduleMode) -> Result<TransmissionReport> {
    let budget = heat_budget(scenario)?;
    let path = conduction_path(scenario.thermal());
    let temps = scenario.temps();
    let t_env = temps.t_env();
    let rate = downlink_rate(scenario.link());
    let t_ideal = ideal_time(scenario.payload_bits(), rate)?;

    // Steady state at or below the shutdown threshold: the protection
    // never triggers and the payload moves uninterrupted.
    if path.steady_surface(budget.q_total_comm, t_env) <= temps.t_safe() {
        let t_end = surface_temperature(t_ideal, budget.q_total_comm, temps.t_sur0(), &path, t_env);
        return Ok(single_phase_report(
            scenario,
            t_ideal,
            budget.q_total_comm,
            t_end,
            None,
            mode,
            true,
        ));
    }

    let d = phase_durations(scenario)?;
    let (gamma, phi) = (d.outage_s - d.restart_s, d.first_transmit_s - d.restart_s);
    let (n_t, t_last) = transmission_count(scenario, mode)?;
    let r = rate.bits_per_second();

    if n_t == 1 {
        let t_end = surface_temperature(t_ideal, budget.q_total_comm, temps.t_sur0(), &path, t_env);
        return Ok(single_phase_report(
            scenario,
            t_ideal,
            budget.q_total_comm,
            t_end,
            Some((gamma, phi)),
            mode,
            false,
        ));
    }

    let n_w = n_t - 1;
    let mut phases = Vec::with_capacity(2 * n_w as usize + 1);
    phases.push(Phase {
        kind: PhaseKind::FirstTransmit,
        duration_s: d.first_transmit_s,
        t_start_k: temps.t_sur0(),
        t_end_k: temps.t_safe(),
        q_total_w: budget.q_total_comm,
        bits_delivered: d.first_transmit_s * r,
    });
    let outage = Phase {
        kind: PhaseKind::Outage,
        duration_s: d.outage_s,
        t_start_k: temps.t_safe(),
        t_end_k: temps.t_wait(),
        q_total_w: budget.q_total_outage,
        bits_delivered: 0.0,
    };
    let restart = Phase {
        kind: PhaseKind::Restart,
        duration_s: d.restart_s,
        t_start_k: temps.t_wait(),
        t_end_k: temps.t_safe(),
        q_total_w: budget.q_total_comm,
        bits_delivered: d.restart_s * r,
    };
    for _ in 0..n_w - 1 {
        phases.push(outage);
        phases.push(restart);
    }
    phases.push(outage);
    phases.push(Phase {
        kind: PhaseKind::LastTransmit,
        duration_s: t_last,
        t_start_k: temps.t_wait(),
        t_end_k: surface_temperature(t_last, budget.q_total_comm, temps.t_wait(), &path, t_env),
        q_total_w: budget.q_total_comm,
        bits_delivered: t_last * r,
    });

    let t_total = t_ideal + n_w as f64 * d.outage_s;

    if mode == ScheduleMode::ExactWait {
        // closed-form route through gamma and phi must agree
        let nw = n_w as f64;
        let closed = t_ideal + nw / (nw + 1.0) * (t_ideal - phi) + gamma * nw;
        if ((closed - t_total) / t_total).abs() > 1e-9 {
            return Err(Error::Numeric(format!(
                "total-time identity violated: {t_total} s vs {closed} s"
            )));
        }
    }

    Ok(TransmissionReport {
        phases,
        n_t,
        n_w,
        t_ideal_s: t_ideal,
        t_total_s: t_total,
        r_average_bps: scenario.payload_bits() / t_total,
        gamma_s: Some(gamma),
        phi_s: Some(phi),
        mode,
        never_overheats: false,
    })
}

/// Resume temperature at which the reheat duration divides the
/// remaining payload time into exactly `target_n_w` phases.
///
/// The reheat duration shrinks monotonically as the resume temperature
/// rises toward the shutdown threshold, so the quotient sweeps from its
/// minimum (resume at the initial temperature) up to infinity and the
/// target is located by bisection.
pub fn select_wait_temperature(scenario: &Scenario, target_n_w: u64) -> Result<f64> {
    if target_n_w < 1 {
        return Err(Error::validation("target_n_w", "must be at least 1"));
    }
    let budget = heat_budget(scenario)?;
    let path = conduction_path(scenario.thermal());
    let temps = scenario.temps();
    let t_env = temps.t_env();
    let rate = downlink_rate(scenario.link());
    let t_ideal = ideal_time(scenario.payload_bits(), rate)?;

    if path.steady_surface(budget.q_total_comm, t_env) <= temps.t_safe() {
        return Err(Error::Numeric(
            "N_W unreachable: the link never overheats, so no outage count above 0 is attainable"
                .into(),
        ));
    }
    let t_first = phase_duration(
        temps.t_sur0(),
        temps.t_safe(),
        budget.q_total_comm,
        &path,
        t_env,
    )?;
    if t_first >= t_ideal {
        return Err(Error::Numeric(format!(
            "N_W unreachable: the payload fits in the first transmission \
             ({t_ideal} s <= {t_first} s), so only N_W = 0 is attainable"
        )));
    }
    let remaining = t_ideal - t_first;
    let restart_at = |t_wait: f64| -> f64 {
        // same inversion as phase_duration, reachable on the whole
        // closed interval [t_sur0, t_safe]
        if t_wait >= temps.t_safe() {
            return 0.0;
        }
        let num = budget.q_total_comm - path.ha * (t_wait - t_env);
        let den = budget.q_total_comm - path.ha * (temps.t_safe() - t_env);
        path.cm / path.z * (num / den).ln()
    };
    let target = target_n_w as f64;
    // quotient at the lower end of the resume range
    let q_floor = remaining / restart_at(temps.t_sur0());
    if target <= q_floor {
        return Err(Error::Numeric(format!(
            "N_W unreachable: target {target_n_w} at or below the attainable floor; \
             any integer count strictly above {q_floor:.6} is reachable"
        )));
    }

    // fixed point: the current resume temperature may already solve it
    let current_residual = (remaining - target * restart_at(temps.t_wait())).abs();
    if current_residual <= 1e-12 {
        return Ok(temps.t_wait());
    }

    let residual = |t_wait: f64| remaining - target * restart_at(t_wait);
    let mut lo = temps.t_sur0(); // residual < 0
    let mut hi = temps.t_safe(); // residual = remaining > 0
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if residual(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let t_wait = 0.5 * (lo + hi);
    let final_residual = residual(t_wait).abs();
    if final_residual > EXACT_WAIT_RESIDUAL_TOL_S {
        return Err(Error::Numeric(format!(
            "bisection failed to localize the resume temperature: residual {final_residual} s"
        )));
    }
    Ok(t_wait)
}

/// Result of fitting the chip power model to an observed
/// single-transmission payload threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    /// Fitted total comm-mode heat (W).
    pub q_total_comm_w: f64,
    /// Backed-out logic-activity product.
    pub logic_activity_product: f64,
}

/// Fit the comm-mode heat so the first heat-up lasts exactly as long as
/// the largest payload that completes without an outage, then back out
/// the logic-activity product from the power decomposition.
///
/// The power model argument supplies the LNA and switching-energy
/// constants; its own logic-activity product is ignored.
pub fn calibrate_chip_power(
    thermal: &ThermalParams,
    temps: &TemperatureSet,
    link: &RadioLinkParams,
    power: &PowerModel,
    observed_threshold_bits: f64,
) -> Result<Calibration> {
    if !observed_threshold_bits.is_finite() || observed_threshold_bits <= 0.0 {
        return Err(Error::validation(
            "observed_threshold_bits",
            format!("must be strictly positive, got {observed_threshold_bits}"),
        ));
    }
    let rate = downlink_rate(link);
    if rate.bits_per_second() <= 0.0 {
        return Err(Error::Numeric(
            "calibration needs a carrying link: rate is zero".into(),
        ));
    }
    let path = conduction_path(thermal);
    let t_first = observed_threshold_bits / rate.bits_per_second();
    let growth = (path.z * t_first / path.cm).exp();
    let a = path.ha * (temps.t_sur0() - temps.t_env());
    let b = path.ha * (temps.t_safe() - temps.t_env());
    let q_total_comm = (growth * b - a) / (growth - 1.0);
    if !q_total_comm.is_finite() || q_total_comm <= b {
        return Err(Error::Numeric(format!(
            "threshold implies no overheating: fitted heat does not exceed \
             the convection limit {b} W at the shutdown threshold"
        )));
    }
    let p_system = a;
    let q_lna = lna_heat(link, power);
    let p_bb = q_total_comm - p_system - power.lna_heat_fraction() * q_lna;
    if p_bb <= 0.0 {
        return Err(Error::Numeric(format!(
            "power model cannot explain threshold: baseband share {p_bb} W is not positive"
        )));
    }
    let e_switch = switch_energy(power, temps.t_env());
    Ok(Calibration {
        q_total_comm_w: q_total_comm,
        logic_activity_product: p_bb / (rate.bits_per_second() * e_switch),
    })
}
