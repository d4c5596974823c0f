//! Discrete-time oracle for the closed-form schedule.
//!
//! Integrates the chip energy balance `cm dT_chip/dt = Q - z (T_chip -
//! T_env)` with classic fourth-order Runge-Kutta on a fixed global
//! grid, switching the heat load at the shutdown and resume thresholds
//! and accounting bits delivered. Nothing here reuses the closed-form
//! durations: outage counts, phase lengths, and the total time are all
//! measured from the trajectory, which is what makes the comparison
//! against the analytic schedule meaningful.
//!
//! Threshold crossings are localized inside the bracketing step by
//! bisection. The localization tolerance shrinks with the cube of the
//! step size (capped at 1e-6 s) so that step-halving convergence
//! studies measure the integrator, not a fixed event-location floor.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::link::{downlink_rate, ideal_time};
use crate::params::Scenario;
use crate::power::heat_budget;
use crate::schedule::{Phase, PhaseKind, ScheduleMode, TransmissionReport};
use crate::thermal::{
    chip_from_surface, conduction_path, phase_duration, surface_from_chip, ThermalState,
};

/// One recorded integration sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSample {
    pub time_s: f64,
    pub t_chip_k: f64,
    pub t_sur_k: f64,
    pub q_total_w: f64,
    pub bits_delivered: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    OutageStart,
    OutageEnd,
    Done,
}

impl EventKind {
    pub fn label(&self) -> &'static str {
        match self {
            EventKind::OutageStart => "outage_start",
            EventKind::OutageEnd => "outage_end",
            EventKind::Done => "done",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEvent {
    pub time_s: f64,
    pub kind: EventKind,
}

/// Sampled trajectory plus the mode-switch events.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TemperatureTrace {
    pub samples: Vec<TraceSample>,
    pub events: Vec<TraceEvent>,
}

/// Classic RK4 step for `dy/dt = f(y)`.
fn rk4_step<F: Fn(f64) -> f64>(y: f64, h: f64, f: F) -> f64 {
    let k1 = f(y);
    let k2 = f(y + 0.5 * h * k1);
    let k3 = f(y + 0.5 * h * k2);
    let k4 = f(y + h * k3);
    y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Comm,
    Outage,
}

/// Integrate a scenario, recording every step.
///
/// Equivalent to [`simulate_sampled`] with a stride of 1; long runs at
/// fine steps produce multi-million-row traces, so prefer the sampled
/// variant when the trace itself is not needed.
pub fn simulate(scenario: &Scenario, dt: f64) -> Result<(TemperatureTrace, TransmissionReport)> {
    simulate_sampled(scenario, dt, 1)
}

/// Integrate a scenario, recording every `sample_stride`-th grid point
/// (0 records no samples; events are always recorded).
pub fn simulate_sampled(
    scenario: &Scenario,
    dt: f64,
    sample_stride: usize,
) -> Result<(TemperatureTrace, TransmissionReport)> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::validation(
            "dt",
            format!("must be a positive step size, got {dt}"),
        ));
    }
    let budget = heat_budget(scenario)?;
    let path = conduction_path(scenario.thermal());
    let temps = scenario.temps();
    let t_env = temps.t_env();
    let rate = downlink_rate(scenario.link());
    let t_ideal = ideal_time(scenario.payload_bits(), rate)?;
    let r = rate.bits_per_second();

    // Guard the step size against the shortest recurring phase, but
    // only when outages will actually occur.
    let steady_comm = path.steady_surface(budget.q_total_comm, t_env);
    let overheats = steady_comm > temps.t_safe();
    if overheats {
        let t_first = phase_duration(
            temps.t_sur0(),
            temps.t_safe(),
            budget.q_total_comm,
            &path,
            t_env,
        )?;
        if t_first < t_ideal {
            let restart = phase_duration(
                temps.t_wait(),
                temps.t_safe(),
                budget.q_total_comm,
                &path,
                t_env,
            )?;
            if restart / dt < 10.0 {
                return Err(Error::Numeric(format!(
                    "step too coarse: dt = {dt} s cannot resolve the {restart:.6} s reheat phase; \
                     use dt <= {:.3e} s",
                    restart / 50.0
                )));
            }
        }
    }

    let event_tol = (dt * dt * dt).min(1e-6);
    let chip_safe = chip_from_surface(temps.t_safe(), &path, t_env);
    let chip_wait = chip_from_surface(temps.t_wait(), &path, t_env);
    let slope = |q: f64| move |y: f64| (q - path.z * (y - t_env)) / path.cm;

    let mut t = 0.0_f64;
    let initial = ThermalState::from_surface(temps.t_sur0(), &path, t_env);
    let mut t_chip = initial.t_chip;
    let mut comm_time = 0.0_f64;
    let mut mode = Mode::Comm;
    let mut grid_index: u64 = 0;

    let mut trace = TemperatureTrace::default();
    let push_sample = |trace: &mut TemperatureTrace, time: f64, chip: f64, q: f64, comm: f64| {
        if sample_stride > 0 {
            trace.samples.push(TraceSample {
                time_s: time,
                t_chip_k: chip,
                t_sur_k: surface_from_chip(chip, &path, t_env),
                q_total_w: q,
                bits_delivered: r * comm,
            });
        }
    };
    push_sample(&mut trace, 0.0, t_chip, budget.q_total_comm, 0.0);

    // phase bookkeeping
    let mut phases: Vec<Phase> = Vec::new();
    let mut phase_kind = PhaseKind::FirstTransmit;
    let mut phase_start_t = 0.0_f64;
    let mut phase_start_chip = t_chip;
    let close_phase = |phases: &mut Vec<Phase>,
                       kind: PhaseKind,
                       start_t: f64,
                       end_t: f64,
                       start_chip: f64,
                       end_chip: f64,
                       q: f64| {
        phases.push(Phase {
            kind,
            duration_s: end_t - start_t,
            t_start_k: surface_from_chip(start_chip, &path, t_env),
            t_end_k: surface_from_chip(end_chip, &path, t_env),
            q_total_w: q,
            bits_delivered: if kind.is_transmit() {
                r * (end_t - start_t)
            } else {
                0.0
            },
        });
    };

    // Bisect inside (0, h] for the first confirmed crossing of the
    // trial trajectory from `y0`; returns the segment offset and state.
    let locate = |y0: f64, h: f64, q: f64, crossed: &dyn Fn(f64) -> bool| -> (f64, f64) {
        let f = slope(q);
        let mut lo = 0.0_f64;
        let mut hi = h;
        let mut y_hi = rk4_step(y0, h, f);
        while hi - lo > event_tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let y_mid = rk4_step(y0, mid, f);
            if crossed(y_mid) {
                hi = mid;
                y_hi = y_mid;
            } else {
                lo = mid;
            }
        }
        (hi, y_hi)
    };

    let end_time;
    loop {
        let next_grid = (grid_index + 1) as f64 * dt;
        let h_grid = next_grid - t;
        match mode {
            Mode::Comm => {
                let f = slope(budget.q_total_comm);
                let remaining = t_ideal - comm_time;
                if remaining <= h_grid {
                    // payload may complete inside this segment
                    let h = remaining.max(0.0);
                    let y_done = rk4_step(t_chip, h, f);
                    if y_done < chip_safe || h == 0.0 {
                        end_time = t + h;
                        trace.events.push(TraceEvent {
                            time_s: end_time,
                            kind: EventKind::Done,
                        });
                        if !phases.is_empty() {
                            phase_kind = PhaseKind::LastTransmit;
                        }
                        close_phase(
                            &mut phases,
                            phase_kind,
                            phase_start_t,
                            end_time,
                            phase_start_chip,
                            y_done,
                            budget.q_total_comm,
                        );
                        if sample_stride > 0
                            && trace.samples.last().is_none_or(|s| end_time > s.time_s)
                        {
                            push_sample(&mut trace, end_time, y_done, budget.q_total_comm, t_ideal);
                        }
                        break;
                    }
                    // the threshold interrupts before the payload is done
                    let (h_e, y_e) = locate(t_chip, h, budget.q_total_comm, &|y| y >= chip_safe);
                    if h_e >= h {
                        // crossing localized onto the completion instant
                        end_time = t + h;
                        trace.events.push(TraceEvent {
                            time_s: end_time,
                            kind: EventKind::Done,
                        });
                        if !phases.is_empty() {
                            phase_kind = PhaseKind::LastTransmit;
                        }
                        close_phase(
                            &mut phases,
                            phase_kind,
                            phase_start_t,
                            end_time,
                            phase_start_chip,
                            y_e,
                            budget.q_total_comm,
                        );
                        if sample_stride > 0
                            && trace.samples.last().is_none_or(|s| end_time > s.time_s)
                        {
                            push_sample(&mut trace, end_time, y_e, budget.q_total_comm, t_ideal);
                        }
                        break;
                    }
                    comm_time += h_e;
                    t += h_e;
                    trace.events.push(TraceEvent {
                        time_s: t,
                        kind: EventKind::OutageStart,
                    });
                    close_phase(
                        &mut phases,
                        phase_kind,
                        phase_start_t,
                        t,
                        phase_start_chip,
                        y_e,
                        budget.q_total_comm,
                    );
                    phase_kind = PhaseKind::Outage;
                    phase_start_t = t;
                    phase_start_chip = y_e;
                    t_chip = y_e;
                    mode = Mode::Outage;
                    continue;
                }
                let y_end = rk4_step(t_chip, h_grid, f);
                if y_end >= chip_safe {
                    let (h_e, y_e) =
                        locate(t_chip, h_grid, budget.q_total_comm, &|y| y >= chip_safe);
                    comm_time += h_e;
                    t += h_e;
                    trace.events.push(TraceEvent {
                        time_s: t,
                        kind: EventKind::OutageStart,
                    });
                    close_phase(
                        &mut phases,
                        phase_kind,
                        phase_start_t,
                        t,
                        phase_start_chip,
                        y_e,
                        budget.q_total_comm,
                    );
                    phase_kind = PhaseKind::Outage;
                    phase_start_t = t;
                    phase_start_chip = y_e;
                    t_chip = y_e;
                    mode = Mode::Outage;
                    continue;
                }
                comm_time += h_grid;
                t = next_grid;
                t_chip = y_end;
                grid_index += 1;
                if sample_stride > 0 && grid_index.is_multiple_of(sample_stride as u64) {
                    push_sample(&mut trace, t, t_chip, budget.q_total_comm, comm_time);
                }
            }
            Mode::Outage => {
                let y_end = rk4_step(t_chip, h_grid, slope(budget.q_total_outage));
                if y_end <= chip_wait {
                    let (h_e, y_e) =
                        locate(t_chip, h_grid, budget.q_total_outage, &|y| y <= chip_wait);
                    t += h_e;
                    trace.events.push(TraceEvent {
                        time_s: t,
                        kind: EventKind::OutageEnd,
                    });
                    close_phase(
                        &mut phases,
                        phase_kind,
                        phase_start_t,
                        t,
                        phase_start_chip,
                        y_e,
                        budget.q_total_outage,
                    );
                    phase_kind = PhaseKind::Restart;
                    phase_start_t = t;
                    phase_start_chip = y_e;
                    t_chip = y_e;
                    mode = Mode::Comm;
                    continue;
                }
                t = next_grid;
                t_chip = y_end;
                grid_index += 1;
                if sample_stride > 0 && grid_index.is_multiple_of(sample_stride as u64) {
                    push_sample(&mut trace, t, t_chip, budget.q_total_outage, comm_time);
                }
            }
        }
    }

    let n_w = trace
        .events
        .iter()
        .filter(|e| e.kind == EventKind::OutageStart)
        .count() as u64;
    let n_t = phases.iter().filter(|p| p.kind.is_transmit()).count() as u64;
    let first_transmit = phases
        .iter()
        .find(|p| p.kind == PhaseKind::FirstTransmit)
        .map(|p| p.duration_s);
    let first_outage = phases
        .iter()
        .find(|p| p.kind == PhaseKind::Outage)
        .map(|p| p.duration_s);
    let first_restart = phases
        .iter()
        .find(|p| p.kind == PhaseKind::Restart)
        .map(|p| p.duration_s);
    let report = TransmissionReport {
        phases,
        n_t,
        n_w,
        t_ideal_s: t_ideal,
        t_total_s: end_time,
        r_average_bps: scenario.payload_bits() / end_time,
        gamma_s: match (first_outage, first_restart) {
            (Some(o), Some(rst)) => Some(o - rst),
            _ => None,
        },
        phi_s: match (first_transmit, first_restart) {
            (Some(ft), Some(rst)) => Some(ft - rst),
            _ => None,
        },
        mode: ScheduleMode::Ceiling,
        never_overheats: !overheats,
    };
    Ok((trace, report))
}

/// Write the sample rows, then the events as a second CSV section.
pub fn export_trace(trace: &TemperatureTrace, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let io_err = |source: std::io::Error| Error::Io {
        path: path.display().to_string(),
        source,
    };
    let mut out = String::new();
    out.push_str("time_s,t_chip_K,t_sur_K,q_total_W,bits_delivered\n");
    for s in &trace.samples {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            s.time_s, s.t_chip_k, s.t_sur_k, s.q_total_w, s.bits_delivered
        ));
    }
    if !trace.events.is_empty() {
        out.push_str("time_s,event\n");
        for e in &trace.events {
            out.push_str(&format!("{},{}\n", e.time_s, e.kind.label()));
        }
    }
    let mut file = fs::File::create(path).map_err(io_err)?;
    file.write_all(out.as_bytes()).map_err(io_err)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::reference_scenario;
    use crate::schedule::{build_schedule, ScheduleMode};

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn rk4_reproduces_the_exponential() {
        // dy/dt = -y from 1.0 over one unit of time
        let mut y = 1.0_f64;
        for _ in 0..1000 {
            y = rk4_step(y, 1e-3, |v| -v);
        }
        assert!((y - (-1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn rk4_holds_the_equilibrium_exactly() {
        // a load matching the conductive loss pins the derivative at zero
        let s = reference_scenario();
        let path = crate::thermal::conduction_path(s.thermal());
        let t_env = s.temps().t_env();
        let t_eq = 305.0;
        let q_eq = path.z * (t_eq - t_env);
        let mut y = t_eq;
        for _ in 0..10_000 {
            y = rk4_step(y, 1e-3, |v| (q_eq - path.z * (v - t_env)) / path.cm);
        }
        assert!((y - t_eq).abs() < 1e-9, "equilibrium drifted to {y}");
    }

    #[test]
    fn no_outage_for_small_payloads() {
        let s = reference_scenario().with_payload_bits(1e10).unwrap();
        let (trace, report) = simulate_sampled(&s, 1e-3, 0).unwrap();
        assert_eq!(report.n_w, 0);
        assert!(trace
            .events
            .iter()
            .all(|e| e.kind != EventKind::OutageStart));
        assert!(rel_err(report.t_total_s, report.t_ideal_s) < 1e-9);
    }

    #[test]
    fn trace_times_increase_and_bits_accumulate() {
        let s = reference_scenario().with_payload_bits(2e11).unwrap();
        let (trace, _) = simulate(&s, 1e-3).unwrap();
        for w in trace.samples.windows(2) {
            assert!(w[1].time_s > w[0].time_s);
            assert!(w[1].bits_delivered >= w[0].bits_delivered);
        }
        let last = trace.samples.last().unwrap();
        assert!(rel_err(last.bits_delivered, s.payload_bits()) < 1e-9);
    }

    #[test]
    fn measured_schedule_matches_closed_form_on_the_reference() {
        let s = reference_scenario();
        let closed = build_schedule(&s, ScheduleMode::Ceiling).unwrap();
        let (_, measured) = simulate_sampled(&s, 1e-3, 0).unwrap();
        assert_eq!(measured.n_w, 86);
        assert_eq!(measured.n_w, closed.n_w);
        assert!(rel_err(measured.t_total_s, closed.t_total_s) < 5e-3);
        // phase-by-phase durations agree within two steps
        for (m, c) in measured.phases.iter().zip(closed.phases.iter()) {
            assert_eq!(m.kind, c.kind);
            assert!((m.duration_s - c.duration_s).abs() < 2e-3);
        }
    }

    #[test]
    fn coarse_steps_are_rejected_with_a_recommendation() {
        let s = reference_scenario();
        // the reheat phase is about half a second
        let err = simulate_sampled(&s, 0.1, 0).unwrap_err();
        match err {
            crate::error::Error::Numeric(msg) => assert!(msg.contains("step too coarse")),
            other => panic!("expected numeric error, got {other:?}"),
        }
        // but the same step is fine when no outage can occur
        let tiny = s.with_payload_bits(1e10).unwrap();
        assert!(simulate_sampled(&tiny, 0.1, 0).is_ok());
    }

    #[test]
    fn trace_export_row_counts() {
        let dir = std::env::temp_dir();
        let file = dir.join("thermolink_trace_test.csv");
        // empty trace: header only
        export_trace(&TemperatureTrace::default(), &file).unwrap();
        let text = fs::read_to_string(&file).unwrap();
        assert_eq!(text.lines().count(), 1);
        assert!(text.starts_with("time_s,t_chip_K,t_sur_K,q_total_W,bits_delivered\n"));

        // one synthetic sample: two lines
        let one = TemperatureTrace {
            samples: vec![TraceSample {
                time_s: 0.0,
                t_chip_k: 300.0,
                t_sur_k: 300.0,
                q_total_w: 1.0,
                bits_delivered: 0.0,
            }],
            events: vec![],
        };
        export_trace(&one, &file).unwrap();
        assert_eq!(fs::read_to_string(&file).unwrap().lines().count(), 2);

        // a short real run: sample rows track floor(t_total/dt) + 1
        let s = reference_scenario().with_payload_bits(2e11).unwrap();
        let dt = 0.02;
        let (trace, report) = simulate(&s, dt).unwrap();
        export_trace(&trace, &file).unwrap();
        let text = fs::read_to_string(&file).unwrap();
        let sample_rows = text
            .lines()
            .skip(1)
            .take_while(|l| !l.starts_with("time_s,event"))
            .count() as i64;
        let expected = (report.t_total_s / dt).floor() as i64 + 1;
        assert!(
            (sample_rows - expected).abs() <= 1,
            "{sample_rows} vs {expected}"
        );
        fs::remove_file(&file).ok();
    }

    #[test]
    fn surface_never_exceeds_threshold_by_more_than_a_step() {
        let s = reference_scenario().with_payload_bits(3e11).unwrap();
        let (trace, _) = simulate(&s, 1e-3).unwrap();
        // overshoot bound: one step's heating at the threshold slope
        let budget = crate::power::heat_budget(&s).unwrap();
        let path = crate::thermal::conduction_path(s.thermal());
        let bound = budget.q_total_comm / path.cm * 1e-3;
        for sample in &trace.samples {
            assert!(sample.t_sur_k <= s.temps().t_safe() + bound);
        }
    }
}
