//! The four subcommands: schedule, simulate, sweep, calibrate.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use thermolink::params::kelvin_to_celsius;
use thermolink::schedule::{
    build_schedule, calibrate_chip_power, ScheduleMode, TransmissionReport,
};
use thermolink::simulate::{export_trace, simulate_sampled};
use thermolink::{Error, Result, Scenario};

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn opt_cell(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v}"),
        None => "NA".to_string(),
    }
}

/// Phase table as CSV, temperatures in Celsius.
pub fn phase_table_csv(report: &TransmissionReport) -> String {
    let mut out =
        String::from("index,kind,duration_s,t_start_C,t_end_C,q_total_W,bits_delivered\n");
    for (i, p) in report.phases.iter().enumerate() {
        let _ = writeln!(
            out,
            "{i},{},{},{},{},{},{}",
            p.kind.label(),
            p.duration_s,
            kelvin_to_celsius(p.t_start_k),
            kelvin_to_celsius(p.t_end_k),
            p.q_total_w,
            p.bits_delivered
        );
    }
    out
}

/// Closed-form schedule summary plus the phase table.
pub fn cmd_schedule(scenario: &Scenario, mode: ScheduleMode, out: Option<&Path>) -> Result<String> {
    let report = build_schedule(scenario, mode)?;
    let mut text = String::new();
    let _ = writeln!(text, "n_t: {}", report.n_t);
    let _ = writeln!(text, "n_w: {}", report.n_w);
    let _ = writeln!(text, "t_ideal_s: {}", report.t_ideal_s);
    let _ = writeln!(text, "t_total_s: {}", report.t_total_s);
    let _ = writeln!(text, "r_average_bps: {}", report.r_average_bps);
    let _ = writeln!(text, "gamma_s: {}", opt_cell(report.gamma_s));
    let _ = writeln!(text, "phi_s: {}", opt_cell(report.phi_s));
    if report.never_overheats {
        let _ = writeln!(text, "never_overheats: true");
    }
    if report.n_w == 0 {
        let _ = writeln!(text, "single transmission, no outage");
    }
    let table = phase_table_csv(&report);
    let _ = writeln!(text, "phases:");
    text.push_str(&table);
    if let Some(path) = out {
        write_text(path, &table)?;
    }
    Ok(text)
}

/// Run the discrete-time oracle and report closed-form vs measured.
pub fn cmd_simulate(
    scenario: &Scenario,
    dt: f64,
    stride: usize,
    out: Option<&Path>,
) -> Result<String> {
    let closed = build_schedule(scenario, ScheduleMode::Ceiling)?;
    let (trace, measured) = simulate_sampled(scenario, dt, stride)?;
    let rel = (measured.t_total_s - closed.t_total_s).abs() / closed.t_total_s;
    let mut text = String::new();
    let _ = writeln!(text, "dt_s: {dt}");
    let _ = writeln!(text, "closed_form_t_total_s: {}", closed.t_total_s);
    let _ = writeln!(text, "measured_t_total_s: {}", measured.t_total_s);
    let _ = writeln!(text, "t_total_rel_err: {rel}");
    let _ = writeln!(text, "closed_form_n_w: {}", closed.n_w);
    let _ = writeln!(text, "measured_n_w: {}", measured.n_w);
    if let Some(path) = out {
        export_trace(&trace, path)?;
        let _ = writeln!(text, "trace: {}", path.display());
    }
    Ok(text)
}

/// Fit the chip power model to an observed single-transmission payload
/// threshold; optionally predict the total time at a target resume
/// temperature and report the residual against an observed total.
pub fn cmd_calibrate(
    scenario: &Scenario,
    threshold_bits: f64,
    target_ttotal: Option<f64>,
    target_twait_k: Option<f64>,
) -> Result<String> {
    let cal = calibrate_chip_power(
        scenario.thermal(),
        scenario.temps(),
        scenario.link(),
        scenario.power(),
        threshold_bits,
    )?;
    let mut text = String::new();
    let _ = writeln!(text, "threshold_bits: {threshold_bits}");
    let _ = writeln!(text, "q_total_comm_w: {}", cal.q_total_comm_w);
    let _ = writeln!(
        text,
        "logic_activity_product: {}",
        cal.logic_activity_product
    );

    if target_ttotal.is_some() || target_twait_k.is_some() {
        let mut fitted = scenario.with_logic_activity_product(cal.logic_activity_product)?;
        if let Some(t_wait) = target_twait_k {
            fitted = fitted.with_wait_temperature(t_wait)?;
            let _ = writeln!(text, "target_t_wait_C: {}", kelvin_to_celsius(t_wait));
        }
        let predicted = build_schedule(&fitted, ScheduleMode::Ceiling)?;
        let _ = writeln!(text, "predicted_t_total_s: {}", predicted.t_total_s);
        if let Some(target) = target_ttotal {
            let _ = writeln!(text, "target_t_total_s: {target}");
            let _ = writeln!(text, "residual_s: {}", predicted.t_total_s - target);
        }
    }
    Ok(text)
}
