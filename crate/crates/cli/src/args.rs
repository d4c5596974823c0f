//! Argument grammar of the `thermolink` binary.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thermolink::ScheduleMode;

#[derive(Debug, Parser)]
#[command(
    name = "thermolink",
    about = "Thermal-outage scheduling and simulation for high-rate downlinks",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Integer outage count via the ceiling rule, residual final phase.
    Ceiling,
    /// Require a resume temperature calibrated for exact divisibility.
    Exact,
}

impl From<ModeArg> for ScheduleMode {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::Ceiling => ScheduleMode::Ceiling,
            ModeArg::Exact => ScheduleMode::ExactWait,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureArg {
    /// Delivery duration vs payload size for several resume temperatures.
    Fig3,
    /// Total transmission time vs resume temperature and SNR.
    Fig4,
    /// Outage count vs resume temperature and SNR.
    Fig5,
    /// Average rate vs outage count and SNR.
    Fig6,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derive the closed-form transmission schedule.
    Schedule {
        /// Scenario config file (defaults apply when omitted).
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "ceiling")]
        mode: ModeArg,
        /// Also write the phase table as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate the thermal ODE and compare against the closed form.
    Simulate {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Integration step (seconds).
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// Write the temperature trace as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record every n-th step in the trace (0 = events only).
        #[arg(long, default_value_t = 1)]
        stride: usize,
    },
    /// Emit the figure-reproduction sweeps as CSV.
    Sweep {
        #[arg(value_enum)]
        figure: FigureArg,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "ceiling")]
        mode: ModeArg,
        /// CSV output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit the chip power model to an observed payload threshold.
    Calibrate {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Largest payload (bits) that completes without an outage.
        #[arg(long = "threshold-bits")]
        threshold_bits: f64,
        /// Total-time observation (seconds) to report a residual against.
        #[arg(long = "target-ttotal")]
        target_ttotal: Option<f64>,
        /// Resume temperature of the observation, e.g. 44C or 317.15K.
        #[arg(long = "target-twait")]
        target_twait: Option<String>,
    },
}
