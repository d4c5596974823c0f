//! Lumped-capacitance thermal dynamics of the chip / back-plate pair.
//!
//! Heat flows from the chip through the sink and back plate into the
//! air across a single series coefficient `z`; the chip is the only
//! thermal mass. The back-plate temperature then relaxes exponentially
//! toward `Q/(h_air A) + T_env` with time constant `c_chip m / z`, and
//! every phase duration is one closed-form inversion of that
//! exponential.

use crate::error::{Error, Result};
use crate::params::ThermalParams;

/// Series conduction-convection coefficient and the thermal mass it
/// drives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConductionPath {
    /// Series coefficient chip -> air (W/K).
    pub z: f64,
    /// Thermal mass `c_chip * m` (J/K).
    pub cm: f64,
    /// Convective coefficient `h_air * A` of the back plate alone (W/K).
    pub ha: f64,
}

impl ConductionPath {
    /// Relaxation time constant `cm / z` (s).
    pub fn time_constant(&self) -> f64 {
        self.cm / self.z
    }

    /// Back-plate temperature a heat load `q` sustains forever.
    pub fn steady_surface(&self, q_total: f64, t_env: f64) -> f64 {
        q_total / self.ha + t_env
    }
}

/// Chip and back-plate temperatures coupled through the steady
/// conduction relation `z (T_chip - T_env) = h_air A (T_sur - T_env)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalState {
    pub t_chip: f64,
    pub t_sur: f64,
}

impl ThermalState {
    pub fn from_surface(t_sur: f64, path: &ConductionPath, t_env: f64) -> Self {
        Self {
            t_chip: chip_from_surface(t_sur, path, t_env),
            t_sur,
        }
    }

    pub fn from_chip(t_chip: f64, path: &ConductionPath, t_env: f64) -> Self {
        Self {
            t_chip,
            t_sur: surface_from_chip(t_chip, path, t_env),
        }
    }
}

/// Series coefficient from the raw geometry: sink conduction, plate
/// conduction, and air convection resistances add.
pub fn conduction_coefficient(
    sink_length_m: f64,
    sink_conductivity: f64,
    plate_thickness_m: f64,
    plate_conductivity: f64,
    air_convection_coeff: f64,
    area_m2: f64,
) -> f64 {
    let r_sink = sink_length_m / (sink_conductivity * area_m2);
    let r_plate = plate_thickness_m / (plate_conductivity * area_m2);
    let r_air = 1.0 / (air_convection_coeff * area_m2);
    1.0 / (r_sink + r_plate + r_air)
}

pub fn conduction_path(thermal: &ThermalParams) -> ConductionPath {
    ConductionPath {
        z: conduction_coefficient(
            thermal.sink_length_m(),
            thermal.sink_conductivity(),
            thermal.plate_thickness_m(),
            thermal.plate_conductivity(),
            thermal.air_convection_coeff(),
            thermal.sink_area_m2(),
        ),
        cm: thermal.chip_specific_heat() * thermal.chip_mass_kg(),
        ha: thermal.air_convection_coeff() * thermal.sink_area_m2(),
    }
}

/// Back-plate temperature after `t` seconds under constant heat load
/// `q_total`, starting from `t_start`.
pub fn surface_temperature(
    t: f64,
    q_total: f64,
    t_start: f64,
    path: &ConductionPath,
    t_env: f64,
) -> f64 {
    let decay = (-path.z * t / path.cm).exp();
    q_total / path.ha * (1.0 - decay) + (t_start - t_env) * decay + t_env
}

/// Chip temperature consistent with a given back-plate temperature.
pub fn chip_from_surface(t_sur: f64, path: &ConductionPath, t_env: f64) -> f64 {
    path.ha / path.z * (t_sur - t_env) + t_env
}

/// Back-plate temperature consistent with a given chip temperature;
/// inverse of [`chip_from_surface`].
pub fn surface_from_chip(t_chip: f64, path: &ConductionPath, t_env: f64) -> f64 {
    path.z / path.ha * (t_chip - t_env) + t_env
}

/// Time for the back plate to move from `t_start` to `t_target` under
/// constant heat load `q_total`.
///
/// The target must lie strictly between the start temperature and the
/// steady state `q/(h_air A) + T_env`; the exponential never attains
/// its limit, so a target at or beyond the steady state is rejected
/// with the steady-state value attached. Equal start and target
/// degenerate to zero.
pub fn phase_duration(
    t_start: f64,
    t_target: f64,
    q_total: f64,
    path: &ConductionPath,
    t_env: f64,
) -> Result<f64> {
    if t_target == t_start {
        return Ok(0.0);
    }
    let steady = path.steady_surface(q_total, t_env);
    let toward = t_target - t_start;
    let room = steady - t_start;
    // same direction, target short of the asymptote
    if room == 0.0 || toward.signum() != room.signum() || toward.abs() >= room.abs() {
        return Err(Error::Unreachable {
            steady_state_k: steady,
            message: format!("cannot move from {t_start} K to {t_target} K under {q_total} W"),
        });
    }
    let ratio = (q_total - path.ha * (t_start - t_env)) / (q_total - path.ha * (t_target - t_env));
    Ok(path.cm / path.z * ratio.ln())
}
