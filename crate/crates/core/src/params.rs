//! Domain types, physical constants, and configuration loading.
//!
//! Every quantity is stored in SI units; temperatures are Kelvin
//! internally regardless of how the config file spells them. All types
//! validate on construction, so an instance in hand is always usable.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Boltzmann constant (J/K), CODATA exact value.
pub const BOLTZMANN_J_PER_K: f64 = 1.380649e-23;

/// Logic-activity product (operations per bit x fanout x activity factor)
/// backed out from the single-transmission payload threshold of the
/// reference link at 15 dB; see `schedule::calibrate_chip_power` and the
/// calibration tests for the derivation.
pub const DEFAULT_LOGIC_ACTIVITY_PRODUCT: f64 = 160590482.9217958;

pub fn celsius_to_kelvin(c: f64) -> f64 {
    c + 273.15
}

pub fn kelvin_to_celsius(k: f64) -> f64 {
    k - 273.15
}

/// Geometry, materials, and convection constants defining the heat path
/// from the chip through the heat sink and back plate into the air.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalParams {
    chip_mass_kg: f64,
    chip_specific_heat: f64,
    sink_length_m: f64,
    sink_area_m2: f64,
    plate_thickness_m: f64,
    sink_conductivity: f64,
    plate_conductivity: f64,
    air_convection_coeff: f64,
}

impl ThermalParams {
    /// Build and validate; every field must be strictly positive.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        chip_mass_kg: f64,
        chip_specific_heat: f64,
        sink_length_m: f64,
        sink_area_m2: f64,
        plate_thickness_m: f64,
        sink_conductivity: f64,
        plate_conductivity: f64,
        air_convection_coeff: f64,
    ) -> Result<Self> {
        let fields = [
            ("chip_mass_kg", chip_mass_kg),
            ("chip_specific_heat", chip_specific_heat),
            ("sink_length_m", sink_length_m),
            ("sink_area_m2", sink_area_m2),
            ("plate_thickness_m", plate_thickness_m),
            ("sink_conductivity", sink_conductivity),
            ("plate_conductivity", plate_conductivity),
            ("air_convection_coeff", air_convection_coeff),
        ];
        for (name, value) in fields {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::validation(
                    name,
                    format!("must be strictly positive, got {value}"),
                ));
            }
        }
        Ok(Self {
            chip_mass_kg,
            chip_specific_heat,
            sink_length_m,
            sink_area_m2,
            plate_thickness_m,
            sink_conductivity,
            plate_conductivity,
            air_convection_coeff,
        })
    }

    /// Handset chip on a copper sink behind a 7075-T6 aluminum back plate.
    pub fn handset_defaults() -> Self {
        Self::new(0.002, 1030.0, 0.002, 1e-4, 0.001, 401.0, 130.0, 26.3)
            .expect("defaults are valid")
    }

    /// Chip mass (kg).
    pub fn chip_mass_kg(&self) -> f64 {
        self.chip_mass_kg
    }

    /// Chip specific heat, J/(kg K).
    pub fn chip_specific_heat(&self) -> f64 {
        self.chip_specific_heat
    }

    /// Heat-sink length along the conduction path (m).
    pub fn sink_length_m(&self) -> f64 {
        self.sink_length_m
    }

    /// Cross-section shared by the conduction and convection paths (m^2).
    pub fn sink_area_m2(&self) -> f64 {
        self.sink_area_m2
    }

    /// Back-plate thickness (m).
    pub fn plate_thickness_m(&self) -> f64 {
        self.plate_thickness_m
    }

    /// Heat-sink conductivity, W/(m K).
    pub fn sink_conductivity(&self) -> f64 {
        self.sink_conductivity
    }

    /// Back-plate conductivity, W/(m K).
    pub fn plate_conductivity(&self) -> f64 {
        self.plate_conductivity
    }

    /// Free-air convection coefficient, W/(m^2 K).
    pub fn air_convection_coeff(&self) -> f64 {
        self.air_convection_coeff
    }
}

/// Antenna counts, bandwidth, and per-antenna SNR of the downlink.
#[derive(Debug, Clone, PartialEq)]
pub struct RadioLinkParams {
    bs_antennas: u32,
    ue_antennas: u32,
    bandwidth_hz: f64,
    snr_per_antenna: Vec<f64>,
}

impl RadioLinkParams {
    pub fn new(
        bs_antennas: u32,
        ue_antennas: u32,
        bandwidth_hz: f64,
        snr_per_antenna: Vec<f64>,
    ) -> Result<Self> {
        if ue_antennas < 1 {
            return Err(Error::validation("ue_antennas", "must be at least 1"));
        }
        if bs_antennas < ue_antennas {
            return Err(Error::validation(
                "bs_antennas",
                format!("must be >= ue_antennas ({ue_antennas}), got {bs_antennas}"),
            ));
        }
        if !bandwidth_hz.is_finite() || bandwidth_hz <= 0.0 {
            return Err(Error::validation(
                "bandwidth_hz",
                format!("must be positive, got {bandwidth_hz}"),
            ));
        }
        if snr_per_antenna.len() != ue_antennas as usize {
            return Err(Error::validation(
                "snr_linear",
                format!(
                    "expected {} per-antenna values, got {}",
                    ue_antennas,
                    snr_per_antenna.len()
                ),
            ));
        }
        for &snr in &snr_per_antenna {
            if !snr.is_finite() || snr < 0.0 {
                return Err(Error::validation(
                    "snr_linear",
                    format!("SNR must be >= 0, got {snr}"),
                ));
            }
        }
        Ok(Self {
            bs_antennas,
            ue_antennas,
            bandwidth_hz,
            snr_per_antenna,
        })
    }

    /// One dB value replicated across all receive antennas.
    pub fn uniform_snr_db(
        bs_antennas: u32,
        ue_antennas: u32,
        bandwidth_hz: f64,
        snr_db: f64,
    ) -> Result<Self> {
        let linear = crate::link::snr_db_to_linear(snr_db);
        Self::new(
            bs_antennas,
            ue_antennas,
            bandwidth_hz,
            vec![linear; ue_antennas as usize],
        )
    }

    pub fn bs_antennas(&self) -> u32 {
        self.bs_antennas
    }

    pub fn ue_antennas(&self) -> u32 {
        self.ue_antennas
    }

    pub fn bandwidth_hz(&self) -> f64 {
        self.bandwidth_hz
    }

    /// Per-antenna linear (dimensionless) SNR values.
    pub fn snr_per_antenna(&self) -> &[f64] {
        &self.snr_per_antenna
    }
}

/// LNA, baseband, and system power constants of the chip model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerModel {
    lna_power_w: f64,
    lna_efficiency: f64,
    lna_heat_fraction: f64,
    logic_activity_product: f64,
    landauer_gap: f64,
}

impl PowerModel {
    pub fn new(
        lna_power_w: f64,
        lna_efficiency: f64,
        lna_heat_fraction: f64,
        logic_activity_product: f64,
        landauer_gap: f64,
    ) -> Result<Self> {
        if !lna_power_w.is_finite() || lna_power_w < 0.0 {
            return Err(Error::validation(
                "lna_power_w",
                format!("must be >= 0, got {lna_power_w}"),
            ));
        }
        if !lna_efficiency.is_finite() || lna_efficiency <= 0.0 || lna_efficiency >= 1.0 {
            return Err(Error::validation(
                "lna_efficiency",
                format!("must lie strictly between 0 and 1, got {lna_efficiency}"),
            ));
        }
        if !lna_heat_fraction.is_finite() || !(0.0..=1.0).contains(&lna_heat_fraction) {
            return Err(Error::validation(
                "lna_heat_fraction",
                format!("must lie in [0, 1], got {lna_heat_fraction}"),
            ));
        }
        if !logic_activity_product.is_finite() || logic_activity_product <= 0.0 {
            return Err(Error::validation(
                "logic_activity_product",
                format!("must be strictly positive, got {logic_activity_product}"),
            ));
        }
        if !landauer_gap.is_finite() || landauer_gap < 1.0 {
            return Err(Error::validation(
                "landauer_gap",
                format!("must be >= 1 (cannot switch below the thermodynamic limit), got {landauer_gap}"),
            ));
        }
        Ok(Self {
            lna_power_w,
            lna_efficiency,
            lna_heat_fraction,
            logic_activity_product,
            landauer_gap,
        })
    }

    /// 5 nm-class chip with four 24.3 mW LNAs at 59 % efficiency.
    pub fn handset_defaults() -> Self {
        Self::new(0.0243, 0.59, 0.30, DEFAULT_LOGIC_ACTIVITY_PRODUCT, 454.2)
            .expect("defaults are valid")
    }

    /// Power of one LNA (W).
    pub fn lna_power_w(&self) -> f64 {
        self.lna_power_w
    }

    /// LNA efficiency in (0, 1).
    pub fn lna_efficiency(&self) -> f64 {
        self.lna_efficiency
    }

    /// Fraction of LNA heat that reaches the chip, in [0, 1].
    pub fn lna_heat_fraction(&self) -> f64 {
        self.lna_heat_fraction
    }

    /// Product of logic operations per bit, fanout, and activity factor.
    pub fn logic_activity_product(&self) -> f64 {
        self.logic_activity_product
    }

    /// Ratio of per-switch energy to the thermodynamic minimum.
    pub fn landauer_gap(&self) -> f64 {
        self.landauer_gap
    }

    /// Boltzmann constant (J/K); fixed, not configurable.
    pub fn boltzmann(&self) -> f64 {
        BOLTZMANN_J_PER_K
    }
}

/// Environment, initial, shutdown, and resume temperatures (K).
///
/// The strict ordering `t_env < t_sur0 < t_wait < t_safe` is required:
/// the outage-mode steady state equals the initial back-plate
/// temperature, so a resume temperature at or below it would never be
/// reached and the outage would last forever.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemperatureSet {
    t_env: f64,
    t_sur0: f64,
    t_safe: f64,
    t_wait: f64,
}

impl TemperatureSet {
    pub fn new(t_env: f64, t_sur0: f64, t_safe: f64, t_wait: f64) -> Result<Self> {
        for (name, value) in [
            ("t_env", t_env),
            ("t_sur0", t_sur0),
            ("t_safe", t_safe),
            ("t_wait", t_wait),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::validation(
                    name,
                    format!("must be a positive Kelvin value, got {value}"),
                ));
            }
        }
        if t_env >= t_sur0 {
            return Err(Error::validation(
                "t_sur0",
                format!("initial surface temperature ({t_sur0} K) must exceed t_env ({t_env} K)"),
            ));
        }
        if t_sur0 >= t_wait {
            return Err(Error::validation(
                "t_wait",
                format!(
                    "resume temperature ({t_wait} K) must exceed t_sur0 ({t_sur0} K); \
                     cooling can never go below the initial equilibrium"
                ),
            ));
        }
        if t_wait >= t_safe {
            return Err(Error::validation(
                "t_wait",
                format!("resume temperature ({t_wait} K) must lie below t_safe ({t_safe} K)"),
            ));
        }
        Ok(Self {
            t_env,
            t_sur0,
            t_safe,
            t_wait,
        })
    }

    /// Environment (air) temperature (K).
    pub fn t_env(&self) -> f64 {
        self.t_env
    }

    /// Initial back-plate temperature (K).
    pub fn t_sur0(&self) -> f64 {
        self.t_sur0
    }

    /// Back-plate temperature at which the radio shuts off (K).
    pub fn t_safe(&self) -> f64 {
        self.t_safe
    }

    /// Back-plate temperature at which reception resumes (K).
    pub fn t_wait(&self) -> f64 {
        self.t_wait
    }

    /// Same set with a different resume temperature.
    pub fn with_wait(&self, t_wait: f64) -> Result<Self> {
        Self::new(self.t_env, self.t_sur0, self.t_safe, t_wait)
    }
}

/// A complete experiment: heat path, link, chip power model,
/// temperature thresholds, and payload size.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    thermal: ThermalParams,
    link: RadioLinkParams,
    power: PowerModel,
    temps: TemperatureSet,
    payload_bits: f64,
    outage_probability: f64,
}

impl Scenario {
    pub fn new(
        thermal: ThermalParams,
        link: RadioLinkParams,
        power: PowerModel,
        temps: TemperatureSet,
        payload_bits: f64,
    ) -> Result<Self> {
        if !payload_bits.is_finite() || payload_bits <= 0.0 {
            return Err(Error::validation(
                "payload_bits",
                format!("must be strictly positive, got {payload_bits}"),
            ));
        }
        Ok(Self {
            thermal,
            link,
            power,
            temps,
            payload_bits,
            // Shutdown is taken as certain once the threshold is hit.
            outage_probability: 1.0,
        })
    }

    pub fn thermal(&self) -> &ThermalParams {
        &self.thermal
    }

    pub fn link(&self) -> &RadioLinkParams {
        &self.link
    }

    pub fn power(&self) -> &PowerModel {
        &self.power
    }

    pub fn temps(&self) -> &TemperatureSet {
        &self.temps
    }

    /// Payload size (bits).
    pub fn payload_bits(&self) -> f64 {
        self.payload_bits
    }

    /// Probability that the radio shuts off at the safety threshold;
    /// fixed at 1.
    pub fn outage_probability(&self) -> f64 {
        self.outage_probability
    }

    pub fn with_wait_temperature(&self, t_wait: f64) -> Result<Self> {
        let mut s = self.clone();
        s.temps = self.temps.with_wait(t_wait)?;
        Ok(s)
    }

    pub fn with_uniform_snr_db(&self, snr_db: f64) -> Result<Self> {
        let mut s = self.clone();
        s.link = RadioLinkParams::uniform_snr_db(
            self.link.bs_antennas,
            self.link.ue_antennas,
            self.link.bandwidth_hz,
            snr_db,
        )?;
        Ok(s)
    }

    pub fn with_payload_bits(&self, payload_bits: f64) -> Result<Self> {
        Self::new(
            self.thermal,
            self.link.clone(),
            self.power,
            self.temps,
            payload_bits,
        )
    }

    pub fn with_logic_activity_product(&self, product: f64) -> Result<Self> {
        let mut s = self.clone();
        s.power = PowerModel::new(
            self.power.lna_power_w,
            self.power.lna_efficiency,
            self.power.lna_heat_fraction,
            product,
            self.power.landauer_gap,
        )?;
        Ok(s)
    }

    /// Flat `key = value` text that reloads to a field-identical scenario.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        let snr_list = self
            .link
            .snr_per_antenna
            .iter()
            .map(|v| format!("{v:?}"))
            .collect::<Vec<_>>()
            .join(",");
        let _ = writeln!(out, "bs_antennas = {}", self.link.bs_antennas);
        let _ = writeln!(out, "ue_antennas = {}", self.link.ue_antennas);
        let _ = writeln!(out, "bandwidth_hz = {:?}", self.link.bandwidth_hz);
        let _ = writeln!(out, "snr_linear = {snr_list}");
        let _ = writeln!(out, "chip_mass_kg = {:?}", self.thermal.chip_mass_kg);
        let _ = writeln!(
            out,
            "chip_specific_heat = {:?}",
            self.thermal.chip_specific_heat
        );
        let _ = writeln!(out, "sink_length_m = {:?}", self.thermal.sink_length_m);
        let _ = writeln!(out, "sink_area_m2 = {:?}", self.thermal.sink_area_m2);
        let _ = writeln!(
            out,
            "plate_thickness_m = {:?}",
            self.thermal.plate_thickness_m
        );
        let _ = writeln!(
            out,
            "sink_conductivity = {:?}",
            self.thermal.sink_conductivity
        );
        let _ = writeln!(
            out,
            "plate_conductivity = {:?}",
            self.thermal.plate_conductivity
        );
        let _ = writeln!(
            out,
            "air_convection_coeff = {:?}",
            self.thermal.air_convection_coeff
        );
        let _ = writeln!(out, "lna_power_w = {:?}", self.power.lna_power_w);
        let _ = writeln!(out, "lna_efficiency = {:?}", self.power.lna_efficiency);
        let _ = writeln!(
            out,
            "lna_heat_fraction = {:?}",
            self.power.lna_heat_fraction
        );
        let _ = writeln!(
            out,
            "logic_activity_product = {:?}",
            self.power.logic_activity_product
        );
        let _ = writeln!(out, "landauer_gap = {:?}", self.power.landauer_gap);
        let _ = writeln!(out, "payload_bits = {:?}", self.payload_bits);
        let _ = writeln!(out, "t_env_kelvin = {:?}", self.temps.t_env);
        let _ = writeln!(out, "t_sur0_kelvin = {:?}", self.temps.t_sur0);
        let _ = writeln!(out, "t_safe_kelvin = {:?}", self.temps.t_safe);
        let _ = writeln!(out, "t_wait_kelvin = {:?}", self.temps.t_wait);
        out
    }
}

/// Raw config keys before defaulting and validation.
#[derive(Debug, Default)]
struct RawConfig {
    bs_antennas: Option<u32>,
    ue_antennas: Option<u32>,
    bandwidth_hz: Option<f64>,
    snr_db: Option<f64>,
    snr_linear: Option<Vec<f64>>,
    chip_mass_kg: Option<f64>,
    chip_specific_heat: Option<f64>,
    sink_length_m: Option<f64>,
    sink_area_m2: Option<f64>,
    plate_thickness_m: Option<f64>,
    sink_conductivity: Option<f64>,
    plate_conductivity: Option<f64>,
    air_convection_coeff: Option<f64>,
    lna_power_w: Option<f64>,
    lna_efficiency: Option<f64>,
    lna_heat_fraction: Option<f64>,
    logic_activity_product: Option<f64>,
    landauer_gap: Option<f64>,
    payload_bits: Option<f64>,
    t_env: Option<f64>,
    t_sur0: Option<f64>,
    t_safe: Option<f64>,
    t_wait: Option<f64>,
}

fn config_err(path: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Config {
        path: path.to_string(),
        line,
        message: message.into(),
    }
}

fn parse_f64(path: &str, line: usize, key: &str, value: &str) -> Result<f64> {
    value.parse::<f64>().map_err(|_| {
        config_err(
            path,
            line,
            format!("`{key}` expects a number, got `{value}`"),
        )
    })
}

fn parse_u32(path: &str, line: usize, key: &str, value: &str) -> Result<u32> {
    value.parse::<u32>().map_err(|_| {
        config_err(
            path,
            line,
            format!("`{key}` expects a non-negative integer, got `{value}`"),
        )
    })
}

/// Load a scenario from a flat `key = value` config file, filling every
/// omitted key from the handset defaults.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    scenario_from_config_str(&text, &path.display().to_string())
}

/// Parse config text; `origin` names the source in error messages.
pub fn scenario_from_config_str(text: &str, origin: &str) -> Result<Scenario> {
    let mut raw = RawConfig::default();
    let mut seen: Vec<&'static str> = Vec::new();

    let mut mark = |key: &'static str, line: usize| -> Result<()> {
        if seen.contains(&key) {
            return Err(config_err(origin, line, format!("duplicate key `{key}`")));
        }
        seen.push(key);
        Ok(())
    };

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(config_err(
                origin,
                line_no,
                format!("expected `key = value`, got `{line}`"),
            ));
        };
        let key = key.trim();
        let value = value.trim();
        match key {
            "bs_antennas" => {
                mark("bs_antennas", line_no)?;
                raw.bs_antennas = Some(parse_u32(origin, line_no, key, value)?);
            }
            "ue_antennas" => {
                mark("ue_antennas", line_no)?;
                raw.ue_antennas = Some(parse_u32(origin, line_no, key, value)?);
            }
            "bandwidth_hz" => {
                mark("bandwidth_hz", line_no)?;
                raw.bandwidth_hz = Some(parse_f64(origin, line_no, key, value)?);
            }
            "snr_db" => {
                mark("snr", line_no)?;
                raw.snr_db = Some(parse_f64(origin, line_no, key, value)?);
            }
            "snr_linear" => {
                mark("snr", line_no)?;
                let mut list = Vec::new();
                for part in value.split(',') {
                    list.push(parse_f64(origin, line_no, key, part.trim())?);
                }
                raw.snr_linear = Some(list);
            }
            "chip_mass_kg" => {
                mark("chip_mass_kg", line_no)?;
                raw.chip_mass_kg = Some(parse_f64(origin, line_no, key, value)?);
            }
            "chip_specific_heat" => {
                mark("chip_specific_heat", line_no)?;
                raw.chip_specific_heat = Some(parse_f64(origin, line_no, key, value)?);
            }
            "sink_length_m" => {
                mark("sink_length_m", line_no)?;
                raw.sink_length_m = Some(parse_f64(origin, line_no, key, value)?);
            }
            "sink_area_m2" => {
                mark("sink_area_m2", line_no)?;
                raw.sink_area_m2 = Some(parse_f64(origin, line_no, key, value)?);
            }
            "plate_thickness_m" => {
                mark("plate_thickness_m", line_no)?;
                raw.plate_thickness_m = Some(parse_f64(origin, line_no, key, value)?);
            }
            "sink_conductivity" => {
                mark("sink_conductivity", line_no)?;
                raw.sink_conductivity = Some(parse_f64(origin, line_no, key, value)?);
            }
            "plate_conductivity" => {
                mark("plate_conductivity", line_no)?;
                raw.plate_conductivity = Some(parse_f64(origin, line_no, key, value)?);
            }
            "air_convection_coeff" => {
                mark("air_convection_coeff", line_no)?;
                raw.air_convection_coeff = Some(parse_f64(origin, line_no, key, value)?);
            }
            "lna_power_w" => {
                mark("lna_power_w", line_no)?;
                raw.lna_power_w = Some(parse_f64(origin, line_no, key, value)?);
            }
            "lna_efficiency" => {
                mark("lna_efficiency", line_no)?;
                raw.lna_efficiency = Some(parse_f64(origin, line_no, key, value)?);
            }
            "lna_heat_fraction" => {
                mark("lna_heat_fraction", line_no)?;
                raw.lna_heat_fraction = Some(parse_f64(origin, line_no, key, value)?);
            }
            "logic_activity_product" => {
                mark("logic_activity_product", line_no)?;
                raw.logic_activity_product = Some(parse_f64(origin, line_no, key, value)?);
            }
            "landauer_gap" => {
                mark("landauer_gap", line_no)?;
                raw.landauer_gap = Some(parse_f64(origin, line_no, key, value)?);
            }
            "payload_bits" => {
                mark("payload_bits", line_no)?;
                raw.payload_bits = Some(parse_f64(origin, line_no, key, value)?);
            }
            "t_env_kelvin" => {
                mark("t_env", line_no)?;
                raw.t_env = Some(parse_f64(origin, line_no, key, value)?);
            }
            "t_env_celsius" => {
                mark("t_env", line_no)?;
                raw.t_env = Some(celsius_to_kelvin(parse_f64(origin, line_no, key, value)?));
            }
            "t_sur0_kelvin" => {
                mark("t_sur0", line_no)?;
                raw.t_sur0 = Some(parse_f64(origin, line_no, key, value)?);
            }
            "t_sur0_celsius" => {
                mark("t_sur0", line_no)?;
                raw.t_sur0 = Some(celsius_to_kelvin(parse_f64(origin, line_no, key, value)?));
            }
            "t_safe_kelvin" => {
                mark("t_safe", line_no)?;
                raw.t_safe = Some(parse_f64(origin, line_no, key, value)?);
            }
            "t_safe_celsius" => {
                mark("t_safe", line_no)?;
                raw.t_safe = Some(celsius_to_kelvin(parse_f64(origin, line_no, key, value)?));
            }
            "t_wait_kelvin" => {
                mark("t_wait", line_no)?;
                raw.t_wait = Some(parse_f64(origin, line_no, key, value)?);
            }
            "t_wait_celsius" => {
                mark("t_wait", line_no)?;
                raw.t_wait = Some(celsius_to_kelvin(parse_f64(origin, line_no, key, value)?));
            }
            other => {
                return Err(config_err(
                    origin,
                    line_no,
                    format!("unknown key `{other}`"),
                ));
            }
        }
    }

    let thermal = ThermalParams::new(
        raw.chip_mass_kg.unwrap_or(0.002),
        raw.chip_specific_heat.unwrap_or(1030.0),
        raw.sink_length_m.unwrap_or(0.002),
        raw.sink_area_m2.unwrap_or(1e-4),
        raw.plate_thickness_m.unwrap_or(0.001),
        raw.sink_conductivity.unwrap_or(401.0),
        raw.plate_conductivity.unwrap_or(130.0),
        raw.air_convection_coeff.unwrap_or(26.3),
    )?;

    let bs = raw.bs_antennas.unwrap_or(256);
    let ue = raw.ue_antennas.unwrap_or(4);
    let bw = raw.bandwidth_hz.unwrap_or(1e9);
    let link = match raw.snr_linear {
        Some(list) => RadioLinkParams::new(bs, ue, bw, list)?,
        None => RadioLinkParams::uniform_snr_db(bs, ue, bw, raw.snr_db.unwrap_or(15.0))?,
    };

    let power = PowerModel::new(
        raw.lna_power_w.unwrap_or(0.0243),
        raw.lna_efficiency.unwrap_or(0.59),
        raw.lna_heat_fraction.unwrap_or(0.30),
        raw.logic_activity_product
            .unwrap_or(DEFAULT_LOGIC_ACTIVITY_PRODUCT),
        raw.landauer_gap.unwrap_or(454.2),
    )?;

    let temps = TemperatureSet::new(
        raw.t_env.unwrap_or(298.15),
        raw.t_sur0.unwrap_or(303.0),
        raw.t_safe.unwrap_or(318.0),
        raw.t_wait.unwrap_or(317.15),
    )?;

    Scenario::new(
        thermal,
        link,
        power,
        temps,
        raw.payload_bits.unwrap_or(1e12),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_gives_table_defaults() {
        let s = scenario_from_config_str("", "<empty>").unwrap();
        assert_eq!(s.payload_bits(), 1e12);
        assert_eq!(s.link().ue_antennas(), 4);
        assert_eq!(s.link().bs_antennas(), 256);
        assert_eq!(s.link().bandwidth_hz(), 1e9);
        assert_eq!(s.thermal().sink_conductivity(), 401.0);
        assert_eq!(s.thermal().plate_conductivity(), 130.0);
        assert_eq!(s.thermal().air_convection_coeff(), 26.3);
        assert_eq!(s.power().landauer_gap(), 454.2);
        assert_eq!(s.temps().t_safe(), 318.0);
        assert_eq!(s.temps().t_sur0(), 303.0);
        assert_eq!(s.outage_probability(), 1.0);
    }

    #[test]
    fn celsius_keys_convert_to_kelvin() {
        let s = scenario_from_config_str("t_wait_celsius = 44", "<mem>").unwrap();
        assert!((s.temps().t_wait() - 317.15).abs() < 1e-9);
    }

    #[test]
    fn zero_ue_antennas_is_a_validation_error() {
        let err = scenario_from_config_str("ue_antennas = 0", "<mem>").unwrap_err();
        match err {
            Error::Validation { field, .. } => assert_eq!(field, "ue_antennas"),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_line_names_the_line() {
        let err = scenario_from_config_str("bandwidth_hz 1e9", "<mem>").unwrap_err();
        match err {
            Error::Config { line, .. } => assert_eq!(line, 1),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_key_is_rejected() {
        let err = scenario_from_config_str("bandwith_hz = 1e9", "<mem>").unwrap_err();
        assert!(matches!(err, Error::Config { .. }));
    }

    #[test]
    fn duplicate_key_is_rejected() {
        let text = "payload_bits = 1e10\npayload_bits = 2e10\n";
        let err = scenario_from_config_str(text, "<mem>").unwrap_err();
        match err {
            Error::Config { line, .. } => assert_eq!(line, 2),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn kelvin_and_celsius_for_same_quantity_conflict() {
        let text = "t_wait_kelvin = 315\nt_wait_celsius = 42\n";
        let err = scenario_from_config_str(text, "<mem>").unwrap_err();
        assert!(matches!(err, Error::Config { line: 2, .. }));
    }

    #[test]
    fn temperature_ordering_is_enforced() {
        // resume temperature at the initial equilibrium never terminates
        let text = "t_wait_kelvin = 303.0";
        let err = scenario_from_config_str(text, "<mem>").unwrap_err();
        match err {
            Error::Validation { field, .. } => assert_eq!(field, "t_wait"),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn config_round_trip_is_field_identical() {
        let text =
            "snr_db = 7.25\npayload_bits = 3.5e11\nt_wait_celsius = 40\nlna_heat_fraction = 0.25\n";
        let first = scenario_from_config_str(text, "<mem>").unwrap();
        let second = scenario_from_config_str(&first.to_config_string(), "<round-trip>").unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn constructors_reject_out_of_range_fields() {
        assert!(matches!(
            ThermalParams::new(0.0, 1030.0, 0.002, 1e-4, 0.001, 401.0, 130.0, 26.3),
            Err(Error::Validation {
                field: "chip_mass_kg",
                ..
            })
        ));
        assert!(matches!(
            PowerModel::new(0.0243, 1.0, 0.3, 1.6e8, 454.2),
            Err(Error::Validation {
                field: "lna_efficiency",
                ..
            })
        ));
        assert!(matches!(
            PowerModel::new(0.0243, 0.59, 1.5, 1.6e8, 454.2),
            Err(Error::Validation {
                field: "lna_heat_fraction",
                ..
            })
        ));
        assert!(matches!(
            PowerModel::new(0.0243, 0.59, 0.3, 1.6e8, 0.5),
            Err(Error::Validation {
                field: "landauer_gap",
                ..
            })
        ));
        assert!(matches!(
            PowerModel::new(0.0243, 0.59, 0.3, 0.0, 454.2),
            Err(Error::Validation {
                field: "logic_activity_product",
                ..
            })
        ));
        let s = scenario_from_config_str("", "<mem>").unwrap();
        assert!(matches!(
            s.with_payload_bits(0.0),
            Err(Error::Validation {
                field: "payload_bits",
                ..
            })
        ));
        assert!(matches!(
            TemperatureSet::new(300.0, 299.0, 318.0, 317.0),
            Err(Error::Validation {
                field: "t_sur0",
                ..
            })
        ));
        assert!(matches!(
            TemperatureSet::new(298.15, 303.0, 310.0, 312.0),
            Err(Error::Validation {
                field: "t_wait",
                ..
            })
        ));
    }

    #[test]
    fn uniform_snr_replicates_across_antennas() {
        let link = RadioLinkParams::uniform_snr_db(256, 4, 1e9, 0.0).unwrap();
        assert_eq!(link.snr_per_antenna(), &[1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn snr_list_length_must_match_antennas() {
        let err = RadioLinkParams::new(256, 4, 1e9, vec![1.0, 2.0]).unwrap_err();
        assert!(matches!(
            err,
            Error::Validation {
                field: "snr_linear",
                ..
            }
        ));
    }
}
