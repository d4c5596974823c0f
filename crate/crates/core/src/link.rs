//! Downlink rate and ideal (outage-free) transmission time.

use crate::error::{Error, Result};
use crate::params::RadioLinkParams;

/// Aggregate downlink rate in bits/s.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DownlinkRate(f64);

impl DownlinkRate {
    pub fn new(bits_per_second: f64) -> Result<Self> {
        if !bits_per_second.is_finite() || bits_per_second < 0.0 {
            return Err(Error::validation(
                "downlink_rate",
                format!("must be >= 0 bits/s, got {bits_per_second}"),
            ));
        }
        Ok(Self(bits_per_second))
    }

    pub fn bits_per_second(&self) -> f64 {
        self.0
    }
}

/// Shannon sum rate over the receive antennas:
/// `B * sum_k log2(1 + SNR_k)`.
///
/// The rate is treated as constant for the whole transmission; fading
/// and beamforming are out of scope.
pub fn downlink_rate(link: &RadioLinkParams) -> DownlinkRate {
    let sum: f64 = link
        .snr_per_antenna()
        .iter()
        .map(|&snr| (1.0 + snr).log2())
        .sum();
    DownlinkRate(link.bandwidth_hz() * sum)
}

/// Time to deliver `payload_bits` at `rate` with no interruption.
pub fn ideal_time(payload_bits: f64, rate: DownlinkRate) -> Result<f64> {
    if rate.bits_per_second() <= 0.0 {
        return Err(Error::Numeric(
            "link cannot carry payload: rate is zero".into(),
        ));
    }
    Ok(payload_bits / rate.bits_per_second())
}

pub fn snr_db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn snr_linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}
