//! Confocal ellipses with foci at the transmitter and receiver.
//!
//! A path scattered once on the ellipse of excess delay `τ` travels
//! `D + c·τ`, which fixes the major axis. The arrival angle at the receiver
//! is then a deterministic function of the departure angle at the
//! transmitter and the ellipse eccentricity.

use crate::{Error, Result};

/// Free-space propagation speed, m/ns.
pub const SPEED_OF_LIGHT_M_PER_NS: f64 = 0.299_792_458;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryConfig {
    /// Tx–Rx separation `D`, metres.
    pub distance_m: f64,
    /// Wave speed `c`, metres per nanosecond.
    pub wave_speed_m_per_ns: f64,
}

impl GeometryConfig {
    pub fn new(distance_m: f64) -> Result<Self> {
        Self::with_speed(distance_m, SPEED_OF_LIGHT_M_PER_NS)
    }

    pub fn with_speed(distance_m: f64, wave_speed_m_per_ns: f64) -> Result<Self> {
        if !(distance_m > 0.0) || !distance_m.is_finite() {
            return Err(Error::domain("distance", distance_m));
        }
        if !(wave_speed_m_per_ns > 0.0) || !wave_speed_m_per_ns.is_finite() {
            return Err(Error::domain("wave speed", wave_speed_m_per_ns));
        }
        Ok(GeometryConfig { distance_m, wave_speed_m_per_ns })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse {
    pub cluster: usize,
    pub semi_major_m: f64,
    pub eccentricity: f64,
}

/// Ellipse of cluster `cluster` with excess delay `delay_ns > 0`.
pub fn ellipse_from_delay(config: &GeometryConfig, delay_ns: f64, cluster: usize) -> Result<Ellipse> {
    if !(delay_ns > 0.0) || !delay_ns.is_finite() {
        return Err(Error::domain("cluster delay", delay_ns));
    }
    let semi_major_m = 0.5 * (config.distance_m + config.wave_speed_m_per_ns * delay_ns);
    Ok(Ellipse {
        cluster,
        semi_major_m,
        eccentricity: config.distance_m / (2.0 * semi_major_m),
    })
}

/// Arrival angle at the receiver for departure angle `aod` (radians, measured
/// from the Tx→Rx direction) on an ellipse of eccentricity `e ∈ [0, 1)`.
///
/// `cos φ_R = (2e + cos φ_T·(1+e²)) / (1 + e² + 2e·cos φ_T)`, with `φ_R`
/// carrying the sign of `φ_T` and `sign(0) = +1`.
pub fn aoa_from_aod(aod: f64, e: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&e) {
        return Err(Error::domain("eccentricity", e));
    }
    Ok(aoa_from_aod_unchecked(aod, e))
}

/// Evaluated through the equivalent half-angle relation
/// `tan(φ_R/2) = (1−e)/(1+e)·tan(φ_T/2)`, which keeps full precision near ±π
/// where the arccosine does not.
#[inline]
pub(crate) fn aoa_from_aod_unchecked(aod: f64, e: f64) -> f64 {
    if aod == 0.0 {
        return 0.0;
    }
    let half = 0.5 * aod;
    2.0 * libm::atan2((1.0 - e) * libm::sin(half), (1.0 + e) * libm::cos(half))
}
