//! Canonical synthetic power delay spectrum.
//!
//! An exponential trend of -0.04 dB/ns sampled every 10 ns over 0–1500 ns,
//! with 13 Gaussian bumps standing in for time-clusters. It stands in for a
//! measured urban spectrum: its RMS delay spread is about 105 ns. The same
//! profile ships as `data/canonical_pds.csv`.

use bearing_core::DelayProfile;

/// Trend slope, dB per ns.
pub const TREND_DB_PER_NS: f64 = -0.04;
/// Sampling step, ns.
pub const STEP_NS: f64 = 10.0;
/// Last delay, ns.
pub const SPAN_NS: f64 = 1500.0;
/// Width (standard deviation) of every bump, ns.
pub const BUMP_WIDTH_NS: f64 = 8.0;

/// `(delay_ns, relative amplitude)` of each bump over the trend.
pub const BUMPS: [(f64, f64); 13] = [
    (30.0, 1.6),
    (90.0, 1.9),
    (150.0, 1.6),
    (210.0, 2.0),
    (280.0, 1.7),
    (350.0, 1.9),
    (430.0, 1.6),
    (510.0, 1.8),
    (600.0, 1.7),
    (700.0, 1.8),
    (810.0, 1.6),
    (930.0, 1.7),
    (1060.0, 1.5),
];

/// Linear power of the canonical profile at `delay_ns`.
pub fn canonical_power(delay_ns: f64) -> f64 {
    let trend = 10f64.powf(TREND_DB_PER_NS * delay_ns / 10.0);
    let bumps: f64 = BUMPS
        .iter()
        .map(|&(center, amp)| {
            let z = (delay_ns - center) / BUMP_WIDTH_NS;
            amp * (-0.5 * z * z).exp()
        })
        .sum();
    trend * (1.0 + bumps)
}

pub fn canonical_profile() -> DelayProfile {
    let n = (SPAN_NS / STEP_NS).round() as usize;
    DelayProfile::new((0..=n).map(|k| {
        let d = k as f64 * STEP_NS;
        (d, canonical_power(d))
    }))
    .expect("canonical profile is valid")
}

/// Text of the shipped fixture file.
pub const CANONICAL_CSV: &str = include_str!("../data/canonical_pds.csv");

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::{format_profile, parse_profile};

    #[test]
    fn shipped_file_matches_formula() {
        let shipped = parse_profile(CANONICAL_CSV).unwrap();
        assert_eq!(shipped, canonical_profile());
        assert_eq!(format_profile(&canonical_profile()), CANONICAL_CSV);
    }
}
