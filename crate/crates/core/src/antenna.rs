//! Gaussian transmit antenna pattern in the azimuth plane.
//!
//! The power pattern `g_T²` of a Gaussian field pattern with width `σ_T` is a
//! Gaussian of standard deviation `σ_T/√2`. Restricted to `(-π, π]` and
//! normalised it becomes the departure-angle density
//! `f_T(φ) = C(σ_T)·exp(-φ²/σ_T²)` with `C(σ_T) = 1/(√π·σ_T·erf(π/σ_T))`.
//! The main lobe is rotated by the boresight offset `α`.

use core::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::angle::{deg_to_rad, wrap_rad};
use crate::{Error, Result};

/// `2·sqrt(ln 2)`: ratio between the half-power beamwidth and `σ_T`.
const HPBW_PER_SIGMA: f64 = 1.665_109_222_315_395_5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntennaConfig {
    hpbw_deg: f64,
    alpha_deg: f64,
    omni: bool,
    sigma_rad: f64,
    norm: f64,
}

impl AntennaConfig {
    /// Gaussian main lobe with half-power beamwidth `hpbw_deg`, pointed
    /// `alpha_deg` away from the Tx→Rx direction.
    pub fn gaussian(hpbw_deg: f64, alpha_deg: f64) -> Result<Self> {
        let sigma_rad = sigma_from_hpbw(hpbw_deg)?;
        if !alpha_deg.is_finite() {
            return Err(Error::domain("boresight offset", alpha_deg));
        }
        let norm = 1.0 / (libm::sqrt(PI) * sigma_rad * libm::erf(PI / sigma_rad));
        Ok(AntennaConfig {
            hpbw_deg,
            alpha_deg: crate::angle::wrap_deg(alpha_deg),
            omni: false,
            sigma_rad,
            norm,
        })
    }

    /// Omnidirectional pattern: uniform departure angles.
    pub fn omni() -> Self {
        AntennaConfig {
            hpbw_deg: 360.0,
            alpha_deg: 0.0,
            omni: true,
            sigma_rad: f64::INFINITY,
            norm: 1.0 / (2.0 * PI),
        }
    }

    pub fn hpbw_deg(&self) -> f64 {
        self.hpbw_deg
    }

    /// Boresight offset wrapped to `(-180°, 180°]`.
    pub fn alpha_deg(&self) -> f64 {
        self.alpha_deg
    }

    pub fn alpha_rad(&self) -> f64 {
        deg_to_rad(self.alpha_deg)
    }

    pub fn is_omni(&self) -> bool {
        self.omni
    }

    /// Pattern width `σ_T` in radians (infinite for the omni pattern).
    pub fn sigma_rad(&self) -> f64 {
        self.sigma_rad
    }

    /// Peak density `C(σ_T)`.
    pub fn norm(&self) -> f64 {
        self.norm
    }
}

/// `σ_T = HPBW / (2·sqrt(ln 2))`, degrees in, radians out.
pub fn sigma_from_hpbw(hpbw_deg: f64) -> Result<f64> {
    if !(hpbw_deg > 0.0) || !hpbw_deg.is_finite() {
        return Err(Error::domain("half-power beamwidth", hpbw_deg));
    }
    Ok(deg_to_rad(hpbw_deg) / HPBW_PER_SIGMA)
}

/// Departure-angle density at `aod` (radians), per radian.
pub fn aod_pdf(aod: f64, config: &AntennaConfig) -> f64 {
    if config.omni {
        return config.norm;
    }
    let x = wrap_rad(aod - config.alpha_rad()) / config.sigma_rad;
    config.norm * libm::exp(-x * x)
}

/// Draws one departure angle with density [`aod_pdf`].
///
/// The unrotated angle is a Gaussian of standard deviation `σ_T/√2`,
/// redrawn until it falls in `(-π, π]`, then rotated by `α`.
pub fn sample_aod<R: Rng + ?Sized>(rng: &mut R, config: &AntennaConfig) -> f64 {
    if config.omni {
        return uniform_angle(rng);
    }
    let std_dev = config.sigma_rad * core::f64::consts::FRAC_1_SQRT_2;
    loop {
        let z: f64 = rng.sample(StandardNormal);
        let x = z * std_dev;
        if x > -PI && x <= PI {
            return wrap_rad(x + config.alpha_rad());
        }
    }
}

/// Uniform angle on `(-π, π]`.
pub(crate) fn uniform_angle<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    PI - 2.0 * PI * u
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Composite Simpson rule on `[a, b]` with `n` (even) intervals.
    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + k as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn sigma_examples() {
        assert!((sigma_from_hpbw(64.8).unwrap().to_degrees() - 38.916).abs() < 5e-3);
        let hpbw = HPBW_PER_SIGMA.to_degrees();
        assert!((sigma_from_hpbw(hpbw).unwrap() - 1.0).abs() < 1e-15);
        assert!((sigma_from_hpbw(30.0).unwrap().to_degrees() - 18.017).abs() < 5e-3);
        assert!(sigma_from_hpbw(0.0).is_err());
        assert!(sigma_from_hpbw(-5.0).is_err());
        assert!((HPBW_PER_SIGMA - 2.0 * libm::sqrt(libm::log(2.0))).abs() < 1e-15);
    }

    #[test]
    fn density_examples() {
        let omni = AntennaConfig::omni();
        assert_eq!(aod_pdf(1.3, &omni), 1.0 / (2.0 * PI));

        let a = AntennaConfig::gaussian(64.8, 60.0).unwrap();
        assert_eq!(aod_pdf(deg_to_rad(60.0), &a), a.norm());

        let unit = AntennaConfig::gaussian(HPBW_PER_SIGMA.to_degrees(), 0.0).unwrap();
        assert!((unit.norm() - 0.564_19).abs() < 1e-4);
        assert!((aod_pdf(1.0, &unit) - unit.norm() * libm::exp(-1.0)).abs() < 1e-15);
    }

    #[test]
    fn density_integrates_to_one() {
        for &hpbw in &[5.0, 30.0, 64.8, 120.0, 180.0, 300.0] {
            for &alpha in &[0.0, 60.0, 120.0, 180.0, -45.0] {
                let a = AntennaConfig::gaussian(hpbw, alpha).unwrap();
                // Integrate over the rotated window so the peak is never at an
                // interval edge.
                let total = simpson(|x| aod_pdf(x, &a), -PI, PI, 20_000);
                assert!((total - 1.0).abs() < 1e-6, "hpbw={hpbw} alpha={alpha}: {total}");
            }
        }
    }

    #[test]
    fn rotation_is_pure_shift() {
        let a = AntennaConfig::gaussian(64.8, 60.0).unwrap();
        let b = AntennaConfig::gaussian(64.8, 0.0).unwrap();
        let mut x = -PI + 1e-3;
        while x <= PI {
            let lhs = aod_pdf(x, &a);
            let rhs = aod_pdf(wrap_rad(x - a.alpha_rad()), &b);
            assert!((lhs - rhs).abs() < 1e-14);
            x += 0.01;
        }
    }

    #[test]
    fn samples_stay_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = AntennaConfig::gaussian(300.0, 170.0).unwrap();
        for _ in 0..10_000 {
            let x = sample_aod(&mut rng, &a);
            assert!(x > -PI && x <= PI);
        }
    }

    #[test]
    fn narrow_pattern_moments() {
        // HPBW 30°: truncation at ±π is negligible (π is ~14 standard
        // deviations), so the sample must match the untruncated moments of
        // the σ_T/√2 Gaussian. Quadrature confirms the truncated std.
        let a = AntennaConfig::gaussian(30.0, 0.0).unwrap();
        let sd = a.sigma_rad() / libm::sqrt(2.0);
        let var = simpson(|x| x * x * aod_pdf(x, &a), -PI, PI, 20_000);
        assert!((libm::sqrt(var) / sd - 1.0).abs() < 1e-9);

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 1_000_000;
        let xs: Vec<f64> = (0..n).map(|_| sample_aod(&mut rng, &a)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let m2 = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
        assert!(mean.to_degrees().abs() < 0.1);
        assert!((libm::sqrt(m2) / libm::sqrt(var) - 1.0).abs() < 0.01);
    }

    #[test]
    fn shifted_pattern_mode() {
        let a = AntennaConfig::gaussian(64.8, 60.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut hist = [0u32; 360];
        for _ in 0..1_000_000 {
            let d = sample_aod(&mut rng, &a).to_degrees();
            let k = (libm::floor(d + 180.0) as usize).min(359);
            hist[k] += 1;
        }
        // The lobe is flat near its top; smooth with a symmetric 41-degree
        // window before taking the argmax.
        let smooth = |k: usize| (0..41).map(|j| hist[(k + 340 + j) % 360]).sum::<u32>();
        let mode = (0..360).max_by_key(|&k| smooth(k)).unwrap() as f64 - 180.0 + 0.5;
        assert!((mode - 60.0).abs() <= 1.0, "{mode}");
    }
}
