//! Angle helpers. One wrap convention everywhere: `(-π, π]`.

use core::f64::consts::PI;

/// Wraps an angle in radians into `(-π, π]`.
pub fn wrap_rad(x: f64) -> f64 {
    let tau = 2.0 * PI;
    let mut y = x - tau * libm::floor((x + PI) / tau);
    // `y` is now in [-π, π); move the lower endpoint to the upper one.
    if y <= -PI {
        y += tau;
    }
    if y > PI {
        y -= tau;
    }
    y
}

/// Wraps an angle in degrees into `(-180, 180]`.
pub fn wrap_deg(x: f64) -> f64 {
    let mut y = x - 360.0 * libm::floor((x + 180.0) / 360.0);
    if y <= -180.0 {
        y += 360.0;
    }
    if y > 180.0 {
        y -= 360.0;
    }
    y
}

#[inline]
pub fn deg_to_rad(x: f64) -> f64 {
    x * (PI / 180.0)
}

#[inline]
pub fn rad_to_deg(x: f64) -> f64 {
    x * (180.0 / PI)
}
