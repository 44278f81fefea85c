//! Special functions not provided by `libm`.

/// Modified Bessel function of the first kind, orders 0 and 1, by power
/// series. Returns `(I0(x), I1(x))`.
///
/// The series has only positive terms so it is accurate to a few ulps for
/// every argument that does not overflow (|x| < ~700).
pub fn bessel_i0_i1(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let mut t0 = 1.0;
    let mut t1 = 0.5 * x;
    let mut i0 = t0;
    let mut i1 = t1;
    let mut k = 1.0;
    loop {
        t0 *= q / (k * k);
        t1 *= q / (k * (k + 1.0));
        i0 += t0;
        i1 += t1;
        if t0 <= i0 * 1e-17 && libm::fabs(t1) <= libm::fabs(i1) * 1e-17 {
            break;
        }
        k += 1.0;
    }
    (i0, i1)
}

pub fn bessel_i0(x: f64) -> f64 {
    bessel_i0_i1(x).0
}

/// Mean resultant length of a von Mises law, `I1(μ)/I0(μ)`.
pub fn bessel_ratio(mu: f64) -> f64 {
    let (i0, i1) = bessel_i0_i1(mu);
    i1 / i0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        // Abramowitz & Stegun table 9.8.
        assert!((bessel_i0(0.0) - 1.0).abs() < 1e-15);
        assert!((bessel_i0(1.0) - 1.266_065_877_752_008_4).abs() < 1e-14);
        let (i0, i1) = bessel_i0_i1(5.0);
        assert!((i0 - 27.239_871_823_604_44).abs() < 1e-11);
        assert!((i1 - 24.335_642_142_450_53).abs() < 1e-11);
        assert_eq!(bessel_i0_i1(0.0).1, 0.0);
    }

    #[test]
    fn large_argument_ratio_matches_asymptotics() {
        // I1/I0 ~ 1 - 1/(2x) - 1/(8x^2) - 1/(8x^3) for large x.
        let x = 60.0;
        let asym = 1.0 - 1.0 / (2.0 * x) - 1.0 / (8.0 * x * x) - 1.0 / (8.0 * x * x * x);
        assert!((bessel_ratio(x) - asym).abs() < 1e-6);
    }
}
