//! Gamma and Beta special functions via a Lanczos approximation.

use crate::error::{Error, Result};

// Lanczos coefficients from "An Analysis of the Lanczos Gamma Approximation",
// G. R. Pugh, 2004, p. 116 (g = 10.900511, n = 11). Relative error of the
// resulting gamma values is around 1e-14 on the positive axis, comfortably
// below the 1e-10 contract of `beta_function`.
const LANCZOS_R: f64 = 10.900511;
const LANCZOS_DK: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];

const TWO_SQRT_E_OVER_PI: f64 = 1.8603827342052657173362492472666631120594218414085755;
const LN_2_SQRT_E_OVER_PI: f64 = 0.6207822376352452223455184457816472122518527279025978;
const LN_PI: f64 = 1.1447298858494001741434273513530587116472948129153;

/// Natural logarithm of the Gamma function for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        let s = LANCZOS_DK
            .iter()
            .enumerate()
            .skip(1)
            .fold(LANCZOS_DK[0], |s, (k, &d)| s + d / (k as f64 - x));
        LN_PI
            - (std::f64::consts::PI * x).sin().ln()
            - s.ln()
            - LN_2_SQRT_E_OVER_PI
            - (0.5 - x) * ((0.5 - x + LANCZOS_R) / std::f64::consts::E).ln()
    } else {
        let s = LANCZOS_DK
            .iter()
            .enumerate()
            .skip(1)
            .fold(LANCZOS_DK[0], |s, (k, &d)| s + d / (x + k as f64 - 1.0));
        s.ln() + LN_2_SQRT_E_OVER_PI + (x - 0.5) * ((x - 0.5 + LANCZOS_R) / std::f64::consts::E).ln()
    }
}

/// Gamma function on the positive axis (and via reflection below 1/2).
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        let s = LANCZOS_DK
            .iter()
            .enumerate()
            .skip(1)
            .fold(LANCZOS_DK[0], |s, (k, &d)| s + d / (k as f64 - x));
        std::f64::consts::PI
            / ((std::f64::consts::PI * x).sin()
                * s
                * TWO_SQRT_E_OVER_PI
                * ((0.5 - x + LANCZOS_R) / std::f64::consts::E).powf(0.5 - x))
    } else {
        let s = LANCZOS_DK
            .iter()
            .enumerate()
            .skip(1)
            .fold(LANCZOS_DK[0], |s, (k, &d)| s + d / (x + k as f64 - 1.0));
        s * TWO_SQRT_E_OVER_PI * ((x - 0.5 + LANCZOS_R) / std::f64::consts::E).powf(x - 0.5)
    }
}

/// Beta function `B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b)` for a, b > 0.
///
/// Evaluated in log space; symmetric in (a, b) bit-for-bit because both
/// `ln_gamma(a) + ln_gamma(b)` and `a + b` commute exactly in floating point.
pub fn beta_function(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::invalid("a", format!("must be a positive real, got {a}")));
    }
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::invalid("b", format!("must be a positive real, got {b}")));
    }
    Ok((ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp())
}
