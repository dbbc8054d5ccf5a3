//! Modulus of continuity and the uniform-continuity ideal bound
//! `omega[g * f](delta) <= |g|_1 omega[f](delta)`.

use super::{ratio_report, VerificationReport};
use crate::convolution::{convolve_grid, ConvolutionPlan};
use crate::domain::GroupDomain;
use crate::error::{Error, Result};
use crate::function::{sample, FunctionRep, Support};
use crate::norms::lp_norm;

/// Grid used by the continuity checks: fine enough to resolve
/// delta = 1e-3 with several strides, wide enough for sigma-2 Gaussians to
/// pass the convolution aliasing gate.
pub fn continuity_domain() -> GroupDomain {
    GroupDomain::RealLine {
        half_width: 32.0,
        n: 1 << 18,
    }
}

fn modulus_of_values(values: &[f64], step: f64, delta: f64) -> f64 {
    let strides = (delta / step).floor() as usize;
    let mut omega = 0.0f64;
    for m in 1..=strides {
        for i in 0..values.len().saturating_sub(m) {
            omega = omega.max((values[i + m] - values[i]).abs());
        }
    }
    omega
}

/// `omega[f](delta) = sup_{|x - y| <= delta} |f(x) - f(y)|`, approximated on
/// a fine grid of pairs `(x, x + m h)` with `m h <= delta`. The pair set is
/// nested in delta, so the approximation is monotone nondecreasing in delta
/// by construction.
pub fn modulus_of_continuity(f: &FunctionRep, delta: f64) -> Result<f64> {
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(Error::invalid("delta", "must be a nonnegative real"));
    }
    if delta == 0.0 {
        return Ok(0.0);
    }
    match f {
        FunctionRep::Sampled(s) => {
            let GroupDomain::RealLine { .. } = s.domain() else {
                return Err(Error::DomainMismatch(
                    "modulus of continuity targets real-line representations".into(),
                ));
            };
            Ok(modulus_of_values(s.values(), s.domain().grid_step(), delta))
        }
        FunctionRep::Analytic(a) => {
            let (lo, hi) = match a.support() {
                Support::Compact { lower, upper } => (lower - delta, upper + delta),
                Support::GaussianDecay { amplitude, rate } => {
                    let x = ((120.0 + amplitude.ln().max(0.0)) / rate).sqrt();
                    (-x, x)
                }
                Support::PowerDecay { onset, .. } => {
                    let x = (4.0 * onset.abs()).max(16.0);
                    (-x, x)
                }
            };
            let n = 1 << 18;
            let step = (hi - lo) / n as f64;
            let values: Vec<f64> = (0..=n).map(|i| a.eval(lo + i as f64 * step)).collect();
            Ok(modulus_of_values(&values, step, delta))
        }
    }
}

/// Verify `omega[g * f](delta) <= |g|_1 omega[f](delta) (1 + tol)`; the
/// chain that puts the convolution in the uniform-continuity ideal. Both
/// moduli are measured at the same grid resolution.
pub fn uc_convolution_bound(
    g: &FunctionRep,
    f: &FunctionRep,
    delta: f64,
    tol: f64,
) -> Result<VerificationReport> {
    let start = std::time::Instant::now();
    let domain = continuity_domain();
    let gs = sample(g, domain)?;
    let fs = sample(f, domain)?;
    let conv = FunctionRep::Sampled(convolve_grid(&gs, &fs, &ConvolutionPlan::default())?);
    let lhs = modulus_of_continuity(&conv, delta)?;
    let omega_f = modulus_of_continuity(&FunctionRep::Sampled(fs), delta)?;
    let g_mass = lp_norm(&FunctionRep::Sampled(gs), 1.0)?;
    let rhs = g_mass * omega_f;
    let mut report = ratio_report(
        format!("uc/delta={delta}/{}x{}", g.label(), f.label()),
        "uc-bound",
        lhs,
        rhs,
        tol,
        0.0,
    )
    .provenance_entry("delta", format!("{delta}"))
    .provenance_entry("g", g.label())
    .provenance_entry("f", f.label())
    .provenance_entry("omega_f", format!("{omega_f:e}"))
    .provenance_entry("g_mass", format!("{g_mass}"));
    report.wall_time = start.elapsed();
    Ok(report)
}

/// The standard battery: five family pairs, three deltas.
pub fn uc_campaign(tol: f64) -> Result<Vec<VerificationReport>> {
    use crate::function::{make_gaussian, make_indicator};
    let z1 = make_gaussian(1.0)?;
    let z2 = make_gaussian(2.0)?;
    let zh = make_gaussian(0.5)?;
    let ind01 = make_indicator(0.0, 1.0)?;
    let indc = make_indicator(-0.5, 0.5)?;
    let indm = make_indicator(-1.0, 0.0)?;
    let pairs: [(&FunctionRep, &FunctionRep); 5] = [
        (&z1, &z1),
        (&z1, &ind01),
        (&indm, &ind01),
        (&zh, &indc),
        (&z2, &z1),
    ];
    let mut out = Vec::new();
    for (i, (g, f)) in pairs.iter().enumerate() {
        for (j, delta) in [1e-3, 1e-2, 1e-1].into_iter().enumerate() {
            let mut rep = uc_convolution_bound(g, f, delta, tol)?;
            rep.id = format!("uc/pair{i}/delta{j}");
            out.push(rep);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{make_gaussian, make_indicator};

    #[test]
    fn zero_delta_gives_zero() {
        let z = make_gaussian(1.0).unwrap();
        assert_eq!(modulus_of_continuity(&z, 0.0).unwrap(), 0.0);
        assert!(modulus_of_continuity(&z, -1.0).is_err());
    }

    #[test]
    fn monotone_in_delta_and_lipschitz_bounded() {
        let z = make_gaussian(1.0).unwrap();
        let mut prev = 0.0;
        // max |z_1'| = (2 pi e)^{-1/2}, attained at x = +-1
        let lip = 1.0 / (2.0 * std::f64::consts::PI * std::f64::consts::E).sqrt();
        for delta in [1e-3, 1e-2, 1e-1, 0.5] {
            let omega = modulus_of_continuity(&z, delta).unwrap();
            assert!(omega >= prev);
            assert!(omega <= lip * delta * (1.0 + 1e-6), "delta {delta}: {omega}");
            prev = omega;
        }
    }

    #[test]
    fn indicator_jump_is_seen() {
        let f = make_indicator(0.0, 1.0).unwrap();
        let omega = modulus_of_continuity(&f, 1e-2).unwrap();
        assert!((omega - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uc_bound_gaussian_pair() {
        let z = make_gaussian(1.0).unwrap();
        let rep = uc_convolution_bound(&z, &z, 1e-2, 1e-3).unwrap();
        assert!(rep.pass, "ratio {}", rep.ratio);
        // convolution smooths: the bound should hold with real slack
        assert!(rep.ratio < 1.0);
    }

    #[test]
    fn uc_bound_indicator_smoothing() {
        let g = make_gaussian(1.0).unwrap();
        let f = make_indicator(0.0, 1.0).unwrap();
        let rep = uc_convolution_bound(&g, &f, 1e-1, 1e-3).unwrap();
        assert!(rep.pass, "ratio {}", rep.ratio);
    }
}
