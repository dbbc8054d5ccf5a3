//! Young's inequality `|f * g|_r <= |f|_p |g|_q` under `1 + 1/r = 1/p + 1/q`.

use rayon::prelude::*;

use super::{ratio_report, VerificationReport};
use crate::analysis::family::{mixture_pairs, CampaignConfig};
use crate::convolution::{convolve_grid, ConvolutionPlan};
use crate::error::{Error, Result};
use crate::function::{sample, FunctionRep};
use crate::norms::lp_norm;

/// The 20 admissible exponent pairs of the standard campaign; every pair
/// satisfies `1/p + 1/q >= 1`, several sit on the boundary (`r = inf`).
pub const YOUNG_EXPONENT_BATTERY: [(f64, f64); 20] = [
    (1.0, 1.0),
    (1.0, 1.25),
    (1.0, 1.5),
    (1.0, 2.0),
    (1.0, 3.0),
    (1.0, 6.0),
    (1.1, 1.1),
    (1.1, 2.0),
    (1.2, 1.8),
    (1.2, 6.0),
    (1.25, 1.25),
    (1.25, 2.0),
    (1.25, 4.0),
    (1.5, 1.5),
    (1.5, 2.0),
    (1.5, 2.5),
    (1.5, 3.0),
    (1.75, 1.75),
    (2.0, 2.0),
    (4.0, 4.0 / 3.0),
];

/// Solve `1 + 1/r = 1/p + 1/q` for r; `r = inf` on the boundary
/// `1/p + 1/q = 1`, an error when no admissible r exists.
pub fn young_exponent_r(p: f64, q: f64) -> Result<f64> {
    if !(p >= 1.0) || !(q >= 1.0) {
        return Err(Error::InvalidExponents(format!(
            "need p, q >= 1, got ({p}, {q})"
        )));
    }
    let inv = 1.0 / p + 1.0 / q - 1.0;
    if inv < -1e-12 {
        return Err(Error::InvalidExponents(format!(
            "1/p + 1/q = {} < 1 admits no Young exponent",
            1.0 / p + 1.0 / q
        )));
    }
    if inv <= 1e-12 {
        Ok(f64::INFINITY)
    } else {
        Ok(1.0 / inv)
    }
}

/// Verify one Young instance. Both sides are computed from the same grid
/// representation (the discrete convolution on the step-weighted grid is
/// itself a group convolution, so the inequality holds exactly there and
/// the grid quantities approximate the continuous ones).
pub fn verify_young(
    f: &FunctionRep,
    g: &FunctionRep,
    p: f64,
    q: f64,
    tol: f64,
    cfg: &CampaignConfig,
) -> Result<VerificationReport> {
    let r = young_exponent_r(p, q)?;
    let start = std::time::Instant::now();
    let fs = match f {
        FunctionRep::Sampled(s) => s.clone(),
        FunctionRep::Analytic(_) => sample(f, cfg.domain)?,
    };
    let gs = match g {
        FunctionRep::Sampled(s) => s.clone(),
        FunctionRep::Analytic(_) => sample(g, cfg.domain)?,
    };
    let plan = ConvolutionPlan::default();
    let conv = FunctionRep::Sampled(convolve_grid(&fs, &gs, &plan)?);
    let lhs = lp_norm(&conv, r)?;
    let rhs = lp_norm(&FunctionRep::Sampled(fs), p)? * lp_norm(&FunctionRep::Sampled(gs), q)?;
    let mut report = ratio_report(
        format!("young/p={p}/q={q}/{}x{}", f.label(), g.label()),
        "young",
        lhs,
        rhs,
        tol,
        0.0,
    )
    .provenance_entry("p", format!("{p}"))
    .provenance_entry("q", format!("{q}"))
    .provenance_entry("r", format!("{r}"))
    .provenance_entry("f", f.label())
    .provenance_entry("g", g.label())
    .provenance_entry("method", "grid")
    .provenance_entry("domain", format!("{:?}", cfg.domain));
    report.wall_time = start.elapsed();
    Ok(report)
}

/// The full campaign: every battery exponent pair against `cfg.pairs`
/// seeded mixture pairs.
pub fn young_campaign(cfg: &CampaignConfig) -> Result<Vec<VerificationReport>> {
    let pairs = mixture_pairs(cfg.seed, cfg.pairs);
    let cells: Vec<(usize, usize)> = (0..pairs.len())
        .flat_map(|i| (0..YOUNG_EXPONENT_BATTERY.len()).map(move |j| (i, j)))
        .collect();
    cells
        .par_iter()
        .map(|&(i, j)| {
            let (p, q) = YOUNG_EXPONENT_BATTERY[j];
            let (f, g) = &pairs[i];
            let mut rep = verify_young(f, g, p, q, cfg.tol, cfg)?;
            rep.id = format!("young/pair{:02}/pq{:02}", i, j);
            rep = rep.provenance_entry("seed", format!("{}", cfg.seed));
            Ok(rep)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{make_gaussian, make_indicator};

    #[test]
    fn exponent_relation() {
        assert_eq!(young_exponent_r(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(young_exponent_r(2.0, 2.0).unwrap(), f64::INFINITY);
        assert!((young_exponent_r(1.0, 2.0).unwrap() - 2.0).abs() < 1e-12);
        assert!(young_exponent_r(3.0, 3.0).is_err());
        assert!(young_exponent_r(0.5, 1.0).is_err());
    }

    #[test]
    fn battery_is_admissible_and_has_twenty_pairs() {
        assert_eq!(YOUNG_EXPONENT_BATTERY.len(), 20);
        for (p, q) in YOUNG_EXPONENT_BATTERY {
            young_exponent_r(p, q).unwrap();
        }
    }

    #[test]
    fn fubini_equality_at_p_q_one() {
        let cfg = CampaignConfig::default();
        let f = make_gaussian(1.0).unwrap();
        let g = make_indicator(0.0, 1.0).unwrap();
        let rep = verify_young(&f, &g, 1.0, 1.0, 1e-6, &cfg).unwrap();
        assert!(rep.pass);
        assert!((rep.ratio - 1.0).abs() < 1e-8, "ratio {}", rep.ratio);
    }

    #[test]
    fn supremum_case_from_closed_forms() {
        // p = q = 2, r = inf: |z1 * z1|_inf = peak of z_sqrt2,
        // |z1|_2^2 = (2 pi)^{-1/2} 2^{-1/2}; the two coincide, ratio = 1
        let cfg = CampaignConfig::default();
        let f = make_gaussian(1.0).unwrap();
        let rep = verify_young(&f, &f, 2.0, 2.0, 1e-6, &cfg).unwrap();
        assert!(rep.pass);
        assert!((rep.ratio - 1.0).abs() < 1e-6, "ratio {}", rep.ratio);
    }

    #[test]
    fn mixed_exponents_pass() {
        let cfg = CampaignConfig::default();
        let f = make_gaussian(1.0).unwrap();
        let g = make_indicator(0.0, 1.0).unwrap();
        let rep = verify_young(&f, &g, 2.0, 1.0, 1e-6, &cfg).unwrap();
        assert!(rep.pass, "ratio {}", rep.ratio);
        assert!(rep.ratio <= 1.0 + 1e-6);
    }
}
