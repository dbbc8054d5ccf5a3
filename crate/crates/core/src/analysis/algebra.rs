//! The Banach-algebra bound `||f * g||_{G psi} <= ||f||_{G psi} ||g||_{G psi}`
//! for a normalized generating function (psi(1) = 1).

use rayon::prelude::*;

use super::{ratio_report, VerificationReport};
use crate::analysis::family::{mixture_pairs, normalized_psi_battery, CampaignConfig};
use crate::convolution::{convolve, ConvolutionPlan};
use crate::domain::GroupDomain;
use crate::error::{Error, Result};
use crate::function::{sample, FunctionRep};
use crate::norms::{grand_norm_with, lp_norm, GrandNormOptions};
use crate::psi::{degenerate_psi_check, PsiClass, PsiFamily, PsiSpec};

fn hypothesis_ok(spec: &PsiSpec, domain: GroupDomain) -> Result<()> {
    let class = degenerate_psi_check(spec);
    if class == PsiClass::Normalized {
        return Ok(());
    }
    // On a compact (probability-measure) group the extremal family reduces
    // the bound to |f*g|_p <= |f|_p |g|_p, which holds without the
    // normalization hypothesis.
    if matches!(spec.family(), PsiFamily::Extremal(_)) && matches!(domain, GroupDomain::Cyclic { .. })
    {
        return Ok(());
    }
    Err(Error::HypothesisViolation { class })
}

/// Verify one Banach-algebra instance. All three Grand norms are computed
/// from the same grid representation; the report also records the worst
/// point of the proof chain `|f*g|_p <= |f|_p |g|_1` over a coarse exponent
/// grid.
pub fn verify_banach_algebra(
    f: &FunctionRep,
    g: &FunctionRep,
    spec: &PsiSpec,
    tol: f64,
    cfg: &CampaignConfig,
) -> Result<VerificationReport> {
    let start = std::time::Instant::now();
    let (fs, gs) = match (f, g) {
        (FunctionRep::Sampled(a), FunctionRep::Sampled(b)) => (a.clone(), b.clone()),
        _ => (sample(f, cfg.domain)?, sample(g, cfg.domain)?),
    };
    let domain = fs.domain();
    hypothesis_ok(spec, domain)?;

    let fr = FunctionRep::Sampled(fs);
    let gr = FunctionRep::Sampled(gs);
    let conv = convolve(&fr, &gr, &ConvolutionPlan::default())?;

    let opts = GrandNormOptions {
        tol: (tol * 1e-2).clamp(1e-9, 1e-6),
        ..GrandNormOptions::default()
    };
    let nf = grand_norm_with(&fr, spec, &opts)?;
    let ng = grand_norm_with(&gr, spec, &opts)?;
    let nh = grand_norm_with(&conv, spec, &opts)?;

    let lhs = nh.value;
    let rhs = nf.value * ng.value;

    // proof-chain intermediate: sup_p |f*g|_p / (|f|_p |g|_1)
    let g1 = lp_norm(&gr, 1.0)?;
    let mut chain_worst = (0.0f64, 1.0f64);
    let p_end = if spec.upper().is_finite() {
        spec.upper() - (spec.upper() - 1.0) * 1e-6
    } else {
        crate::norms::DEFAULT_P_MAX
    };
    for i in 0..=32 {
        let p = 1.0 + (p_end - 1.0) * (i as f64 / 32.0);
        let num = lp_norm(&conv, p)?;
        let den = lp_norm(&fr, p)? * g1;
        if den > 0.0 && num / den > chain_worst.0 {
            chain_worst = (num / den, p);
        }
    }

    let mut report = ratio_report(
        format!("algebra/{}/{}x{}", spec.label(), f.label(), g.label()),
        "banach-algebra",
        lhs,
        rhs,
        tol,
        0.0,
    )
    .provenance_entry("psi", spec.label())
    .provenance_entry("f", f.label())
    .provenance_entry("g", g.label())
    .provenance_entry("domain", format!("{domain:?}"))
    .provenance_entry("method", "grid")
    .provenance_entry("p_star_conv", format!("{}", nh.p_star))
    .provenance_entry("chain_max_ratio", format!("{}", chain_worst.0))
    .provenance_entry("chain_argmax_p", format!("{}", chain_worst.1));
    report.wall_time = start.elapsed();
    Ok(report)
}

/// The campaign of the main theorem: seeded mixture pairs against the
/// normalized battery (`pairs x 4` cells).
pub fn banach_algebra_campaign(cfg: &CampaignConfig) -> Result<Vec<VerificationReport>> {
    let pairs = mixture_pairs(cfg.seed, cfg.pairs);
    let battery = normalized_psi_battery();
    let cells: Vec<(usize, usize)> = (0..pairs.len())
        .flat_map(|i| (0..battery.len()).map(move |j| (i, j)))
        .collect();
    cells
        .par_iter()
        .map(|&(i, j)| {
            let (f, g) = &pairs[i];
            let mut rep = verify_banach_algebra(f, g, &battery[j], cfg.tol, cfg)?;
            rep.id = format!("algebra/pair{:02}/psi{}", i, j);
            rep = rep.provenance_entry("seed", format!("{}", cfg.seed));
            Ok(rep)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{make_gaussian, make_indicator};
    use crate::norms::grand_norm;

    #[test]
    fn gaussian_equality_case() {
        let cfg = CampaignConfig::default();
        let z1 = make_gaussian(1.0).unwrap();
        let spec = PsiSpec::gaussian_sigma(1.0).unwrap();
        let rep = verify_banach_algebra(&z1, &z1, &spec, 1e-3, &cfg).unwrap();
        assert!(rep.pass);
        assert!(
            (rep.ratio - 1.0).abs() < 1e-3,
            "equality case should be tight, ratio {}",
            rep.ratio
        );
    }

    #[test]
    fn non_normalized_spec_rejected() {
        let cfg = CampaignConfig::default();
        let z1 = make_gaussian(1.0).unwrap();
        let unnormalized = PsiSpec::table(vec![1.0, 64.0], vec![2.0, 3.0]).unwrap();
        let err = verify_banach_algebra(&z1, &z1, &unnormalized, 1e-6, &cfg);
        assert!(matches!(
            err,
            Err(Error::HypothesisViolation {
                class: PsiClass::PositiveUnnormalized
            })
        ));
        let extremal = PsiSpec::extremal(2.0).unwrap();
        assert!(matches!(
            verify_banach_algebra(&z1, &z1, &extremal, 1e-6, &cfg),
            Err(Error::HypothesisViolation { .. })
        ));
    }

    #[test]
    fn compact_case_reduces_to_lp_algebra() {
        // indicator-like mass on Z_n with the extremal spec: the bound is
        // |f*g|_p <= |f|_p |g|_p, the compact-group Lebesgue algebra
        let n = 64;
        let domain = GroupDomain::cyclic(n).unwrap();
        let mut values = vec![0.0; n];
        for (i, v) in values.iter_mut().enumerate().take(16) {
            *v = if i % 3 == 0 { 2.0 } else { 1.0 };
        }
        let f = FunctionRep::Sampled(crate::function::SampledFunction::new(domain, values).unwrap());
        let cfg = CampaignConfig::default();
        for p in [1.0, 2.0, 4.0] {
            let spec = PsiSpec::extremal(p).unwrap();
            let rep = verify_banach_algebra(&f, &f, &spec, 1e-9, &cfg).unwrap();
            assert!(rep.pass, "p = {p}: ratio {}", rep.ratio);
        }
    }

    #[test]
    fn mixture_pair_passes_on_power_m() {
        let cfg = CampaignConfig::default();
        let pairs = mixture_pairs(3, 1);
        let spec = PsiSpec::power_m(2.0).unwrap();
        let rep = verify_banach_algebra(&pairs[0].0, &pairs[0].1, &spec, 1e-6, &cfg).unwrap();
        assert!(rep.pass, "ratio {}", rep.ratio);
        let chain: f64 = rep.provenance["chain_max_ratio"].parse().unwrap();
        assert!(chain <= 1.0 + 1e-9, "proof chain violated: {chain}");
    }

    #[test]
    fn indicator_equality_against_natural_spec() {
        // ||f||_{G psi^{(f)}} = 1 and the bound is attained within grid error
        let f = make_indicator(0.0, 1.0).unwrap();
        let spec = PsiSpec::natural_of(f.clone(), f64::INFINITY).unwrap();
        let r = grand_norm(&f, &spec, 1e-6).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9);
    }
}
