//! The scaling probe behind the necessity of the Young exponent relation.
//!
//! Under dilation, `R(lambda) = |T_l f * T_l g|_r / (|T_l f|_p |T_l g|_q)`
//! scales like `lambda^s` with `s = d (1/p + 1/q - 1 - 1/r)`; the
//! inequality can hold for every lambda only when `s = 0`. The probe
//! measures the log-log slope with real one-dimensional numerics per
//! lambda (dilate, sample, convolve, take norms) and lifts it to the formal
//! dimension d through the change-of-variables identities
//! `|T_l f|_p = lambda^{-d/p} |f|_p` and `T_l f * T_l g = lambda^{-d} T_l (f*g)`.

use super::{difference_report, VerificationReport};
use crate::analysis::family::CampaignConfig;
use crate::convolution::{convolve_grid, ConvolutionPlan};
use crate::error::{Error, Result};
use crate::function::{dilate, sample, FunctionRep};
use crate::norms::lp_norm;

/// Outcome of a probe: the fitted slope, the prediction, and the measured
/// ratio ladder.
#[derive(Debug, Clone)]
pub struct ScalingProbe {
    pub slope: f64,
    pub expected: f64,
    /// `(lambda, R_d(lambda))` pairs.
    pub points: Vec<(f64, f64)>,
    /// `|slope| < 0.05`: the exponent triple is consistent with scale
    /// invariance (necessary for the inequality to hold at every scale).
    pub consistent: bool,
}

/// Probe one exponent triple. `r = inf` is excluded (the supremum norm has
/// no scaling weight to fit); `lambda_list` needs at least three points.
pub fn scaling_exponent_probe(
    f: &FunctionRep,
    g: &FunctionRep,
    p: f64,
    q: f64,
    r: f64,
    dim: u32,
    lambda_list: &[f64],
    cfg: &CampaignConfig,
) -> Result<(ScalingProbe, VerificationReport)> {
    if r.is_infinite() {
        return Err(Error::InvalidExponents(
            "r = inf is excluded from the scaling probe".into(),
        ));
    }
    if !(p >= 1.0 && q >= 1.0 && r >= 1.0) {
        return Err(Error::InvalidExponents(format!(
            "exponents must be >= 1, got ({p}, {q}, {r})"
        )));
    }
    if lambda_list.len() < 3 {
        return Err(Error::invalid(
            "lambda_list",
            "need at least three dilation factors to fit a slope",
        ));
    }
    let start = std::time::Instant::now();
    let d = dim as f64;
    let scale_exponent = 1.0 / p + 1.0 / q - 1.0 - 1.0 / r;
    let expected = d * scale_exponent;

    let plan = ConvolutionPlan::default();
    let mut points = Vec::with_capacity(lambda_list.len());
    for &lambda in lambda_list {
        if !(lambda > 0.0) {
            return Err(Error::invalid("lambda_list", "dilation factors must be positive"));
        }
        let tf = sample(&dilate(f, lambda, 1)?, cfg.domain)?;
        let tg = sample(&dilate(g, lambda, 1)?, cfg.domain)?;
        let conv = FunctionRep::Sampled(convolve_grid(&tf, &tg, &plan)?);
        let num = lp_norm(&conv, r)?;
        let den = lp_norm(&FunctionRep::Sampled(tf), p)? * lp_norm(&FunctionRep::Sampled(tg), q)?;
        if !(num.is_finite() && den.is_finite() && den > 0.0) {
            return Err(Error::NonIntegrable(format!(
                "degenerate ratio at lambda = {lambda}: {num} / {den}"
            )));
        }
        // one-dimensional measurement lifted to formal dimension d
        let r1 = num / den;
        let rd = r1 * lambda.powf((d - 1.0) * scale_exponent);
        points.push((lambda, rd));
    }

    // least squares on (ln lambda, ln R)
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(l, v) in &points {
        let (x, y) = (l.ln(), v.ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let consistent = slope.abs() < 0.05;

    let probe = ScalingProbe {
        slope,
        expected,
        points: points.clone(),
        consistent,
    };
    let mut report = difference_report(
        format!("scaling/p={p}/q={q}/r={r}/d={dim}"),
        "scaling-slope",
        slope,
        expected,
        0.05,
    )
    .provenance_entry("f", f.label())
    .provenance_entry("g", g.label())
    .provenance_entry("lambdas", format!("{lambda_list:?}"))
    .provenance_entry("consistent", format!("{consistent}"))
    .provenance_entry(
        "direction",
        if slope.abs() < 0.05 {
            "scale-invariant".to_string()
        } else if slope > 0.0 {
            "ratio grows unboundedly as lambda -> inf".to_string()
        } else {
            "ratio grows unboundedly as lambda -> 0".to_string()
        },
    );
    report.wall_time = start.elapsed();
    Ok((probe, report))
}

/// Dilation ladder `2^-3 .. 2^3`.
pub fn default_lambda_ladder() -> Vec<f64> {
    (-3..=3).map(|k| 2.0_f64.powi(k)).collect()
}

/// The standard probe battery on Gaussian inputs.
pub fn scaling_campaign(cfg: &CampaignConfig) -> Result<Vec<VerificationReport>> {
    let f = crate::function::make_gaussian(0.5)?;
    let lambdas = default_lambda_ladder();
    let triples: [(f64, f64, f64, f64); 4] = [
        (1.0, 1.0, 1.0, 0.01), // Young-admissible: slope 0 within the tighter gate
        (2.0, 2.0, 2.0, 0.05), // slope -1/2
        (1.0, 1.0, 2.0, 0.05), // slope +1/2: inequality cannot hold for all lambda
        (1.5, 3.0, 3.0, 0.05), // slope -1/3
    ];
    let mut out = Vec::new();
    for (p, q, r, tol) in triples {
        let (probe, mut rep) = scaling_exponent_probe(&f, &f, p, q, r, 1, &lambdas, cfg)?;
        rep.tol_user = tol;
        rep.pass = (probe.slope - probe.expected).abs() <= tol;
        rep = rep.provenance_entry("seed", format!("{}", cfg.seed));
        out.push(rep);
    }
    Ok(out)
}
