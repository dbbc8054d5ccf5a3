//! Function representations on a group domain, canonical test families, and
//! the dilation operator.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::domain::GroupDomain;
use crate::error::{Error, Result};

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Support / decay metadata for an analytic representation. The bounds are
/// global: `Compact` means the function vanishes outside `[lower, upper]`,
/// `GaussianDecay` means `|f(x)| <= amplitude * exp(-rate x^2)` everywhere,
/// `PowerDecay` means `|f(x)| <= amplitude * |x|^{-exponent}` for
/// `|x| >= onset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support {
    Compact { lower: f64, upper: f64 },
    GaussianDecay { amplitude: f64, rate: f64 },
    PowerDecay { amplitude: f64, exponent: f64, onset: f64 },
}

/// A function given by an evaluator plus metadata; optionally carries an
/// exact-norm oracle `p -> |f|_p`.
#[derive(Clone)]
pub struct AnalyticFunction {
    eval: Evaluator,
    support: Support,
    norm_oracle: Option<Evaluator>,
    label: String,
}

impl AnalyticFunction {
    pub fn new(eval: Evaluator, support: Support, label: impl Into<String>) -> Self {
        AnalyticFunction {
            eval,
            support,
            norm_oracle: None,
            label: label.into(),
        }
    }

    pub fn with_oracle(mut self, oracle: Evaluator) -> Self {
        self.norm_oracle = Some(oracle);
        self
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Exact `|f|_p` when a closed form is attached.
    pub fn norm_oracle(&self, p: f64) -> Option<f64> {
        self.norm_oracle.as_ref().map(|o| o(p))
    }

    pub fn has_oracle(&self) -> bool {
        self.norm_oracle.is_some()
    }

    /// Spot-check that the evaluator respects the declared decay bound.
    pub fn check_decay_consistency(&self) -> Result<()> {
        let slack = 1.0 + 1e-9;
        let ok = match self.support {
            Support::Compact { lower, upper } => {
                let pad = 1e-6 * (upper - lower).abs() + 1e-9;
                self.eval(lower - pad) == 0.0 && self.eval(upper + pad) == 0.0
            }
            Support::GaussianDecay { amplitude, rate } => [0.0, 1.0, -1.0, 2.0, -2.0, 5.0, -5.0]
                .iter()
                .all(|&x| self.eval(x).abs() <= slack * amplitude * (-rate * x * x).exp()),
            Support::PowerDecay {
                amplitude,
                exponent,
                onset,
            } => {
                let x = 2.0 * onset.max(0.5);
                self.eval(x).abs() <= slack * amplitude * x.powf(-exponent)
                    && self.eval(-x).abs() <= slack * amplitude * x.powf(-exponent)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Representation(format!(
                "evaluator of `{}` violates its declared decay bound",
                self.label
            )))
        }
    }
}

impl fmt::Debug for AnalyticFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticFunction")
            .field("label", &self.label)
            .field("support", &self.support)
            .field("has_oracle", &self.norm_oracle.is_some())
            .finish()
    }
}

/// A function given by grid values aligned to a domain.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    domain: GroupDomain,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(domain: GroupDomain, values: Vec<f64>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::DomainMismatch(format!(
                "values length {} does not match domain size {}",
                values.len(),
                domain.len()
            )));
        }
        Ok(SampledFunction { domain, values })
    }

    pub fn domain(&self) -> GroupDomain {
        self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Either representation of a function on a group domain.
#[derive(Debug, Clone)]
pub enum FunctionRep {
    Analytic(AnalyticFunction),
    Sampled(SampledFunction),
}

impl FunctionRep {
    pub fn as_analytic(&self) -> Option<&AnalyticFunction> {
        match self {
            FunctionRep::Analytic(a) => Some(a),
            FunctionRep::Sampled(_) => None,
        }
    }

    pub fn as_sampled(&self) -> Option<&SampledFunction> {
        match self {
            FunctionRep::Sampled(s) => Some(s),
            FunctionRep::Analytic(_) => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            FunctionRep::Analytic(a) => a.label.clone(),
            FunctionRep::Sampled(s) => format!("sampled[n={}]", s.values.len()),
        }
    }

    /// Point evaluation; a sampled function answers with its nearest grid
    /// node (and 0 outside the covered interval).
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            FunctionRep::Analytic(a) => a.eval(x),
            FunctionRep::Sampled(s) => match s.domain {
                GroupDomain::RealLine { half_width, n } => {
                    let h = 2.0 * half_width / n as f64;
                    let i = ((x + half_width) / h).round();
                    if i < 0.0 || i >= n as f64 {
                        0.0
                    } else {
                        s.values[i as usize]
                    }
                }
                GroupDomain::Cyclic { n } => {
                    let i = (x.round() as i64).rem_euclid(n as i64) as usize;
                    s.values[i]
                }
            },
        }
    }

    /// Pointwise scaling by a constant; preserves the oracle.
    pub fn scale(&self, c: f64) -> FunctionRep {
        match self {
            FunctionRep::Sampled(s) => FunctionRep::Sampled(SampledFunction {
                domain: s.domain,
                values: s.values.iter().map(|v| c * v).collect(),
            }),
            FunctionRep::Analytic(a) => {
                let inner = a.eval.clone();
                let eval: Evaluator = Arc::new(move |x| c * inner(x));
                let support = match a.support {
                    Support::Compact { lower, upper } => Support::Compact { lower, upper },
                    Support::GaussianDecay { amplitude, rate } => Support::GaussianDecay {
                        amplitude: amplitude * c.abs(),
                        rate,
                    },
                    Support::PowerDecay {
                        amplitude,
                        exponent,
                        onset,
                    } => Support::PowerDecay {
                        amplitude: amplitude * c.abs(),
                        exponent,
                        onset,
                    },
                };
                let mut out = AnalyticFunction::new(eval, support, format!("{}*{}", c, a.label));
                if let Some(oracle) = &a.norm_oracle {
                    let oracle = oracle.clone();
                    let ca = c.abs();
                    out = out.with_oracle(Arc::new(move |p| ca * oracle(p)));
                }
                FunctionRep::Analytic(out)
            }
        }
    }

    /// Pointwise sum. Sampled + Sampled requires matching domains; the
    /// analytic sum combines decay bounds conservatively and drops oracles.
    pub fn add(&self, other: &FunctionRep) -> Result<FunctionRep> {
        match (self, other) {
            (FunctionRep::Sampled(a), FunctionRep::Sampled(b)) => {
                if a.domain != b.domain {
                    return Err(Error::DomainMismatch(
                        "cannot add sampled functions on different domains".into(),
                    ));
                }
                Ok(FunctionRep::Sampled(SampledFunction {
                    domain: a.domain,
                    values: a
                        .values
                        .iter()
                        .zip(&b.values)
                        .map(|(x, y)| x + y)
                        .collect(),
                }))
            }
            (FunctionRep::Analytic(a), FunctionRep::Analytic(b)) => {
                let (ea, eb) = (a.eval.clone(), b.eval.clone());
                let eval: Evaluator = Arc::new(move |x| ea(x) + eb(x));
                let support = combine_supports(a, b);
                Ok(FunctionRep::Analytic(AnalyticFunction::new(
                    eval,
                    support,
                    format!("({}+{})", a.label, b.label),
                )))
            }
            _ => Err(Error::Representation(
                "cannot add analytic and sampled representations".into(),
            )),
        }
    }
}

fn estimated_sup(f: &AnalyticFunction, lo: f64, hi: f64) -> f64 {
    let n = 1024;
    let h = (hi - lo) / n as f64;
    let mut m = 0.0f64;
    for i in 0..=n {
        m = m.max(f.eval(lo + i as f64 * h).abs());
    }
    2.0 * m
}

fn combine_supports(a: &AnalyticFunction, b: &AnalyticFunction) -> Support {
    use Support::*;
    let as_gaussian = |f: &AnalyticFunction| -> Option<(f64, f64)> {
        match f.support {
            GaussianDecay { amplitude, rate } => Some((amplitude, rate)),
            Compact { lower, upper } => {
                let xm = lower.abs().max(upper.abs());
                let rate = 1.0 / (4.0 * xm.max(1.0).powi(2));
                let amp = estimated_sup(f, lower, upper) * (rate * xm * xm).exp();
                Some((amp, rate))
            }
            PowerDecay { .. } => None,
        }
    };
    match (a.support, b.support) {
        (Compact { lower: l1, upper: u1 }, Compact { lower: l2, upper: u2 }) => Compact {
            lower: l1.min(l2),
            upper: u1.max(u2),
        },
        (
            PowerDecay {
                amplitude: a1,
                exponent: g1,
                onset: o1,
            },
            PowerDecay {
                amplitude: a2,
                exponent: g2,
                onset: o2,
            },
        ) => PowerDecay {
            amplitude: a1 + a2,
            exponent: g1.min(g2),
            onset: o1.max(o2).max(1.0),
        },
        (PowerDecay { amplitude, exponent, onset }, _) | (_, PowerDecay { amplitude, exponent, onset }) => {
            // the non-power partner decays faster than any power beyond a
            // matched onset; fold it into the power bound there
            let other = if matches!(a.support, PowerDecay { .. }) { b } else { a };
            let onset = match other.support {
                Compact { lower, upper } => onset.max(lower.abs().max(upper.abs())).max(1.0),
                GaussianDecay { rate, .. } => onset.max((exponent / (2.0 * rate)).sqrt()).max(1.0),
                PowerDecay { .. } => unreachable!(),
            };
            let extra = match other.support {
                Compact { .. } => 0.0,
                GaussianDecay { amplitude: ag, rate } => {
                    ag * (-rate * onset * onset).exp() * onset.powf(exponent)
                }
                PowerDecay { .. } => unreachable!(),
            };
            PowerDecay {
                amplitude: amplitude + extra,
                exponent,
                onset,
            }
        }
        _ => {
            let (a1, r1) = as_gaussian(a).expect("gaussian-combinable");
            let (a2, r2) = as_gaussian(b).expect("gaussian-combinable");
            GaussianDecay {
                amplitude: a1 + a2,
                rate: r1.min(r2),
            }
        }
    }
}

/// Gaussian density z_sigma(x) = (sigma sqrt(2 pi))^{-1} exp(-x^2 / (2 sigma^2))
/// with its exact-norm oracle
/// `|z_sigma|_p = (2 pi)^{1/(2p) - 1/2} p^{-1/(2p)} sigma^{1/p - 1}`.
pub fn make_gaussian(sigma: f64) -> Result<FunctionRep> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::invalid("sigma", "must be a positive real"));
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let peak = 1.0 / (sigma * two_pi.sqrt());
    let inv_two_var = 1.0 / (2.0 * sigma * sigma);
    let eval: Evaluator = Arc::new(move |x| peak * (-x * x * inv_two_var).exp());
    let oracle: Evaluator = Arc::new(move |p| gaussian_lp(sigma, p));
    let f = AnalyticFunction::new(
        eval,
        Support::GaussianDecay {
            amplitude: peak,
            rate: inv_two_var,
        },
        format!("gaussian:{sigma}"),
    )
    .with_oracle(oracle);
    f.check_decay_consistency()?;
    Ok(FunctionRep::Analytic(f))
}

/// Closed form of `|z_sigma|_p`, extended to `p = inf` by its limit, the
/// peak value `(sigma sqrt(2 pi))^{-1}`.
pub fn gaussian_lp(sigma: f64, p: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    if p.is_infinite() {
        return 1.0 / (sigma * two_pi.sqrt());
    }
    two_pi.powf(0.5 / p - 0.5) * p.powf(-0.5 / p) * sigma.powf(1.0 / p - 1.0)
}

/// Power-tail function `f_alpha(x) = x^{-1/alpha}` on `[1, inf)`, zero
/// elsewhere; `alpha` in (1, 2]. The main case `alpha = 3/2` gives
/// `x^{-2/3} I(x >= 1)`.
pub fn make_power_tail(alpha: f64) -> Result<FunctionRep> {
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(Error::invalid("alpha", format!("must lie in (1, 2], got {alpha}")));
    }
    let gamma = 1.0 / alpha;
    let eval: Evaluator = Arc::new(move |x| if x >= 1.0 { x.powf(-gamma) } else { 0.0 });
    let f = AnalyticFunction::new(
        eval,
        Support::PowerDecay {
            amplitude: 1.0,
            exponent: gamma,
            onset: 1.0,
        },
        format!("power-tail:{alpha}"),
    );
    f.check_decay_consistency()?;
    Ok(FunctionRep::Analytic(f))
}

/// Indicator of `[a, b)`; left-closed right-open so grid sampling is
/// unambiguous (measure-zero boundary sets affect no norm).
pub fn make_indicator(a: f64, b: f64) -> Result<FunctionRep> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::invalid("interval", format!("need a < b, got [{a}, {b})")));
    }
    let eval: Evaluator = Arc::new(move |x| if x >= a && x < b { 1.0 } else { 0.0 });
    let f = AnalyticFunction::new(
        eval,
        Support::Compact { lower: a, upper: b },
        format!("indicator:{a}:{b}"),
    );
    f.check_decay_consistency()?;
    Ok(FunctionRep::Analytic(f))
}

// Parameter ranges of the seeded random family.
const MIX_SIGMA_RANGE: (f64, f64) = (0.5, 4.0);
const MIX_CENTER_RANGE: (f64, f64) = (-4.0, 4.0);
const MIX_WEIGHT_RANGE: (f64, f64) = (0.25, 1.5);
const MIX_INDICATOR_WIDTH: (f64, f64) = (0.25, 2.0);

/// A seeded positive combination of Gaussian bumps and indicators with
/// parameters drawn from fixed ranges; identical seeds reproduce identical
/// functions.
pub fn random_mixture(seed: u64, components: usize) -> FunctionRep {
    let k = components.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gaussians: Vec<(f64, f64, f64)> = Vec::new(); // (weight, sigma, center)
    let mut indicators: Vec<(f64, f64, f64)> = Vec::new(); // (weight, a, b)
    for _ in 0..k {
        let w = rng.random_range(MIX_WEIGHT_RANGE.0..=MIX_WEIGHT_RANGE.1);
        if rng.random_bool(0.7) {
            let sigma = rng.random_range(MIX_SIGMA_RANGE.0..=MIX_SIGMA_RANGE.1);
            let center = rng.random_range(MIX_CENTER_RANGE.0..=MIX_CENTER_RANGE.1);
            gaussians.push((w, sigma, center));
        } else {
            let a = rng.random_range(MIX_CENTER_RANGE.0..=MIX_CENTER_RANGE.1 - MIX_INDICATOR_WIDTH.1);
            let width = rng.random_range(MIX_INDICATOR_WIDTH.0..=MIX_INDICATOR_WIDTH.1);
            indicators.push((w, a, a + width));
        }
    }
    if gaussians.is_empty() && indicators.is_empty() {
        unreachable!("k >= 1");
    }

    let two_pi = 2.0 * std::f64::consts::PI;
    let g = gaussians.clone();
    let ind = indicators.clone();
    let eval: Evaluator = Arc::new(move |x| {
        let mut v = 0.0;
        for &(w, sigma, c) in &g {
            let z = (x - c) / sigma;
            v += w / (sigma * two_pi.sqrt()) * (-0.5 * z * z).exp();
        }
        for &(w, a, b) in &ind {
            if x >= a && x < b {
                v += w;
            }
        }
        v
    });

    // global bound: shifted bumps obey |z((x-c)/s)| <= e^{c^2/(2s^2)} e^{-x^2/(4s^2)},
    // indicators inside [-4, 4] obey w <= w e^{16 r} e^{-r x^2} for the chosen rate
    let mut rate = f64::INFINITY;
    for &(_, sigma, _) in &gaussians {
        rate = rate.min(1.0 / (4.0 * sigma * sigma));
    }
    if !indicators.is_empty() {
        rate = rate.min(1.0 / 64.0);
    }
    let mut amplitude = 0.0;
    for &(w, sigma, c) in &gaussians {
        amplitude += w / (sigma * two_pi.sqrt()) * (c * c / (2.0 * sigma * sigma)).exp();
    }
    let ind_edge: f64 = MIX_CENTER_RANGE.1;
    for &(w, _, _) in &indicators {
        amplitude += w * (rate * ind_edge * ind_edge).exp();
    }

    let f = AnalyticFunction::new(
        eval,
        Support::GaussianDecay { amplitude, rate },
        format!("mixture:{seed}:{k}"),
    );
    debug_assert!(f.check_decay_consistency().is_ok());
    FunctionRep::Analytic(f)
}

/// Dilation `T_lambda f (x) = f(lambda x)`.
///
/// `dim` is the formal dimension entering only the norm bookkeeping
/// (`|T_lambda f|_p = lambda^{-dim/p} |f|_p`); the evaluator stays
/// one-dimensional.
pub fn dilate(f: &FunctionRep, lambda: f64, dim: u32) -> Result<FunctionRep> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::invalid("lambda", "dilation factor must be positive"));
    }
    if dim == 0 {
        return Err(Error::invalid("dim", "formal dimension must be positive"));
    }
    let a = f
        .as_analytic()
        .ok_or_else(|| Error::Representation("dilation needs an analytic representation".into()))?;
    let inner = a.eval.clone();
    let eval: Evaluator = Arc::new(move |x| inner(lambda * x));
    let support = match a.support {
        Support::Compact { lower, upper } => Support::Compact {
            lower: lower / lambda,
            upper: upper / lambda,
        },
        Support::GaussianDecay { amplitude, rate } => Support::GaussianDecay {
            amplitude,
            rate: rate * lambda * lambda,
        },
        Support::PowerDecay {
            amplitude,
            exponent,
            onset,
        } => Support::PowerDecay {
            amplitude: amplitude * lambda.powf(-exponent),
            exponent,
            onset: onset / lambda,
        },
    };
    let mut out = AnalyticFunction::new(
        eval,
        support,
        format!("dilate:{lambda}:{}:{}", dim, a.label),
    );
    if let Some(oracle) = &a.norm_oracle {
        let oracle = oracle.clone();
        let d = dim as f64;
        out = out.with_oracle(Arc::new(move |p| {
            if p.is_infinite() {
                oracle(p)
            } else {
                lambda.powf(-d / p) * oracle(p)
            }
        }));
    }
    Ok(FunctionRep::Analytic(out))
}

/// Evaluate an analytic function on a real-line grid. Power-tail functions
/// are rejected: their mass lives on `[1, inf)` and belongs to the dedicated
/// singular quadrature, not to a truncated grid.
pub fn sample(f: &FunctionRep, domain: GroupDomain) -> Result<SampledFunction> {
    let a = f
        .as_analytic()
        .ok_or_else(|| Error::Representation("sampling needs an analytic representation".into()))?;
    if !matches!(domain, GroupDomain::RealLine { .. }) {
        return Err(Error::DomainMismatch("sampling targets a real-line grid".into()));
    }
    if matches!(a.support, Support::PowerDecay { .. }) {
        return Err(Error::Representation(format!(
            "`{}` has a power tail; its norms and convolutions use singular quadrature, not grid sampling",
            a.label
        )));
    }
    let values = domain.points().map(|x| a.eval(x)).collect();
    SampledFunction::new(domain, values)
}

/// Tags of the canonical test families, the target of the CLI mini-language.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    GaussianSigma(f64),
    PowerTail(f64),
    Indicator(f64, f64),
    RandomMixture { seed: u64, components: usize },
}

impl FamilySpec {
    pub fn build(&self) -> Result<FunctionRep> {
        match *self {
            FamilySpec::GaussianSigma(sigma) => make_gaussian(sigma),
            FamilySpec::PowerTail(alpha) => make_power_tail(alpha),
            FamilySpec::Indicator(a, b) => make_indicator(a, b),
            FamilySpec::RandomMixture { seed, components } => Ok(random_mixture(seed, components)),
        }
    }

    /// Parse the colon-separated mini-language: `gaussian:SIGMA`,
    /// `power-tail:ALPHA`, `indicator:A:B`, `mixture:SEED:COMPONENTS`.
    pub fn parse(s: &str) -> Result<FamilySpec> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = |why: String| Error::invalid("family", why);
        let num = |t: &str| -> Result<f64> {
            t.parse::<f64>()
                .map_err(|_| bad(format!("`{t}` is not a number in `{s}`")))
        };
        match parts.as_slice() {
            ["gaussian", sigma] => Ok(FamilySpec::GaussianSigma(num(sigma)?)),
            ["power-tail", alpha] => Ok(FamilySpec::PowerTail(num(alpha)?)),
            ["indicator", a, b] => Ok(FamilySpec::Indicator(num(a)?, num(b)?)),
            ["mixture", seed, k] => Ok(FamilySpec::RandomMixture {
                seed: seed
                    .parse::<u64>()
                    .map_err(|_| bad(format!("`{seed}` is not a seed in `{s}`")))?,
                components: k
                    .parse::<usize>()
                    .map_err(|_| bad(format!("`{k}` is not a count in `{s}`")))?,
            }),
            _ => Err(bad(format!(
                "unknown family `{s}`; expected gaussian:S | power-tail:A | indicator:A:B | mixture:SEED:K"
            ))),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::GaussianSigma(s) => write!(f, "gaussian:{s}"),
            FamilySpec::PowerTail(a) => write!(f, "power-tail:{a}"),
            FamilySpec::Indicator(a, b) => write!(f, "indicator:{a}:{b}"),
            FamilySpec::RandomMixture { seed, components } => write!(f, "mixture:{seed}:{components}"),
        }
    }
}
