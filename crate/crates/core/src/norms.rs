//! `L_p` norms, the Grand Lebesgue norm as a supremum over the exponent, and
//! the small-Lebesgue norm.
//!
//! The Grand norm `sup_{p in [1,b)} |f|_p / psi(p)` is computed on a
//! log-spaced exponent grid (log-spaced in `p - 1 + delta`, so the boundary
//! `p = 1`, where suprema often live, is resolved first-class), then refined
//! around the best node by golden-section search. Ratios follow the
//! extended-real conventions: `C/inf := 0`, a finite-over-zero or
//! infinite-over-finite ratio makes the norm `+inf`, and `inf/inf` is
//! counted as indeterminate and reported, never silently dropped.

use crate::error::{Error, Result};
use crate::function::{AnalyticFunction, FunctionRep, SampledFunction, Support};
use crate::psi::{PsiFamily, PsiSpec};
use crate::quadrature::{integrate, QuadratureRequest, DEFAULT_REL_TOL_SMOOTH};

/// Default number of exponent-grid nodes.
pub const DEFAULT_GRID_NODES: usize = 257;
/// Default exponent cap when the domain is `[1, inf)`.
pub const DEFAULT_P_MAX: f64 = 64.0;
/// Offset of the logarithmic exponent grid: nodes are log-spaced in
/// `p - 1 + GRID_DELTA`.
pub const GRID_DELTA: f64 = 1e-3;

/// `L_p` norm of a function, `1 <= p <= inf`.
///
/// Analytic representations use their exact-norm oracle when one is
/// attached, falling back to quadrature driven by the decay metadata;
/// sampled representations use Haar-weighted grid sums. Returns `+inf` when
/// the integral diverges (a power tail with `exponent * p <= 1`).
pub fn lp_norm(f: &FunctionRep, p: f64) -> Result<f64> {
    lp_norm_with_error(f, p).map(|(v, _)| v)
}

/// `L_p` norm ignoring any attached closed-form oracle; always quadrature
/// (or grid sums for sampled data).
pub fn lp_norm_via_quadrature(f: &FunctionRep, p: f64) -> Result<f64> {
    check_p(p)?;
    match f {
        FunctionRep::Sampled(s) => Ok(lp_sampled(s, p)),
        FunctionRep::Analytic(a) => lp_analytic(a, p).map(|(v, _)| v),
    }
}

/// `L_p` norm together with an absolute error estimate (zero for oracle and
/// grid-sum paths).
pub fn lp_norm_with_error(f: &FunctionRep, p: f64) -> Result<(f64, f64)> {
    check_p(p)?;
    match f {
        FunctionRep::Sampled(s) => Ok((lp_sampled(s, p), 0.0)),
        FunctionRep::Analytic(a) => {
            if let Some(v) = a.norm_oracle(p) {
                return Ok((v, 0.0));
            }
            lp_analytic(a, p)
        }
    }
}

fn check_p(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::invalid("p", format!("exponent must satisfy p >= 1, got {p}")));
    }
    Ok(())
}

fn lp_sampled(s: &SampledFunction, p: f64) -> f64 {
    if p.is_infinite() {
        return s.max_abs();
    }
    let w = s.domain().haar_weight();
    if p == 1.0 {
        let sum: f64 = s.values().iter().map(|v| v.abs()).sum();
        return sum * w;
    }
    // stabilized against under/overflow of |v|^p for large p
    let m = s.max_abs();
    if m == 0.0 {
        return 0.0;
    }
    let sum: f64 = s
        .values()
        .iter()
        .filter(|v| **v != 0.0)
        .map(|v| (p * (v.abs() / m).ln()).exp())
        .sum();
    m * (w * sum).powf(1.0 / p)
}

fn sup_on_grid(a: &AnalyticFunction, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / n as f64;
    let mut m = 0.0f64;
    for i in 0..=n {
        m = m.max(a.eval(lo + i as f64 * h).abs());
    }
    m
}

/// Essential supremum approximated by a fine grid maximum over the region
/// the decay metadata marks as relevant.
fn ess_sup(a: &AnalyticFunction) -> f64 {
    let (lo, hi) = match a.support() {
        Support::Compact { lower, upper } => (lower, upper),
        Support::GaussianDecay { amplitude, rate } => {
            let x = ((140.0 + amplitude.ln().max(0.0)) / rate).sqrt();
            (-x, x)
        }
        Support::PowerDecay { onset, .. } => {
            let x = (4.0 * onset.abs()).max(16.0);
            (-x, x)
        }
    };
    sup_on_grid(a, lo, hi, 1 << 15)
}

fn lp_analytic(a: &AnalyticFunction, p: f64) -> Result<(f64, f64)> {
    if p.is_infinite() {
        return Ok((ess_sup(a), 0.0));
    }
    let f = |x: f64| a.eval(x).abs().powf(p);
    let rel = DEFAULT_REL_TOL_SMOOTH;
    let (integral, err) = match a.support() {
        Support::Compact { lower, upper } => {
            let q = integrate(&QuadratureRequest::new(&f, lower, upper).rel_tol(rel))?;
            (q.value, q.error)
        }
        Support::GaussianDecay { amplitude, rate } => {
            // truncate where the declared bound leaves e^{-140} of itself
            let spread = 140.0 + p * amplitude.ln().max(0.0);
            let x = (spread / (p * rate)).sqrt().min(1e6);
            let splits = (2.83 * spread.sqrt()).ceil().clamp(16.0, 512.0) as usize;
            let q = integrate(
                &QuadratureRequest::new(&f, -x, x)
                    .rel_tol(rel)
                    .initial_splits(splits),
            )?;
            (q.value, q.error)
        }
        Support::PowerDecay { exponent, onset, .. } => {
            if exponent * p <= 1.0 {
                return Ok((f64::INFINITY, 0.0));
            }
            let s = exponent * p;
            let edge = onset.max(1.0);
            let mid = integrate(&QuadratureRequest::new(&f, -edge, edge).rel_tol(rel))?;
            let pos = integrate(
                &QuadratureRequest::new(&f, edge, f64::INFINITY)
                    .rel_tol(rel)
                    .tail_decay(s),
            )?;
            let neg_f = |x: f64| a.eval(-x).abs().powf(p);
            let neg = integrate(
                &QuadratureRequest::new(&neg_f, edge, f64::INFINITY)
                    .rel_tol(rel)
                    .tail_decay(s),
            )?;
            (mid.value + pos.value + neg.value, mid.error + pos.error + neg.error)
        }
    };
    let integral = integral.max(0.0);
    if integral == 0.0 {
        return Ok((0.0, err.powf(1.0 / p)));
    }
    let norm = integral.powf(1.0 / p);
    // first-order propagation of the integral error through the 1/p root
    let norm_err = err / p * integral.powf(1.0 / p - 1.0);
    Ok((norm, norm_err))
}

/// Evaluates `|f|_p` repeatedly with per-representation precomputation.
pub(crate) struct LpEvaluator<'a> {
    rep: LpRep<'a>,
}

enum LpRep<'a> {
    Analytic(&'a AnalyticFunction, bool),
    Sampled {
        scaled_ln: Vec<f64>, // ln(|v|/max)
        max: f64,
        weight: f64,
    },
}

impl<'a> LpEvaluator<'a> {
    pub fn new(f: &'a FunctionRep, use_oracle: bool) -> Self {
        let rep = match f {
            FunctionRep::Analytic(a) => LpRep::Analytic(a, use_oracle),
            FunctionRep::Sampled(s) => {
                let max = s.max_abs();
                let scaled_ln = if max == 0.0 {
                    Vec::new()
                } else {
                    s.values()
                        .iter()
                        .filter(|v| **v != 0.0)
                        .map(|v| (v.abs() / max).ln())
                        .collect()
                };
                LpRep::Sampled {
                    scaled_ln,
                    max,
                    weight: s.domain().haar_weight(),
                }
            }
        };
        LpEvaluator { rep }
    }

    pub fn lp(&self, p: f64) -> Result<f64> {
        match &self.rep {
            LpRep::Analytic(a, use_oracle) => {
                if *use_oracle {
                    if let Some(v) = a.norm_oracle(p) {
                        return Ok(v);
                    }
                }
                if p.is_infinite() {
                    Ok(ess_sup(a))
                } else {
                    lp_analytic(a, p).map(|(v, _)| v)
                }
            }
            LpRep::Sampled {
                scaled_ln,
                max,
                weight,
            } => {
                if *max == 0.0 {
                    return Ok(0.0);
                }
                if p.is_infinite() {
                    return Ok(*max);
                }
                let sum: f64 = scaled_ln.iter().map(|l| (p * l).exp()).sum();
                Ok(max * (weight * sum).powf(1.0 / p))
            }
        }
    }
}

/// Outcome of an extended-real ratio `num / den`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RatioOutcome {
    Finite(f64),
    Infinite,
    Indeterminate,
}

/// `num / den` under the conventions: `C / inf := 0`; `inf / finite` and
/// `positive / 0` are infinite; `inf / inf` and `0 / 0` are indeterminate.
pub fn extended_ratio(num: f64, den: f64) -> RatioOutcome {
    match (num.is_infinite(), den.is_infinite()) {
        (true, true) => RatioOutcome::Indeterminate,
        (true, false) => RatioOutcome::Infinite,
        (false, true) => RatioOutcome::Finite(0.0),
        (false, false) => {
            if den == 0.0 {
                if num == 0.0 {
                    RatioOutcome::Indeterminate
                } else {
                    RatioOutcome::Infinite
                }
            } else {
                RatioOutcome::Finite(num / den)
            }
        }
    }
}

/// Result of a Grand norm computation.
#[derive(Debug, Clone)]
pub struct GrandNormResult {
    /// The supremum; `+inf` when any ratio diverged.
    pub value: f64,
    /// Exponent attaining the reported value.
    pub p_star: f64,
    /// Grid nodes evaluated.
    pub nodes_evaluated: usize,
    /// Golden-section refinement steps.
    pub refinements: usize,
    /// For an unbounded exponent domain: upper bound on the supremum beyond
    /// the exponent cap, from `|f|_p <= |f|_1^{1/p} |f|_inf^{1-1/p}` divided
    /// by `inf psi` past the cap.
    pub tail_bound: Option<f64>,
    /// False when a ratio diverged or refinement could not finish.
    pub converged: bool,
    /// Count of `inf/inf` grid ratios (reported, never silently dropped).
    pub indeterminate_nodes: usize,
}

/// Knobs for [`grand_norm_with`].
#[derive(Debug, Clone)]
pub struct GrandNormOptions {
    /// Golden-section stops once the exponent bracket is narrower than this.
    pub tol: f64,
    /// Exponent-grid size.
    pub nodes: usize,
    /// Exponent cap when the psi domain is `[1, inf)`.
    pub p_max: f64,
    /// Allow closed-form norm oracles for the numerator.
    pub use_oracle: bool,
}

impl Default for GrandNormOptions {
    fn default() -> Self {
        GrandNormOptions {
            tol: 1e-6,
            nodes: DEFAULT_GRID_NODES,
            p_max: DEFAULT_P_MAX,
            use_oracle: true,
        }
    }
}

/// Grand Lebesgue norm `sup_{p in [1,b)} |f|_p / psi(p)`.
pub fn grand_norm(f: &FunctionRep, spec: &PsiSpec, tol: f64) -> Result<GrandNormResult> {
    grand_norm_with(
        f,
        spec,
        &GrandNormOptions {
            tol,
            ..GrandNormOptions::default()
        },
    )
}

/// Grand Lebesgue norm with explicit grid and refinement options.
pub fn grand_norm_with(
    f: &FunctionRep,
    spec: &PsiSpec,
    opts: &GrandNormOptions,
) -> Result<GrandNormResult> {
    if !(opts.tol > 1e-12) {
        return Err(Error::invalid("tol", "refinement tolerance must exceed 1e-12"));
    }
    if spec.eval(1.0)? == 0.0 {
        return Err(Error::DegenerateSpace);
    }
    let norms = LpEvaluator::new(f, opts.use_oracle);

    // the extremal family selects a single exponent: the norm is |f|_r
    if let PsiFamily::Extremal(r) = spec.family() {
        let v = norms.lp(*r)?;
        return Ok(GrandNormResult {
            value: v,
            p_star: *r,
            nodes_evaluated: 1,
            refinements: 0,
            tail_bound: None,
            converged: v.is_finite(),
            indeterminate_nodes: 0,
        });
    }

    let unbounded = spec.upper().is_infinite();
    let p_end = if unbounded {
        opts.p_max
    } else {
        spec.upper() - (spec.upper() - 1.0) * 1e-9
    };
    let nodes = opts.nodes.max(3);

    let mut indeterminate = 0usize;
    let mut evaluated = 0usize;
    let mut best = (1.0, f64::NEG_INFINITY); // (p, ratio)

    let ratio_at = |p: f64, evaluated: &mut usize| -> Result<RatioOutcome> {
        *evaluated += 1;
        let num = norms.lp(p)?;
        let den = spec.eval(p)?;
        Ok(extended_ratio(num, den))
    };

    let divergent = |p: f64, evaluated: usize, indeterminate: usize| GrandNormResult {
        value: f64::INFINITY,
        p_star: p,
        nodes_evaluated: evaluated,
        refinements: 0,
        tail_bound: None,
        converged: false,
        indeterminate_nodes: indeterminate,
    };

    // log-spaced grid in (p - 1 + delta), endpoints pinned exactly
    let s_lo = GRID_DELTA.ln();
    let s_hi = (p_end - 1.0 + GRID_DELTA).ln();
    let mut grid = Vec::with_capacity(nodes);
    for i in 0..nodes {
        let p = if i == 0 {
            1.0
        } else if i == nodes - 1 {
            p_end
        } else {
            let s = (s_lo + (s_hi - s_lo) * i as f64 / (nodes - 1) as f64).exp();
            1.0 - GRID_DELTA + s
        };
        grid.push(p);
    }

    let mut ratios = Vec::with_capacity(nodes);
    for &p in &grid {
        match ratio_at(p, &mut evaluated)? {
            RatioOutcome::Infinite => return Ok(divergent(p, evaluated, indeterminate)),
            RatioOutcome::Indeterminate => {
                indeterminate += 1;
                ratios.push(f64::NEG_INFINITY);
            }
            RatioOutcome::Finite(r) => {
                ratios.push(r);
                if r > best.1 {
                    best = (p, r);
                }
            }
        }
    }
    if best.1 == f64::NEG_INFINITY {
        // every node indeterminate: nothing finite to report
        return Ok(GrandNormResult {
            value: f64::NAN,
            p_star: f64::NAN,
            nodes_evaluated: evaluated,
            refinements: 0,
            tail_bound: None,
            converged: false,
            indeterminate_nodes: indeterminate,
        });
    }

    // golden-section refinement around the best node
    let best_idx = grid
        .iter()
        .position(|&p| p == best.0)
        .expect("best node on grid");
    let mut lo = if best_idx == 0 { grid[0] } else { grid[best_idx - 1] };
    let mut hi = if best_idx + 1 == grid.len() {
        grid[grid.len() - 1]
    } else {
        grid[best_idx + 1]
    };
    let mut refinements = 0usize;
    const INV_PHI: f64 = 0.6180339887498949;
    let mut x1 = hi - (hi - lo) * INV_PHI;
    let mut x2 = lo + (hi - lo) * INV_PHI;
    let mut f1 = match ratio_at(x1, &mut evaluated)? {
        RatioOutcome::Infinite => return Ok(divergent(x1, evaluated, indeterminate)),
        RatioOutcome::Indeterminate => f64::NEG_INFINITY,
        RatioOutcome::Finite(r) => r,
    };
    let mut f2 = match ratio_at(x2, &mut evaluated)? {
        RatioOutcome::Infinite => return Ok(divergent(x2, evaluated, indeterminate)),
        RatioOutcome::Indeterminate => f64::NEG_INFINITY,
        RatioOutcome::Finite(r) => r,
    };
    while hi - lo > opts.tol && refinements < 200 {
        refinements += 1;
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - (hi - lo) * INV_PHI;
            f1 = match ratio_at(x1, &mut evaluated)? {
                RatioOutcome::Infinite => return Ok(divergent(x1, evaluated, indeterminate)),
                RatioOutcome::Indeterminate => f64::NEG_INFINITY,
                RatioOutcome::Finite(r) => r,
            };
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + (hi - lo) * INV_PHI;
            f2 = match ratio_at(x2, &mut evaluated)? {
                RatioOutcome::Infinite => return Ok(divergent(x2, evaluated, indeterminate)),
                RatioOutcome::Indeterminate => f64::NEG_INFINITY,
                RatioOutcome::Finite(r) => r,
            };
        }
        if f1 > best.1 {
            best = (x1, f1);
        }
        if f2 > best.1 {
            best = (x2, f2);
        }
    }

    // tail certificate past the exponent cap
    let tail_bound = if unbounded {
        let n1 = norms.lp(1.0)?;
        let ninf = norms.lp(f64::INFINITY)?;
        let bound = if n1.is_infinite() || ninf.is_infinite() {
            f64::INFINITY
        } else if n1 == 0.0 || ninf == 0.0 {
            0.0
        } else {
            let interp = n1.powf(1.0 / opts.p_max) * ninf.powf(1.0 - 1.0 / opts.p_max);
            let sup_tail = interp.max(ninf);
            let inf_psi = spec.inf_beyond(opts.p_max);
            if inf_psi == 0.0 {
                f64::INFINITY
            } else {
                sup_tail / inf_psi
            }
        };
        Some(bound)
    } else {
        None
    };

    Ok(GrandNormResult {
        value: best.1,
        p_star: best.0,
        nodes_evaluated: evaluated,
        refinements,
        tail_bound,
        converged: true,
        indeterminate_nodes: indeterminate,
    })
}

/// Small-Lebesgue norm `sup_{0 < eps <= b-1} eps^{theta/(b-eps)} |f|_{b-eps}`,
/// computed like the Grand norm: log-spaced grid in `eps`, then
/// golden-section refinement. Returns `+inf` as soon as a grid norm
/// diverges.
pub fn small_lebesgue_norm(f: &FunctionRep, b: f64, theta: f64) -> Result<f64> {
    if !(b > 1.0) || !b.is_finite() {
        return Err(Error::invalid("b", "upper exponent must be finite and exceed 1"));
    }
    if !(theta >= 0.0) || !theta.is_finite() {
        return Err(Error::invalid("theta", "must be a nonnegative real"));
    }
    let norms = LpEvaluator::new(f, true);
    let value_at = |eps: f64| -> Result<f64> {
        let p = b - eps;
        let n = norms.lp(p)?;
        if n.is_infinite() {
            return Ok(f64::INFINITY);
        }
        Ok(eps.powf(theta / (b - eps)) * n)
    };

    let eps_hi = b - 1.0;
    let eps_lo = eps_hi * 1e-9;
    let nodes = DEFAULT_GRID_NODES;
    let mut best = (eps_hi, f64::NEG_INFINITY);
    for i in 0..nodes {
        let eps = eps_hi * (eps_lo / eps_hi).powf(i as f64 / (nodes - 1) as f64);
        let v = value_at(eps)?;
        if v.is_infinite() {
            return Ok(f64::INFINITY);
        }
        if v > best.1 {
            best = (eps, v);
        }
    }
    // golden refinement in ln eps
    let (mut lo, mut hi) = (
        (best.0 * (eps_lo / eps_hi).powf(1.0 / (nodes - 1) as f64)).max(eps_lo),
        (best.0 / (eps_lo / eps_hi).powf(1.0 / (nodes - 1) as f64)).min(eps_hi),
    );
    let mut value = best.1;
    const INV_PHI: f64 = 0.6180339887498949;
    for _ in 0..80 {
        if hi / lo < 1.0 + 1e-9 {
            break;
        }
        let (l, h) = (lo.ln(), hi.ln());
        let x1 = (h - (h - l) * INV_PHI).exp();
        let x2 = (l + (h - l) * INV_PHI).exp();
        let (v1, v2) = (value_at(x1)?, value_at(x2)?);
        if v1.is_infinite() || v2.is_infinite() {
            return Ok(f64::INFINITY);
        }
        value = value.max(v1).max(v2);
        if v1 >= v2 {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    Ok(value)
}
