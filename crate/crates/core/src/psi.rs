//! Generating functions `psi(p)` on `[1, b)` and their classification.
//!
//! Evaluation is extended-real: `+inf` is a legitimate value (the extremal
//! family is infinite off its exponent, and the counterexample family is
//! infinite on `[1, 3/2]`), with the convention `C / inf := 0` applied by the
//! norm code. Nothing is normalized here; `degenerate_psi_check` classifies
//! and callers decide what they accept.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::function::{gaussian_lp, FunctionRep};
use crate::norms;

/// Tagged family of generating functions.
#[derive(Debug, Clone)]
pub enum PsiFamily {
    /// `p^{1/m}`, m > 0, on [1, inf).
    PowerM(f64),
    /// `(b-1)^beta (b-p)^{-beta}` on [1, b), b finite.
    CriticalBeta { b: f64, beta: f64 },
    /// 1 at p = r, +inf elsewhere; the Grand norm degenerates to `|f|_r`.
    Extremal(f64),
    /// The natural function of the Gaussian density z_sigma.
    GaussianSigma(f64),
    /// `(3 / (2p - 3))^{1/p}` for p > 3/2, +inf on [1, 3/2]; the natural
    /// function of the power-tail function x^{-2/3} I(x >= 1).
    CounterexampleTilde,
    /// The natural function `p -> |f|_p` of a concrete function.
    NaturalOf(Box<FunctionRep>),
    /// Piecewise-linear interpolation in 1/p through given nodes.
    Table { ps: Vec<f64>, values: Vec<f64> },
}

/// A generating function together with its exponent domain `[1, upper)`.
pub struct PsiSpec {
    family: PsiFamily,
    upper: f64,
    // memo for NaturalOf, whose evaluation may run quadrature
    cache: Mutex<HashMap<u64, f64>>,
}

impl Clone for PsiSpec {
    fn clone(&self) -> Self {
        PsiSpec {
            family: self.family.clone(),
            upper: self.upper,
            cache: Mutex::new(HashMap::new()),
        }
    }
}

impl fmt::Debug for PsiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PsiSpec")
            .field("family", &self.family)
            .field("upper", &self.upper)
            .finish()
    }
}

impl PsiSpec {
    fn raw(family: PsiFamily, upper: f64) -> Self {
        PsiSpec {
            family,
            upper,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn power_m(m: f64) -> Result<Self> {
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::invalid("m", "must be a positive real"));
        }
        Ok(Self::raw(PsiFamily::PowerM(m), f64::INFINITY))
    }

    pub fn critical_beta(b: f64, beta: f64) -> Result<Self> {
        if !(b > 1.0) || !b.is_finite() {
            return Err(Error::invalid("b", "upper exponent must be finite and exceed 1"));
        }
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::invalid("beta", "must be a nonnegative real"));
        }
        Ok(Self::raw(PsiFamily::CriticalBeta { b, beta }, b))
    }

    pub fn extremal(r: f64) -> Result<Self> {
        if !(r >= 1.0) || !r.is_finite() {
            return Err(Error::invalid("r", "exponent must be a finite real >= 1"));
        }
        Ok(Self::raw(PsiFamily::Extremal(r), f64::INFINITY))
    }

    pub fn gaussian_sigma(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::invalid("sigma", "must be a positive real"));
        }
        Ok(Self::raw(PsiFamily::GaussianSigma(sigma), f64::INFINITY))
    }

    pub fn counterexample_tilde() -> Self {
        Self::raw(PsiFamily::CounterexampleTilde, f64::INFINITY)
    }

    pub fn natural_of(f: FunctionRep, upper: f64) -> Result<Self> {
        if !(upper > 1.0) {
            return Err(Error::invalid("upper", "exponent domain must reach beyond 1"));
        }
        Ok(Self::raw(PsiFamily::NaturalOf(Box::new(f)), upper))
    }

    pub fn table(ps: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if ps.len() != values.len() || ps.len() < 2 {
            return Err(Error::invalid("table", "need at least two aligned nodes"));
        }
        if ps[0] != 1.0 {
            return Err(Error::invalid("table", "exponent grid must start at p = 1"));
        }
        if ps.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("table", "exponent grid must increase strictly"));
        }
        if values.iter().any(|v| v.is_nan() || *v < 0.0) {
            return Err(Error::invalid("table", "values must be nonnegative (inf allowed)"));
        }
        let upper = *ps.last().unwrap();
        Ok(Self::raw(PsiFamily::Table { ps, values }, upper))
    }

    pub fn family(&self) -> &PsiFamily {
        &self.family
    }

    /// Upper end `b` of the exponent domain `[1, b)`; may be infinite.
    pub fn upper(&self) -> f64 {
        self.upper
    }

    fn contains(&self, p: f64) -> bool {
        if p < 1.0 || p.is_nan() {
            return false;
        }
        // a table is defined up to and including its last node
        if matches!(self.family, PsiFamily::Table { .. }) {
            p <= self.upper
        } else {
            p < self.upper
        }
    }

    /// Extended-real evaluation of `psi(p)` for `p` in `[1, b)`.
    pub fn eval(&self, p: f64) -> Result<f64> {
        if !self.contains(p) {
            return Err(Error::invalid(
                "p",
                format!("exponent {p} outside the domain [1, {})", self.upper),
            ));
        }
        Ok(match &self.family {
            PsiFamily::PowerM(m) => p.powf(1.0 / m),
            PsiFamily::CriticalBeta { b, beta } => (b - 1.0).powf(*beta) * (b - p).powf(-beta),
            PsiFamily::Extremal(r) => {
                if p == *r {
                    1.0
                } else {
                    f64::INFINITY
                }
            }
            PsiFamily::GaussianSigma(sigma) => gaussian_lp(*sigma, p),
            PsiFamily::CounterexampleTilde => {
                if p <= 1.5 {
                    f64::INFINITY
                } else {
                    (3.0 / (2.0 * p - 3.0)).powf(1.0 / p)
                }
            }
            PsiFamily::NaturalOf(f) => {
                let key = p.to_bits();
                if let Some(v) = self.cache.lock().unwrap().get(&key) {
                    return Ok(*v);
                }
                let v = norms::lp_norm(f, p)?;
                self.cache.lock().unwrap().insert(key, v);
                v
            }
            PsiFamily::Table { ps, values } => {
                let i = match ps.binary_search_by(|x| x.total_cmp(&p)) {
                    Ok(i) => return Ok(values[i]),
                    Err(i) => i - 1, // p > ps[0] here
                };
                let (p0, p1) = (ps[i], ps[i + 1]);
                let (v0, v1) = (values[i], values[i + 1]);
                if !v0.is_finite() || !v1.is_finite() {
                    f64::INFINITY
                } else {
                    // linear in 1/p
                    let t = (1.0 / p - 1.0 / p0) / (1.0 / p1 - 1.0 / p0);
                    v0 + t * (v1 - v0)
                }
            }
        })
    }

    /// Known limit of `psi(p)` as `p -> inf`, where the family has one.
    pub fn limit_at_infinity(&self) -> Option<f64> {
        match &self.family {
            PsiFamily::GaussianSigma(sigma) => {
                Some(1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt()))
            }
            PsiFamily::CounterexampleTilde => Some(1.0),
            PsiFamily::PowerM(_) => Some(f64::INFINITY),
            _ => None,
        }
    }

    /// Lower bound of `psi` on `(p_from, inf)`, for the tail certificate of
    /// the Grand norm: numeric minimum over a coarse logarithmic grid plus
    /// the known limit.
    pub fn inf_beyond(&self, p_from: f64) -> f64 {
        let mut inf = self.limit_at_infinity().unwrap_or(f64::INFINITY);
        let hi = (p_from * 100.0).min(1e6);
        let n = 64;
        for i in 0..=n {
            let p = p_from * (hi / p_from).powf(i as f64 / n as f64);
            if self.contains(p) {
                if let Ok(v) = self.eval(p) {
                    inf = inf.min(v);
                }
            }
        }
        inf
    }

    /// Canonical label used by reports and the CLI mini-language.
    pub fn label(&self) -> String {
        match &self.family {
            PsiFamily::PowerM(m) => format!("power-m:{m}"),
            PsiFamily::CriticalBeta { b, beta } => format!("critical:{b}:{beta}"),
            PsiFamily::Extremal(r) => format!("extremal:{r}"),
            PsiFamily::GaussianSigma(s) => format!("gaussian:{s}"),
            PsiFamily::CounterexampleTilde => "tilde".into(),
            PsiFamily::NaturalOf(f) => format!("natural:{}", f.label()),
            PsiFamily::Table { ps, .. } => format!("table[{}]", ps.len()),
        }
    }

    /// Parse the colon-separated mini-language: `power-m:M`,
    /// `critical:B:BETA`, `extremal:R`, `gaussian:SIGMA`, `tilde`,
    /// `natural:FAMILY`.
    pub fn parse(s: &str) -> Result<PsiSpec> {
        let bad = |why: String| Error::invalid("psi", why);
        let num = |t: &str| -> Result<f64> {
            t.parse::<f64>()
                .map_err(|_| bad(format!("`{t}` is not a number in `{s}`")))
        };
        if s == "tilde" {
            return Ok(PsiSpec::counterexample_tilde());
        }
        if let Some(rest) = s.strip_prefix("natural:") {
            let f = crate::function::FamilySpec::parse(rest)?.build()?;
            return PsiSpec::natural_of(f, f64::INFINITY);
        }
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["power-m", m] => PsiSpec::power_m(num(m)?),
            ["critical", b, beta] => PsiSpec::critical_beta(num(b)?, num(beta)?),
            ["extremal", r] => PsiSpec::extremal(num(r)?),
            ["gaussian", sigma] => PsiSpec::gaussian_sigma(num(sigma)?),
            _ => Err(bad(format!(
                "unknown generating function `{s}`; expected power-m:M | critical:B:BETA | extremal:R | gaussian:S | tilde | natural:FAMILY"
            ))),
        }
    }
}

/// Evaluate `psi(p)`; the free-function spelling of [`PsiSpec::eval`].
pub fn psi_eval(spec: &PsiSpec, p: f64) -> Result<f64> {
    spec.eval(p)
}

/// Classification of a generating function by its value at `p = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsiClass {
    /// psi(1) = 1: the Banach-algebra theorem hypothesis.
    Normalized,
    /// psi(1) finite, positive, but not 1.
    PositiveUnnormalized,
    /// psi(1) = 0: the space collapses to {0}.
    Degenerate,
    /// psi(1) = +inf (e.g. the counterexample family).
    InfiniteAtOne,
}

/// Classify a spec by `psi(1)`. Verification of the Banach-algebra bound is
/// enabled only for `Normalized`.
pub fn degenerate_psi_check(spec: &PsiSpec) -> PsiClass {
    let v = spec.eval(1.0).unwrap_or(f64::INFINITY);
    if v == 0.0 {
        PsiClass::Degenerate
    } else if v.is_infinite() {
        PsiClass::InfiniteAtOne
    } else if (v - 1.0).abs() <= 1e-9 {
        PsiClass::Normalized
    } else {
        PsiClass::PositiveUnnormalized
    }
}
