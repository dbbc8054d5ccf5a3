//! The degenerate-generating-function campaign: with
//! `psi~(p) = (3/(2p-3))^{1/p}` (infinite on [1, 3/2]) the space built on
//! `f(x) = x^{-2/3} I(x >= 1)` has `||f|| = 1` but `||f * f|| = +inf`, so the
//! space is not a Banach algebra. Divergence is exhibited as growth of the
//! truncated-convolution norms `|h_X|_p` in the truncation cap X for
//! `p <= 3`, against stabilization for `p > 3`.

use std::sync::Arc;

use rayon::prelude::*;

use super::{difference_report, VerificationReport};
use crate::convolution::{counterexample_h, counterexample_truncated_lp_pow};
use crate::error::{Error, Result};
use crate::function::{make_power_tail, AnalyticFunction, FunctionRep, Support};
use crate::norms::{grand_norm, lp_norm_via_quadrature};
use crate::psi::PsiSpec;
use crate::special::beta_function;

/// Campaign knobs: truncation ladder, exponent list, quadrature tolerance.
#[derive(Debug, Clone)]
pub struct CounterexampleConfig {
    /// Increasing truncation caps (at least 3).
    pub x_list: Vec<f64>,
    /// Exponents; must include values in (3/2, 3] and values above 3.
    pub p_list: Vec<f64>,
    pub rel_tol: f64,
}

impl Default for CounterexampleConfig {
    fn default() -> Self {
        CounterexampleConfig {
            x_list: vec![1e2, 1e3, 1e4, 1e5],
            p_list: vec![2.0, 3.0, 6.0],
            rel_tol: 1e-7,
        }
    }
}

impl CounterexampleConfig {
    fn validate(&self) -> Result<()> {
        if self.x_list.len() < 3 || self.x_list.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid(
                "x_list",
                "need at least three strictly increasing truncation caps",
            ));
        }
        if !self.p_list.iter().any(|&p| p > 1.5 && p <= 3.0)
            || !self.p_list.iter().any(|&p| p > 3.0)
        {
            return Err(Error::invalid(
                "p_list",
                "need exponents in (3/2, 3] and above 3 to exhibit both regimes",
            ));
        }
        Ok(())
    }
}

/// The convolution `h = f * f` as an analytic representation:
/// `h(x) <= B(1/3,1/3) x^{-1/3}` globally (the substituted kernel integral
/// is a strict sub-interval of the full Beta integral), so the power-decay
/// metadata makes the `p <= 3` divergence detectable without quadrature.
pub fn counterexample_convolution_rep(rel_tol: f64) -> FunctionRep {
    let amplitude = beta_function(1.0 / 3.0, 1.0 / 3.0).expect("valid beta arguments");
    let eval = Arc::new(move |x: f64| counterexample_h(x, rel_tol).unwrap_or(f64::NAN));
    FunctionRep::Analytic(AnalyticFunction::new(
        eval,
        Support::PowerDecay {
            amplitude,
            exponent: 1.0 / 3.0,
            onset: 2.0,
        },
        "power-tail-self-convolution".to_string(),
    ))
}

fn tail_slope(logs: &[(f64, f64)]) -> f64 {
    let k = logs.len();
    (logs[k - 1].1 - logs[k - 2].1) / (logs[k - 1].0 - logs[k - 2].0)
}

fn ls_slope(logs: &[(f64, f64)]) -> f64 {
    let n = logs.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in logs {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Run the campaign. Expected failures (divergence) report `pass = true`
/// under the `expected-divergence` tag when the predicted failure is
/// confirmed; a quadrature failure in one (X, p) cell fails that cell and
/// the campaign continues.
pub fn counterexample_campaign(cfg: &CounterexampleConfig) -> Result<Vec<VerificationReport>> {
    cfg.validate()?;
    let mut out = Vec::new();
    let f = make_power_tail(1.5)?;
    let tilde = PsiSpec::counterexample_tilde();

    // (c) the natural-function normalization ||f||_{G psi~} = 1
    let nat = grand_norm(&f, &tilde, 1e-7)?;
    let mut rep = difference_report(
        "counterexample/00-natural-norm",
        "natural-norm",
        nat.value,
        1.0,
        1e-6,
    )
    .provenance_entry("indeterminate_nodes", format!("{}", nat.indeterminate_nodes))
    .provenance_entry("p_star", format!("{}", nat.p_star));
    rep.pass &= nat.converged;
    out.push(rep);

    // closed-form checks |f|_p = (3/(2p-3))^{1/p} at p in {2, 3, 6}
    for (i, p) in [2.0, 3.0, 6.0].into_iter().enumerate() {
        let quad = lp_norm_via_quadrature(&f, p)?;
        let closed = (3.0 / (2.0 * p - 3.0)).powf(1.0 / p);
        let rep = difference_report(
            format!("counterexample/01-lp-closed-form/{i}"),
            "lp-closed-form",
            quad,
            closed,
            1e-6 * closed,
        )
        .provenance_entry("p", format!("{p}"));
        out.push(rep);
    }

    // (b) tail constant: h(x) x^{1/3} -> B(1/3, 1/3), checked at x = 1e6
    let b = beta_function(1.0 / 3.0, 1.0 / 3.0)?;
    let x_ref = 1e6;
    let scaled = counterexample_h(x_ref, cfg.rel_tol)? * x_ref.powf(1.0 / 3.0);
    let rep = difference_report(
        "counterexample/02-tail-constant",
        "tail-constant",
        scaled,
        b,
        0.01 * b,
    )
    .provenance_entry("x", format!("{x_ref}"))
    .provenance_entry("relative_deviation", format!("{:e}", (scaled - b).abs() / b));
    out.push(rep);

    // the |h_X|_p^p ladder over the truncation caps
    let cells: Vec<(usize, usize)> = (0..cfg.p_list.len())
        .flat_map(|i| (0..cfg.x_list.len()).map(move |j| (i, j)))
        .collect();
    let ladder: Vec<((usize, usize), Result<f64>)> = cells
        .par_iter()
        .map(|&(i, j)| {
            (
                (i, j),
                counterexample_truncated_lp_pow(cfg.x_list[j], cfg.p_list[i], cfg.rel_tol),
            )
        })
        .collect();

    for (i, &p) in cfg.p_list.iter().enumerate() {
        let mut logs = Vec::new();
        let mut cell_error = None;
        for (j, &cap) in cfg.x_list.iter().enumerate() {
            match &ladder.iter().find(|(c, _)| *c == (i, j)).unwrap().1 {
                Ok(v) => logs.push((cap.ln(), v.ln())),
                Err(e) => cell_error = Some(format!("cap {cap}: {e}")),
            }
        }
        if let Some(err) = cell_error {
            let mut rep = difference_report(
                format!("counterexample/03-ladder/p={p}"),
                "quadrature-failure",
                f64::NAN,
                0.0,
                0.0,
            )
            .provenance_entry("error", err);
            rep.pass = false;
            out.push(rep);
            continue;
        }
        let norms: Vec<f64> = logs.iter().map(|&(_, y)| (y / p).exp()).collect();
        let k = norms.len();
        let rel_change = (norms[k - 1] - norms[k - 2]).abs() / norms[k - 2];
        let tail = tail_slope(&logs);
        let ls = ls_slope(&logs);

        if p < 3.0 {
            // (a) divergence slope of log |h_X|_p^p approaches 1 - p/3;
            // measured at the top of the ladder, where the transient from
            // the finite-x corrections has decayed
            let mut rep = difference_report(
                format!("counterexample/03-divergence-slope/p={p}"),
                "expected-divergence",
                tail,
                1.0 - p / 3.0,
                0.1,
            );
            rep = rep
                .provenance_entry("ls_slope_all_rungs", format!("{ls}"))
                .provenance_entry("ladder_lp_pow", format!("{:?}", logs.iter().map(|l| l.1.exp()).collect::<Vec<_>>()))
                .provenance_entry("rel_change_last_two", format!("{rel_change:e}"));
            out.push(rep);
        } else if p == 3.0 {
            // boundary: |h|_3 = inf with logarithmic growth; confirmed by
            // non-stabilizing norms
            let mut rep = difference_report(
                format!("counterexample/03-divergence-growth/p={p}"),
                "expected-divergence",
                rel_change,
                1e-3,
                0.0,
            );
            rep.pass = rel_change > 1e-3;
            rep.ratio = rel_change / 1e-3;
            rep = rep
                .provenance_entry("tail_slope", format!("{tail}"))
                .provenance_entry("note", "pass iff the norm keeps growing (rel change above the stabilization gate)");
            out.push(rep);
        } else {
            // (b of the op contract) stabilization for p > 3
            let mut rep = difference_report(
                format!("counterexample/03-stabilization/p={p}"),
                "stabilization",
                tail / p, // slope of log |h_X|_p itself
                0.0,
                0.01,
            );
            rep = rep
                .provenance_entry("rel_change_last_two", format!("{rel_change:e}"))
                .provenance_entry("limit_norm_estimate", format!("{}", norms[k - 1]));
            out.push(rep);
        }
    }

    // (d) the final declaration: ||f * f|| = +inf while ||f|| = 1
    let h_rep = counterexample_convolution_rep(cfg.rel_tol);
    let grand_h = grand_norm(&h_rep, &tilde, 1e-6)?;
    let psi2 = tilde.eval(2.0)?;
    let growth: Vec<String> = cfg
        .x_list
        .iter()
        .enumerate()
        .filter_map(|(j, _)| {
            let i2 = cfg.p_list.iter().position(|&p| p == 2.0)?;
            match &ladder.iter().find(|(c, _)| *c == (i2, j)).unwrap().1 {
                Ok(v) => Some(format!("{:.6e}", v.sqrt() / psi2)),
                Err(_) => None,
            }
        })
        .collect();
    let mut rep = difference_report(
        "counterexample/04-banach-failure",
        "expected-divergence",
        grand_h.value,
        1.0,
        0.0,
    );
    rep.pass = grand_h.value.is_infinite() && (nat.value - 1.0).abs() <= 1e-6;
    rep.ratio = f64::INFINITY;
    rep = rep
        .provenance_entry("norm_product", format!("{}", nat.value * nat.value))
        .provenance_entry("ratio_ladder_|h_X|_2_over_psi(2)", growth.join(","))
        .provenance_entry(
            "note",
            "pass iff ||f*f|| is infinite while ||f||^2 = 1: the space is not a Banach algebra",
        );
    out.push(rep);

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        let mut cfg = CounterexampleConfig::default();
        cfg.x_list = vec![1e2, 1e3];
        assert!(counterexample_campaign(&cfg).is_err());
        let mut cfg = CounterexampleConfig::default();
        cfg.p_list = vec![2.0];
        assert!(counterexample_campaign(&cfg).is_err());
    }

    #[test]
    fn convolution_rep_diverges_in_the_tilde_space() {
        let h = counterexample_convolution_rep(1e-7);
        let tilde = PsiSpec::counterexample_tilde();
        let r = grand_norm(&h, &tilde, 1e-6).unwrap();
        assert_eq!(r.value, f64::INFINITY);
        assert!(!r.converged);
    }

    // the full campaign is exercised by the acceptance suite; here only the
    // cheap structural pieces run
    #[test]
    fn small_ladder_campaign() {
        let cfg = CounterexampleConfig {
            x_list: vec![50.0, 200.0, 800.0],
            p_list: vec![2.0, 3.0, 6.0],
            rel_tol: 1e-6,
        };
        let reports = counterexample_campaign(&cfg).unwrap();
        let nat = reports.iter().find(|r| r.tag == "natural-norm").unwrap();
        assert!(nat.pass, "natural norm {}", nat.lhs);
        let decl = reports
            .iter()
            .find(|r| r.id.contains("banach-failure"))
            .unwrap();
        assert!(decl.pass);
        assert!(decl.lhs.is_infinite());
    }
}
