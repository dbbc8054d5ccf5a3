//! Convolution engines: the O(n^2) direct grid oracle, the spectral path
//! with zero padding, exact circular convolution on Z_n, and the dedicated
//! singular convolution of the power-tail counterexample.
//!
//! Real-line convolution is linear (zero-padded), never circular: the group
//! is the line and wrap-around would corrupt tails. Truncation risk is
//! detected (mass outside half the window), not silently tolerated.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::domain::GroupDomain;
use crate::error::{Error, Result};
use crate::function::{FunctionRep, SampledFunction};
use crate::quadrature::{integrate, Quadrature, QuadratureRequest};

/// How a convolution is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvMethod {
    /// Step-weighted discrete convolution, the O(n^2) oracle.
    DirectGrid,
    /// FFT with zero padding to at least 2n; must agree with the oracle to
    /// near machine precision.
    Spectral,
    /// Exact circular convolution on Z_n with normalized counting measure.
    CircularExact,
    /// The substituted singular quadrature of the power-tail convolution.
    SingularAnalytic,
}

/// Plan for a convolution evaluation; the output lives on the input domain.
#[derive(Debug, Clone, Copy)]
pub struct ConvolutionPlan {
    pub method: ConvMethod,
    /// Per-point agreement tolerance between the spectral and direct paths,
    /// relative to `|f|_1 |g|_1`.
    pub tolerance: f64,
    /// Largest tolerated fraction of |f| mass outside [-L/2, L/2].
    pub aliasing_tol: f64,
}

impl Default for ConvolutionPlan {
    fn default() -> Self {
        ConvolutionPlan {
            method: ConvMethod::Spectral,
            tolerance: 1e-10,
            aliasing_tol: 1e-6,
        }
    }
}

impl ConvolutionPlan {
    pub fn direct() -> Self {
        ConvolutionPlan {
            method: ConvMethod::DirectGrid,
            ..ConvolutionPlan::default()
        }
    }
}

fn check_aliasing(s: &SampledFunction, tol: f64, who: &str) -> Result<()> {
    let GroupDomain::RealLine { half_width, .. } = s.domain() else {
        return Ok(());
    };
    let mut total = 0.0;
    let mut outside = 0.0;
    for (x, v) in s.domain().points().zip(s.values()) {
        let a = v.abs();
        total += a;
        if x.abs() > half_width / 2.0 {
            outside += a;
        }
    }
    if total > 0.0 && outside / total > tol {
        return Err(Error::Aliasing(format!(
            "{who}: fraction {:.3e} of |f| mass lies outside [-L/2, L/2]; widen the domain",
            outside / total
        )));
    }
    Ok(())
}

/// Linear (zero-padded) convolution of two samplings of the same real-line
/// grid: `h[k] = h_step * sum_j f[j] g[k-j]`, restricted back to the grid.
pub fn convolve_grid(
    f: &SampledFunction,
    g: &SampledFunction,
    plan: &ConvolutionPlan,
) -> Result<SampledFunction> {
    let domain = f.domain();
    if domain != g.domain() {
        return Err(Error::DomainMismatch(
            "convolution inputs must share one grid".into(),
        ));
    }
    let GroupDomain::RealLine { n, .. } = domain else {
        return Err(Error::DomainMismatch(
            "convolve_grid expects a real-line domain; use convolve_cyclic on Z_n".into(),
        ));
    };
    check_aliasing(f, plan.aliasing_tol, "f")?;
    check_aliasing(g, plan.aliasing_tol, "g")?;
    let step = domain.grid_step();
    let values = match plan.method {
        ConvMethod::DirectGrid => direct_linear(f.values(), g.values(), n, step),
        ConvMethod::Spectral => spectral_linear(f.values(), g.values(), n, step),
        ConvMethod::CircularExact | ConvMethod::SingularAnalytic => {
            return Err(Error::Representation(format!(
                "{:?} does not apply to real-line grids",
                plan.method
            )))
        }
    };
    SampledFunction::new(domain, values)
}

// Output sample k corresponds to full-convolution index k + n/2:
// x_j + x_m = -2L + (j + m) h = x_k exactly when j + m = k + n/2.
fn direct_linear(f: &[f64], g: &[f64], n: usize, step: f64) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (k, o) in out.iter_mut().enumerate() {
        let m = k + n / 2;
        let j_lo = m.saturating_sub(n - 1);
        let j_hi = m.min(n - 1);
        let mut acc = 0.0;
        for j in j_lo..=j_hi {
            acc += f[j] * g[m - j];
        }
        *o = acc * step;
    }
    out
}

fn spectral_linear(f: &[f64], g: &[f64], n: usize, step: f64) -> Vec<f64> {
    let m = (2 * n).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(m);
    let ifft = planner.plan_fft_inverse(m);

    let mut fa: Vec<Complex<f64>> = f
        .iter()
        .map(|&v| Complex::new(v, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(m)
        .collect();
    let mut gb: Vec<Complex<f64>> = g
        .iter()
        .map(|&v| Complex::new(v, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(m)
        .collect();
    fft.process(&mut fa);
    fft.process(&mut gb);
    for (a, b) in fa.iter_mut().zip(&gb) {
        *a *= b;
    }
    ifft.process(&mut fa);
    let scale = step / m as f64;
    (0..n).map(|k| fa[k + n / 2].re * scale).collect()
}

/// Circular convolution on Z_n with normalized counting measure:
/// `h[k] = (1/n) sum_j f[j] g[(k-j) mod n]`.
pub fn convolve_cyclic(f: &[f64], g: &[f64]) -> Result<Vec<f64>> {
    if f.len() != g.len() || f.is_empty() {
        return Err(Error::DomainMismatch(format!(
            "cyclic convolution needs equal nonempty lengths, got {} and {}",
            f.len(),
            g.len()
        )));
    }
    let n = f.len();
    let inv_n = 1.0 / n as f64;
    let mut out = vec![0.0; n];
    for (k, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (j, fj) in f.iter().enumerate() {
            let idx = (k + n - j % n) % n;
            acc += fj * g[idx];
        }
        *o = acc * inv_n;
    }
    Ok(out)
}

/// Convolve two function representations sharing a domain.
pub fn convolve(f: &FunctionRep, g: &FunctionRep, plan: &ConvolutionPlan) -> Result<FunctionRep> {
    let (fs, gs) = match (f, g) {
        (FunctionRep::Sampled(a), FunctionRep::Sampled(b)) => (a, b),
        _ => {
            return Err(Error::Representation(
                "convolve expects sampled inputs; sample analytic functions first".into(),
            ))
        }
    };
    match fs.domain() {
        GroupDomain::RealLine { .. } => Ok(FunctionRep::Sampled(convolve_grid(fs, gs, plan)?)),
        GroupDomain::Cyclic { .. } => {
            if fs.domain() != gs.domain() {
                return Err(Error::DomainMismatch(
                    "convolution inputs must share one domain".into(),
                ));
            }
            let values = convolve_cyclic(fs.values(), gs.values())?;
            Ok(FunctionRep::Sampled(SampledFunction::new(fs.domain(), values)?))
        }
    }
}

/// The inner substituted integral `J(a, b) = int_a^b z^{-2/3} (1-z)^{-2/3} dz`
/// of the power-tail self-convolution.
fn tail_kernel_integral(a: f64, b: f64, rel_tol: f64, upper_singular: bool) -> Result<Quadrature> {
    let f = |z: f64| z.powf(-2.0 / 3.0) * (1.0 - z).powf(-2.0 / 3.0);
    let mut req = QuadratureRequest::new(&f, a, b)
        .rel_tol(rel_tol)
        .lower_singularity(2.0 / 3.0);
    if upper_singular {
        req = req.upper_singularity(2.0 / 3.0);
    }
    integrate(&req)
}

/// Self-convolution `h(x) = (f_{3/2} * f_{3/2})(x)`, evaluated through the
/// substitution `z = y/x`, which pins both endpoint singularities at 0 and 1:
/// `h(x) = x^{-1/3} int_{1/x}^{1-1/x} z^{-2/3} (1-z)^{-2/3} dz`. Supports give
/// `h(x) = 0` for `x < 2`.
pub fn counterexample_h(x: f64, rel_tol: f64) -> Result<f64> {
    if x < 2.0 {
        return Ok(0.0);
    }
    let q = tail_kernel_integral(1.0 / x, 1.0 - 1.0 / x, rel_tol, true)?;
    if !q.converged {
        return Err(Error::NonIntegrable(format!(
            "tail convolution quadrature did not converge at x = {x} (estimate {:.3e})",
            q.error
        )));
    }
    Ok(x.powf(-1.0 / 3.0) * q.value)
}

/// Truncated variant: the convolution integral `int_1^{min(x-1, cap)}`,
/// i.e. `(f_{3/2} I[1, cap]) * f_{3/2}`. The `L_p` norms of `h` diverge for
/// `p <= 3`, which is exhibited as growth of `|h_cap|_p` in the cap.
pub fn counterexample_h_truncated(x: f64, cap: f64, rel_tol: f64) -> Result<f64> {
    if x < 2.0 || cap <= 1.0 {
        return Ok(0.0);
    }
    let up = (x - 1.0).min(cap);
    if up <= 1.0 {
        return Ok(0.0);
    }
    let hits_upper_singularity = up == x - 1.0;
    let q = tail_kernel_integral(1.0 / x, up / x, rel_tol, hits_upper_singularity)?;
    if !q.converged {
        return Err(Error::NonIntegrable(format!(
            "truncated tail convolution quadrature did not converge at x = {x}, cap = {cap}"
        )));
    }
    Ok(x.powf(-1.0 / 3.0) * q.value)
}

/// `|h_cap|_p^p = int_2^inf h_cap(x)^p dx` by nested quadrature, split at
/// the kink `x = cap + 1` where the truncation starts to bite; beyond it the
/// integrand decays like `x^{-2p/3}` (finite exactly when `p > 3/2`).
pub fn counterexample_truncated_lp_pow(cap: f64, p: f64, rel_tol: f64) -> Result<f64> {
    if !(p > 1.5) {
        return Err(Error::InvalidExponents(format!(
            "|h_cap|_p is finite only for p > 3/2, got p = {p}"
        )));
    }
    if !(cap > 1.0) || !cap.is_finite() {
        return Err(Error::invalid("cap", "truncation cap must exceed 1"));
    }
    let inner_tol = (rel_tol * 1e-2).max(2e-14);
    let f = |x: f64| {
        counterexample_h_truncated(x, cap, inner_tol)
            .map(|h| h.powf(p))
            .unwrap_or(f64::NAN)
    };
    let head = integrate(&QuadratureRequest::new(&f, 2.0, cap + 1.0).rel_tol(rel_tol))?;
    let tail = integrate(
        &QuadratureRequest::new(&f, cap + 1.0, f64::INFINITY)
            .rel_tol(rel_tol)
            .tail_decay(2.0 * p / 3.0),
    )?;
    if !head.converged || !tail.converged {
        return Err(Error::NonIntegrable(format!(
            "norm quadrature for |h_cap|_p did not converge (cap = {cap}, p = {p})"
        )));
    }
    Ok(head.value + tail.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{make_gaussian, make_indicator, sample};
    use crate::special::beta_function;

    fn sample_default(f: &FunctionRep) -> SampledFunction {
        sample(f, GroupDomain::default_real_line()).unwrap()
    }

    #[test]
    fn gaussian_self_convolution_is_wider_gaussian() {
        let z1 = make_gaussian(1.0).unwrap();
        let zr2 = make_gaussian(2.0_f64.sqrt()).unwrap();
        let (a, b) = (sample_default(&z1), sample_default(&zr2));
        for plan in [ConvolutionPlan::default(), ConvolutionPlan::direct()] {
            let h = convolve_grid(&a, &a, &plan).unwrap();
            let worst = h
                .values()
                .iter()
                .zip(b.values())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0f64, f64::max);
            assert!(worst < 1e-6, "max pointwise error {worst:e} ({:?})", plan.method);
        }
    }

    #[test]
    fn gaussian_semigroup() {
        // sigma = 2 needs a wider window than the default to clear the
        // aliasing gate (its mass outside L/2 = 8 is ~6e-5)
        let d = GroupDomain::real_line(32.0, 8192).unwrap();
        let z1 = make_gaussian(1.0).unwrap();
        let z2 = make_gaussian(2.0).unwrap();
        let expect = sample(&make_gaussian(5.0_f64.sqrt()).unwrap(), d).unwrap();
        let h = convolve_grid(
            &sample(&z1, d).unwrap(),
            &sample(&z2, d).unwrap(),
            &ConvolutionPlan::default(),
        )
        .unwrap();
        let worst = h
            .values()
            .iter()
            .zip(expect.values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0f64, f64::max);
        assert!(worst < 1e-6, "max pointwise error {worst:e}");
    }

    #[test]
    fn spectral_matches_direct_oracle() {
        let f = sample_default(&make_gaussian(0.8).unwrap());
        let g = sample_default(&make_indicator(-1.0, 2.0).unwrap());
        let direct = convolve_grid(&f, &g, &ConvolutionPlan::direct()).unwrap();
        let spectral = convolve_grid(&f, &g, &ConvolutionPlan::default()).unwrap();
        let scale = {
            use crate::norms::lp_norm;
            lp_norm(&FunctionRep::Sampled(f.clone()), 1.0).unwrap()
                * lp_norm(&FunctionRep::Sampled(g.clone()), 1.0).unwrap()
        };
        for (a, b) in direct.values().iter().zip(spectral.values()) {
            assert!((a - b).abs() <= 1e-10 * scale, "{a} vs {b}");
        }
    }

    #[test]
    fn indicator_self_convolution_is_triangle_hat() {
        let f = sample_default(&make_indicator(0.0, 1.0).unwrap());
        let h = convolve_grid(&f, &f, &ConvolutionPlan::direct()).unwrap();
        let d = GroupDomain::default_real_line();
        // closed form: hat on [0, 2] peaking at 1
        for (i, x) in d.points().enumerate() {
            let expect = if (0.0..=1.0).contains(&x) {
                x
            } else if (1.0..=2.0).contains(&x) {
                2.0 - x
            } else {
                0.0
            };
            assert!(
                (h.values()[i] - expect).abs() < 1e-2 + 1e-9,
                "x = {x}: {} vs {expect}",
                h.values()[i]
            );
        }
        let mass = crate::norms::lp_norm(&FunctionRep::Sampled(h), 1.0).unwrap();
        assert!((mass - 1.0).abs() < 1e-12, "|hat|_1 = {mass}");
    }

    #[test]
    fn convolution_commutes() {
        let f = sample_default(&make_gaussian(1.3).unwrap());
        let g = sample_default(&make_indicator(-0.5, 0.75).unwrap());
        let fg = convolve_grid(&f, &g, &ConvolutionPlan::direct()).unwrap();
        let gf = convolve_grid(&g, &f, &ConvolutionPlan::direct()).unwrap();
        for (a, b) in fg.values().iter().zip(gf.values()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn young_l1_case_with_equality_for_nonnegative() {
        let f = sample_default(&make_gaussian(1.0).unwrap());
        let g = sample_default(&make_indicator(0.0, 1.0).unwrap());
        let h = convolve_grid(&f, &g, &ConvolutionPlan::default()).unwrap();
        use crate::norms::lp_norm;
        let lhs = lp_norm(&FunctionRep::Sampled(h), 1.0).unwrap();
        let rhs = lp_norm(&FunctionRep::Sampled(f), 1.0).unwrap()
            * lp_norm(&FunctionRep::Sampled(g), 1.0).unwrap();
        assert!(lhs <= rhs * (1.0 + 1e-8));
        assert!((lhs / rhs - 1.0).abs() < 1e-8, "Fubini equality broke: {lhs} vs {rhs}");
    }

    #[test]
    fn aliasing_is_detected() {
        let d = GroupDomain::default_real_line();
        let wide = make_indicator(-14.0, 14.0).unwrap();
        let s = sample(&wide, d).unwrap();
        let err = convolve_grid(&s, &s, &ConvolutionPlan::default());
        assert!(matches!(err, Err(Error::Aliasing(_))));
    }

    #[test]
    fn domain_mismatch_rejected() {
        let a = sample(
            &make_gaussian(1.0).unwrap(),
            GroupDomain::real_line(16.0, 4096).unwrap(),
        )
        .unwrap();
        let b = sample(
            &make_gaussian(1.0).unwrap(),
            GroupDomain::real_line(16.0, 2048).unwrap(),
        )
        .unwrap();
        assert!(convolve_grid(&a, &b, &ConvolutionPlan::default()).is_err());
    }

    #[test]
    fn cyclic_hand_checked_and_identities() {
        // n = 2: ((1*3 + 2*4)/2, (1*4 + 2*3)/2)
        let h = convolve_cyclic(&[1.0, 2.0], &[3.0, 4.0]).unwrap();
        assert_eq!(h, vec![5.5, 5.0]);

        // constants convolve to constants under mu(G) = 1
        let ones = vec![1.0; 4];
        assert_eq!(convolve_cyclic(&ones, &ones).unwrap(), ones);

        // n * e_0 is the identity element
        let g = vec![0.25, -1.0, 2.0, 0.5, 0.0];
        let mut e = vec![0.0; 5];
        e[0] = 5.0;
        let out = convolve_cyclic(&e, &g).unwrap();
        for (a, b) in out.iter().zip(&g) {
            assert!((a - b).abs() < 1e-15);
        }

        assert!(convolve_cyclic(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn counterexample_h_values() {
        // below the support threshold
        assert_eq!(counterexample_h(1.5, 1e-7).unwrap(), 0.0);
        // h(3) = 3^{-1/3} * int_{1/3}^{2/3} z^{-2/3}(1-z)^{-2/3} dz,
        // frozen from a high-precision evaluation of the kernel integral
        let h3 = counterexample_h(3.0, 1e-9).unwrap();
        assert!((h3 - 0.59762702577932553193).abs() < 1e-8, "h(3) = {h3}");
    }

    #[test]
    fn counterexample_tail_constant() {
        // h(x) x^{1/3} -> B(1/3, 1/3); at x = 1e6 the deficit is still
        // 6 x^{-1/3} (1 + o(1)), i.e. about 1.13e-2 of the limit
        let b = beta_function(1.0 / 3.0, 1.0 / 3.0).unwrap();
        let v = counterexample_h(1e6, 1e-9).unwrap() * 1e2;
        assert!((v - 5.23991624086).abs() < 1e-6, "got {v}");
        let dev = (v - b).abs() / b;
        assert!((dev - 1.132e-2).abs() < 1e-4, "relative deviation {dev:e}");
    }

    #[test]
    fn truncated_variant_caps_the_integral() {
        // for x <= cap + 1 the truncation is inactive
        let full = counterexample_h(10.0, 1e-9).unwrap();
        let same = counterexample_h_truncated(10.0, 100.0, 1e-9).unwrap();
        assert!((full - same).abs() < 1e-12);
        // beyond it the truncated integral is strictly smaller
        let t = counterexample_h_truncated(1e4, 100.0, 1e-9).unwrap();
        let f = counterexample_h(1e4, 1e-9).unwrap();
        assert!(t < f);
    }

    #[test]
    fn truncated_lp_matches_independent_evaluation() {
        // |h_100|_2^2, frozen from an independent nested-quadrature oracle
        let v = counterexample_truncated_lp_pow(100.0, 2.0, 1e-7).unwrap();
        assert!((v - 189.278).abs() / 189.278 < 1e-3, "got {v}");
        assert!(counterexample_truncated_lp_pow(100.0, 1.4, 1e-7).is_err());
    }
}
