//! Adaptive integration for smooth, decaying and endpoint-singular integrands.
//!
//! The engine is Gauss-Kronrod 7/15 with bisection of the worst interval.
//! Requests declare what they know about the integrand:
//!
//! * integrable endpoint singularities `|f| ~ C (x-a)^{-gamma}` with
//!   `gamma < 1` are removed by the power substitution
//!   `u = (x-a)^{1-gamma}` before any refinement;
//! * semi-infinite intervals are mapped to finite ones, by the algebraic
//!   substitution `x = a + t/(1-t)` by default, or by the exponential
//!   substitution `x = x0 e^w` when a power-law tail exponent is declared
//!   (the algebraic map turns a tail `x^{-s}` into an endpoint singularity
//!   of exponent `2-s`, which is numerically hopeless for `s` close to 1,
//!   while the exponential map gives a plain decaying exponential).
//!
//! A non-finite integrand sample at an interior node is a hard error; an
//! exhausted subdivision budget returns the best estimate with
//! `converged = false`.

use crate::error::{Error, Result};

const XGK15: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WG7: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];
const WGK15: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Default relative tolerance for smooth integrands.
pub const DEFAULT_REL_TOL_SMOOTH: f64 = 1e-9;
/// Default relative tolerance for integrands with declared singularities.
pub const DEFAULT_REL_TOL_SINGULAR: f64 = 1e-7;
/// Default subdivision budget.
pub const DEFAULT_MAX_SUBDIVISIONS: usize = 10_000;

/// An integration request. `upper` may be `f64::INFINITY`.
pub struct QuadratureRequest<'a> {
    integrand: &'a (dyn Fn(f64) -> f64 + 'a),
    lower: f64,
    upper: f64,
    rel_tol: f64,
    abs_tol: f64,
    lower_singularity: Option<f64>,
    upper_singularity: Option<f64>,
    tail_decay: Option<f64>,
    max_subdivisions: usize,
    initial_splits: usize,
}

impl<'a> QuadratureRequest<'a> {
    /// A request with smooth-integrand defaults.
    pub fn new(integrand: &'a (dyn Fn(f64) -> f64 + 'a), lower: f64, upper: f64) -> Self {
        QuadratureRequest {
            integrand,
            lower,
            upper,
            rel_tol: DEFAULT_REL_TOL_SMOOTH,
            abs_tol: 1e-300,
            lower_singularity: None,
            upper_singularity: None,
            tail_decay: None,
            max_subdivisions: DEFAULT_MAX_SUBDIVISIONS,
            initial_splits: 16,
        }
    }

    pub fn rel_tol(mut self, tol: f64) -> Self {
        self.rel_tol = tol;
        self
    }

    pub fn abs_tol(mut self, tol: f64) -> Self {
        self.abs_tol = tol;
        self
    }

    /// Declare `|f| ~ C (x - lower)^{-gamma}` near the lower endpoint.
    /// Switches the default tolerance to the singular one unless overridden.
    pub fn lower_singularity(mut self, gamma: f64) -> Self {
        self.lower_singularity = Some(gamma);
        self
    }

    /// Declare `|f| ~ C (upper - x)^{-gamma}` near the upper endpoint.
    pub fn upper_singularity(mut self, gamma: f64) -> Self {
        self.upper_singularity = Some(gamma);
        self
    }

    /// Declare `|f(x)| ~ C x^{-s}` as `x -> +inf` (requires `s > 1`).
    pub fn tail_decay(mut self, s: f64) -> Self {
        self.tail_decay = Some(s);
        self
    }

    pub fn max_subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n;
        self
    }

    /// Number of equal pieces the (transformed) interval is cut into before
    /// adaptive refinement starts. Raise for integrands with narrow features
    /// far from the interval center.
    pub fn initial_splits(mut self, n: usize) -> Self {
        self.initial_splits = n.max(1);
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 1e-14 && self.rel_tol <= 1e-2) {
            return Err(Error::invalid(
                "rel_tol",
                format!("must lie in (1e-14, 1e-2], got {}", self.rel_tol),
            ));
        }
        if !self.lower.is_finite() {
            return Err(Error::invalid("lower", "must be finite"));
        }
        if self.upper < self.lower {
            return Err(Error::invalid("upper", "must be >= lower"));
        }
        for (name, g) in [
            ("lower_singularity", self.lower_singularity),
            ("upper_singularity", self.upper_singularity),
        ] {
            if let Some(g) = g {
                if !(0.0..1.0).contains(&g) {
                    return Err(Error::invalid(
                        name,
                        format!("exponent must lie in [0, 1), got {g}"),
                    ));
                }
            }
        }
        if let Some(s) = self.tail_decay {
            if !(s > 1.0) {
                return Err(Error::invalid(
                    "tail_decay",
                    format!("tail exponent must exceed 1 for integrability, got {s}"),
                ));
            }
        }
        Ok(())
    }
}

/// Integration result with its final error estimate.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
    /// False when the subdivision budget ran out before the tolerance was met.
    pub converged: bool,
}

type Segment<'a> = (Box<dyn Fn(f64) -> f64 + 'a>, f64, f64);

fn power_lower<'a>(
    f: &'a (dyn Fn(f64) -> f64 + 'a),
    a: f64,
    b: f64,
    gamma: f64,
) -> Segment<'a> {
    let e = 1.0 - gamma;
    let inv_e = 1.0 / e;
    let umax = (b - a).powf(e);
    let g = move |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        f(a + u.powf(inv_e)) * inv_e * u.powf(inv_e - 1.0)
    };
    (Box::new(g), 0.0, umax)
}

fn power_upper<'a>(
    f: &'a (dyn Fn(f64) -> f64 + 'a),
    a: f64,
    b: f64,
    gamma: f64,
) -> Segment<'a> {
    let e = 1.0 - gamma;
    let inv_e = 1.0 / e;
    let umax = (b - a).powf(e);
    let g = move |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        f(b - u.powf(inv_e)) * inv_e * u.powf(inv_e - 1.0)
    };
    (Box::new(g), 0.0, umax)
}

fn finite_segments<'a>(
    f: &'a (dyn Fn(f64) -> f64 + 'a),
    a: f64,
    b: f64,
    ga: Option<f64>,
    gb: Option<f64>,
) -> Vec<Segment<'a>> {
    let ga = ga.filter(|&g| g > 0.0);
    let gb = gb.filter(|&g| g > 0.0);
    match (ga, gb) {
        (Some(ga), Some(gb)) => {
            let m = 0.5 * (a + b);
            vec![power_lower(f, a, m, ga), power_upper(f, m, b, gb)]
        }
        (Some(ga), None) => vec![power_lower(f, a, b, ga)],
        (None, Some(gb)) => vec![power_upper(f, a, b, gb)],
        (None, None) => vec![(Box::new(move |x| f(x)), a, b)],
    }
}

fn build_segments<'a>(req: &'a QuadratureRequest<'a>) -> (Vec<Segment<'a>>, f64) {
    let f = req.integrand;
    if req.upper.is_finite() {
        let segs = finite_segments(
            f,
            req.lower,
            req.upper,
            req.lower_singularity,
            req.upper_singularity,
        );
        return (segs, 0.0);
    }
    let mut segs = Vec::new();
    let mut unreachable_tail = 0.0;
    match req.tail_decay {
        Some(s) => {
            // exponential map x = x0 e^w; the tail beyond W contributes a
            // relative e^{-(s-1)W} of the declared bound. W is capped where
            // x0 e^W would leave the f64 range: for s very close to 1 the
            // mass beyond that ceiling is unreachable by point evaluation,
            // so it is dropped, charged to the error estimate, and the
            // result is a flagged underestimate.
            let x0 = if req.lower > 0.0 { req.lower } else { 1.0 };
            if req.lower < x0 {
                segs.extend(finite_segments(f, req.lower, x0, req.lower_singularity, None));
            }
            let w_wanted = 37.0 / (s - 1.0);
            let w_max = w_wanted.min(690.0 - x0.ln().max(0.0));
            if w_max < w_wanted {
                let drop = (-(s - 1.0) * w_max).exp();
                unreachable_tail = drop / (1.0 - drop).max(0.5);
            }
            let g = move |w: f64| {
                let x = x0 * w.exp();
                if !x.is_finite() {
                    return 0.0;
                }
                f(x) * x
            };
            segs.push((Box::new(g), 0.0, w_max));
        }
        None => {
            // algebraic map x = a + t/(1-t)
            let mut a = req.lower;
            if let Some(ga) = req.lower_singularity.filter(|&g| g > 0.0) {
                segs.push(power_lower(f, a, a + 1.0, ga));
                a += 1.0;
            }
            let g = move |t: f64| {
                let om = 1.0 - t;
                if om <= 0.0 {
                    return 0.0;
                }
                f(a + t / om) / (om * om)
            };
            segs.push((Box::new(g), 0.0, 1.0));
        }
    }
    (segs, unreachable_tail)
}

// QUADPACK-style error rescaling for a single Kronrod panel.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One G7/K15 panel. Returns Err with the offending abscissa on a non-finite
/// sample.
fn qk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> std::result::Result<(f64, f64), f64> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let mut fv = [0.0f64; 15];
    for (j, &x) in XGK15.iter().enumerate() {
        let dx = half * x;
        let (x1, x2) = (center - dx, center + dx);
        let (f1, f2) = (f(x1), f(x2));
        if !f1.is_finite() {
            return Err(x1);
        }
        if !f2.is_finite() {
            return Err(x2);
        }
        fv[j] = f1;
        fv[14 - j] = f2;
    }
    let f_center = fv[7];

    let mut res_gauss = f_center * WG7[3];
    let mut res_kron = f_center * WGK15[7];
    let mut res_abs = res_kron.abs();
    for j in 0..7 {
        let fsum = fv[j] + fv[14 - j];
        res_kron += WGK15[j] * fsum;
        res_abs += WGK15[j] * (fv[j].abs() + fv[14 - j].abs());
        if j % 2 == 1 {
            res_gauss += WG7[j / 2] * fsum;
        }
    }
    let mean = res_kron * 0.5;
    let mut res_asc = WGK15[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK15[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }

    let err = ((res_kron - res_gauss) * half).abs();
    Ok((
        res_kron * half,
        rescale_error(err, res_abs * half.abs(), res_asc * half.abs()),
    ))
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

// max-heap order on (error, a, b); the tie-breakers keep the pop order, and
// with it the whole refinement path, deterministic
impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error && self.a == other.a && self.b == other.b
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error
            .total_cmp(&other.error)
            .then(self.a.total_cmp(&other.a))
            .then(self.b.total_cmp(&other.b))
    }
}

fn adaptive(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    budget: usize,
    initial_splits: usize,
) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            subdivisions: 0,
            converged: true,
        });
    }
    let eval = |lo: f64, hi: f64| -> Result<Panel> {
        let (value, error) =
            qk15(f, lo, hi).map_err(|x| Error::NonFiniteSample { x })?;
        Ok(Panel {
            a: lo,
            b: hi,
            value,
            error,
        })
    };

    let mut heap: std::collections::BinaryHeap<Panel> =
        std::collections::BinaryHeap::with_capacity(initial_splits * 2);
    let h = (b - a) / initial_splits as f64;
    let mut value_sum = 0.0;
    let mut err_sum = 0.0;
    for i in 0..initial_splits {
        let lo = a + i as f64 * h;
        let hi = if i + 1 == initial_splits { b } else { a + (i + 1) as f64 * h };
        let p = eval(lo, hi)?;
        value_sum += p.value;
        err_sum += p.error;
        heap.push(p);
    }

    let mut subdivisions = 0usize;
    let mut converged = true;
    // panels at floating-point resolution, no longer refinable
    let mut frozen: Vec<Panel> = Vec::new();

    loop {
        let tol = abs_tol.max(rel_tol * value_sum.abs());
        if err_sum <= tol || heap.is_empty() {
            break;
        }
        if subdivisions >= budget {
            converged = false;
            break;
        }
        let worst = heap.pop().expect("nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            frozen.push(worst);
            continue;
        }
        let left = eval(worst.a, mid)?;
        let right = eval(mid, worst.b)?;
        value_sum += left.value + right.value - worst.value;
        err_sum += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }

    converged = converged && err_sum <= abs_tol.max(rel_tol * value_sum.abs());

    // deterministic final summation in interval order
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.extend(frozen);
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut value = 0.0;
    let mut comp = 0.0;
    for p in &panels {
        let y = p.value - comp;
        let t = value + y;
        comp = (t - value) - y;
        value = t;
    }
    let error = panels.iter().map(|p| p.error).sum();
    Ok(Quadrature {
        value,
        error,
        subdivisions,
        converged,
    })
}

/// Integrate a request. See the module docs for the substitution strategy.
pub fn integrate(req: &QuadratureRequest) -> Result<Quadrature> {
    req.validate()?;
    let (segments, unreachable_tail) = build_segments(req);
    let mut total = Quadrature {
        value: 0.0,
        error: 0.0,
        subdivisions: 0,
        converged: true,
    };
    let n = segments.len().max(1);
    for (g, a, b) in &segments {
        let part = adaptive(
            g.as_ref(),
            *a,
            *b,
            req.rel_tol,
            req.abs_tol / n as f64,
            req.max_subdivisions / n,
            req.initial_splits,
        )?;
        total.value += part.value;
        total.error += part.error;
        total.subdivisions += part.subdivisions;
        total.converged &= part.converged;
    }
    if unreachable_tail > 0.0 {
        let penalty = total.value.abs() * unreachable_tail;
        total.error += penalty;
        if penalty > req.abs_tol.max(req.rel_tol * total.value.abs()) {
            total.converged = false;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::beta_function;

    #[test]
    fn unit_constant() {
        let f = |_: f64| 1.0;
        let q = integrate(&QuadratureRequest::new(&f, 0.0, 1.0)).unwrap();
        assert!((q.value - 1.0).abs() < 1e-12);
        assert!(q.converged);
    }

    #[test]
    fn gaussian_density_mass() {
        // truncation at 16 sigma leaves no measurable tail
        let f = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let q = integrate(&QuadratureRequest::new(&f, -16.0, 16.0)).unwrap();
        assert!((q.value - 1.0).abs() < 1e-10, "got {}", q.value);
    }

    #[test]
    fn declared_power_singularity() {
        // int_0^1 z^{-2/3} dz = 3, exactly removable by the power substitution
        let f = |z: f64| z.powf(-2.0 / 3.0);
        let q = integrate(
            &QuadratureRequest::new(&f, 0.0, 1.0)
                .lower_singularity(2.0 / 3.0)
                .rel_tol(DEFAULT_REL_TOL_SINGULAR),
        )
        .unwrap();
        assert!((q.value - 3.0).abs() / 3.0 < DEFAULT_REL_TOL_SINGULAR);
    }

    #[test]
    fn beta_integrand_both_endpoints() {
        let f = |z: f64| z.powf(-2.0 / 3.0) * (1.0 - z).powf(-2.0 / 3.0);
        let q = integrate(
            &QuadratureRequest::new(&f, 0.0, 1.0)
                .lower_singularity(2.0 / 3.0)
                .upper_singularity(2.0 / 3.0)
                .rel_tol(DEFAULT_REL_TOL_SINGULAR),
        )
        .unwrap();
        let b = beta_function(1.0 / 3.0, 1.0 / 3.0).unwrap();
        assert!((q.value - b).abs() / b < 1e-7, "got {} want {}", q.value, b);
    }

    #[test]
    fn algebraic_semi_infinite() {
        let f = |x: f64| (-x).exp();
        let q = integrate(&QuadratureRequest::new(&f, 0.0, f64::INFINITY)).unwrap();
        assert!((q.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn power_tail_semi_infinite() {
        // int_1^inf x^{-4/3} dx = 3
        let f = |x: f64| x.powf(-4.0 / 3.0);
        let q = integrate(
            &QuadratureRequest::new(&f, 1.0, f64::INFINITY).tail_decay(4.0 / 3.0),
        )
        .unwrap();
        assert!((q.value - 3.0).abs() / 3.0 < 1e-9, "got {}", q.value);
    }

    #[test]
    fn power_tail_near_divergence_boundary() {
        // int_1^inf x^{-1.05} dx = 20; the algebraic map would induce an
        // endpoint exponent 0.95 and underflow, the exponential map is flat
        let f = |x: f64| x.powf(-1.05);
        let q = integrate(
            &QuadratureRequest::new(&f, 1.0, f64::INFINITY)
                .tail_decay(1.05)
                .rel_tol(1e-9),
        )
        .unwrap();
        assert!((q.value - 20.0).abs() / 20.0 < 1e-8, "got {}", q.value);
        assert!(q.converged);
    }

    #[test]
    fn tail_beyond_float_ceiling_is_a_flagged_underestimate() {
        // int_1^inf x^{-1.004} dx = 250, but the mass past x ~ 1.8e308
        // cannot be reached by point evaluation; the result undershoots and
        // says so through the error estimate and the converged flag
        let f = |x: f64| x.powf(-1.004);
        let q = integrate(
            &QuadratureRequest::new(&f, 1.0, f64::INFINITY)
                .tail_decay(1.004)
                .rel_tol(1e-9),
        )
        .unwrap();
        assert!(q.value <= 250.0 * (1.0 + 1e-9));
        assert!(q.value > 0.9 * 250.0, "got {}", q.value);
        assert!(!q.converged);
        assert!(q.error >= (250.0 - q.value) * 0.5, "error estimate {:e}", q.error);
    }

    #[test]
    fn budget_exhaustion_flags_nonconvergence() {
        // undeclared strong singularity with a tiny budget
        let f = |x: f64| x.abs().powf(-0.95);
        let q = integrate(
            &QuadratureRequest::new(&f, 1e-300, 1.0)
                .rel_tol(1e-9)
                .max_subdivisions(20),
        )
        .unwrap();
        assert!(!q.converged);
        assert!(q.value.is_finite());
    }

    #[test]
    fn non_finite_sample_is_hard_error() {
        let f = |x: f64| 1.0 / (x - 0.5);
        let r = integrate(&QuadratureRequest::new(&f, 0.0, 1.0).rel_tol(1e-6));
        // depending on node placement this diverges or samples the pole;
        // force the pole onto a node with an odd split count
        let f2 = |x: f64| if x == 0.5 { f64::NAN } else { 1.0 };
        let r2 = integrate(&QuadratureRequest::new(&f2, 0.0, 1.0).initial_splits(1));
        assert!(r.is_err() || r.is_ok());
        assert!(matches!(r2, Err(Error::NonFiniteSample { .. })));
    }

    #[test]
    fn rejects_bad_tolerances_and_exponents() {
        let f = |_: f64| 1.0;
        assert!(integrate(&QuadratureRequest::new(&f, 0.0, 1.0).rel_tol(0.5)).is_err());
        assert!(integrate(&QuadratureRequest::new(&f, 0.0, 1.0).rel_tol(1e-15)).is_err());
        assert!(integrate(&QuadratureRequest::new(&f, 0.0, 1.0).lower_singularity(1.0)).is_err());
        assert!(integrate(&QuadratureRequest::new(&f, 0.0, f64::INFINITY).tail_decay(0.9)).is_err());
    }

    #[test]
    fn linearity_on_smooth_integrands() {
        let f = |x: f64| (x * 1.3).sin() + 0.2 * x * x;
        let g = |x: f64| (-x * x).exp();
        let (alpha, beta) = (2.5, -1.75);
        let combo = |x: f64| alpha * f(x) + beta * g(x);
        let abs_tol = 1e-10;
        let run = |h: &dyn Fn(f64) -> f64| {
            integrate(&QuadratureRequest::new(h, -2.0, 3.0).abs_tol(abs_tol))
                .unwrap()
                .value
        };
        let lhs = run(&combo);
        let rhs = alpha * run(&f) + beta * run(&g);
        assert!((lhs - rhs).abs() < 10.0 * abs_tol.max(1e-12 * lhs.abs()));
    }
}
