//! Python bindings: the main types and operations of the Grand Lebesgue
//! space toolkit, exposed as a `gls_py` extension module.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use gls_core::analysis::{
    modulus_of_continuity as core_modulus, verify_banach_algebra as core_algebra,
    verify_young as core_young, CampaignConfig,
};
use gls_core::convolution::{convolve_cyclic as core_cyclic, convolve_grid, ConvMethod, ConvolutionPlan};
use gls_core::function::{
    dilate as core_dilate, make_gaussian, make_indicator, make_power_tail, random_mixture,
    sample as core_sample,
};
use gls_core::norms::{
    grand_norm as core_grand_norm, lp_norm, lp_norm_via_quadrature,
    small_lebesgue_norm as core_small,
};
use gls_core::psi::{degenerate_psi_check, PsiSpec};
use gls_core::{FunctionRep, GroupDomain};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A function on the real line: Gaussian densities, power tails,
/// indicators, and seeded random mixtures.
#[pyclass(frozen)]
struct Function {
    inner: FunctionRep,
}

#[pymethods]
impl Function {
    /// Gaussian density with scale sigma.
    #[staticmethod]
    fn gaussian(sigma: f64) -> PyResult<Self> {
        Ok(Function {
            inner: make_gaussian(sigma).map_err(err)?,
        })
    }

    /// Power tail x^{-1/alpha} on [1, inf), alpha in (1, 2].
    #[staticmethod]
    fn power_tail(alpha: f64) -> PyResult<Self> {
        Ok(Function {
            inner: make_power_tail(alpha).map_err(err)?,
        })
    }

    /// Indicator of [a, b).
    #[staticmethod]
    fn indicator(a: f64, b: f64) -> PyResult<Self> {
        Ok(Function {
            inner: make_indicator(a, b).map_err(err)?,
        })
    }

    /// Seeded positive mixture of Gaussian bumps and indicators.
    #[staticmethod]
    fn mixture(seed: u64, components: usize) -> Self {
        Function {
            inner: random_mixture(seed, components),
        }
    }

    fn __call__(&self, x: f64) -> f64 {
        self.inner.eval(x)
    }

    fn label(&self) -> String {
        self.inner.label()
    }

    /// L_p norm (math.inf for the essential supremum); uses the exact-norm
    /// oracle when the family carries one.
    fn lp_norm(&self, p: f64) -> PyResult<f64> {
        lp_norm(&self.inner, p).map_err(err)
    }

    /// L_p norm forced through quadrature.
    fn lp_norm_quadrature(&self, p: f64) -> PyResult<f64> {
        lp_norm_via_quadrature(&self.inner, p).map_err(err)
    }

    /// Dilation x -> f(lam x); `dim` is the formal dimension used in the
    /// norm bookkeeping.
    fn dilate(&self, lam: f64, dim: u32) -> PyResult<Self> {
        Ok(Function {
            inner: core_dilate(&self.inner, lam, dim).map_err(err)?,
        })
    }

    /// Evaluate on the grid x_i = -half_width + i (2 half_width / n).
    fn sample(&self, half_width: f64, n: usize) -> PyResult<Vec<f64>> {
        let d = GroupDomain::real_line(half_width, n).map_err(err)?;
        Ok(core_sample(&self.inner, d).map_err(err)?.values().to_vec())
    }

    fn __repr__(&self) -> String {
        format!("Function({})", self.inner.label())
    }
}

/// A generating function psi(p) on [1, b).
#[pyclass(frozen)]
struct Psi {
    inner: PsiSpec,
}

#[pymethods]
impl Psi {
    /// p^{1/m}.
    #[staticmethod]
    fn power_m(m: f64) -> PyResult<Self> {
        Ok(Psi {
            inner: PsiSpec::power_m(m).map_err(err)?,
        })
    }

    /// (b-1)^beta (b-p)^{-beta} on [1, b).
    #[staticmethod]
    fn critical(b: f64, beta: f64) -> PyResult<Self> {
        Ok(Psi {
            inner: PsiSpec::critical_beta(b, beta).map_err(err)?,
        })
    }

    /// 1 at p = r, +inf elsewhere; the Grand norm becomes |f|_r.
    #[staticmethod]
    fn extremal(r: f64) -> PyResult<Self> {
        Ok(Psi {
            inner: PsiSpec::extremal(r).map_err(err)?,
        })
    }

    /// The natural function of the Gaussian density z_sigma.
    #[staticmethod]
    fn gaussian(sigma: f64) -> PyResult<Self> {
        Ok(Psi {
            inner: PsiSpec::gaussian_sigma(sigma).map_err(err)?,
        })
    }

    /// (3/(2p-3))^{1/p} above 3/2, +inf on [1, 3/2].
    #[staticmethod]
    fn tilde() -> Self {
        Psi {
            inner: PsiSpec::counterexample_tilde(),
        }
    }

    /// The natural function p -> |f|_p of a concrete function.
    #[staticmethod]
    fn natural_of(f: &Function) -> PyResult<Self> {
        Ok(Psi {
            inner: PsiSpec::natural_of(f.inner.clone(), f64::INFINITY).map_err(err)?,
        })
    }

    fn eval(&self, p: f64) -> PyResult<f64> {
        self.inner.eval(p).map_err(err)
    }

    /// One of "Normalized", "PositiveUnnormalized", "Degenerate",
    /// "InfiniteAtOne".
    fn classify(&self) -> String {
        format!("{:?}", degenerate_psi_check(&self.inner))
    }

    fn label(&self) -> String {
        self.inner.label()
    }

    fn __repr__(&self) -> String {
        format!("Psi({})", self.inner.label())
    }
}

/// Grand Lebesgue norm sup_p |f|_p / psi(p) with grid diagnostics.
#[pyfunction]
#[pyo3(signature = (f, psi, tol = 1e-6))]
fn grand_norm<'py>(
    py: Python<'py>,
    f: &Function,
    psi: &Psi,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = core_grand_norm(&f.inner, &psi.inner, tol).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("value", r.value)?;
    out.set_item("p_star", r.p_star)?;
    out.set_item("nodes_evaluated", r.nodes_evaluated)?;
    out.set_item("refinements", r.refinements)?;
    out.set_item("tail_bound", r.tail_bound)?;
    out.set_item("converged", r.converged)?;
    out.set_item("indeterminate_nodes", r.indeterminate_nodes)?;
    Ok(out)
}

/// Small-Lebesgue norm sup_{0 < eps <= b-1} eps^{theta/(b-eps)} |f|_{b-eps}.
#[pyfunction]
fn small_lebesgue_norm(f: &Function, b: f64, theta: f64) -> PyResult<f64> {
    core_small(&f.inner, b, theta).map_err(err)
}

/// Sample both functions on the grid and convolve; returns the samples of
/// f * g. `method` is "spectral" or "direct".
#[pyfunction]
#[pyo3(signature = (f, g, half_width = 16.0, n = 4096, method = "spectral"))]
fn convolve(f: &Function, g: &Function, half_width: f64, n: usize, method: &str) -> PyResult<Vec<f64>> {
    let d = GroupDomain::real_line(half_width, n).map_err(err)?;
    let fs = core_sample(&f.inner, d).map_err(err)?;
    let gs = core_sample(&g.inner, d).map_err(err)?;
    let plan = ConvolutionPlan {
        method: match method {
            "spectral" => ConvMethod::Spectral,
            "direct" => ConvMethod::DirectGrid,
            other => return Err(PyValueError::new_err(format!("unknown method `{other}`"))),
        },
        ..ConvolutionPlan::default()
    };
    Ok(convolve_grid(&fs, &gs, &plan).map_err(err)?.values().to_vec())
}

/// Circular convolution on Z_n with normalized counting measure.
#[pyfunction]
fn convolve_cyclic(f: Vec<f64>, g: Vec<f64>) -> PyResult<Vec<f64>> {
    core_cyclic(&f, &g).map_err(err)
}

/// Beta function B(a, b).
#[pyfunction]
fn beta_function(a: f64, b: f64) -> PyResult<f64> {
    gls_core::beta_function(a, b).map_err(err)
}

/// The power-tail self-convolution h(x) = (f_{3/2} * f_{3/2})(x).
#[pyfunction]
#[pyo3(signature = (x, rel_tol = 1e-7))]
fn counterexample_h(x: f64, rel_tol: f64) -> PyResult<f64> {
    gls_core::convolution::counterexample_h(x, rel_tol).map_err(err)
}

/// Fourier transform F[f](xi) = int e^{2 pi i xi x} f(x) dx at the given
/// nodes; returns (re, im) pairs.
#[pyfunction]
fn fourier_transform(f: &Function, xis: Vec<f64>) -> PyResult<Vec<(f64, f64)>> {
    let grid = gls_core::fourier::fourier_transform(&f.inner, &xis).map_err(err)?;
    Ok(grid.values.iter().map(|v| (v.re, v.im)).collect())
}

/// Modulus of continuity omega[f](delta).
#[pyfunction]
fn modulus_of_continuity(f: &Function, delta: f64) -> PyResult<f64> {
    core_modulus(&f.inner, delta).map_err(err)
}

fn report_dict<'py>(py: Python<'py>, rep: &gls_core::analysis::VerificationReport) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    out.set_item("id", &rep.id)?;
    out.set_item("tag", &rep.tag)?;
    out.set_item("lhs", rep.lhs)?;
    out.set_item("rhs", rep.rhs)?;
    out.set_item("ratio", rep.ratio)?;
    out.set_item("pass", rep.pass)?;
    let prov = PyDict::new(py);
    for (k, v) in &rep.provenance {
        prov.set_item(k, v)?;
    }
    out.set_item("provenance", prov)?;
    Ok(out)
}

/// Verify |f * g|_r <= |f|_p |g|_q with r from 1 + 1/r = 1/p + 1/q.
#[pyfunction]
#[pyo3(signature = (f, g, p, q, tol = 1e-6))]
fn verify_young<'py>(
    py: Python<'py>,
    f: &Function,
    g: &Function,
    p: f64,
    q: f64,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = CampaignConfig::default();
    let rep = core_young(&f.inner, &g.inner, p, q, tol, &cfg).map_err(err)?;
    report_dict(py, &rep)
}

/// Verify ||f * g||_{G psi} <= ||f||_{G psi} ||g||_{G psi} for a normalized
/// generating function.
#[pyfunction]
#[pyo3(signature = (f, g, psi, tol = 1e-6))]
fn verify_banach_algebra<'py>(
    py: Python<'py>,
    f: &Function,
    g: &Function,
    psi: &Psi,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = CampaignConfig::default();
    let rep = core_algebra(&f.inner, &g.inner, &psi.inner, tol, &cfg).map_err(err)?;
    report_dict(py, &rep)
}

#[pymodule]
fn gls_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Function>()?;
    m.add_class::<Psi>()?;
    m.add_function(wrap_pyfunction!(grand_norm, m)?)?;
    m.add_function(wrap_pyfunction!(small_lebesgue_norm, m)?)?;
    m.add_function(wrap_pyfunction!(convolve, m)?)?;
    m.add_function(wrap_pyfunction!(convolve_cyclic, m)?)?;
    m.add_function(wrap_pyfunction!(beta_function, m)?)?;
    m.add_function(wrap_pyfunction!(counterexample_h, m)?)?;
    m.add_function(wrap_pyfunction!(fourier_transform, m)?)?;
    m.add_function(wrap_pyfunction!(modulus_of_continuity, m)?)?;
    m.add_function(wrap_pyfunction!(verify_young, m)?)?;
    m.add_function(wrap_pyfunction!(verify_banach_algebra, m)?)?;
    Ok(())
}
