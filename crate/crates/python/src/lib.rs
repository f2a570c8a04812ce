//! Python bindings for `rectkernel`.
//!
//! Numerical failures raise `ValueError` (bad input) or `RuntimeError`
//! (quadrature or oracle failure); kernel values come back as `Kernel`
//! objects carrying the value, its error estimate and any warnings.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use rectkernel::engines::{self, KernelValue, SampledWave};
use rectkernel::oracle::{self, GridSpec};
use rectkernel::{greens, Error, QuadratureOptions};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidParameter { .. } | Error::BoundaryPoint(_) | Error::UnsupportedRegion { .. } => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PotentialSpec {
    inner: rectkernel::PotentialSpec,
}

#[pymethods]
impl PotentialSpec {
    #[new]
    #[pyo3(signature = (u, delta = 0.0))]
    fn new(u: f64, delta: f64) -> PyResult<Self> {
        Ok(Self {
            inner: rectkernel::PotentialSpec::new(u, delta).map_err(to_py)?,
        })
    }

    #[getter]
    fn u(&self) -> f64 {
        self.inner.u
    }

    #[getter]
    fn delta(&self) -> f64 {
        self.inner.delta
    }

    fn value_at(&self, x: f64) -> f64 {
        self.inner.value_at(x)
    }

    fn __repr__(&self) -> String {
        format!("PotentialSpec(u={}, delta={})", self.inner.u, self.inner.delta)
    }
}

#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Kernel {
    #[pyo3(get)]
    value: Complex64,
    #[pyo3(get)]
    error_estimate: f64,
    #[pyo3(get)]
    mode: &'static str,
    #[pyo3(get)]
    warnings: Vec<String>,
}

impl From<KernelValue> for Kernel {
    fn from(k: KernelValue) -> Self {
        Self {
            value: k.value,
            error_estimate: k.error_estimate,
            mode: k.mode.name(),
            warnings: k.warnings.iter().map(|w| w.to_string()).collect(),
        }
    }
}

#[pymethods]
impl Kernel {
    #[getter]
    fn real(&self) -> f64 {
        self.value.re
    }

    fn __repr__(&self) -> String {
        format!(
            "Kernel(mode={}, value={}, error_estimate={:e})",
            self.mode, self.value, self.error_estimate
        )
    }
}

/// Kernel evaluator for one potential.
#[pyclass(frozen)]
struct Engine {
    inner: engines::Engine,
}

#[pymethods]
impl Engine {
    #[new]
    #[pyo3(signature = (potential, rel_tol = 1e-8, abs_tol = 1e-12))]
    fn new(potential: &PotentialSpec, rel_tol: f64, abs_tol: f64) -> PyResult<Self> {
        let opts = QuadratureOptions::default().with_tolerances(rel_tol, abs_tol);
        Ok(Self {
            inner: engines::Engine::new(potential.inner, opts).map_err(to_py)?,
        })
    }

    /// Real-time propagator `d·K(x, x'; t)`.
    fn propagator(&self, py: Python<'_>, x: f64, xp: f64, t: f64) -> PyResult<Kernel> {
        py.detach(|| self.inner.propagator(x, xp, t)).map(Kernel::from).map_err(to_py)
    }

    /// Propagator at complex time `tau` with `Im tau < 0`.
    fn propagator_at(&self, py: Python<'_>, x: f64, xp: f64, tau: Complex64) -> PyResult<Kernel> {
        py.detach(|| self.inner.propagator_at(x, xp, tau)).map(Kernel::from).map_err(to_py)
    }

    /// Thermal density matrix `d·ρ(x, x'; β)`.
    fn density_matrix(&self, py: Python<'_>, x: f64, xp: f64, beta: f64) -> PyResult<Kernel> {
        py.detach(|| self.inner.density_matrix(x, xp, beta)).map(Kernel::from).map_err(to_py)
    }

    /// Diffusion kernel `d·P(x, x'; t̄)`.
    fn diffusion_kernel(&self, py: Python<'_>, x: f64, xp: f64, tbar: f64) -> PyResult<Kernel> {
        py.detach(|| self.inner.diffusion_kernel(x, xp, tbar)).map(Kernel::from).map_err(to_py)
    }

    #[getter]
    fn potential(&self) -> PotentialSpec {
        PotentialSpec { inner: self.inner.pot }
    }
}

/// Transmission/reflection amplitudes at energy `e` as a dict.
#[pyfunction]
fn amplitudes(py: Python<'_>, e: f64, potential: &PotentialSpec) -> PyResult<Py<PyAny>> {
    let a = rectkernel::amplitude_set(e, &potential.inner).map_err(to_py)?;
    let d = pyo3::types::PyDict::new(py);
    d.set_item("t", a.t)?;
    d.set_item("r", a.r)?;
    d.set_item("t_prime", a.t_prime)?;
    d.set_item("r_prime", a.r_prime)?;
    d.set_item("denominator", a.denominator)?;
    Ok(d.into_any().unbind())
}

/// Dimensionless retarded Green function `G(x, x'; E)`.
#[pyfunction]
fn green(x: f64, xp: f64, e: f64, potential: &PotentialSpec) -> PyResult<Complex64> {
    greens::regional_green(x, xp, e, &potential.inner)
        .map(|g| g.g_plus)
        .map_err(to_py)
}

/// Bound-state energies of a well from the zeros of the amplitude denominator.
#[pyfunction]
#[pyo3(signature = (potential, samples = 4000))]
fn bound_state_energies(potential: &PotentialSpec, samples: usize) -> Vec<f64> {
    rectkernel::amplitudes::scan_denominator_zeros(&potential.inner, samples)
        .into_iter()
        .map(|z| z.energy)
        .collect()
}

/// Runs a figure preset (1-6) and returns `(u, delta, x, xp, time, value, error)` rows.
#[pyfunction]
#[pyo3(signature = (figure, rel_tol = 1e-8, abs_tol = 1e-12))]
#[allow(clippy::type_complexity)]
fn sweep_figure(
    py: Python<'_>,
    figure: u32,
    rel_tol: f64,
    abs_tol: f64,
) -> PyResult<Vec<(f64, f64, f64, f64, f64, Option<Complex64>, Option<f64>)>> {
    let spec = engines::SweepSpec::figure(figure).map_err(to_py)?;
    let opts = QuadratureOptions::default().with_tolerances(rel_tol, abs_tol);
    let rows = py.detach(|| engines::sweep(&spec, &opts)).map_err(to_py)?;
    Ok(rows
        .into_iter()
        .map(|r| {
            let i = r.input;
            let (v, e) = match r.result {
                Ok(k) => (Some(k.value), Some(k.error_estimate)),
                Err(_) => (None, None),
            };
            (i.u, i.delta, i.x, i.xp, i.time, v, e)
        })
        .collect())
}

/// Finite-difference thermal kernel: `(full, continuum, bound)`.
#[pyfunction]
#[pyo3(signature = (potential, beta, x, xp, half_width = 40.0, interior = 7999))]
fn oracle_density(
    py: Python<'_>,
    potential: &PotentialSpec,
    beta: f64,
    x: f64,
    xp: f64,
    half_width: f64,
    interior: usize,
) -> PyResult<(f64, f64, f64)> {
    let grid = GridSpec::new(half_width, interior).map_err(to_py)?;
    let k = py
        .detach(|| oracle::thermal_kernel_oracle(&grid, &potential.inner, beta, x, xp))
        .map_err(to_py)?;
    Ok((k.full, k.continuum, k.bound))
}

/// Evolves a Gaussian packet (sampled for `x < 0`) to time `t` at points `xs`.
#[pyfunction]
#[pyo3(signature = (potential, x0, sigma, k0, t, xs))]
fn evolve_gaussian(
    py: Python<'_>,
    potential: &PotentialSpec,
    x0: f64,
    sigma: f64,
    k0: f64,
    t: f64,
    xs: Vec<f64>,
) -> PyResult<Vec<Complex64>> {
    let dx = (sigma / 50.0).min(0.02);
    let lo = x0 - 12.0 * sigma;
    let n = ((-dx - lo) / dx).floor().max(1.0) as usize + 1;
    let psi0 = SampledWave::from_fn(lo, dx, n, |x| engines::gaussian_packet(x, x0, sigma, k0)).map_err(to_py)?;
    let out = py
        .detach(|| engines::evolve_packet(&psi0, t, &xs, &potential.inner, &engines::PacketOptions::default()))
        .map_err(to_py)?;
    Ok(out.psi)
}

#[pymodule]
fn rectkernel_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PotentialSpec>()?;
    m.add_class::<Kernel>()?;
    m.add_class::<Engine>()?;
    m.add_function(wrap_pyfunction!(amplitudes, m)?)?;
    m.add_function(wrap_pyfunction!(green, m)?)?;
    m.add_function(wrap_pyfunction!(bound_state_energies, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_figure, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_density, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_gaussian, m)?)?;
    Ok(())
}
