//! Brute-force reference: `H̃ = −∂² + V` discretized on a hard-wall box.
//!
//! Imaginary-time (and damped complex-time) kernels come from an explicit
//! eigendecomposition of the tridiagonal grid Hamiltonian; real-time wave
//! packets are stepped with Crank–Nicolson. Both are independent of the
//! scattering amplitudes used by the engines.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::engines::{Engine, KernelValue};
use crate::error::{invalid, Error, Result};
use crate::model::PotentialSpec;
use crate::quadrature::QuadratureOptions;

/// Hard-wall box `[−L, L]` with `N` interior nodes `x_j = −L + (j+1)h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub half_width: f64,
    pub interior: usize,
}

impl Default for GridSpec {
    /// `L = 40`, `h = 0.01`: the steps at `x̃ = 0, 1` and the usual sample
    /// points fall on nodes.
    fn default() -> Self {
        Self {
            half_width: 40.0,
            interior: 7999,
        }
    }
}

impl GridSpec {
    pub fn new(half_width: f64, interior: usize) -> Result<Self> {
        let g = Self {
            half_width,
            interior,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.half_width.is_finite() && self.half_width > 1.0) {
            return Err(invalid("L", "must be finite and > 1"));
        }
        if self.interior < 1000 {
            return Err(invalid("N", "need at least 1000 interior points"));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width / (self.interior + 1) as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_width + (j + 1) as f64 * self.step()
    }

    /// Nearest node and the snapping offset `x_node − x`.
    pub fn snap(&self, x: f64) -> Result<(usize, f64)> {
        let h = self.step();
        let j = ((x + self.half_width) / h).round() as i64 - 1;
        if j < 0 || j >= self.interior as i64 {
            return Err(invalid("x", format!("{x} is outside the box")));
        }
        let j = j as usize;
        Ok((j, self.x(j) - x))
    }

    /// The same box with twice the step.
    pub fn coarsened(&self) -> Self {
        Self {
            half_width: self.half_width,
            interior: self.interior.div_ceil(2) - 1,
        }
    }
}

/// Symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    /// `off[j]` couples nodes `j` and `j + 1`.
    pub off: Vec<f64>,
}

impl Tridiagonal {
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        (0..n)
            .map(|j| {
                let mut s = self.diag[j] * v[j];
                if j > 0 {
                    s += self.off[j - 1] * v[j - 1];
                }
                if j + 1 < n {
                    s += self.off[j] * v[j + 1];
                }
                s
            })
            .collect()
    }

    /// Number of eigenvalues strictly below `lambda` (Sturm sequence).
    pub fn count_below(&self, lambda: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for j in 0..self.diag.len() {
            let coupling = if j == 0 { 0.0 } else { self.off[j - 1] * self.off[j - 1] };
            if q == 0.0 {
                q = f64::EPSILON * (self.diag[j].abs() + coupling.sqrt());
            }
            q = self.diag[j] - lambda - coupling / q;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for j in 0..n {
            let r = if j > 0 { self.off[j - 1].abs() } else { 0.0 } + if j + 1 < n { self.off[j].abs() } else { 0.0 };
            lo = lo.min(self.diag[j] - r);
            hi = hi.max(self.diag[j] + r);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// `(T − shift)⁻¹ b` by Gaussian elimination with partial pivoting.
    fn solve_shifted(&self, shift: f64, b: &mut [f64]) {
        let n = self.diag.len();
        let mut d: Vec<f64> = self.diag.iter().map(|v| v - shift).collect();
        let mut dl = self.off.clone();
        let mut du = self.off.clone();
        let tiny = f64::EPSILON * self.diag.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                d[i + 1] -= fact * du[i];
                b[i + 1] -= fact * b[i];
                if i + 2 < n {
                    dl[i] = 0.0;
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                let temp = d[i + 1];
                d[i + 1] = du[i] - fact * temp;
                if i + 2 < n {
                    dl[i] = du[i + 1];
                    du[i + 1] = -fact * dl[i];
                }
                du[i] = temp;
                let tb = b[i];
                b[i] = b[i + 1];
                b[i + 1] = tb - fact * b[i + 1];
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        b[n - 1] /= d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - du[i] * b[i + 1] - dl[i] * b[i + 2]) / d[i];
        }
    }

    /// Unit eigenvector for an (accurate) eigenvalue, by inverse iteration.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.diag.len();
        let mut v: Vec<f64> = (0..n).map(|j| 1.0 + 0.5 * ((j as f64) * 0.618_033_988_7).sin()).collect();
        for _ in 0..3 {
            self.solve_shifted(lambda, &mut v);
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
        }
        v
    }
}

/// Second-order finite-difference `H̃` with the potential averaged over each
/// node's cell (a node on a step gets the mean of both sides).
pub fn grid_hamiltonian(grid: &GridSpec, pot: &PotentialSpec) -> Tridiagonal {
    let h = grid.step();
    let kin = 1.0 / (h * h);
    let diag = (0..grid.interior)
        .map(|j| {
            let x = grid.x(j);
            2.0 * kin + pot.cell_average(x - 0.5 * h, x + 0.5 * h)
        })
        .collect();
    Tridiagonal {
        diag,
        off: vec![-kin; grid.interior - 1],
    }
}

/// Lowest eigenpairs of the grid Hamiltonian.
#[derive(Debug, Clone)]
pub struct GridSpectrum {
    pub grid: GridSpec,
    pub pot: PotentialSpec,
    pub values: Vec<f64>,
    /// Orthonormal (discrete) eigenvectors.
    pub vectors: Vec<Vec<f64>>,
}

/// Thermal kernel from the grid, split into bound (`E_n < 0`) and continuum
/// (`E_n > 0`) contributions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalKernel {
    pub full: f64,
    pub continuum: f64,
    pub bound: f64,
    /// `x_node − x` and `x′_node − x′`.
    pub snap_offsets: (f64, f64),
    /// Kernel one unit inside the walls relative to the kernel at the
    /// points; a proxy for wall reflections.
    pub boundary_weight: f64,
}

const TRUNCATION_DECADES: f64 = 36.9; // ln(1e16)
const LEAKAGE_LIMIT: f64 = 1e-8;

impl GridSpectrum {
    /// All eigenpairs with eigenvalue below `e_cut`.
    pub fn compute(grid: &GridSpec, pot: &PotentialSpec, e_cut: f64) -> Result<Self> {
        grid.validate()?;
        let ham = grid_hamiltonian(grid, pot);
        let m = ham.count_below(e_cut);
        let values: Vec<f64> = (0..m).into_par_iter().map(|k| ham.eigenvalue(k)).collect();
        let h = grid.step();
        let vectors = values.par_iter().map(|&l| ham.eigenvector(l)).collect();
        let _ = h;
        Ok(Self {
            grid: *grid,
            pot: *pot,
            values,
            vectors,
        })
    }

    /// Enough eigenpairs for `e^{−β̃H̃}`: all bound states plus the continuum
    /// up to `1e−16` of its leading term.
    pub fn for_thermal(grid: &GridSpec, pot: &PotentialSpec, beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(invalid("beta", "must be finite and > 0"));
        }
        let ham = grid_hamiltonian(grid, pot);
        let bound = ham.count_below(0.0);
        let lowest_continuum = ham.eigenvalue(bound);
        Self::compute(grid, pot, lowest_continuum + TRUNCATION_DECADES / beta)
    }

    /// Enough eigenpairs for the damped weight `e^{−ε̃E}`.
    pub fn for_complex_time(grid: &GridSpec, pot: &PotentialSpec, epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(invalid("epsilon", "must be finite and > 0"));
        }
        Self::compute(grid, pot, TRUNCATION_DECADES / epsilon)
    }

    fn sum(&self, i: usize, j: usize, weight: impl Fn(f64) -> Complex64, keep: impl Fn(f64) -> bool) -> Complex64 {
        let h = self.grid.step();
        self.values
            .iter()
            .zip(&self.vectors)
            .filter(|(e, _)| keep(**e))
            .map(|(&e, v)| weight(e) * (v[i] * v[j] / h))
            .sum()
    }

    pub fn thermal(&self, x: f64, xp: f64, beta: f64) -> Result<ThermalKernel> {
        let (i, dx) = self.grid.snap(x)?;
        let (j, dxp) = self.grid.snap(xp)?;
        let w = |e: f64| Complex64::new((-beta * e).exp(), 0.0);
        let continuum = self.sum(i, j, w, |e| e > 0.0).re;
        let bound = self.sum(i, j, w, |e| e <= 0.0).re;

        // wall proxy: continuum kernel from one unit inside either wall
        let (near_lo, _) = self.grid.snap(-self.grid.half_width + 1.0)?;
        let (near_hi, _) = self.grid.snap(self.grid.half_width - 1.0)?;
        let scale = self
            .sum(i, i, w, |e| e > 0.0)
            .re
            .abs()
            .max(self.sum(j, j, w, |e| e > 0.0).re.abs());
        let mut wall: f64 = 0.0;
        for b in [near_lo, near_hi] {
            for p in [i, j] {
                wall = wall.max(self.sum(b, p, w, |e| e > 0.0).re.abs());
            }
        }
        let boundary_weight = wall / scale;
        if boundary_weight > LEAKAGE_LIMIT {
            return Err(Error::BoxTooSmall(boundary_weight));
        }
        Ok(ThermalKernel {
            full: continuum + bound,
            continuum,
            bound,
            snap_offsets: (dx, dxp),
            boundary_weight,
        })
    }

    /// Full thermal sum without the wall check.
    pub fn thermal_unchecked(&self, x: f64, xp: f64, beta: f64) -> Result<f64> {
        let (i, _) = self.grid.snap(x)?;
        let (j, _) = self.grid.snap(xp)?;
        Ok(self.sum(i, j, |e| Complex64::new((-beta * e).exp(), 0.0), |_| true).re)
    }

    /// `Σ φ_n(x)φ_n(x′) e^{−iE_nτ}` over continuum states (`E_n > 0`).
    pub fn complex_time_continuum(&self, x: f64, xp: f64, tau: Complex64) -> Result<Complex64> {
        let (i, _) = self.grid.snap(x)?;
        let (j, _) = self.grid.snap(xp)?;
        Ok(self.sum(i, j, |e| (Complex64::new(0.0, -e) * tau).exp(), |e| e > 0.0))
    }

    /// Number of bound states (`E_n < 0`).
    pub fn bound_states(&self) -> Vec<f64> {
        self.values.iter().cloned().filter(|&e| e < 0.0).collect()
    }
}

/// One-shot thermal oracle at a single pair of points.
pub fn thermal_kernel_oracle(grid: &GridSpec, pot: &PotentialSpec, beta: f64, x: f64, xp: f64) -> Result<ThermalKernel> {
    GridSpectrum::for_thermal(grid, pot, beta)?.thermal(x, xp, beta)
}

/// Oracle value after a step-halving check: `fine` on `grid`, `coarse` on
/// the grid with twice the step, and the `h²` extrapolation of the two.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergedValue {
    pub fine: f64,
    pub coarse: f64,
    pub extrapolated: f64,
}

impl ConvergedValue {
    fn new(fine: f64, coarse: f64) -> Self {
        Self {
            fine,
            coarse,
            extrapolated: (4.0 * fine - coarse) / 3.0,
        }
    }

    /// Estimated error of `extrapolated` (taken as the full fine/coarse gap).
    pub fn error(&self) -> f64 {
        (self.fine - self.coarse).abs() / 3.0
    }
}

/// Result of the Crank–Nicolson reference run.
#[derive(Debug, Clone, PartialEq)]
pub struct RealtimeResult {
    pub psi: Vec<Complex64>,
    pub steps: usize,
    pub dt: f64,
    /// `|‖ψ(t)‖² − ‖ψ₀‖²| / ‖ψ₀‖²`
    pub norm_drift: f64,
    /// Largest probability found within one unit of a wall.
    pub boundary_weight: f64,
}

/// Crank–Nicolson evolution of `psi0` (samples on the interior nodes) to
/// `t̃`, with `dt ≤ h²/2`.
pub fn realtime_oracle(grid: &GridSpec, pot: &PotentialSpec, t: f64, psi0: &[Complex64]) -> Result<RealtimeResult> {
    grid.validate()?;
    if psi0.len() != grid.interior {
        return Err(invalid("psi0", "length must equal the number of interior nodes"));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(invalid("t", "must be finite and >= 0"));
    }
    let n = grid.interior;
    let h = grid.step();
    let steps = ((t / (0.5 * h * h)).ceil() as usize).max(1);
    let dt = t / steps as f64;
    let ham = grid_hamiltonian(grid, pot);
    let a = Complex64::new(0.0, 0.5 * dt);

    // Forward-elimination factors of (1 + i dt/2 H), computed once.
    let off = a * ham.off[0];
    let diag: Vec<Complex64> = ham.diag.iter().map(|&d| 1.0 + a * d).collect();
    let mut c_prime = vec![Complex64::new(0.0, 0.0); n];
    let mut inv_den = vec![Complex64::new(0.0, 0.0); n];
    inv_den[0] = 1.0 / diag[0];
    c_prime[0] = off * inv_den[0];
    for i in 1..n {
        inv_den[i] = 1.0 / (diag[i] - off * c_prime[i - 1]);
        c_prime[i] = off * inv_den[i];
    }

    let edge = (1.0 / h).ceil() as usize;
    let wall_mass = |psi: &[Complex64]| -> f64 {
        let lo: f64 = psi[..edge].iter().map(|v| v.norm_sqr()).sum();
        let hi: f64 = psi[n - edge..].iter().map(|v| v.norm_sqr()).sum();
        (lo + hi) * h
    };
    let norm0: f64 = psi0.iter().map(|v| v.norm_sqr()).sum::<f64>() * h;
    let mut psi = psi0.to_vec();
    let mut rhs = vec![Complex64::new(0.0, 0.0); n];
    let mut boundary_weight = wall_mass(&psi) / norm0;
    for step in 0..steps {
        // rhs = (1 − i dt/2 H) ψ
        for i in 0..n {
            let mut hpsi = ham.diag[i] * psi[i];
            if i > 0 {
                hpsi += ham.off[i - 1] * psi[i - 1];
            }
            if i + 1 < n {
                hpsi += ham.off[i] * psi[i + 1];
            }
            rhs[i] = psi[i] - a * hpsi;
        }
        psi[0] = rhs[0] * inv_den[0];
        for i in 1..n {
            psi[i] = (rhs[i] - off * psi[i - 1]) * inv_den[i];
        }
        for i in (0..n - 1).rev() {
            let next = psi[i + 1];
            psi[i] -= c_prime[i] * next;
        }
        if step % 256 == 255 || step + 1 == steps {
            boundary_weight = boundary_weight.max(wall_mass(&psi) / norm0);
        }
    }
    if boundary_weight > LEAKAGE_LIMIT {
        return Err(Error::BoxTooSmall(boundary_weight));
    }
    let norm: f64 = psi.iter().map(|v| v.norm_sqr()).sum::<f64>() * h;
    Ok(RealtimeResult {
        psi,
        steps,
        dt,
        norm_drift: (norm - norm0).abs() / norm0,
        boundary_weight,
    })
}

/// The twelve point pairs of the standard comparison: four left/left, three
/// inside/left, three right/left and the two mirrored pairs.
pub fn standard_pairs() -> [(f64, f64); 12] {
    [
        (-2.0, -2.0),
        (-0.5, -1.0),
        (-3.0, -1.5),
        (-0.2, -0.2),
        (0.5, -1.0),
        (0.2, -0.4),
        (0.8, -2.0),
        (1.5, -1.0),
        (2.0, -0.5),
        (3.0, -2.0),
        (-1.0, 0.5),
        (-0.6, 1.4),
    ]
}

/// `(Ũ, Δ̃)` of the standard comparison.
pub fn standard_potentials() -> [(f64, f64); 4] {
    [(-30.0, 0.0), (-30.0, 5.0), (10.0, 0.0), (10.0, 5.0)]
}

pub const STANDARD_BETA: f64 = 10.0;

/// One row of the engine/oracle comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteRow {
    pub u: f64,
    pub delta: f64,
    pub x: f64,
    pub xp: f64,
    pub engine: Result<KernelValue>,
    /// Continuum part of the oracle (comparable to the engine).
    pub oracle: ConvergedValue,
    /// Bound-state part of the oracle, absent from the engine's integral.
    pub bound: f64,
    pub boundary_weight: f64,
}

impl SuiteRow {
    pub fn difference(&self) -> Option<f64> {
        self.engine.as_ref().ok().map(|e| (e.real() - self.oracle.extrapolated).abs())
    }
}

/// Engine vs. grid oracle at `β̃` for every standard pair and one potential.
pub fn compare_thermal(
    pot: &PotentialSpec,
    beta: f64,
    pairs: &[(f64, f64)],
    grid: &GridSpec,
    opts: &QuadratureOptions,
) -> Result<Vec<SuiteRow>> {
    let fine = GridSpectrum::for_thermal(grid, pot, beta)?;
    let coarse = GridSpectrum::for_thermal(&grid.coarsened(), pot, beta)?;
    let engine = Engine::new(*pot, *opts)?;
    pairs
        .par_iter()
        .map(|&(x, xp)| {
            let f = fine.thermal(x, xp, beta)?;
            let c = coarse.thermal(x, xp, beta)?;
            Ok(SuiteRow {
                u: pot.u,
                delta: pot.delta,
                x,
                xp,
                engine: engine.density_matrix(x, xp, beta),
                oracle: ConvergedValue::new(f.continuum, c.continuum),
                bound: f.bound,
                boundary_weight: f.boundary_weight,
            })
        })
        .collect()
}

/// Summary of one potential in the standard comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteSummary {
    pub u: f64,
    pub delta: f64,
    /// `max |ρ_engine − ρ_oracle| / max |ρ_oracle|`
    pub relative_gap: f64,
    /// Largest oracle step-halving error relative to `max |ρ_oracle|`.
    pub oracle_error: f64,
    /// Largest bound-state contribution relative to `max |ρ_oracle|`.
    pub bound_gap: f64,
    pub bound_states: usize,
    pub engine_failures: usize,
}

pub fn summarize(rows: &[SuiteRow]) -> SuiteSummary {
    let scale = rows.iter().map(|r| r.oracle.extrapolated.abs()).fold(0.0, f64::max);
    let gap = rows.iter().filter_map(|r| r.difference()).fold(0.0, f64::max);
    SuiteSummary {
        u: rows.first().map_or(0.0, |r| r.u),
        delta: rows.first().map_or(0.0, |r| r.delta),
        relative_gap: gap / scale,
        oracle_error: rows.iter().map(|r| r.oracle.error()).fold(0.0, f64::max) / scale,
        bound_gap: rows.iter().map(|r| r.bound.abs()).fold(0.0, f64::max) / scale,
        bound_states: 0,
        engine_failures: rows.iter().filter(|r| r.engine.is_err()).count(),
    }
}

/// Runs the standard comparison for all four potentials.
pub fn standard_suite(grid: &GridSpec, opts: &QuadratureOptions) -> Result<Vec<(SuiteSummary, Vec<SuiteRow>)>> {
    standard_potentials()
        .iter()
        .map(|&(u, delta)| {
            let pot = PotentialSpec::new(u, delta)?;
            let rows = compare_thermal(&pot, STANDARD_BETA, &standard_pairs(), grid, opts)?;
            let mut summary = summarize(&rows);
            summary.bound_states = grid_hamiltonian(grid, &pot).count_below(0.0);
            Ok((summary, rows))
        })
        .collect()
}
