//! Kernel evaluations: real-time propagator, thermal density matrix,
//! diffusion kernel, wave-packet evolution and parameter sweeps.
//!
//! Every kernel is `d·K = ∫₀^∞ e^{−iẼτ} Ã(x̃, x̃′; Ẽ) dẼ` with the spectral
//! density `Ã = −Im G̃/π`. When both points are left of the potential the
//! direct term is the free kernel and is added in closed form; only the
//! reflected part goes through quadrature.

use std::f64::consts::PI;
use std::sync::Arc;

use dashmap::DashMap;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::amplitudes::{amplitude_set, AmplitudeSet, SINGULAR_WINDOW};
use crate::error::{invalid, Error, Result};
use crate::greens::green_parts;
use crate::model::{classify_region, EvaluationPoint, PotentialSpec, Region, TimeLike};
use crate::quadrature::{
    epsilon_schedule, gauss_legendre, integrate_weighted, richardson, IntegralResult, QuadWarning,
    QuadratureOptions,
};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    RealTime,
    Thermal,
    Diffusion,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::RealTime => "real-time",
            Mode::Thermal => "thermal",
            Mode::Diffusion => "diffusion",
        }
    }
}

/// A kernel value in units of `1/d`. Thermal and diffusion values are real
/// (`value.im == 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct KernelValue {
    pub value: Complex64,
    pub error_estimate: f64,
    pub mode: Mode,
    pub warnings: Vec<QuadWarning>,
}

impl KernelValue {
    pub fn real(&self) -> f64 {
        self.value.re
    }
}

/// Free propagator `d·K₀ = ½(1/(iπτ))^{1/2} e^{i(x̃−x̃′)²/(4τ)}` for complex
/// `τ` with `Re τ > 0` or `Im τ < 0`.
pub fn free_propagator_closed(x: f64, xp: f64, tau: Complex64) -> Complex64 {
    let dx = x - xp;
    0.5 * (1.0 / (I * PI * tau)).sqrt() * (I * dx * dx / (4.0 * tau)).exp()
}

/// Free density matrix `d·ρ₀ = e^{−(x̃−x̃′)²/(4β̃)} / (2√(πβ̃))`.
pub fn free_density_closed(x: f64, xp: f64, beta: f64) -> f64 {
    let dx = x - xp;
    (-dx * dx / (4.0 * beta)).exp() / (2.0 * (PI * beta).sqrt())
}

/// Amplitudes memoized by `(Ẽ, Ũ, Δ̃)`; shared between threads.
#[derive(Debug, Default)]
pub struct AmplitudeCache {
    map: DashMap<(u64, u64, u64), AmplitudeSet>,
}

impl AmplitudeCache {
    /// Entries kept before the cache is flushed.
    pub const CAPACITY: usize = 1 << 20;

    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, energy: f64, pot: &PotentialSpec) -> Result<AmplitudeSet> {
        let key = (energy.to_bits(), pot.u.to_bits(), pot.delta.to_bits());
        if let Some(a) = self.map.get(&key) {
            return Ok(*a);
        }
        let a = amplitude_set(energy, pot)?;
        if self.map.len() >= Self::CAPACITY {
            self.map.clear();
        }
        self.map.insert(key, a);
        Ok(a)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Kernel evaluator for one potential.
#[derive(Debug, Clone)]
pub struct Engine {
    pub pot: PotentialSpec,
    pub opts: QuadratureOptions,
    cache: Option<Arc<AmplitudeCache>>,
}

impl Engine {
    pub fn new(pot: PotentialSpec, opts: QuadratureOptions) -> Result<Self> {
        opts.validate()?;
        Ok(Self {
            pot,
            opts,
            cache: None,
        })
    }

    pub fn with_cache(mut self, cache: Arc<AmplitudeCache>) -> Self {
        self.cache = Some(cache);
        self
    }

    fn amplitudes(&self, energy: f64) -> Result<AmplitudeSet> {
        match &self.cache {
            Some(c) => c.get(energy, &self.pot),
            None => amplitude_set(energy, &self.pot),
        }
    }

    /// `Ã(Ẽ)` without the free term, for `Ẽ > 0`.
    fn scattered_spectral(&self, x: f64, xp: f64, dest: Region, src: Region) -> impl Fn(f64) -> Complex64 + '_ {
        move |e: f64| {
            // The window around Ẽ = Ũ is excluded by the quadrature; nudge
            // the odd probe that lands inside it.
            let a = match self.amplitudes(e) {
                Ok(a) => a,
                Err(_) => match self.amplitudes(self.pot.u + 2.0 * SINGULAR_WINDOW) {
                    Ok(a) => a,
                    Err(_) => return Complex64::new(0.0, 0.0),
                },
            };
            let g = green_parts(x, xp, dest, src, &a).scattered;
            Complex64::new(-g.im / PI, 0.0)
        }
    }

    fn regions(&self, x: f64, xp: f64) -> Result<(Region, Region)> {
        let dest = classify_region(x)?;
        let src = classify_region(xp)?;
        match (dest, src) {
            (_, Region::Left) | (Region::Left, _) => Ok((dest, src)),
            _ => Err(Error::UnsupportedRegion { x, xp }),
        }
    }

    fn has_free_term(dest: Region, src: Region) -> bool {
        dest == Region::Left && src == Region::Left
    }

    /// Kernel at complex time `τ` (`Im τ < 0`), e.g. `τ = t̃ − iε̃`.
    pub fn propagator_at(&self, x: f64, xp: f64, tau: Complex64) -> Result<KernelValue> {
        let (dest, src) = self.regions(x, xp)?;
        let r = integrate_weighted(self.scattered_spectral(x, xp, dest, src), tau, &self.pot, &self.opts)?;
        let mut value = r.value;
        if Self::has_free_term(dest, src) {
            value += free_propagator_closed(x, xp, tau);
        }
        Ok(KernelValue {
            value,
            error_estimate: r.error_estimate,
            mode: Mode::RealTime,
            warnings: r.warnings,
        })
    }

    /// Real-time propagator `d·K(x̃, x̃′; t̃)`, extrapolated to `ε̃ → 0`.
    pub fn propagator(&self, x: f64, xp: f64, t: f64) -> Result<KernelValue> {
        if !(t.is_finite() && t > 0.0) {
            return Err(invalid("t", "must be finite and > 0"));
        }
        let (dest, src) = self.regions(x, xp)?;
        let f = self.scattered_spectral(x, xp, dest, src);
        let mut values = Vec::new();
        let mut quad_err: f64 = 0.0;
        let mut warnings: Vec<QuadWarning> = Vec::new();
        for eps in epsilon_schedule(&self.opts) {
            let r: IntegralResult = integrate_weighted(&f, Complex64::new(t, -eps), &self.pot, &self.opts)?;
            values.push(r.value);
            quad_err = quad_err.max(r.error_estimate);
            for w in r.warnings {
                if !warnings.contains(&w) {
                    warnings.push(w);
                }
            }
        }
        let (scattered, correction, diag) = richardson(&values);
        let amplified = quad_err * 3f64.powi(values.len() as i32 - 1);
        if diag.len() >= 3 {
            let n = diag.len();
            let current = (diag[n - 1] - diag[n - 2]).norm();
            let previous = (diag[n - 2] - diag[n - 3]).norm();
            if current > previous && current > 10.0 * amplified {
                return Err(Error::ExtrapolationUnstable { previous, current });
            }
        }
        let mut value = scattered;
        if Self::has_free_term(dest, src) {
            value += free_propagator_closed(x, xp, Complex64::new(t, 0.0));
        }
        Ok(KernelValue {
            value,
            error_estimate: correction + amplified,
            mode: Mode::RealTime,
            warnings,
        })
    }

    /// Thermal density matrix `d·ρ(x̃, x̃′; β̃)` (not normalized to unit trace).
    pub fn density_matrix(&self, x: f64, xp: f64, beta: f64) -> Result<KernelValue> {
        self.damped(x, xp, beta, Mode::Thermal)
    }

    /// Diffusion kernel `d·Q(x̃, x̃′; t̄)`; the potential is read in `E_D` units.
    /// Numerically identical to [`Engine::density_matrix`] at `β̃ = t̄`.
    pub fn diffusion_kernel(&self, x: f64, xp: f64, tbar: f64) -> Result<KernelValue> {
        self.damped(x, xp, tbar, Mode::Diffusion)
    }

    fn damped(&self, x: f64, xp: f64, beta: f64, mode: Mode) -> Result<KernelValue> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(invalid("beta", "must be finite and > 0"));
        }
        let (dest, src) = self.regions(x, xp)?;
        let tau = Complex64::new(0.0, -beta);
        let r = integrate_weighted(self.scattered_spectral(x, xp, dest, src), tau, &self.pot, &self.opts)?;
        let mut value = r.value.re;
        if r.value.im.abs() > 1e-10 {
            return Err(invalid("kernel", format!("imaginary residue {:e}", r.value.im)));
        }
        if Self::has_free_term(dest, src) {
            value += free_density_closed(x, xp, beta);
        }
        Ok(KernelValue {
            value: Complex64::new(value, 0.0),
            error_estimate: r.error_estimate,
            mode,
            warnings: r.warnings,
        })
    }

    pub fn evaluate(&self, point: &EvaluationPoint) -> Result<KernelValue> {
        match point.time {
            TimeLike::RealTime(t) => self.propagator(point.x, point.xp, t),
            TimeLike::Thermal(b) => self.density_matrix(point.x, point.xp, b),
            TimeLike::Diffusion(t) => self.diffusion_kernel(point.x, point.xp, t),
        }
    }
}

/// A wave function sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledWave {
    pub x0: f64,
    pub dx: f64,
    pub values: Vec<Complex64>,
}

impl SampledWave {
    pub fn new(x0: f64, dx: f64, values: Vec<Complex64>) -> Result<Self> {
        if !(x0.is_finite() && dx.is_finite() && dx > 0.0) {
            return Err(invalid("grid", "need finite origin and step > 0"));
        }
        if values.len() < 2 {
            return Err(invalid("grid", "need at least two samples"));
        }
        Ok(Self { x0, dx, values })
    }

    /// Samples `f` at `x0 + j·dx`, `j < n`.
    pub fn from_fn(x0: f64, dx: f64, n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new(x0, dx, (0..n).map(|j| f(x0 + dx * j as f64)).collect())
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x0 + self.dx * j as f64
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.values.len()).map(|j| self.x(j)).collect()
    }

    /// Trapezoid weights.
    pub fn weight(&self, j: usize) -> f64 {
        if j == 0 || j + 1 == self.values.len() {
            0.5 * self.dx
        } else {
            self.dx
        }
    }

    /// `∫|ψ|² dx̃` by the trapezoid rule.
    pub fn norm_sqr(&self) -> f64 {
        (0..self.values.len())
            .map(|j| self.weight(j) * self.values[j].norm_sqr())
            .sum()
    }

    /// `∫|ψ|²` over samples with `x̃ > a`.
    pub fn norm_sqr_beyond(&self, a: f64) -> f64 {
        (0..self.values.len())
            .filter(|&j| self.x(j) > a)
            .map(|j| self.weight(j) * self.values[j].norm_sqr())
            .sum()
    }

    /// `Φ(k) = ∫ e^{−ikx̃′} ψ(x̃′) dx̃′` by the trapezoid rule.
    pub fn fourier(&self, k: f64) -> Complex64 {
        self.values
            .iter()
            .enumerate()
            .map(|(j, &v)| self.weight(j) * (-I * k * self.x(j)).exp() * v)
            .sum()
    }
}

/// Evolved wave function on the destination points.
#[derive(Debug, Clone, PartialEq)]
pub struct PacketEvolution {
    pub x: Vec<f64>,
    pub psi: Vec<Complex64>,
    pub error_estimate: f64,
}

impl PacketEvolution {
    pub fn density(&self) -> Vec<f64> {
        self.psi.iter().map(|p| p.norm_sqr()).collect()
    }
}

/// Options of the energy grid used by [`evolve_packet`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketOptions {
    /// Gauss–Legendre nodes per panel in `k = √Ẽ`.
    pub nodes_per_panel: usize,
    /// Maximum accumulated phase per panel, in radians.
    pub phase_per_panel: f64,
    /// `|Φ(k)|` below this fraction of its maximum ends the `k` range.
    pub spectrum_cutoff: f64,
}

impl Default for PacketOptions {
    fn default() -> Self {
        Self {
            nodes_per_panel: 16,
            phase_per_panel: 4.0,
            spectrum_cutoff: 1e-15,
        }
    }
}

const SUPPORT_TOLERANCE: f64 = 1e-12;

fn check_support(psi0: &SampledWave) -> Result<()> {
    let max = psi0.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return Err(invalid("psi0", "identically zero"));
    }
    let n = psi0.values.len();
    let last = psi0.x(n - 1);
    if last >= 0.0 {
        let leak = (0..n)
            .filter(|&j| psi0.x(j) >= 0.0)
            .map(|j| psi0.values[j].norm())
            .fold(0.0, f64::max)
            / max;
        if leak > SUPPORT_TOLERANCE {
            return Err(Error::SupportViolation(leak));
        }
    }
    let edge = psi0.values[n - 1].norm() / max;
    if edge > SUPPORT_TOLERANCE {
        return Err(Error::SupportViolation(edge));
    }
    Ok(())
}

/// `B(x̃, k)` with `G̃(x̃, x̃′) = B(x̃)·e^{−ikx̃′}/(2i)` for `x̃′ < 0`, times `k`
/// (the Jacobian of `Ẽ = k²`).
fn source_profile(x: f64, dest: Region, k: f64, a: &AmplitudeSet) -> Complex64 {
    let (sk, sku, skd) = a.waves.roots();
    let kc = Complex64::new(k, 0.0);
    match dest {
        Region::Left => (I * kc * x).exp() + a.r * (-I * kc * x).exp(),
        Region::Inside => {
            let ku = a.waves.k_u;
            kc * (a.t_prime * (I * ku * x).exp() + a.r_prime * (-I * ku * x).exp()) / (sk * sku)
        }
        Region::Right => kc * a.t * (I * a.waves.k_delta * (x - 1.0)).exp() / (sk * skd),
    }
}

fn energy_nodes(
    pot: &PotentialSpec,
    k_max: f64,
    rate: f64,
    opts: &PacketOptions,
    coarsen: usize,
) -> (Vec<f64>, Vec<f64>) {
    let mut breaks = vec![0.0, k_max];
    for threshold in [pot.u, pot.delta] {
        if threshold > 0.0 && threshold.sqrt() < k_max {
            breaks.push(threshold.sqrt());
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let (gx, gw) = gauss_legendre(opts.nodes_per_panel);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for pair in breaks.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let panels = ((rate * (b - a) / opts.phase_per_panel).ceil() as usize).max(2);
        let panels = (panels / coarsen).max(1);
        let w = (b - a) / panels as f64;
        for p in 0..panels {
            let c = a + w * (p as f64 + 0.5);
            for (x, wt) in gx.iter().zip(&gw) {
                nodes.push(c + 0.5 * w * x);
                weights.push(0.5 * w * wt);
            }
        }
    }
    (nodes, weights)
}

/// Evolves `ψ₀` (supported left of the potential) to time `t̃`:
/// `ψ(x̃, t̃) = ∫ K(x̃, x̃′; t̃) ψ₀(x̃′) dx̃′`.
///
/// The `x̃′` integral is done first, in momentum space, leaving
/// `ψ(x̃) = (1/2π) ∫₀^∞ dk e^{−ik²t̃} [k B Φ₋ + conj(k B) Φ₊]` with
/// `Φ∓(k) = ∫ e^{∓ikx̃′} ψ₀`. The `k` integral uses composite Gauss–Legendre
/// on fixed nodes shared by all destination points; the error estimate
/// compares against a grid with half as many panels. Bound states (wells)
/// are not included.
pub fn evolve_packet(
    psi0: &SampledWave,
    t: f64,
    x_dest: &[f64],
    pot: &PotentialSpec,
    opts: &PacketOptions,
) -> Result<PacketEvolution> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(invalid("t", "must be finite and >= 0"));
    }
    check_support(psi0)?;
    let dests: Vec<Region> = x_dest.iter().map(|&x| classify_region(x)).collect::<Result<_>>()?;

    // k range from the spectrum of ψ₀.
    let probe: Vec<f64> = (0..=400).map(|j| 0.05 * j as f64).collect();
    let spectrum: Vec<f64> = probe.iter().map(|&k| psi0.fourier(k).norm().max(psi0.fourier(-k).norm())).collect();
    let peak = spectrum.iter().cloned().fold(0.0, f64::max);
    let last = spectrum.iter().rposition(|&s| s > opts.spectrum_cutoff * peak).unwrap_or(0);
    let k_max = probe[(last + 1).min(probe.len() - 1)].max(0.5);

    let x_span = x_dest.iter().chain([psi0.x0].iter()).fold(0.0f64, |m, x| m.max(x.abs()));
    let rate = 2.0 * k_max * t + 2.0 * x_span + 1.0;

    let run = |coarsen: usize| -> Result<Vec<Complex64>> {
        let (nodes, weights) = energy_nodes(pot, k_max, rate, opts, coarsen);
        let data: Vec<(f64, f64, AmplitudeSet, Complex64, Complex64)> = nodes
            .par_iter()
            .zip(weights.par_iter())
            .map(|(&k, &w)| {
                let e = k * k;
                let a = amplitude_set(e, pot).or_else(|_| amplitude_set(pot.u + 2.0 * SINGULAR_WINDOW, pot))?;
                Ok((k, w, a, psi0.fourier(k), psi0.fourier(-k)))
            })
            .collect::<Result<_>>()?;
        Ok(x_dest
            .par_iter()
            .zip(dests.par_iter())
            .map(|(&x, &dest)| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, w, a, phi_minus, phi_plus) in &data {
                    let b = source_profile(x, dest, *k, a);
                    let phase = (-I * k * k * t).exp();
                    acc += *w * phase * (b * phi_minus + b.conj() * phi_plus);
                }
                acc / (2.0 * PI)
            })
            .collect())
    };

    let fine = run(1)?;
    let coarse = run(2)?;
    let error_estimate = fine.iter().zip(&coarse).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    Ok(PacketEvolution {
        x: x_dest.to_vec(),
        psi: fine,
        error_estimate,
    })
}

/// Asymptotic transmitted probability of a packet from its momentum
/// distribution: `P = ∫_{k>0} |t(k²)|² |φ(k)|² dk`, `φ = Φ₋/√(2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxOracle {
    pub transmitted: f64,
    /// `∫_{k>0}|φ(k)|²`, the right-moving weight.
    pub forward_weight: f64,
    /// `∫_{k<0}|φ(k)|²`; excluded from `transmitted`.
    pub backward_weight: f64,
}

pub fn transmission_flux_oracle(psi0: &SampledWave, pot: &PotentialSpec) -> Result<FluxOracle> {
    check_support(psi0)?;
    let (gx, gw) = gauss_legendre(16);
    let mut breaks = vec![0.0, 40.0];
    for threshold in [pot.u, pot.delta] {
        if threshold > 0.0 {
            breaks.push(threshold.sqrt());
        }
    }
    breaks.sort_by(f64::total_cmp);
    let mut out = FluxOracle {
        transmitted: 0.0,
        forward_weight: 0.0,
        backward_weight: 0.0,
    };
    for pair in breaks.windows(2) {
        let panels = (((pair[1] - pair[0]) / 0.02).ceil() as usize).max(1);
        let w = (pair[1] - pair[0]) / panels as f64;
        for p in 0..panels {
            let c = pair[0] + w * (p as f64 + 0.5);
            for (x, wt) in gx.iter().zip(&gw) {
                let k = c + 0.5 * w * x;
                let weight = 0.5 * w * wt / (2.0 * PI);
                let fwd = psi0.fourier(k).norm_sqr() * weight;
                let bwd = psi0.fourier(-k).norm_sqr() * weight;
                let e = k * k;
                let t2 = if e > pot.delta {
                    match amplitude_set(e, pot) {
                        Ok(a) => a.t.norm_sqr(),
                        Err(_) => amplitude_set(pot.u + 2.0 * SINGULAR_WINDOW, pot)?.t.norm_sqr(),
                    }
                } else {
                    0.0
                };
                out.transmitted += t2 * fwd;
                out.forward_weight += fwd;
                out.backward_weight += bwd;
            }
        }
    }
    Ok(out)
}

/// Normalized Gaussian packet `ψ₀ = (2πσ²)^{−1/4} e^{ik₀x̃} e^{−(x̃−x̃₀)²/(4σ²)}`.
pub fn gaussian_packet(x: f64, x0: f64, sigma: f64, k0: f64) -> Complex64 {
    let norm = (2.0 * PI * sigma * sigma).powf(-0.25);
    let d = x - x0;
    norm * (I * k0 * x).exp() * (-d * d / (4.0 * sigma * sigma)).exp()
}

/// Free evolution of [`gaussian_packet`] in closed form.
pub fn free_gaussian_packet(x: f64, t: f64, x0: f64, sigma: f64, k0: f64) -> Complex64 {
    let norm = (2.0 * PI * sigma * sigma).powf(-0.25);
    let s2 = Complex64::new(sigma * sigma, t);
    let d = x - x0 - 2.0 * k0 * t;
    norm * (sigma / s2.sqrt()) * (I * (k0 * x - k0 * k0 * t)).exp() * (-d * d / (4.0 * s2)).exp()
}

/// Which kernel a sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    Propagator,
    Density,
    Diffusion,
}

impl KernelKind {
    pub fn mode(&self) -> Mode {
        match self {
            KernelKind::Propagator => Mode::RealTime,
            KernelKind::Density => Mode::Thermal,
            KernelKind::Diffusion => Mode::Diffusion,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParameter {
    U,
    Delta,
    X,
    Xp,
    Time,
}

impl SweepParameter {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParameter::U => "U",
            SweepParameter::Delta => "Delta",
            SweepParameter::X => "x",
            SweepParameter::Xp => "xp",
            SweepParameter::Time => "time",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepAxis {
    pub parameter: SweepParameter,
    pub lo: f64,
    pub hi: f64,
    pub samples: usize,
}

impl SweepAxis {
    pub fn new(parameter: SweepParameter, lo: f64, hi: f64, samples: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(invalid("range", "need finite lo < hi"));
        }
        if samples < 2 {
            return Err(invalid("samples", "need at least 2"));
        }
        Ok(Self {
            parameter,
            lo,
            hi,
            samples,
        })
    }

    pub fn value(&self, i: usize) -> f64 {
        self.lo + (self.hi - self.lo) * i as f64 / (self.samples - 1) as f64
    }
}

/// Fixed inputs of a sweep; swept axes override the matching field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepBase {
    pub kernel: KernelKind,
    pub x: f64,
    pub xp: f64,
    pub time: f64,
    pub u: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: SweepBase,
    pub primary: SweepAxis,
    /// Optional outer axis for two-dimensional grids.
    pub secondary: Option<SweepAxis>,
}

/// Inputs of one sweep row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepInput {
    pub x: f64,
    pub xp: f64,
    pub time: f64,
    pub u: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub input: SweepInput,
    pub result: std::result::Result<KernelValue, Error>,
}

impl SweepSpec {
    /// Presets for the six figure datasets.
    pub fn figure(n: u32) -> Result<Self> {
        use KernelKind::*;
        use SweepParameter::*;
        let base = |kernel, x, xp, u| SweepBase {
            kernel,
            x,
            xp,
            time: 10.0,
            u,
            delta: 0.0,
        };
        Ok(match n {
            1 => Self {
                base: base(Density, -2.0, -2.0, 0.0),
                primary: SweepAxis::new(U, -300.0, 0.0, 600)?,
                secondary: None,
            },
            2 => Self {
                base: base(Density, -2.0, -2.0, 0.0),
                primary: SweepAxis::new(U, 0.0, 300.0, 600)?,
                secondary: None,
            },
            3 => Self {
                base: base(Density, 2.0, -10.0, 0.0),
                primary: SweepAxis::new(U, -300.0, 0.0, 600)?,
                secondary: None,
            },
            4 => Self {
                base: base(Density, 2.0, -10.0, 0.0),
                primary: SweepAxis::new(U, 0.0, 100.0, 600)?,
                secondary: None,
            },
            5 | 6 => Self {
                base: base(Diffusion, 1.05, -3.0, if n == 5 { 10.0 } else { 0.0 }),
                primary: SweepAxis::new(Time, 1.0, 10.0, 37)?,
                secondary: Some(SweepAxis::new(X, 1.05, 3.0, 40)?),
            },
            _ => return Err(invalid("figure", "presets exist for figures 1-6")),
        })
    }

    pub fn validate(&self) -> Result<()> {
        for axis in std::iter::once(&self.primary).chain(self.secondary.as_ref()) {
            SweepAxis::new(axis.parameter, axis.lo, axis.hi, axis.samples)?;
        }
        Ok(())
    }

    /// Row inputs in output order: secondary axis outer, primary inner.
    pub fn inputs(&self) -> Vec<SweepInput> {
        let outer = self.secondary.map_or(1, |a| a.samples);
        let mut rows = Vec::with_capacity(outer * self.primary.samples);
        for j in 0..outer {
            for i in 0..self.primary.samples {
                let mut input = SweepInput {
                    x: self.base.x,
                    xp: self.base.xp,
                    time: self.base.time,
                    u: self.base.u,
                    delta: self.base.delta,
                };
                let mut set = |axis: &SweepAxis, idx: usize| {
                    let v = axis.value(idx);
                    match axis.parameter {
                        SweepParameter::U => input.u = v,
                        SweepParameter::Delta => input.delta = v,
                        SweepParameter::X => input.x = v,
                        SweepParameter::Xp => input.xp = v,
                        SweepParameter::Time => input.time = v,
                    }
                };
                if let Some(a) = &self.secondary {
                    set(a, j);
                }
                set(&self.primary, i);
                rows.push(input);
            }
        }
        rows
    }
}

/// Evaluates every row of `spec` (in parallel) in deterministic order. Row
/// failures are recorded and do not stop the sweep.
pub fn sweep(spec: &SweepSpec, opts: &QuadratureOptions) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    opts.validate()?;
    let cache = Arc::new(AmplitudeCache::new());
    let kernel = spec.base.kernel;
    Ok(spec
        .inputs()
        .into_par_iter()
        .map(|input| {
            let result = PotentialSpec::new(input.u, input.delta)
                .and_then(|pot| Engine::new(pot, *opts))
                .map(|e| e.with_cache(cache.clone()))
                .and_then(|engine| match kernel {
                    KernelKind::Propagator => engine.propagator(input.x, input.xp, input.time),
                    KernelKind::Density => engine.density_matrix(input.x, input.xp, input.time),
                    KernelKind::Diffusion => engine.diffusion_kernel(input.x, input.xp, input.time),
                });
            SweepRow { input, result }
        })
        .collect())
}
