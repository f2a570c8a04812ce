//! Energy integrals `∫₀^∞ e^{−iẼτ} f(Ẽ) dẼ` with `Im τ < 0`.
//!
//! Thermal and diffusion kernels use `τ = −iβ̃`. Real time is reached as the
//! `ε̃ → 0` limit of `τ = t̃ − iε̃`, extrapolated over halvings of `ε̃`.
//!
//! The half-line is truncated where the exponential tail drops below the
//! absolute tolerance and split at the thresholds of the potential. Segments
//! touching a square-root branch point (`Ẽ = 0`, `Ẽ = Δ̃`) are mapped with
//! `Ẽ = p ± v²`. A window of half-width `η` around the removable point
//! `Ẽ = Ũ` is left out. Each segment is then refined adaptively with a
//! 15-point Gauss–Kronrod rule, largest error first.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::amplitudes::{amplitude_set, SINGULAR_WINDOW};
use crate::error::{invalid, Error, Result};
use crate::model::PotentialSpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Initial truncation `Ẽ_max = e_max_factor / (damping rate)`.
    pub e_max_factor: f64,
    /// Starting `ε̃` of the real-time regularization.
    pub epsilon_reg: f64,
    /// Number of `ε̃` values (halving each time) fed to the extrapolation.
    pub richardson_levels: usize,
    /// Bisections allowed on top of the initial panels.
    pub max_subdivisions: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            e_max_factor: 60.0,
            epsilon_reg: 1e-2,
            richardson_levels: 3,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureOptions {
    pub fn validate(&self) -> Result<()> {
        let positive = |name, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(invalid(name, "must be finite and > 0"))
            }
        };
        positive("rel_tol", self.rel_tol)?;
        positive("abs_tol", self.abs_tol)?;
        positive("e_max_factor", self.e_max_factor)?;
        positive("epsilon_reg", self.epsilon_reg)?;
        if self.richardson_levels < 1 {
            return Err(invalid("richardson_levels", "must be >= 1"));
        }
        Ok(())
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum QuadWarning {
    /// A final panel sits where `|d(Ẽ)|` is below `1e-6` of its natural scale.
    NearPole { energy: f64, ratio: f64 },
}

impl std::fmt::Display for QuadWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QuadWarning::NearPole { energy, ratio } => {
                write!(f, "near-pole(E={energy:.6e};|d|/scale={ratio:.3e})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegralResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub warnings: Vec<QuadWarning>,
}

// 15-point Kronrod abscissae and weights with the embedded 7-point Gauss rule.
/// `|x̃| + |x̃′|` covered by the fine oscillatory panels: the phase of the
/// integrand is stationary at `Ẽ = ((|x̃| + |x̃′|)/2t̃)²`.
const STATIONARY_REACH: f64 = 20.0;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct RuleResult {
    value: Complex64,
    error: f64,
    /// `∫|g|`; used to detect panels at the rounding floor.
    abs: f64,
}

fn gauss_kronrod15(g: &impl Fn(f64) -> Complex64, a: f64, b: f64) -> RuleResult {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = g(center);
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = WGK[7] * fc.norm();
    let mut f1 = [Complex64::new(0.0, 0.0); 7];
    let mut f2 = [Complex64::new(0.0, 0.0); 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        f1[j] = g(center - dx);
        f2[j] = g(center + dx);
        let s = f1[j] + f2[j];
        res_k += WGK[j] * s;
        res_abs += WGK[j] * (f1[j].norm() + f2[j].norm());
        if j % 2 == 1 {
            res_g += WG[j / 2] * s;
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).norm();
    for j in 0..7 {
        res_asc += WGK[j] * ((f1[j] - mean).norm() + (f2[j] - mean).norm());
    }
    let h = half.abs();
    let value = res_k * half;
    res_abs *= h;
    res_asc *= h;
    let mut error = ((res_k - res_g) * half).norm();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    RuleResult {
        value,
        error,
        abs: res_abs,
    }
}

/// Variable change used on one segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mapping {
    /// `Ẽ = v`
    Linear,
    /// `Ẽ = origin + v²`, `v ≥ 0`
    SqrtFrom(f64),
    /// `Ẽ = origin − v²`, `v ≥ 0`
    SqrtTo(f64),
}

impl Mapping {
    fn energy(&self, v: f64) -> f64 {
        match *self {
            Mapping::Linear => v,
            Mapping::SqrtFrom(p) => p + v * v,
            Mapping::SqrtTo(p) => p - v * v,
        }
    }

    fn jacobian(&self, v: f64) -> f64 {
        match *self {
            Mapping::Linear => 1.0,
            Mapping::SqrtFrom(_) | Mapping::SqrtTo(_) => 2.0 * v,
        }
    }
}

/// One integration segment in its own variable `v ∈ [lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub mapping: Mapping,
    pub lo: f64,
    pub hi: f64,
}

impl Segment {
    /// `[a, b]` in energy, with square-root mapping toward any branch end.
    fn from_interval(a: f64, b: f64, branch_a: bool, branch_b: bool, out: &mut Vec<Segment>) {
        if b <= a {
            return;
        }
        match (branch_a, branch_b) {
            (true, true) => {
                let m = 0.5 * (a + b);
                Self::from_interval(a, m, true, false, out);
                Self::from_interval(m, b, false, true, out);
            }
            (true, false) => {
                let w = (b - a).min(1.0);
                out.push(Segment {
                    mapping: Mapping::SqrtFrom(a),
                    lo: 0.0,
                    hi: w.sqrt(),
                });
                if b - a > w {
                    out.push(Segment {
                        mapping: Mapping::Linear,
                        lo: a + w,
                        hi: b,
                    });
                }
            }
            (false, true) => {
                let w = (b - a).min(1.0);
                if b - a > w {
                    out.push(Segment {
                        mapping: Mapping::Linear,
                        lo: a,
                        hi: b - w,
                    });
                }
                // v runs from √w (at b − w) down to 0 (at b); flip so lo < hi.
                out.push(Segment {
                    mapping: Mapping::SqrtTo(b),
                    lo: 0.0,
                    hi: w.sqrt(),
                });
            }
            (false, false) => out.push(Segment {
                mapping: Mapping::Linear,
                lo: a,
                hi: b,
            }),
        }
    }

}

#[derive(Debug, Clone, Copy)]
struct Panel {
    segment: usize,
    lo: f64,
    hi: f64,
    value: Complex64,
    error: f64,
    abs: f64,
}

#[derive(PartialEq)]
struct HeapKey(f64, usize);

impl Eq for HeapKey {}

impl PartialOrd for HeapKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .total_cmp(&other.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

/// Globally adaptive Gauss–Kronrod over a list of segments.
///
/// `g(segment, v)` returns the full integrand including Jacobian; `panels`
/// gives the initial number of equal pieces per segment.
fn adaptive(
    g: impl Fn(usize, f64) -> Complex64,
    segments: &[Segment],
    panels: &[usize],
    rel_tol: f64,
    abs_tol: f64,
    max_subdivisions: usize,
) -> Result<(Complex64, f64, usize, Vec<(usize, f64, f64)>)> {
    let mut store: Vec<Panel> = Vec::new();
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    let mut total = Complex64::new(0.0, 0.0);
    let mut total_err = 0.0;

    let eval = |s: usize, lo: f64, hi: f64| {
        let r = gauss_kronrod15(&|v| g(s, v), lo, hi);
        Panel {
            segment: s,
            lo,
            hi,
            value: r.value,
            error: r.error,
            abs: r.abs,
        }
    };

    for (s, seg) in segments.iter().enumerate() {
        let n = panels[s].max(1);
        let w = (seg.hi - seg.lo) / n as f64;
        for i in 0..n {
            let lo = seg.lo + w * i as f64;
            let hi = if i + 1 == n { seg.hi } else { lo + w };
            let p = eval(s, lo, hi);
            evaluations += 15;
            total += p.value;
            total_err += p.error;
            heap.push(HeapKey(p.error, store.len()));
            store.push(p);
        }
    }

    let mut active = vec![true; store.len()];
    let mut subdivisions = 0;
    loop {
        let tol = f64::max(rel_tol * total.norm(), abs_tol);
        if total_err <= tol {
            break;
        }
        let Some(HeapKey(_, idx)) = heap.pop() else {
            // every remaining panel is at the rounding floor
            break;
        };
        let p = store[idx];
        let mid = 0.5 * (p.lo + p.hi);
        let floor = 50.0 * f64::EPSILON * p.abs;
        let seg = &segments[p.segment];
        let too_narrow = p.hi - p.lo < 64.0 * f64::EPSILON * (seg.hi - seg.lo);
        if too_narrow || p.error <= floor {
            continue;
        }
        if subdivisions >= max_subdivisions {
            return Err(Error::NoConvergence {
                subdivisions,
                error: total_err,
            });
        }
        subdivisions += 1;
        active[idx] = false;
        let left = eval(p.segment, p.lo, mid);
        let right = eval(p.segment, mid, p.hi);
        evaluations += 30;
        total += left.value + right.value - p.value;
        total_err += left.error + right.error - p.error;
        for child in [left, right] {
            heap.push(HeapKey(child.error, store.len()));
            store.push(child);
            active.push(true);
        }
    }

    // Re-sum in panel order so the result does not depend on refinement history.
    let mut finals: Vec<&Panel> = store
        .iter()
        .zip(&active)
        .filter_map(|(p, &a)| a.then_some(p))
        .collect();
    finals.sort_by(|a, b| a.segment.cmp(&b.segment).then(a.lo.total_cmp(&b.lo)));
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    for p in &finals {
        value += p.value;
        error += p.error;
    }
    let tol = f64::max(rel_tol * value.norm(), abs_tol);
    if error > tol {
        return Err(Error::NoConvergence {
            subdivisions,
            error,
        });
    }
    let spans = finals.iter().map(|p| (p.segment, p.lo, p.hi)).collect();
    Ok((value, error, evaluations, spans))
}

/// `∫_a^b f(Ẽ) dẼ`, with square-root mapping at the ends flagged as branch
/// points.
pub fn integrate_interval(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    branch_at_a: bool,
    branch_at_b: bool,
    opts: &QuadratureOptions,
) -> Result<IntegralResult> {
    opts.validate()?;
    if !(a.is_finite() && b.is_finite() && b > a) {
        return Err(invalid("interval", "need finite a < b"));
    }
    let mut segments = Vec::new();
    Segment::from_interval(a, b, branch_at_a, branch_at_b, &mut segments);
    let panels = vec![1; segments.len()];
    let g = |s: usize, v: f64| {
        let m = segments[s].mapping;
        f(m.energy(v)) * m.jacobian(v)
    };
    let (value, error_estimate, evaluations, _) = adaptive(
        g,
        &segments,
        &panels,
        opts.rel_tol,
        opts.abs_tol,
        opts.max_subdivisions,
    )?;
    Ok(IntegralResult {
        value,
        error_estimate,
        evaluations,
        warnings: Vec::new(),
    })
}

/// `∫₀^∞ e^{−iẼτ} f(Ẽ) dẼ` for complex `τ` with `Im τ < 0`.
pub fn integrate_weighted(
    f: impl Fn(f64) -> Complex64,
    tau: Complex64,
    pot: &PotentialSpec,
    opts: &QuadratureOptions,
) -> Result<IntegralResult> {
    opts.validate()?;
    let damping = -tau.im;
    if !(damping.is_finite() && damping > 0.0 && tau.re.is_finite()) {
        return Err(invalid("tau", "need Im(tau) < 0"));
    }
    let omega = tau.re;
    let weight = |e: f64| (Complex64::new(0.0, -1.0) * tau * e).exp();
    let mut evaluations = 0usize;

    // Truncation: grow Ẽ_max until the tail bound e^{−γẼ}|f|/γ is negligible.
    let mut e_max = opts.e_max_factor / damping;
    let floor = [pot.delta, pot.u, -pot.u].into_iter().fold(0.0, f64::max);
    e_max = e_max.max(1e-3);
    for _ in 0..80 {
        let probe = [e_max, e_max * 1.013, e_max * 1.029]
            .into_iter()
            .filter(|&e| (e - pot.u).abs() > SINGULAR_WINDOW)
            .map(|e| f(e).norm())
            .fold(0.0, f64::max);
        evaluations += 3;
        let tail = (-damping * e_max).exp() * probe / damping;
        if tail < 0.1 * opts.abs_tol && e_max > 0.0 {
            break;
        }
        e_max *= 1.5;
    }
    let _ = floor;

    // Split points: (energy, is_branch_point).
    let mut points: Vec<(f64, bool)> = vec![(0.0, true), (e_max, false)];
    if pot.delta > 0.0 && pot.delta < e_max {
        points.push((pot.delta, true));
    }
    if pot.u < 0.0 && -pot.u < e_max {
        points.push((-pot.u, false));
    }
    let mut excluded = None;
    if pot.u > 0.0 && pot.u + SINGULAR_WINDOW < e_max {
        points.push((pot.u - SINGULAR_WINDOW, false));
        points.push((pot.u + SINGULAR_WINDOW, false));
        excluded = Some(pot.u);
    }
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    points.dedup_by(|a, b| {
        if a.0 == b.0 {
            b.1 |= a.1;
            true
        } else {
            false
        }
    });

    let mut segments = Vec::new();
    for pair in points.windows(2) {
        let (a, ba) = pair[0];
        let (b, bb) = pair[1];
        if let Some(u) = excluded {
            if a == u - SINGULAR_WINDOW && b == u + SINGULAR_WINDOW {
                continue;
            }
        }
        Segment::from_interval(a, b, ba, bb, &mut segments);
    }

    // Initial panels: π/(4|Re τ|) in Ẽ up to the stationary region of
    // sources/destinations within STATIONARY_REACH of the well, half an
    // oscillation period of e^{−iẼ Re τ} beyond it.
    let e_stat = pot.u.abs().max(pot.delta).max(1.0) + (0.5 * STATIONARY_REACH / omega.abs().max(1e-300)).powi(2);
    let panels: Vec<usize> = segments
        .iter()
        .map(|s| {
            let (lo, hi) = (s.mapping.energy(s.lo), s.mapping.energy(s.hi));
            let (lo, hi) = (lo.min(hi), lo.max(hi));
            let near = (hi.min(e_stat) - lo).max(0.0);
            let far = hi - lo - near;
            let periods = omega.abs() * (4.0 * near + far) / std::f64::consts::PI;
            (periods.ceil() as usize).clamp(1, 1_000_000)
        })
        .collect();

    let g = |s: usize, v: f64| {
        let m = segments[s].mapping;
        let e = m.energy(v);
        f(e) * weight(e) * m.jacobian(v)
    };
    let (value, mut error_estimate, evals, spans) = adaptive(
        g,
        &segments,
        &panels,
        opts.rel_tol,
        opts.abs_tol,
        opts.max_subdivisions,
    )?;
    evaluations += evals;

    if let Some(u) = excluded {
        let lo = f(u - SINGULAR_WINDOW) * weight(u - SINGULAR_WINDOW);
        let hi = f(u + SINGULAR_WINDOW) * weight(u + SINGULAR_WINDOW);
        evaluations += 2;
        error_estimate += 2.0 * SINGULAR_WINDOW * lo.norm().max(hi.norm());
    }

    let mut warnings: Vec<QuadWarning> = Vec::new();
    for (s, lo, hi) in spans {
        let m = segments[s].mapping;
        let e = m.energy(0.5 * (lo + hi));
        if let Ok(a) = amplitude_set(e, pot) {
            let w = a.waves;
            let scale = (w.k + w.k_u).norm() * (w.k_delta + w.k_u).norm();
            let ratio = a.denominator.norm() / scale;
            if scale > 0.0 && ratio < 1e-6 {
                warnings.push(QuadWarning::NearPole { energy: e, ratio });
            }
        }
    }

    Ok(IntegralResult {
        value,
        error_estimate,
        evaluations,
        warnings,
    })
}

/// `∫₀^∞ e^{−β̃Ẽ} f(Ẽ) dẼ`.
pub fn integrate_damped(
    f: impl Fn(f64) -> Complex64,
    beta: f64,
    pot: &PotentialSpec,
    opts: &QuadratureOptions,
) -> Result<IntegralResult> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(invalid("beta", "must be finite and > 0"));
    }
    integrate_weighted(f, Complex64::new(0.0, -beta), pot, opts)
}

/// Regularization values `ε̃₀·2^{−j}` used by [`integrate_oscillatory`].
pub fn epsilon_schedule(opts: &QuadratureOptions) -> Vec<f64> {
    (0..opts.richardson_levels)
        .map(|j| opts.epsilon_reg * 0.5f64.powi(j as i32))
        .collect()
}

/// Richardson table for values at `ε₀, ε₀/2, ε₀/4, …` with an error
/// expansion in integer powers of `ε`.
///
/// Returns the extrapolated value, the last correction, and the diagonal.
pub fn richardson(values: &[Complex64]) -> (Complex64, f64, Vec<Complex64>) {
    let n = values.len();
    assert!(n >= 1);
    let mut table: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for (j, &v) in values.iter().enumerate() {
        let mut row = vec![v];
        for m in 1..=j {
            let p = 2f64.powi(m as i32);
            let next = (p * row[m - 1] - table[j - 1][m - 1]) / (p - 1.0);
            row.push(next);
        }
        table.push(row);
    }
    let diag: Vec<Complex64> = (0..n).map(|j| table[j][j]).collect();
    let best = diag[n - 1];
    let correction = if n >= 2 {
        (table[n - 1][n - 1] - table[n - 1][n - 2]).norm()
    } else {
        0.0
    };
    (best, correction, diag)
}

/// `∫₀^∞ e^{−iẼt̃} f(Ẽ) dẼ` as the extrapolated limit of `τ = t̃ − iε̃`.
pub fn integrate_oscillatory(
    f: impl Fn(f64) -> Complex64,
    t: f64,
    pot: &PotentialSpec,
    opts: &QuadratureOptions,
) -> Result<IntegralResult> {
    if !(t.is_finite() && t > 0.0) {
        return Err(invalid("t", "must be finite and > 0"));
    }
    let mut values = Vec::new();
    let mut quad_err: f64 = 0.0;
    let mut evaluations = 0;
    let mut warnings = Vec::new();
    for eps in epsilon_schedule(opts) {
        let r = integrate_weighted(&f, Complex64::new(t, -eps), pot, opts)?;
        values.push(r.value);
        quad_err = quad_err.max(r.error_estimate);
        evaluations += r.evaluations;
        for w in r.warnings {
            if !warnings.contains(&w) {
                warnings.push(w);
            }
        }
    }
    let (value, correction, diag) = richardson(&values);
    // Each extrapolation step at most triples the propagated quadrature error.
    let amplified = quad_err * 3f64.powi(values.len() as i32 - 1);
    if diag.len() >= 3 {
        let n = diag.len();
        let current = (diag[n - 1] - diag[n - 2]).norm();
        let previous = (diag[n - 2] - diag[n - 3]).norm();
        if current > previous && current > 10.0 * amplified {
            return Err(Error::ExtrapolationUnstable { previous, current });
        }
    }
    Ok(IntegralResult {
        value,
        error_estimate: correction + amplified,
        evaluations,
        warnings,
    })
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let (p, pm1) = if n == 1 { (x, 1.0) } else { (p1, p0) };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            dp = 1.0;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn one(_: f64) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn exponential_integral() {
        let r = integrate_damped(one, 10.0, &PotentialSpec::free(), &QuadratureOptions::default()).unwrap();
        assert!((r.value - Complex64::new(0.1, 0.0)).norm() < 1e-13);
        assert!(r.error_estimate <= 1e-8 * 0.1);
    }

    #[test]
    fn inverse_sqrt_weight() {
        let f = |e: f64| Complex64::new(1.0 / e.sqrt(), 0.0);
        let r = integrate_damped(f, 10.0, &PotentialSpec::free(), &QuadratureOptions::default()).unwrap();
        assert!((r.value.re - (PI / 10.0).sqrt()).abs() < 1e-12, "{}", r.value);
    }

    #[test]
    fn sqrt_mapping_absorbs_quarter_power() {
        let opts = QuadratureOptions::default().with_tolerances(1e-13, 1e-15);
        let r = integrate_interval(|e| Complex64::new(e.powf(-0.25), 0.0), 0.0, 1.0, true, false, &opts).unwrap();
        assert!((r.value.re - 4.0 / 3.0).abs() < 1e-12, "{}", r.value.re - 4.0 / 3.0);
    }

    #[test]
    fn complex_exponential() {
        // ∫ e^{−iEt} e^{−E} dE = 1/(1 + it)
        for t in [0.5, 1.0, 3.0] {
            let r = integrate_weighted(one, Complex64::new(t, -1.0), &PotentialSpec::free(), &QuadratureOptions::default())
                .unwrap();
            let exact = 1.0 / Complex64::new(1.0, t);
            assert!((r.value - exact).norm() < 1e-10, "t={t}");
        }
    }

    fn free_closed(a: f64, tau: Complex64) -> Complex64 {
        let i = Complex64::new(0.0, 1.0);
        0.5 * (1.0 / (i * PI * tau)).sqrt() * (i * a * a / (4.0 * tau)).exp()
    }

    fn free_integrand(a: f64) -> impl Fn(f64) -> Complex64 {
        move |e: f64| Complex64::new((e.sqrt() * a).cos() / (2.0 * PI * e.sqrt()), 0.0)
    }

    #[test]
    fn free_propagator_at_complex_time() {
        let pot = PotentialSpec::free();
        let opts = QuadratureOptions::default();
        for eps in [1e-2, 5e-3] {
            let tau = Complex64::new(1.0, -eps);
            let r = integrate_weighted(free_integrand(1.0), tau, &pot, &opts).unwrap();
            let exact = free_closed(1.0, tau);
            assert!((r.value - exact).norm() / exact.norm() < 1e-7);
        }
    }

    #[test]
    fn free_propagator_extrapolated() {
        let pot = PotentialSpec::free();
        let opts = QuadratureOptions::default();
        let r = integrate_oscillatory(free_integrand(1.0), 1.0, &pot, &opts).unwrap();
        let closed: Vec<Complex64> = epsilon_schedule(&opts)
            .into_iter()
            .map(|e| free_closed(1.0, Complex64::new(1.0, -e)))
            .collect();
        let (target, _, _) = richardson(&closed);
        assert!((r.value - target).norm() / target.norm() < 1e-5);
        // and the extrapolation actually approaches the real-time value
        let exact = free_closed(1.0, Complex64::new(1.0, 0.0));
        assert!((r.value - exact).norm() / exact.norm() < 1e-4);
        assert!(r.error_estimate > 0.0);
    }

    #[test]
    fn free_propagator_decays_like_inverse_sqrt_time() {
        let pot = PotentialSpec::free();
        let opts = QuadratureOptions::default();
        let k1 = integrate_oscillatory(free_integrand(0.5), 4.0, &pot, &opts).unwrap().value;
        let k2 = integrate_oscillatory(free_integrand(0.5), 16.0, &pot, &opts).unwrap().value;
        let ratio = k1.norm() / k2.norm();
        assert!((ratio - 2.0).abs() < 0.02, "ratio {ratio}");
    }

    #[test]
    fn deterministic_and_tolerance_consistent() {
        let pot = PotentialSpec::new(10.0, 5.0).unwrap();
        let f = |e: f64| Complex64::new((3.0 * e.sqrt()).sin() / (1.0 + e), 0.0);
        let opts = QuadratureOptions::default();
        let a = integrate_damped(f, 0.7, &pot, &opts).unwrap();
        let b = integrate_damped(f, 0.7, &pot, &opts).unwrap();
        assert_eq!(a.value.re.to_bits(), b.value.re.to_bits());
        assert!(a.error_estimate <= f64::max(opts.rel_tol * a.value.norm(), opts.abs_tol));
        let tight = integrate_damped(f, 0.7, &pot, &opts.with_tolerances(1e-9, 1e-13)).unwrap();
        assert!((tight.value - a.value).norm() < 10.0 * a.error_estimate);
    }

    #[test]
    fn no_convergence_reported() {
        let opts = QuadratureOptions {
            max_subdivisions: 3,
            ..QuadratureOptions::default()
        };
        let r = integrate_interval(|e| Complex64::new((1.0 / e).sin() / e.sqrt(), 0.0), 1e-6, 1.0, false, false, &opts);
        assert!(matches!(r, Err(Error::NoConvergence { .. })));
    }

    #[test]
    fn richardson_removes_polynomial_bias() {
        let f = |e: f64| Complex64::new(2.0 + 3.0 * e - 5.0 * e * e, e);
        let vals: Vec<_> = [0.1, 0.05, 0.025].iter().map(|&e| f(e)).collect();
        let (v, _, _) = richardson(&vals);
        assert!((v - Complex64::new(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        for n in [1, 2, 5, 16] {
            let (x, w) = gauss_legendre(n);
            let sum: f64 = w.iter().sum();
            assert!((sum - 2.0).abs() < 1e-14);
            let deg = 2 * n - 1;
            let integral: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32 - 1)).sum();
            let exact = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((integral - exact).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn invalid_inputs() {
        let pot = PotentialSpec::free();
        let opts = QuadratureOptions::default();
        assert!(integrate_damped(one, 0.0, &pot, &opts).is_err());
        assert!(integrate_oscillatory(one, -1.0, &pot, &opts).is_err());
        let bad = QuadratureOptions { rel_tol: 0.0, ..opts };
        assert!(integrate_damped(one, 1.0, &pot, &bad).is_err());
    }
}
