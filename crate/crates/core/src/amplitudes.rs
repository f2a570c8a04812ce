//! Wave numbers with the evanescent continuation, the transmission and
//! reflection amplitudes of the rectangular potential, and the single-step
//! amplitudes and t-matrices used by the multiple-scattering assembly.
//!
//! Every square root is taken onto `{non-negative real} ∪ {positive
//! imaginary}`: below a threshold `k = i·√(offset − E)`, so `e^{ikx}` decays
//! for `x > 0`. Fourth roots are the principal square roots of those values.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::PotentialSpec;

/// Half-width of the excluded window around the removable point `E = U`.
pub const SINGULAR_WINDOW: f64 = 1e-9;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `√(E − offset)` continued to `i·√(offset − E)` below the threshold.
pub fn wave_number(energy: f64, offset: f64) -> Complex64 {
    let s = energy - offset;
    if s >= 0.0 {
        Complex64::new(s.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-s).sqrt())
    }
}

fn on_branch(k: Complex64) -> bool {
    let tol = 1e-14 * k.norm();
    (k.im.abs() <= tol && k.re >= 0.0) || (k.re.abs() <= tol && k.im > 0.0)
}

/// Principal square root of a wave number (`√k`, i.e. `(E − offset)^{1/4}`).
pub fn fourth_root_velocity(k: Complex64) -> Result<Complex64> {
    if !on_branch(k) {
        return Err(Error::BranchViolation(k));
    }
    Ok(k.sqrt())
}

/// Wave numbers on the three sides of the potential at one energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveNumbers {
    /// `x < 0`
    pub k: Complex64,
    /// `0 < x < 1`
    pub k_u: Complex64,
    /// `x > 1`
    pub k_delta: Complex64,
}

impl WaveNumbers {
    pub fn new(energy: f64, pot: &PotentialSpec) -> Self {
        Self {
            k: wave_number(energy, 0.0),
            k_u: wave_number(energy, pot.u),
            k_delta: wave_number(energy, pot.delta),
        }
    }

    /// Group velocities `dE/dk = 2k` in units of `d·E_d/ħ`.
    pub fn velocities(&self) -> [Complex64; 3] {
        [2.0 * self.k, 2.0 * self.k_u, 2.0 * self.k_delta]
    }

    /// `(√k, √k_u, √k_Δ)`.
    pub fn roots(&self) -> (Complex64, Complex64, Complex64) {
        (self.k.sqrt(), self.k_u.sqrt(), self.k_delta.sqrt())
    }
}

/// Transmission and reflection amplitudes of the whole potential, in the
/// symmetric `√(k k_Δ)` normalization (so `|r|² + |t|² = 1` for propagating
/// channels).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeSet {
    pub t: Complex64,
    pub t_prime: Complex64,
    pub r_prime: Complex64,
    pub r: Complex64,
    pub denominator: Complex64,
    pub waves: WaveNumbers,
}

/// Amplitudes at dimensionless energy `energy`.
///
/// Energies below zero are evaluated with the evanescent continuation; a
/// window of half-width [`SINGULAR_WINDOW`] around `E = U`, where the
/// denominator has a removable zero, is rejected.
pub fn amplitude_set(energy: f64, pot: &PotentialSpec) -> Result<AmplitudeSet> {
    if !energy.is_finite() {
        return Err(crate::error::invalid("E", "must be finite"));
    }
    if (energy - pot.u).abs() <= SINGULAR_WINDOW {
        return Err(Error::NearSingularEnergy {
            energy,
            window: SINGULAR_WINDOW,
        });
    }
    let waves = WaveNumbers::new(energy, pot);
    let WaveNumbers { k, k_u, k_delta } = waves;
    let (sk, sku, skd) = waves.roots();

    let phase = (I * k_u).exp();
    let phase2 = phase * phase;
    let d = (k + k_u) * (k_delta + k_u) - (k - k_u) * (k_delta - k_u) * phase2;

    let t = 4.0 * sk * skd * k_u * phase / d;
    let t_prime = 2.0 * sk * sku * (k_delta + k_u) / d;
    let r_prime = 2.0 * sk * sku * (k_u - k_delta) * phase2 / d;
    let r = ((k - k_u) * (k_delta + k_u) - (k + k_u) * (k_delta - k_u) * phase2) / d;

    Ok(AmplitudeSet {
        t,
        t_prime,
        r_prime,
        r,
        denominator: d,
        waves,
    })
}

/// One potential step with wave number `k_left` on its left (`<`) side and
/// `k_right` on its right (`>`) side.
///
/// All quantities are in the dimensionless resolvent normalization: the free
/// interface Green value is `1/(2ik)` and `T = 2ik·r` for reflection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepAmplitudes {
    /// Reflection back to the right side.
    pub r_gt: Complex64,
    /// Reflection back to the left side.
    pub r_lt: Complex64,
    pub t_s: Complex64,
    /// t-matrices `T_>`, `T_<`, `T_><`.
    pub t_gt: Complex64,
    pub t_lt: Complex64,
    pub t_gtlt: Complex64,
    /// Step-localized effective potentials `H_>`, `H_<`, `H_><`.
    pub h_gt: Complex64,
    pub h_lt: Complex64,
    pub h_gtlt: Complex64,
    /// Interface Green values for the reflection and transmission channels.
    pub g_gt: Complex64,
    pub g_lt: Complex64,
    pub g_gtlt: Complex64,
}

pub fn step_amplitudes(k_left: Complex64, k_right: Complex64) -> Result<StepAmplitudes> {
    let sum = k_left + k_right;
    if sum.norm() == 0.0 {
        return Err(Error::DegenerateStep);
    }
    let (sl, sr) = (k_left.sqrt(), k_right.sqrt());
    let r_gt = (k_right - k_left) / sum;
    let r_lt = -r_gt;
    let t_s = 2.0 * sr * sl / sum;

    let two_i = 2.0 * I;
    let root_sum = sr + sl;
    Ok(StepAmplitudes {
        r_gt,
        r_lt,
        t_s,
        t_gt: two_i * k_right * r_gt,
        t_lt: two_i * k_left * r_lt,
        t_gtlt: two_i * sr * sl * t_s,
        h_gt: I * (k_right - k_left),
        h_lt: I * (k_left - k_right),
        h_gtlt: 4.0 * I * k_right * k_left / (root_sum * root_sum),
        g_gt: 1.0 / (two_i * k_right),
        g_lt: 1.0 / (two_i * k_left),
        g_gtlt: 1.0 / (two_i * sr * sl),
    })
}

/// A zero of `d(E)` below the continuum, i.e. a bound state of a well.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenominatorZero {
    pub energy: f64,
    /// `|d(E)|` at the located energy.
    pub residual: f64,
}

/// Locates zeros of `d(E)` on `(−|U|, 0)` for a well.
///
/// On that interval `k`, `k_Δ` are imaginary and `k_u` is real, and
/// `d(E)·e^{−ik_u}` is purely imaginary; its sign changes bracket the zeros.
/// Barriers (`U ≥ 0`) have no such interval and return an empty list.
pub fn scan_denominator_zeros(pot: &PotentialSpec, samples: usize) -> Vec<DenominatorZero> {
    if pot.u >= 0.0 || samples < 2 {
        return Vec::new();
    }
    let g = |e: f64| {
        let w = WaveNumbers::new(e, pot);
        let a = (w.k + w.k_u) * (w.k_delta + w.k_u) * (-I * w.k_u).exp();
        a.im
    };
    let lo = pot.u + 1e-9 * pot.u.abs().max(1.0);
    let hi = -1e-12;
    let step = (hi - lo) / (samples - 1) as f64;
    let mut zeros = Vec::new();
    let mut prev_e = lo;
    let mut prev_g = g(lo);
    for i in 1..samples {
        let e = lo + step * i as f64;
        let ge = g(e);
        if prev_g == 0.0 || prev_g.signum() != ge.signum() {
            let (mut a, mut b, mut ga) = (prev_e, e, prev_g);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                let gm = g(m);
                if gm.signum() == ga.signum() && gm != 0.0 {
                    a = m;
                    ga = gm;
                } else {
                    b = m;
                }
            }
            let energy = 0.5 * (a + b);
            let w = WaveNumbers::new(energy, pot);
            let ph = (2.0 * I * w.k_u).exp();
            let d = (w.k + w.k_u) * (w.k_delta + w.k_u) - (w.k - w.k_u) * (w.k_delta - w.k_u) * ph;
            zeros.push(DenominatorZero {
                energy,
                residual: d.norm(),
            });
        }
        prev_e = e;
        prev_g = ge;
    }
    zeros
}
