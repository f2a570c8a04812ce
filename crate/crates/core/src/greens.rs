//! Retarded Green functions of the rectangular potential.
//!
//! Values are dimensionless: `G̃ = E_d·d·G⁺ = (ħ²/2md)·G⁺`, the kernel of
//! `(Ẽ − H̃ + i0)⁻¹` for `H̃ = −∂² + V`. In this normalization the free Green
//! function is `e^{ik|x−x′|}/(2ik)` and the spectral density
//! `Ã = −Im G̃/π` integrates against `e^{−iẼτ}` to give `d·K`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::amplitudes::{amplitude_set, step_amplitudes, wave_number, AmplitudeSet, WaveNumbers};
use crate::error::{Error, Result};
use crate::model::{classify_region, PotentialSpec, Region};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenValue {
    pub g_plus: Complex64,
    /// `−Im G̃/π`
    pub spectral: f64,
    /// Region of the destination point.
    pub region: Region,
}

/// Free Green function in a medium with constant potential `offset`.
pub fn free_green(x: f64, xp: f64, energy: f64, offset: f64) -> Result<Complex64> {
    if energy == offset {
        return Err(Error::ThresholdEnergy(energy));
    }
    Ok(free_green_k(wave_number(energy, offset), (x - xp).abs()))
}

fn free_green_k(k: Complex64, distance: f64) -> Complex64 {
    (I * k * distance).exp() / (2.0 * I * k)
}

/// Green function split into the direct free term (non-zero only when both
/// points are left of the potential) and the scattered remainder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenParts {
    pub free: Complex64,
    pub scattered: Complex64,
}

impl GreenParts {
    pub fn total(&self) -> Complex64 {
        self.free + self.scattered
    }
}

fn check_pair(x: f64, xp: f64) -> Result<(Region, Region)> {
    let dest = classify_region(x)?;
    let src = classify_region(xp)?;
    match (dest, src) {
        (_, Region::Left) | (Region::Left, _) => Ok((dest, src)),
        _ => Err(Error::UnsupportedRegion { x, xp }),
    }
}

fn check_energy(energy: f64, pot: &PotentialSpec) -> Result<()> {
    if energy == 0.0 || energy == pot.delta {
        return Err(Error::ThresholdEnergy(energy));
    }
    Ok(())
}

/// Closed-form Green function from precomputed amplitudes.
///
/// `dest`/`src` must be a supported pair (one of them left of the potential).
pub fn green_parts(x: f64, xp: f64, dest: Region, src: Region, a: &AmplitudeSet) -> GreenParts {
    let WaveNumbers { k, k_u, k_delta } = a.waves;
    let (sk, sku, skd) = a.waves.roots();
    let zero = Complex64::new(0.0, 0.0);
    let scattered = |g: Complex64| GreenParts { free: zero, scattered: g };
    match (dest, src) {
        (Region::Right, Region::Left) => scattered(
            (I * k_delta * (x - 1.0)).exp() * a.t * (-I * k * xp).exp() / (2.0 * I * sk * skd),
        ),
        (Region::Left, Region::Right) => scattered(
            (-I * k * x).exp() * a.t * (I * k_delta * (xp - 1.0)).exp() / (2.0 * I * sk * skd),
        ),
        (Region::Inside, Region::Left) => scattered(
            ((I * k_u * x).exp() * a.t_prime + (-I * k_u * x).exp() * a.r_prime)
                * (-I * k * xp).exp()
                / (2.0 * I * sk * sku),
        ),
        (Region::Left, Region::Inside) => scattered(
            (-I * k * x).exp()
                * (a.t_prime * (I * k_u * xp).exp() + a.r_prime * (-I * k_u * xp).exp())
                / (2.0 * I * sk * sku),
        ),
        (Region::Left, Region::Left) => GreenParts {
            free: free_green_k(k, (x - xp).abs()),
            scattered: a.r * (-I * k * (x + xp)).exp() / (2.0 * I * k),
        },
        _ => unreachable!("unsupported region pair"),
    }
}

/// `G̃(x, x′; Ẽ)` for a source left of the potential (or the mirrored pair).
pub fn regional_green(x: f64, xp: f64, energy: f64, pot: &PotentialSpec) -> Result<GreenValue> {
    let (dest, src) = check_pair(x, xp)?;
    check_energy(energy, pot)?;
    let a = amplitude_set(energy, pot)?;
    let g = green_parts(x, xp, dest, src, &a).total();
    Ok(GreenValue {
        g_plus: g,
        spectral: -g.im / PI,
        region: dest,
    })
}

/// The same Green function assembled by multiple scattering off the two
/// steps: free propagation between the steps, single-step t-matrices, and the
/// resummed denominator `D⁺`. Shares nothing with [`regional_green`] beyond
/// the wave numbers.
pub fn mst_green(x: f64, xp: f64, energy: f64, pot: &PotentialSpec) -> Result<Complex64> {
    let (dest, src) = check_pair(x, xp)?;
    check_energy(energy, pot)?;
    if (energy - pot.u).abs() <= crate::amplitudes::SINGULAR_WINDOW {
        return Err(Error::NearSingularEnergy {
            energy,
            window: crate::amplitudes::SINGULAR_WINDOW,
        });
    }
    let WaveNumbers { k, k_u, k_delta } = WaveNumbers::new(energy, pot);
    let s0 = step_amplitudes(k, k_u)?;
    let sd = step_amplitudes(k_u, k_delta)?;

    let g0 = free_green_k;
    let across = g0(k_u, 1.0);
    let denom = 1.0 - sd.t_lt * across * s0.t_gt * across;
    let t_full = sd.t_gtlt * across * s0.t_gtlt / denom;
    let t_in = s0.t_gtlt / denom;
    let r_in = sd.t_lt * across * t_in;
    let r_full = s0.t_lt + s0.t_gtlt * across * sd.t_lt * across * s0.t_gtlt / denom;

    Ok(match (dest, src) {
        (Region::Right, Region::Left) => g0(k_delta, x - 1.0) * t_full * g0(k, -xp),
        (Region::Left, Region::Right) => g0(k, -x) * t_full * g0(k_delta, xp - 1.0),
        (Region::Inside, Region::Left) => {
            g0(k_u, x) * t_in * g0(k, -xp) + g0(k_u, 1.0 - x) * r_in * g0(k, -xp)
        }
        (Region::Left, Region::Inside) => {
            g0(k, -x) * t_in * g0(k_u, xp) + g0(k, -x) * r_in * g0(k_u, 1.0 - xp)
        }
        (Region::Left, Region::Left) => g0(k, (x - xp).abs()) + g0(k, -x) * r_full * g0(k, -xp),
        _ => unreachable!(),
    })
}
