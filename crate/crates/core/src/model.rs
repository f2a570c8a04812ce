//! Potential, physical scales and the dimensionless coordinates used by the
//! numeric core.
//!
//! Lengths are measured in the potential width `d`, energies in
//! `E_d = ħ²/2md²` and real time in `ħ/E_d`. In diffusion mode the roles are
//! taken by `E_D = 2mD²/d²` and `t_D = d²/D`. With these units the Hamiltonian
//! is `-∂²/∂x² + V(x)` with `V = U` on `(0, 1)` and `V = Δ` on `(1, ∞)`.

use crate::error::{invalid, Error, Result};

/// Reduced Planck constant, erg·s.
pub const HBAR_CGS: f64 = 1.054_571_817e-27;
/// Electron rest mass, g.
pub const ELECTRON_MASS_G: f64 = 9.109_383_701_5e-28;
/// Boltzmann constant, erg/K.
pub const BOLTZMANN_CGS: f64 = 1.380_649e-16;
/// One electronvolt in erg.
pub const ERG_PER_EV: f64 = 1.602_176_634e-12;

/// Points closer than this to a step are rejected.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

/// Dimensionless rectangular potential: `U` on `0 < x < 1`, `Δ` for `x > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSpec {
    /// Barrier (`U > 0`) or well (`U < 0`) height in units of the energy scale.
    pub u: f64,
    /// Asymptotic step on the right, `Δ ≥ 0`.
    pub delta: f64,
}

impl PotentialSpec {
    pub fn new(u: f64, delta: f64) -> Result<Self> {
        if !u.is_finite() {
            return Err(invalid("U", "must be finite"));
        }
        if !delta.is_finite() || delta < 0.0 {
            return Err(invalid("Delta", "must be finite and >= 0"));
        }
        Ok(Self { u, delta })
    }

    pub fn free() -> Self {
        Self { u: 0.0, delta: 0.0 }
    }

    /// Potential value at a point away from the steps.
    pub fn value_at(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else if x < 1.0 {
            self.u
        } else {
            self.delta
        }
    }

    /// Mean of `V` over `[a, b]`.
    pub fn cell_average(&self, a: f64, b: f64) -> f64 {
        debug_assert!(b > a);
        let overlap = |lo: f64, hi: f64| (b.min(hi) - a.max(lo)).max(0.0);
        (self.u * overlap(0.0, 1.0) + self.delta * overlap(1.0, f64::INFINITY)) / (b - a)
    }
}

/// Physical scales in CGS units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scales {
    /// Potential width, cm.
    pub d: f64,
    /// Particle mass, g.
    pub m: f64,
    /// Action unit, erg·s.
    pub hbar: f64,
    /// Diffusion coefficient, cm²/s. Only used in diffusion mode.
    pub diffusion: f64,
}

impl Scales {
    pub fn new(d: f64, m: f64, hbar: f64, diffusion: f64) -> Result<Self> {
        for (name, v) in [("d", d), ("m", m), ("hbar", hbar), ("D", diffusion)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(name, "must be finite and > 0"));
            }
        }
        Ok(Self {
            d,
            m,
            hbar,
            diffusion,
        })
    }

    /// An electron in a layer of width `d` (cm), with unit diffusion coefficient.
    pub fn electron(d: f64) -> Result<Self> {
        Self::new(d, ELECTRON_MASS_G, HBAR_CGS, 1.0)
    }

    /// `E_d = ħ²/2md²`, erg.
    pub fn energy_unit(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.m * self.d * self.d)
    }

    /// `ħ/E_d`, s.
    pub fn time_unit(&self) -> f64 {
        self.hbar / self.energy_unit()
    }

    /// Characteristic temperature `E_d/k_B`, K.
    pub fn temperature_unit(&self) -> f64 {
        self.energy_unit() / BOLTZMANN_CGS
    }

    /// Diffusion time `t_D = d²/D`, s.
    pub fn diffusion_time(&self) -> f64 {
        self.d * self.d / self.diffusion
    }

    /// Diffusion energy scale `E_D = 2mD²/d²`, erg.
    pub fn diffusion_energy(&self) -> f64 {
        2.0 * self.m * self.diffusion * self.diffusion / (self.d * self.d)
    }
}

/// A physical sample: position (cm), energy (erg), time (s), temperature (K).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalPoint {
    pub x: f64,
    pub energy: f64,
    pub time: f64,
    pub temperature: f64,
}

/// The same sample in units of `d`, `E_d`, `ħ/E_d`; `beta = E_d/k_BT`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessPoint {
    pub x: f64,
    pub energy: f64,
    pub time: f64,
    pub beta: f64,
}

pub fn to_dimensionless(scales: &Scales, p: &PhysicalPoint) -> DimensionlessPoint {
    let e_d = scales.energy_unit();
    DimensionlessPoint {
        x: p.x / scales.d,
        energy: p.energy / e_d,
        time: p.time * e_d / scales.hbar,
        beta: e_d / (BOLTZMANN_CGS * p.temperature),
    }
}

pub fn from_dimensionless(scales: &Scales, p: &DimensionlessPoint) -> PhysicalPoint {
    let e_d = scales.energy_unit();
    PhysicalPoint {
        x: p.x * scales.d,
        energy: p.energy * e_d,
        time: p.time * scales.hbar / e_d,
        temperature: e_d / (BOLTZMANN_CGS * p.beta),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// `x < 0`
    Left,
    /// `0 < x < 1`
    Inside,
    /// `x > 1`
    Right,
}

impl Region {
    pub fn name(&self) -> &'static str {
        match self {
            Region::Left => "left",
            Region::Inside => "inside",
            Region::Right => "right",
        }
    }
}

pub fn classify_region(x: f64) -> Result<Region> {
    if !x.is_finite() {
        return Err(invalid("x", "must be finite"));
    }
    if x.abs() <= BOUNDARY_TOLERANCE || (x - 1.0).abs() <= BOUNDARY_TOLERANCE {
        return Err(Error::BoundaryPoint(x));
    }
    Ok(if x < 0.0 {
        Region::Left
    } else if x < 1.0 {
        Region::Inside
    } else {
        Region::Right
    })
}

/// Which of the three kernels a time-like parameter refers to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeLike {
    /// Real time `t̃` in units of `ħ/E_d`.
    RealTime(f64),
    /// Inverse temperature `β̃ = E_d/k_BT`.
    Thermal(f64),
    /// Diffusion time `t̄ = t/t_D`.
    Diffusion(f64),
}

impl TimeLike {
    pub fn value(&self) -> f64 {
        match *self {
            TimeLike::RealTime(v) | TimeLike::Thermal(v) | TimeLike::Diffusion(v) => v,
        }
    }
}

/// Destination `x`, source `xp` and a time-like parameter, all dimensionless.
///
/// The source sits left of the potential. The mirrored configuration (source
/// inside or right of the potential, destination on the left) is accepted as
/// well; it is evaluated through the reversed Green function lines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluationPoint {
    pub x: f64,
    pub xp: f64,
    pub time: TimeLike,
}

impl EvaluationPoint {
    pub fn new(x: f64, xp: f64, time: TimeLike) -> Result<Self> {
        let point = Self { x, xp, time };
        point.regions()?;
        let t = time.value();
        if !(t.is_finite() && t > 0.0) {
            return Err(invalid("time", "time-like parameter must be finite and > 0"));
        }
        Ok(point)
    }

    /// `(destination, source)` regions, validated against the supported pairs.
    pub fn regions(&self) -> Result<(Region, Region)> {
        let dest = classify_region(self.x)?;
        let src = classify_region(self.xp)?;
        match (dest, src) {
            (_, Region::Left) | (Region::Left, _) => Ok((dest, src)),
            _ => Err(Error::UnsupportedRegion {
                x: self.x,
                xp: self.xp,
            }),
        }
    }
}
