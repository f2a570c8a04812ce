//! Exact kernels `⟨x|e^{−αH}|x′⟩` for a particle crossing an asymmetric
//! rectangular potential: `V = 0` for `x < 0`, `U` for `0 < x < d`, `Δ` for
//! `x > d`.
//!
//! One spectral representation covers three kernels: the real-time
//! propagator (`α = it/ħ`), the thermal density matrix (`α = β`) and the
//! diffusion kernel (`α = t/ħ` with a diffusion energy scale). All public
//! quantities are dimensionless: lengths in `d`, energies in
//! `E_d = ħ²/2md²`, kernels in `1/d`.
//!
//! ```
//! use rectkernel::{Engine, PotentialSpec, QuadratureOptions};
//!
//! let engine = Engine::new(PotentialSpec::new(10.0, 0.0)?, QuadratureOptions::default())?;
//! let rho = engine.density_matrix(0.5, -1.0, 10.0)?;
//! assert!(rho.real() > 0.0);
//! # Ok::<(), rectkernel::Error>(())
//! ```

pub mod amplitudes;
pub mod cli;
pub mod engines;
pub mod error;
pub mod greens;
pub mod model;
pub mod oracle;
pub mod quadrature;

pub use amplitudes::{amplitude_set, AmplitudeSet, WaveNumbers};
pub use engines::{Engine, KernelValue, Mode, SweepSpec};
pub use error::{Error, Result};
pub use model::{EvaluationPoint, PotentialSpec, Region, TimeLike};
pub use quadrature::{IntegralResult, QuadratureOptions};
