//! Generalized laser rate equations for nanolasers with collective
//! emitter–emitter effects.
//!
//! The model keeps, next to photon number and inversion, the emitter–field
//! correlation Σ and the dipole–dipole correlation D. Its stationary
//! solution is closed-form; photon statistics g₂ follow from it. The crate
//! also carries the conventional rate-equation limit, a semiconductor-like
//! level scheme, a small explicit ODE integrator and the parameter-sweep
//! machinery behind the `glre` command-line tool.
//!
//! All model code is generic over [`Real`] (`f32`/`f64`); the `*64`
//! aliases below are the double-precision instantiations used by the CLI.

pub mod error;
pub mod figures;
pub mod integrator;
pub mod lre;
pub mod params;
pub mod scalar;
pub mod semiconductor;
pub mod statistics;
pub mod sweep;
pub mod two_level;

pub use error::{Error, Result};
pub use figures::Figure;
pub use integrator::{
    find_steady, find_steady_balanced, integrate, integrate_balanced, IntegrationConfig, Trajectory,
};
pub use lre::LreState;
pub use params::{DerivedParams, DimensionlessParams, LaserParams};
pub use scalar::Real;
pub use semiconductor::SemiState;
pub use sweep::{Model, PumpGrid, Spacing, SweepRecord, SweepSpec};
pub use two_level::{GlreState, StateDerivative};

pub type LaserParams64 = LaserParams<f64>;
pub type LaserParams32 = LaserParams<f32>;
pub type DimensionlessParams64 = DimensionlessParams<f64>;
pub type DerivedParams64 = DerivedParams<f64>;
pub type DerivedParams32 = DerivedParams<f32>;
pub type GlreState64 = GlreState<f64>;
pub type SemiState64 = SemiState<f64>;
pub type LreState64 = LreState<f64>;
pub type IntegrationConfig64 = IntegrationConfig<f64>;
