//! Subharmonic periodic orbits of the periodically forced pendulum
//!
//! `u'' + sin u = eps * g(t)`, `g` a finite Fourier sum with period `T`.
//!
//! The crate covers the whole pipeline: the unforced period function and
//! resonant levels ([`unperturbed`]), the stroboscopic map and its
//! differential ([`strobo`]), the subharmonic Melnikov function whose simple
//! zeros give Newton seeds ([`melnikov`]), Newton shooting on the
//! stroboscopic and Poincaré maps with continuation in `eps` and
//! stability classification ([`solvers`]), and the experiment runner
//! behind the `subharm` binary ([`cli`]).

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod integrator;
pub mod melnikov;
pub mod solvers;
pub mod strobo;
pub mod unperturbed;

pub use dynamics::{ForcingSpec, ForcingTerm, PhaseKind, PlanarState, SystemSpec};
pub use error::{Error, Result};
pub use integrator::IntegratorConfig;
pub use unperturbed::{EnergyLevel, ResonanceSpec};
