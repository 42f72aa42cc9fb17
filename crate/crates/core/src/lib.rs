//! Simulation library for slow sound in a gas of dark solitons inside a
//! quasi-one-dimensional Bose-Einstein condensate.
//!
//! Impurities trapped by each soliton form three-level systems (qutrits).
//! Their coupling to Bogoliubov phonons sets decay rates, and driving the
//! two transitions with acoustic probe and control fields produces an
//! acoustic analogue of electromagnetically induced transparency. The crate
//! computes each link of that chain and pairs every closed-form expression
//! with an independent numerical route:
//!
//! * [`params`]: physical and reduced parameters, unit scales.
//! * [`qutrit`]: bound-state spectrum and impurity wavefunctions.
//! * [`bogoliubov`]: phonon dispersion and mode profiles.
//! * [`coupling`]: qutrit-phonon couplings (closed forms and overlaps).
//! * [`decay`]: spontaneous decay rates and the emission cascade.
//! * [`bloch`]: driven three-level dynamics, susceptibility, group velocity
//!   and pulse propagation.
//! * [`gpe`]: split-step Gross-Pitaevskii / Schrödinger solver used as an
//!   oracle for the analytic spectrum.
//!
//! All quantities are in reduced units with `ħ = m1 = ξ = μ = 1`: lengths in
//! healing lengths, energies and frequencies in units of the chemical
//! potential, times in `ħ/μ`, speeds in `ξμ/ħ = c_s`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bloch;
pub mod bogoliubov;
pub mod coupling;
pub mod decay;
mod error;
pub mod gpe;
pub mod numerics;
pub mod params;
pub mod qutrit;
pub mod table;
pub mod validation;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

pub use bloch::{DeltaMode, DensityMatrix3, DriveConfig, ResponseSpectrum};
pub use bogoliubov::BogoliubovMode;
pub use coupling::{CouplingMode, CouplingSet};
pub use decay::{DecayRates, RateRoute};
pub use gpe::{EigenResult, Field1D};
pub use numerics::Grid1D;
pub use params::{PhysicalConfig, ReducedParams};
pub use qutrit::{ImpurityStates, QutritSpectrum};
