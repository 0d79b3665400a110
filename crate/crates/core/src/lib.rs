//! Geometric phase of a moving electric dipole near a distant magnetic sheet.
//!
//! The dipole's centre of mass never overlaps the field, yet the field
//! momentum stored in the overlap of its charges' Coulomb fields with the
//! sheet's magnetic field produces a measurable phase
//! `phi = [d . Pi_q(R_f) - d . Pi_q(R_i)] / (hbar q)`.
//!
//! Modules, bottom-up:
//!
//! - [`constants`], [`geometry`]: Gaussian-CGS constants, vectors, polylines.
//! - [`quadrature`]: adaptive cubature over (semi-)infinite boxes and refined
//!   line integrals.
//! - [`fieldmom`]: the slab field, the charge's Coulomb field, the field
//!   momentum `Pi_q`, its gradient and the curl identity.
//! - [`phase`]: endpoint and path forms of the geometric phase, the sheet
//!   closed form, the loop (HMW) phase and the Maxwell-dual phase.
//! - [`interferometer`]: two-level state preparation, evolution and readout.
//! - [`gauge`]: the potential-based phase in two explicit gauges.
//! - [`verify`]: the invariant battery run by the CLI `verify` command.

pub mod constants;
pub mod error;
pub mod fieldmom;
pub mod gauge;
pub mod geometry;
pub mod interferometer;
pub mod parallel;
pub mod phase;
pub mod quadrature;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{LineSample, Trajectory, Vec3};
pub use parallel::Execution;
pub use quadrature::QuadratureResult;
