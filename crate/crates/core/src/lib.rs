//! Matter-wave interference behind an N-slit grating.
//!
//! Each slit emits a dispersing Gaussian wavepacket; the coherent sum of the
//! packets gives the near-field Talbot carpet and, far from the grating, the
//! familiar N-slit diffraction pattern. On top of the wavefunction the crate
//! provides the Bohmian velocity field and a trajectory integrator.
//!
//! Modules:
//! - [`qcore`]: constants, beam kinematics, grating geometry, wavefunction
//! - [`farfield`]: analytic far-field intensity
//! - [`bohm`]: guidance velocity and trajectory integration
//! - [`fieldgrid`]: density sampling on (x, z) grids, cross-sections, revivals
//! - [`artifact_io`]: CSV, PGM and configuration files

// `!(a < b)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod artifact_io;
pub mod bohm;
mod error;
pub mod farfield;
pub mod fieldgrid;
pub mod numerics;
pub mod qcore;

pub use error::{Error, Result};
pub use qcore::{BeamParams, ComplexAmplitude, EvalContext, GratingConfig};
