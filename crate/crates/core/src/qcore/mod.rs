//! Wavefunction core: constants, beam kinematics, grating geometry and the
//! dispersing Gaussian packets emitted by each slit.

mod beam;
pub mod constants;
mod grating;
mod wave;

pub use beam::BeamParams;
pub use grating::GratingConfig;
pub use wave::{
    density, packet_psi, packet_spectrum, sigma_t, superposed_psi, superposed_psi_with_gradient,
    talbot_length, EvalContext, Slice,
};

/// Complex number carrying wavefunction values (m^-1/2) and the complex
/// spreading width (m).
pub type ComplexAmplitude = num_complex::Complex64;
