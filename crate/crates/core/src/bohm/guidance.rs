use crate::qcore::constants::HBAR;
use crate::qcore::{EvalContext, Slice};
use crate::{Error, Result};

/// Transverse guidance velocity `(hbar/m) Im(Psi^-1 dPsi/dx)` on one slice.
/// `None` at a node of the wavefunction.
pub fn slice_velocity(slice: &Slice<'_>, x: f64) -> Option<f64> {
    let ratio = slice.log_derivative(x)?;
    Some(HBAR / slice.context().beam.mass * ratio.im)
}

/// Transverse guidance velocity at `(x, z)`, m/s.
pub fn guidance_velocity(x: f64, z: f64, ctx: &EvalContext) -> Result<f64> {
    let slice = ctx.slice(z)?;
    slice_velocity(&slice, x).ok_or(Error::Node { x, z })
}
