//! Physical constants (SI, CODATA 2018).

use std::f64::consts::PI;

/// Planck constant, J s (exact).
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Reduced Planck constant, J s. Derived from [`PLANCK`] so that
/// `hbar * 2 pi == h` holds to rounding.
pub const HBAR: f64 = PLANCK / (2.0 * PI);

/// Boltzmann constant, J/K (exact).
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Neutron mass, kg.
pub const NEUTRON_MASS: f64 = 1.674_927_498_04e-27;
