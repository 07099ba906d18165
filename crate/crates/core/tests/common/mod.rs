#![allow(dead_code)]

use nslit_core::qcore::constants::NEUTRON_MASS;
use nslit_core::{BeamParams, EvalContext, GratingConfig};

/// Cold neutrons at 5 nm through `n` slits of period `d`, packet width 5 nm.
pub fn neutron_ctx(n: usize, d: f64) -> EvalContext {
    let beam = BeamParams::from_wavelength(NEUTRON_MASS, 5e-9).unwrap();
    EvalContext::new(beam, GratingConfig::new(n, d, 5e-9).unwrap())
}

/// Trapezoid rule over `n` evenly spaced points of `[a, b]`.
pub fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / (n - 1) as f64;
    let inner: f64 = (1..n - 1).map(|i| f(a + h * i as f64)).sum();
    h * (inner + 0.5 * (f(a) + f(b)))
}
