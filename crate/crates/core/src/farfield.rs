//! Analytic far-field diffraction intensity of an N-slit grating.
//!
//! `I(x, z) = I0(x, z) sin^2(N zeta / 2) / sin^2(zeta / 2)` with the phase
//! `zeta` and single-slit envelope `I0` written in terms of the packet
//! spreading denominator `D(z) = m^2 sigma^4 + hbar^2 t^2 / 4`, `t = z / v_z`.
//!
//! Two conventions are available. [`FarFieldConvention::Textbook`] uses the
//! textbook expressions `zeta = x d m hbar t / D` and
//! `I0 = sqrt(1/pi) m sigma / sqrt(D) exp(-2 m^2 sigma^2 x^2 / D)` verbatim.
//! Those put the inter-slit phase at four times, and the envelope width at
//! half, what the propagated Gaussian packets actually produce, and `I0`
//! integrates to `1/sqrt(2)`. [`FarFieldConvention::Propagated`] (the
//! default) uses `zeta = x d m hbar t / (4 D)` and a unit-normalised `I0`
//! with variance `D / (m^2 sigma^2) = |sigma_t|^2`, which is the exact
//! large-distance limit of the packet superposition.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::numerics::linspace;
use crate::qcore::constants::HBAR;
use crate::qcore::{BeamParams, EvalContext, GratingConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum FarFieldConvention {
    #[default]
    Propagated,
    Textbook,
}

#[derive(Debug, Clone)]
pub struct FarFieldParams {
    pub beam: BeamParams,
    pub grating: GratingConfig,
    /// The N of the Dirichlet ratio; the slit count unless overridden.
    pub n_for_formula: usize,
    pub convention: FarFieldConvention,
}

impl FarFieldParams {
    pub fn new(beam: BeamParams, grating: GratingConfig) -> Self {
        let n = grating.n_slits;
        Self {
            beam,
            grating,
            n_for_formula: n,
            convention: FarFieldConvention::default(),
        }
    }

    pub fn with_convention(mut self, convention: FarFieldConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn with_n(mut self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("n_for_formula must be at least 1"));
        }
        self.n_for_formula = n;
        Ok(self)
    }
}

/// Spreading denominator `m^2 sigma^4 + hbar^2 (z / v_z)^2 / 4`, kg^2 m^4 / s^2.
pub fn d_of_z(z: f64, p: &FarFieldParams) -> f64 {
    let m = p.beam.mass;
    let s2 = p.grating.sigma * p.grating.sigma;
    let t = p.beam.time_of_flight(z);
    m * m * s2 * s2 + HBAR * HBAR * t * t / 4.0
}

/// Phase difference between neighbouring slits seen at `(x, z)`.
pub fn zeta(x: f64, z: f64, p: &FarFieldParams) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::domain(format!(
            "zeta is a far-field quantity, needs z > 0, got {z}"
        )));
    }
    let t = p.beam.time_of_flight(z);
    let raw = x * p.grating.period * p.beam.mass * HBAR * t / d_of_z(z, p);
    Ok(match p.convention {
        FarFieldConvention::Propagated => raw / 4.0,
        FarFieldConvention::Textbook => raw,
    })
}

/// Single-slit envelope `I0(x, z)`, 1/m.
pub fn envelope_i0(x: f64, z: f64, p: &FarFieldParams) -> f64 {
    let m = p.beam.mass;
    let s = p.grating.sigma;
    let d = d_of_z(z, p);
    match p.convention {
        FarFieldConvention::Propagated => {
            (m * s / (2.0 * PI * d).sqrt()) * (-m * m * s * s * x * x / (2.0 * d)).exp()
        }
        FarFieldConvention::Textbook => {
            (1.0 / PI).sqrt() * (m * s / d.sqrt()) * (-2.0 * m * m * s * s * x * x / d).exp()
        }
    }
}

/// `sin^2(n zeta / 2) / sin^2(zeta / 2)`, continued by `n^2` at `zeta = 2 pi j`.
pub fn dirichlet_ratio(zeta: f64, n: usize) -> f64 {
    let nf = n as f64;
    let half = zeta / 2.0;
    let s = half.sin();
    if s.abs() >= 1e-8 {
        let r = (nf * half).sin() / s;
        return r * r;
    }
    // reduce to the nearest multiple of pi; both squares are pi-periodic
    let u = half - PI * (half / PI).round();
    if u.abs() < 1e-4 {
        nf * nf * (1.0 - (nf * nf - 1.0) * u * u / 3.0)
    } else {
        let r = (nf * u).sin() / u.sin();
        r * r
    }
}

pub fn farfield_intensity(x: f64, z: f64, p: &FarFieldParams) -> Result<f64> {
    let zeta = zeta(x, z, p)?;
    Ok(envelope_i0(x, z, p) * dirichlet_ratio(zeta, p.n_for_formula))
}

/// Position of the `j`-th principal maximum (`zeta = 2 pi j`).
pub fn principal_maximum(j: i64, z: f64, p: &FarFieldParams) -> Result<f64> {
    let per_unit_x = zeta(1.0, z, p)?;
    Ok(2.0 * PI * j as f64 / per_unit_x)
}

/// Interval `+-(k + 1/2)` principal-maximum spacings around the axis, which
/// holds the central `2k + 1` principal maxima.
pub fn central_window(k: usize, z: f64, p: &FarFieldParams) -> Result<(f64, f64)> {
    let half = (k as f64 + 0.5) * principal_maximum(1, z, p)?.abs();
    Ok((-half, half))
}

/// One row of a simulated-versus-analytic far-field comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FarFieldSample {
    pub x: f64,
    /// Propagated packet density, divided by its maximum over the samples.
    pub simulated: f64,
    /// [`farfield_intensity`], divided by its maximum over the samples.
    pub analytic: f64,
}

/// Samples the propagated density and the analytic intensity at distance
/// `z` on `n` evenly spaced x in `[x_lo, x_hi]`, each peak-normalised.
pub fn farfield_comparison(
    z: f64,
    x_lo: f64,
    x_hi: f64,
    n: usize,
    p: &FarFieldParams,
) -> Result<Vec<FarFieldSample>> {
    if n < 2 || !(x_lo < x_hi) {
        return Err(Error::domain(
            "far-field comparison needs x_lo < x_hi and at least 2 samples",
        ));
    }
    let ctx = EvalContext::new(p.beam, p.grating.clone());
    let slice = ctx.slice(z)?;
    let xs = linspace(x_lo, x_hi, n);
    let simulated: Vec<f64> = xs.par_iter().map(|&x| slice.density(x)).collect();
    let analytic = xs
        .par_iter()
        .map(|&x| farfield_intensity(x, z, p))
        .collect::<Result<Vec<f64>>>()?;
    let peak = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    let (ps, pa) = (peak(&simulated), peak(&analytic));
    if !(ps > 0.0 && pa > 0.0) {
        return Err(Error::domain(format!(
            "far-field comparison at z = {z} has no signal in the window"
        )));
    }
    Ok(xs
        .into_iter()
        .zip(simulated.into_iter().zip(analytic))
        .map(|(x, (s, a))| FarFieldSample {
            x,
            simulated: s / ps,
            analytic: a / pa,
        })
        .collect())
}
