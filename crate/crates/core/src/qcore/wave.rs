use std::f64::consts::PI;

use super::constants::HBAR;
use super::{BeamParams, ComplexAmplitude, GratingConfig};
use crate::{Error, Result};

/// Talbot length `2 d^2 / lambda`, the self-imaging distance of a grating.
pub fn talbot_length(period: f64, wavelength: f64) -> Result<f64> {
    if !(period > 0.0 && wavelength > 0.0) {
        return Err(Error::domain(format!(
            "talbot length needs positive period and wavelength, got d = {period}, lambda = {wavelength}"
        )));
    }
    Ok(2.0 * period * (period / wavelength))
}

/// Complex spreading `sigma (1 + i hbar t / (2 m sigma^2))` of a free
/// Gaussian packet after flight time `t`.
pub fn sigma_t(sigma: f64, t: f64, beam: &BeamParams) -> ComplexAmplitude {
    debug_assert!(sigma > 0.0 && t >= 0.0);
    let tau = HBAR * t / (2.0 * beam.mass * sigma * sigma);
    ComplexAmplitude::new(sigma, sigma * tau)
}

/// Fourier spectrum of the slit-plane packet centred at `x0`.
///
/// `k` is in cycles per metre (`exp(-2 pi i k x)` kernel); it is not the
/// beam wavenumber `k_z`, which is in rad/m.
pub fn packet_spectrum(k: f64, x0: f64, sigma: f64) -> ComplexAmplitude {
    let amplitude =
        (8.0 * PI * sigma * sigma).powf(0.25) * (-4.0 * PI * PI * sigma * sigma * k * k).exp();
    ComplexAmplitude::from_polar(amplitude, -2.0 * PI * k * x0)
}

/// Beam and grating together; hands out per-z [`Slice`]s.
#[derive(Debug, Clone)]
pub struct EvalContext {
    pub beam: BeamParams,
    pub grating: GratingConfig,
}

impl EvalContext {
    pub fn new(beam: BeamParams, grating: GratingConfig) -> Self {
        Self { beam, grating }
    }

    pub fn talbot_length(&self) -> f64 {
        let d = self.grating.period;
        2.0 * d * (d / self.beam.wavelength)
    }

    /// Everything about the wavefunction that depends on z alone.
    pub fn slice(&self, z: f64) -> Result<Slice<'_>> {
        if !(z >= 0.0 && z.is_finite()) {
            return Err(Error::domain(format!("z must be finite and >= 0, got {z}")));
        }
        let t = self.beam.time_of_flight(z);
        let sigma = self.grating.sigma;
        let sig_t = sigma_t(sigma, t, &self.beam);
        // principal branch of (2 / (4 pi sigma_t^2))^(1/4)
        let prefactor = (0.25 * (2.0 / (4.0 * PI * sig_t * sig_t)).ln()).exp();
        let inv_width = 1.0 / (4.0 * sigma * sig_t);
        let phase = ComplexAmplitude::from_polar(1.0, self.beam.omega * t - self.beam.k_z * z);
        Ok(Slice {
            ctx: self,
            z,
            t,
            sigma_t: sig_t,
            prefactor,
            inv_width,
            phase,
        })
    }
}

/// Wavefunction at a fixed distance z behind the grating.
#[derive(Debug, Clone, Copy)]
pub struct Slice<'a> {
    ctx: &'a EvalContext,
    pub z: f64,
    /// Flight time z / v_z, s.
    pub t: f64,
    pub sigma_t: ComplexAmplitude,
    prefactor: ComplexAmplitude,
    /// 1 / (4 sigma sigma_t)
    inv_width: ComplexAmplitude,
    /// exp(i (omega t - k_z z))
    phase: ComplexAmplitude,
}

impl Slice<'_> {
    pub fn context(&self) -> &EvalContext {
        self.ctx
    }

    /// Gaussian profile `exp(-(x - x0)^2 / (4 sigma sigma_t))` without prefactor.
    #[inline]
    fn profile(&self, x: f64, x0: f64) -> ComplexAmplitude {
        let u = x - x0;
        (-(u * u) * self.inv_width).exp()
    }

    /// Packet emitted by a slit centred at `x0`, including the z-translation phase.
    pub fn packet(&self, x: f64, x0: f64) -> ComplexAmplitude {
        self.prefactor * self.profile(x, x0) * self.phase
    }

    /// Sum over slits, walking mirror pairs (i, n-1-i) together so that the
    /// sum is exactly even in x for a symmetric grating.
    #[inline]
    fn pair_sum(&self, mut term: impl FnMut(f64) -> ComplexAmplitude) -> ComplexAmplitude {
        let centers = self.ctx.grating.slit_centers();
        let n = centers.len();
        let mut acc = ComplexAmplitude::new(0.0, 0.0);
        for i in 0..n / 2 {
            acc += term(centers[i]) + term(centers[n - 1 - i]);
        }
        if n % 2 == 1 {
            acc += term(centers[n / 2]);
        }
        acc
    }

    /// Normalised superposition `(1/n) sum_n packet(x, x_n)`.
    pub fn psi(&self, x: f64) -> ComplexAmplitude {
        let sum = self.pair_sum(|x0| self.profile(x, x0));
        sum * self.prefactor * self.phase / self.ctx.grating.n_slits as f64
    }

    /// Superposition and its analytic x-derivative.
    pub fn psi_and_gradient(&self, x: f64) -> (ComplexAmplitude, ComplexAmplitude) {
        let centers = self.ctx.grating.slit_centers();
        let n = centers.len();
        let mut psi = ComplexAmplitude::new(0.0, 0.0);
        let mut grad = ComplexAmplitude::new(0.0, 0.0);
        let mut add = |x0: f64| {
            let p = self.profile(x, x0);
            psi += p;
            grad += p * (-2.0 * (x - x0)) * self.inv_width;
        };
        for i in 0..n / 2 {
            add(centers[i]);
            add(centers[n - 1 - i]);
        }
        if n % 2 == 1 {
            add(centers[n / 2]);
        }
        let scale = self.prefactor * self.phase / n as f64;
        (psi * scale, grad * scale)
    }

    /// `Psi^-1 dPsi/dx`, evaluated with per-point exponent rescaling so that
    /// it stays finite where every packet underflows. `None` at a node.
    pub fn log_derivative(&self, x: f64) -> Option<ComplexAmplitude> {
        let centers = self.ctx.grating.slit_centers();
        let n = centers.len();
        let exponent = |x0: f64| {
            let u = x - x0;
            -(u * u) * self.inv_width
        };
        let peak = centers
            .iter()
            .map(|&c| exponent(c).re)
            .fold(f64::NEG_INFINITY, f64::max);
        let mut num = ComplexAmplitude::new(0.0, 0.0);
        let mut den = ComplexAmplitude::new(0.0, 0.0);
        let mut scale = 0.0;
        let mut pair = |a: f64, b: f64| {
            let wa = (exponent(a) - peak).exp();
            let wb = (exponent(b) - peak).exp();
            let ga = wa * (-2.0 * (x - a)) * self.inv_width;
            let gb = wb * (-2.0 * (x - b)) * self.inv_width;
            num += ga + gb;
            den += wa + wb;
            scale += wa.norm() + wb.norm();
        };
        for i in 0..n / 2 {
            pair(centers[i], centers[n - 1 - i]);
        }
        if n % 2 == 1 {
            let c = centers[n / 2];
            let w = (exponent(c) - peak).exp();
            num += w * (-2.0 * (x - c)) * self.inv_width;
            den += w;
            scale += w.norm();
        }
        if den.norm() <= 1e-300 * scale {
            None
        } else {
            Some(num / den)
        }
    }

    /// Probability density `|Psi|^2`, 1/m.
    pub fn density(&self, x: f64) -> f64 {
        let sum = self.pair_sum(|x0| self.profile(x, x0));
        let n = self.ctx.grating.n_slits as f64;
        sum.norm_sqr() * self.prefactor.norm_sqr() / (n * n)
    }
}

/// Single packet from the slit centred at `x0`.
pub fn packet_psi(x: f64, x0: f64, z: f64, ctx: &EvalContext) -> Result<ComplexAmplitude> {
    Ok(ctx.slice(z)?.packet(x, x0))
}

/// Coherent superposition over all slits.
pub fn superposed_psi(x: f64, z: f64, ctx: &EvalContext) -> Result<ComplexAmplitude> {
    Ok(ctx.slice(z)?.psi(x))
}

pub fn superposed_psi_with_gradient(
    x: f64,
    z: f64,
    ctx: &EvalContext,
) -> Result<(ComplexAmplitude, ComplexAmplitude)> {
    Ok(ctx.slice(z)?.psi_and_gradient(x))
}

pub fn density(x: f64, z: f64, ctx: &EvalContext) -> Result<f64> {
    Ok(ctx.slice(z)?.density(x))
}
