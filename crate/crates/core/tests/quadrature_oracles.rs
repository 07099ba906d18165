//! Quadrature checks of the closed-form packet: unitarity and agreement with
//! the inverse Fourier transform of the slit spectrum.

mod common;

use std::f64::consts::PI;

use common::{neutron_ctx, trapezoid};
use nslit_core::qcore::constants::HBAR;
use nslit_core::qcore::{packet_psi, packet_spectrum};
use nslit_core::ComplexAmplitude;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn single_packet_density_integrates_to_one() {
    let ctx = neutron_ctx(1, 50e-9);
    let z_t = ctx.talbot_length();
    for z in [0.0, z_t / 1000.0, z_t / 4.0, z_t, 100.0 * z_t] {
        let s = ctx.slice(z).unwrap();
        let w = 40.0 * s.sigma_t.norm();
        let total = trapezoid(|x| s.density(x), -w, w, 8001);
        assert!((total - 1.0).abs() < 1e-8, "z = {z}: {total}");
    }
}

/// `int dk A(k) exp(2 pi i k x) exp(-i (2 pi k)^2 hbar t / 2m)` by the
/// trapezoid rule on `|k| <= 10 / (2 pi sigma)`.
fn inverse_transform(x: f64, x0: f64, t: f64, sigma: f64, mass: f64) -> ComplexAmplitude {
    let k_max = 10.0 / (2.0 * PI * sigma);
    let n = 40_001;
    let h = 2.0 * k_max / (n - 1) as f64;
    let mut acc = ComplexAmplitude::new(0.0, 0.0);
    for i in 0..n {
        let k = -k_max + h * i as f64;
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let kk = 2.0 * PI * k;
        let phase = kk * x - kk * kk * HBAR * t / (2.0 * mass);
        acc += packet_spectrum(k, x0, sigma) * ComplexAmplitude::from_polar(w, phase);
    }
    acc * h
}

#[test]
fn fourier_inverse_matches_closed_form() {
    let ctx = neutron_ctx(1, 50e-9);
    let sigma = ctx.grating.sigma;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..20 {
        let z = rng.gen_range(0.0..2.0 * ctx.talbot_length());
        let x0 = rng.gen_range(-2.0 * sigma..2.0 * sigma);
        let s = ctx.slice(z).unwrap();
        let x = x0 + rng.gen_range(-3.0..3.0) * s.sigma_t.norm();
        let beam = &ctx.beam;
        let translation = ComplexAmplitude::from_polar(1.0, beam.omega * s.t - beam.k_z * z);
        let closed = packet_psi(x, x0, z, &ctx).unwrap() / translation;
        let numeric = inverse_transform(x, x0, s.t, sigma, beam.mass);
        assert!(
            (closed - numeric).norm() < 1e-6,
            "x = {x}, z = {z}: {closed} vs {numeric}"
        );
    }
}
