use std::f64::consts::PI;

use serde::Serialize;

use super::constants::{BOLTZMANN, HBAR};
use crate::{Error, Result};

/// Monochromatic particle beam travelling along +z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BeamParams {
    /// kg
    pub mass: f64,
    /// de Broglie wavelength, m
    pub wavelength: f64,
    /// rad/m
    pub k_z: f64,
    /// m/s
    pub v_z: f64,
    /// J
    pub energy: f64,
    /// rad/s
    pub omega: f64,
    /// Equivalent temperature E / k_B, K
    pub temperature: f64,
}

impl BeamParams {
    /// Derives the beam kinematics from particle mass and wavelength.
    pub fn from_wavelength(mass: f64, wavelength: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::domain(format!("mass must be positive, got {mass}")));
        }
        if !(wavelength > 0.0 && wavelength.is_finite()) {
            return Err(Error::domain(format!(
                "wavelength must be positive, got {wavelength}"
            )));
        }
        let k_z = 2.0 * PI / wavelength;
        let v_z = HBAR * k_z / mass;
        let omega = HBAR * k_z * k_z / (2.0 * mass);
        let energy = HBAR * omega;
        Ok(Self {
            mass,
            wavelength,
            k_z,
            v_z,
            energy,
            omega,
            temperature: energy / BOLTZMANN,
        })
    }

    /// Flight time to reach `z` from the grating.
    pub fn time_of_flight(&self, z: f64) -> f64 {
        z / self.v_z
    }
}
