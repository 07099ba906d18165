use serde::Serialize;

use crate::{Error, Result};

/// Grating of `n_slits` soft-edged slits with period `period`, centred on x = 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GratingConfig {
    pub n_slits: usize,
    /// m
    pub period: f64,
    /// Width of the Gaussian packet leaving each slit, m.
    pub sigma: f64,
    slit_centers: Vec<f64>,
}

impl GratingConfig {
    pub fn new(n_slits: usize, period: f64, sigma: f64) -> Result<Self> {
        if n_slits == 0 {
            return Err(Error::domain("n_slits must be at least 1"));
        }
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::domain(format!(
                "period must be positive, got {period}"
            )));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::domain(format!(
                "sigma must be positive, got {sigma}"
            )));
        }
        // x_n = (n - N/2) d with N = n_slits - 1; exact negation pairs i <-> N - i
        let half = (n_slits - 1) as f64 / 2.0;
        let slit_centers = (0..n_slits).map(|n| (n as f64 - half) * period).collect();
        Ok(Self {
            n_slits,
            period,
            sigma,
            slit_centers,
        })
    }

    pub fn slit_centers(&self) -> &[f64] {
        &self.slit_centers
    }

    /// Half the distance between the outermost slit centres.
    pub fn half_extent(&self) -> f64 {
        (self.n_slits - 1) as f64 * self.period / 2.0
    }

    /// Midpoint between the two central slits (x = 0 for an even slit
    /// count, half a period off-axis for an odd one).
    pub fn central_midpoint(&self) -> f64 {
        if self.n_slits.is_multiple_of(2) {
            0.0
        } else {
            self.period / 2.0
        }
    }
}
