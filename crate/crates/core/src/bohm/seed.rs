use statrs::distribution::{ContinuousCDF, Normal};

use crate::qcore::EvalContext;
use crate::{Error, Result};

/// Starting point of one trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Seed {
    pub x0: f64,
    pub z0: f64,
    pub slit: usize,
    /// `x0` relative to the slit centre.
    pub offset: f64,
}

/// `per_slit` seeds in every slit, placed at equally spaced quantiles of the
/// slit-plane density `|phi_0|^2` (normal, std sigma) between `quantile_lo`
/// and `quantile_hi`. A single seed sits at the midpoint quantile.
pub fn seed_trajectories(
    ctx: &EvalContext,
    per_slit: usize,
    quantile_lo: f64,
    quantile_hi: f64,
    z0: f64,
) -> Result<Vec<Seed>> {
    if per_slit == 0 {
        return Err(Error::domain("per_slit must be at least 1"));
    }
    if !(0.0 < quantile_lo && quantile_lo < quantile_hi && quantile_hi < 1.0) {
        return Err(Error::domain(format!(
            "need 0 < quantile_lo < quantile_hi < 1, got ({quantile_lo}, {quantile_hi})"
        )));
    }
    if !(z0 >= 0.0) {
        return Err(Error::domain(format!("z0 must be >= 0, got {z0}")));
    }
    let unit = Normal::new(0.0, 1.0).expect("standard normal");
    let sigma = ctx.grating.sigma;
    let offsets: Vec<f64> = (0..per_slit)
        .map(|i| {
            let q = if per_slit == 1 {
                0.5 * (quantile_lo + quantile_hi)
            } else {
                quantile_lo + (quantile_hi - quantile_lo) * (i as f64 / (per_slit - 1) as f64)
            };
            unit.inverse_cdf(q) * sigma
        })
        .collect();
    Ok(ctx
        .grating
        .slit_centers()
        .iter()
        .enumerate()
        .flat_map(|(slit, &c)| {
            offsets.iter().map(move |&offset| Seed {
                x0: c + offset,
                z0,
                slit,
                offset,
            })
        })
        .collect())
}
