//! Probability density on rectangular (x, z) grids, line cross-sections and
//! Talbot revival diagnostics.

use rayon::prelude::*;
use serde::Serialize;

use crate::numerics::{grid_point, linspace, pearson};
use crate::qcore::EvalContext;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub z_min: f64,
    pub z_max: f64,
    pub nz: usize,
}

impl GridSpec {
    pub fn new(x: (f64, f64), nx: usize, z: (f64, f64), nz: usize) -> Result<Self> {
        let spec = Self {
            x_min: x.0,
            x_max: x.1,
            nx,
            z_min: z.0,
            z_max: z.1,
            nz,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Default domain: `+-(n/2 + 2) d` across, `z_T/1000 .. z_T` along, 1024 x 1024.
    pub fn default_for(ctx: &EvalContext) -> Self {
        let half = (ctx.grating.n_slits as f64 / 2.0 + 2.0) * ctx.grating.period;
        let z_t = ctx.talbot_length();
        Self {
            x_min: -half,
            x_max: half,
            nx: 1024,
            z_min: z_t / 1000.0,
            z_max: z_t,
            nz: 1024,
        }
    }

    pub fn problems(&self) -> Vec<String> {
        let mut p = Vec::new();
        if !(self.x_min < self.x_max) || !self.x_min.is_finite() || !self.x_max.is_finite() {
            p.push(format!(
                "grid needs x_min < x_max, got {} .. {}",
                self.x_min, self.x_max
            ));
        }
        if !(0.0 < self.z_min && self.z_min < self.z_max) || !self.z_max.is_finite() {
            p.push(format!(
                "grid needs 0 < z_min < z_max, got {} .. {}",
                self.z_min, self.z_max
            ));
        }
        if self.nx < 2 || self.nz < 2 {
            p.push(format!(
                "grid needs nx, nz >= 2, got {} x {}",
                self.nx, self.nz
            ));
        }
        p
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.problems();
        if p.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(p))
        }
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        grid_point(self.x_min, self.x_max, i, self.nx)
    }

    #[inline]
    pub fn z(&self, j: usize) -> f64 {
        grid_point(self.z_min, self.z_max, j, self.nz)
    }

    pub fn xs(&self) -> Vec<f64> {
        linspace(self.x_min, self.x_max, self.nx)
    }

    pub fn zs(&self) -> Vec<f64> {
        linspace(self.z_min, self.z_max, self.nz)
    }
}

/// Density samples on a [`GridSpec`], stored column by column (one column per z).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityField {
    pub spec: GridSpec,
    values: Vec<f64>,
    pub global_max: f64,
    pub column_max: Vec<f64>,
}

impl DensityField {
    /// Builds a field from column-major values (`values[j * nx + i]`).
    pub fn from_columns(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        spec.validate()?;
        if values.len() != spec.nx * spec.nz {
            return Err(Error::domain(format!(
                "expected {} values, got {}",
                spec.nx * spec.nz,
                values.len()
            )));
        }
        if values.iter().any(|v| !(*v >= 0.0)) {
            return Err(Error::domain("density values must be non-negative"));
        }
        let column_max: Vec<f64> = values
            .chunks(spec.nx)
            .map(|c| c.iter().copied().fold(0.0, f64::max))
            .collect();
        let global_max = column_max.iter().copied().fold(0.0, f64::max);
        Ok(Self {
            spec,
            values,
            global_max,
            column_max,
        })
    }

    /// Density at `(x_i, z_j)`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.spec.nx + i]
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.values[j * self.spec.nx..(j + 1) * self.spec.nx]
    }

    /// Index `(i, j)` of the largest sample (first one on ties).
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = (0, 0);
        let mut v = f64::NEG_INFINITY;
        for j in 0..self.spec.nz {
            for (i, &c) in self.column(j).iter().enumerate() {
                if c > v {
                    v = c;
                    best = (i, j);
                }
            }
        }
        best
    }
}

/// Samples `density(x_i, z_j)` on the grid. Columns are computed in parallel;
/// every sample is an independent point evaluation, so the result does not
/// depend on the number of worker threads.
pub fn sample_density(ctx: &EvalContext, spec: &GridSpec) -> Result<DensityField> {
    spec.validate()?;
    let columns: Vec<Vec<f64>> = (0..spec.nz)
        .into_par_iter()
        .map(|j| {
            let slice = ctx.slice(spec.z(j))?;
            Ok((0..spec.nx).map(|i| slice.density(spec.x(i))).collect())
        })
        .collect::<Result<_>>()?;
    DensityField::from_columns(*spec, columns.concat())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axis {
    /// Line of constant x, samples along z.
    FixedX,
    /// Line of constant z, samples along x.
    FixedZ,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossSection {
    pub axis: Axis,
    pub coordinate: f64,
    /// `(position, density)` with strictly increasing positions.
    pub samples: Vec<(f64, f64)>,
}

impl CrossSection {
    pub fn values(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.1).collect()
    }

    pub fn positions(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.0).collect()
    }

    pub fn max(&self) -> f64 {
        self.samples.iter().map(|s| s.1).fold(0.0, f64::max)
    }
}

/// Re-evaluates the density along one line of the grid domain with
/// `n_samples` points spanning the domain.
pub fn cross_section(
    ctx: &EvalContext,
    spec: &GridSpec,
    axis: Axis,
    coordinate: f64,
    n_samples: usize,
) -> Result<CrossSection> {
    spec.validate()?;
    let (lo, hi) = match axis {
        Axis::FixedX => (spec.x_min, spec.x_max),
        Axis::FixedZ => (spec.z_min, spec.z_max),
    };
    if !(lo <= coordinate && coordinate <= hi) {
        return Err(Error::domain(format!(
            "cross-section coordinate {coordinate} outside the domain [{lo}, {hi}]"
        )));
    }
    let (a, b) = match axis {
        Axis::FixedX => (spec.z_min, spec.z_max),
        Axis::FixedZ => (spec.x_min, spec.x_max),
    };
    line_section(ctx, axis, coordinate, a, b, n_samples)
}

/// Density along a line of constant x or z between `start` and `end`.
pub fn line_section(
    ctx: &EvalContext,
    axis: Axis,
    coordinate: f64,
    start: f64,
    end: f64,
    n_samples: usize,
) -> Result<CrossSection> {
    if n_samples < 2 || !(start < end) {
        return Err(Error::domain(
            "cross-section needs start < end and at least 2 samples",
        ));
    }
    let positions = linspace(start, end, n_samples);
    let samples = match axis {
        Axis::FixedZ => {
            let slice = ctx.slice(coordinate)?;
            positions
                .par_iter()
                .map(|&x| (x, slice.density(x)))
                .collect()
        }
        Axis::FixedX => positions
            .par_iter()
            .map(|&z| Ok((z, ctx.slice(z)?.density(coordinate))))
            .collect::<Result<_>>()?,
    };
    Ok(CrossSection {
        axis,
        coordinate,
        samples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RevivalMetrics {
    /// Correlation of `p(x, z_ref)` with `p(x, z_ref + z_T)`.
    pub full_revival_corr: f64,
    /// Correlation of `p(x, z_ref)` with `p(x + d/2, z_ref + z_T/2)`.
    pub half_revival_shift_corr: f64,
}

/// Samples across the revival window used by [`revival_metrics`].
pub const REVIVAL_SAMPLES: usize = 2001;

/// Talbot self-imaging check on a window `|x| <= window_half_width` at the
/// grating centre, with reference plane `z_ref = z_T / 50`.
pub fn revival_metrics(ctx: &EvalContext, window_half_width: f64) -> Result<RevivalMetrics> {
    revival_metrics_with(ctx, window_half_width, REVIVAL_SAMPLES)
}

pub fn revival_metrics_with(
    ctx: &EvalContext,
    window_half_width: f64,
    n_samples: usize,
) -> Result<RevivalMetrics> {
    let g = &ctx.grating;
    if g.n_slits < 16 {
        return Err(Error::domain(format!(
            "revival metrics need at least 16 slits, got {}",
            g.n_slits
        )));
    }
    if !(2.0 * window_half_width >= 4.0 * g.period) {
        return Err(Error::domain(
            "revival window must cover at least 4 periods",
        ));
    }
    if window_half_width + g.period / 2.0 > g.half_extent() {
        return Err(Error::domain(format!(
            "revival window +-{window_half_width} m exceeds the grating (+-{} m)",
            g.half_extent()
        )));
    }
    if n_samples < 3 {
        return Err(Error::domain("revival metrics need at least 3 samples"));
    }
    let z_t = ctx.talbot_length();
    let z_ref = z_t / 50.0;
    let xs = linspace(-window_half_width, window_half_width, n_samples);
    let at = |z: f64, shift: f64| -> Result<Vec<f64>> {
        let s = ctx.slice(z)?;
        Ok(xs.par_iter().map(|&x| s.density(x + shift)).collect())
    };
    let reference = at(z_ref, 0.0)?;
    let full = at(z_ref + z_t, 0.0)?;
    let half = at(z_ref + z_t / 2.0, g.period / 2.0)?;
    let corr = |a: &[f64], b: &[f64]| {
        pearson(a, b).ok_or_else(|| Error::domain("revival window density is constant"))
    };
    Ok(RevivalMetrics {
        full_revival_corr: corr(&reference, &full)?,
        half_revival_shift_corr: corr(&reference, &half)?,
    })
}
