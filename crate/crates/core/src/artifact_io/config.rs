//! Run configuration files.
//!
//! TOML, SI units throughout. Unknown keys are rejected.
//!
//! ```toml
//! [beam]
//! mass = "neutron"          # or a mass in kg
//! wavelength = 5e-9         # m
//!
//! [grating]
//! n_slits = 4
//! period = 5e-8             # m
//! sigma = 5e-9              # m, Gaussian packet width per slit
//!
//! [grid]                    # optional, any subset of keys
//! x_min = -2e-7             # default -(n_slits/2 + 2) * period
//! x_max = 2e-7              # default  (n_slits/2 + 2) * period
//! nx = 1024
//! z_min = 1e-9              # default z_T / 1000
//! z_max = 1e-6              # default z_T
//! nz = 1024
//!
//! [integrator]              # optional
//! dz_initial = 5e-10        # default z_T / 2000
//! dz_min = 1e-13            # default z_T / 1e7
//! rel_tol = 1e-8
//! v_cap = 395.6             # m/s, default 100 (d / z_T) v_z
//! max_steps = 1000000
//!
//! [render]                  # optional
//! palette = "black-max"     # or "white-max"
//! normalization = "global"  # or "per-column"
//! gamma = 0.5
//! width = 1024              # default: grid nz
//! height = 1024             # default: grid nx
//! trajectory_overlay = true
//! ```

use std::path::Path;

use serde::Deserialize;

use super::pgm::{Normalization, Palette, RenderOptions};
use crate::bohm::IntegratorConfig;
use crate::fieldgrid::GridSpec;
use crate::qcore::constants::NEUTRON_MASS;
use crate::qcore::{BeamParams, EvalContext, GratingConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum MassSpec {
    Named(String),
    Kg(f64),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBeam {
    mass: Option<MassSpec>,
    wavelength: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrating {
    n_slits: Option<i64>,
    period: Option<f64>,
    sigma: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    x_min: Option<f64>,
    x_max: Option<f64>,
    nx: Option<usize>,
    z_min: Option<f64>,
    z_max: Option<f64>,
    nz: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIntegrator {
    dz_initial: Option<f64>,
    dz_min: Option<f64>,
    rel_tol: Option<f64>,
    v_cap: Option<f64>,
    max_steps: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRender {
    palette: Option<Palette>,
    normalization: Option<Normalization>,
    gamma: Option<f64>,
    width: Option<usize>,
    height: Option<usize>,
    trajectory_overlay: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    beam: RawBeam,
    #[serde(default)]
    grating: RawGrating,
    grid: Option<RawGrid>,
    integrator: Option<RawIntegrator>,
    render: Option<RawRender>,
}

/// A validated configuration with every default filled in.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub beam: BeamParams,
    pub grating: GratingConfig,
    pub grid: GridSpec,
    pub integrator: IntegratorConfig,
    pub render: RenderOptions,
}

impl RunConfig {
    pub fn context(&self) -> EvalContext {
        EvalContext::new(self.beam, self.grating.clone())
    }

    pub fn talbot_length(&self) -> f64 {
        let d = self.grating.period;
        2.0 * d * (d / self.beam.wavelength)
    }
}

fn positive(problems: &mut Vec<String>, key: &str, v: Option<f64>) -> Option<f64> {
    match v {
        None => {
            problems.push(format!("missing required key `{key}`"));
            None
        }
        Some(v) if !(v > 0.0 && v.is_finite()) => {
            problems.push(format!("`{key}` must be positive, got {v}"));
            None
        }
        Some(v) => Some(v),
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(vec![e.to_string()]))?;
    let mut problems = Vec::new();

    let mass = match raw.beam.mass {
        None => {
            problems.push("missing required key `beam.mass`".into());
            None
        }
        Some(MassSpec::Named(name)) if name.eq_ignore_ascii_case("neutron") => Some(NEUTRON_MASS),
        Some(MassSpec::Named(name)) => {
            problems.push(format!(
                "unknown particle `{name}` for `beam.mass` (use \"neutron\" or kg)"
            ));
            None
        }
        Some(MassSpec::Kg(m)) => positive(&mut problems, "beam.mass", Some(m)),
    };
    let wavelength = positive(&mut problems, "beam.wavelength", raw.beam.wavelength);
    let period = positive(&mut problems, "grating.period", raw.grating.period);
    let sigma = positive(&mut problems, "grating.sigma", raw.grating.sigma);
    let n_slits = match raw.grating.n_slits {
        None => {
            problems.push("missing required key `grating.n_slits`".into());
            None
        }
        Some(n) if n < 1 => {
            problems.push(format!("`grating.n_slits` must be at least 1, got {n}"));
            None
        }
        Some(n) => Some(n as usize),
    };

    let (Some(mass), Some(wavelength), Some(period), Some(sigma), Some(n_slits)) =
        (mass, wavelength, period, sigma, n_slits)
    else {
        return Err(Error::Config(problems));
    };
    let beam = BeamParams::from_wavelength(mass, wavelength)?;
    let grating = GratingConfig::new(n_slits, period, sigma)?;
    let ctx = EvalContext::new(beam, grating.clone());

    let mut grid = GridSpec::default_for(&ctx);
    if let Some(g) = raw.grid {
        grid.x_min = g.x_min.unwrap_or(grid.x_min);
        grid.x_max = g.x_max.unwrap_or(grid.x_max);
        grid.nx = g.nx.unwrap_or(grid.nx);
        grid.z_min = g.z_min.unwrap_or(grid.z_min);
        grid.z_max = g.z_max.unwrap_or(grid.z_max);
        grid.nz = g.nz.unwrap_or(grid.nz);
    }
    problems.extend(grid.problems());

    let mut integrator = IntegratorConfig::for_context(&ctx);
    if let Some(i) = raw.integrator {
        integrator.dz_initial = i.dz_initial.unwrap_or(integrator.dz_initial);
        integrator.dz_min = i.dz_min.unwrap_or(integrator.dz_min);
        integrator.rel_tol = i.rel_tol.unwrap_or(integrator.rel_tol);
        integrator.v_cap = i.v_cap.unwrap_or(integrator.v_cap);
        integrator.max_steps = i.max_steps.unwrap_or(integrator.max_steps);
    }
    if let Err(Error::Config(p)) = integrator.validate() {
        problems.extend(p);
    }

    let mut render = RenderOptions::default();
    if let Some(r) = raw.render {
        render.palette = r.palette.unwrap_or(render.palette);
        render.normalization = r.normalization.unwrap_or(render.normalization);
        render.gamma = r.gamma.unwrap_or(render.gamma);
        render.width = r.width.or(render.width);
        render.height = r.height.or(render.height);
        render.trajectory_overlay = r.trajectory_overlay.unwrap_or(render.trajectory_overlay);
    }
    problems.extend(render.problems());

    if !problems.is_empty() {
        return Err(Error::Config(problems));
    }
    Ok(RunConfig {
        beam,
        grating,
        grid,
        integrator,
        render,
    })
}

pub fn load_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}
