use serde::Deserialize;

use crate::bohm::Trajectory;
use crate::fieldgrid::DensityField;
use crate::{Error, Result};

/// Which end of the gray scale carries the maximum density.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Palette {
    /// Maximum density is black, zero is white.
    #[default]
    BlackMax,
    /// Maximum density is white, zero is black.
    WhiteMax,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    #[default]
    Global,
    /// Each z column is scaled by its own maximum.
    PerColumn,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    pub palette: Palette,
    pub normalization: Normalization,
    pub gamma: f64,
    /// Image size in pixels; `None` uses the field size (z across, x down).
    pub width: Option<usize>,
    pub height: Option<usize>,
    pub trajectory_overlay: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            palette: Palette::BlackMax,
            normalization: Normalization::Global,
            gamma: 0.5,
            width: None,
            height: None,
            trajectory_overlay: true,
        }
    }
}

impl RenderOptions {
    pub fn problems(&self) -> Vec<String> {
        let mut p = Vec::new();
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            p.push(format!("gamma must be positive, got {}", self.gamma));
        }
        if self.width == Some(0) || self.height == Some(0) {
            p.push("image width and height must be at least 1".into());
        }
        p
    }
}

/// Intensity level reserved for trajectory pixels; counted from the
/// zero-density end, so it is gray 254 with [`Palette::WhiteMax`] and 1 with
/// [`Palette::BlackMax`]. Density pixels never use it while an overlay is drawn.
pub const OVERLAY_LEVEL: u8 = 254;

fn level(v: f64, norm: f64, gamma: f64) -> u8 {
    if !(norm > 0.0) {
        return 0;
    }
    let r = (v / norm).clamp(0.0, 1.0);
    (255.0 * r.powf(gamma)).round() as u8
}

fn nearest(k: usize, from: usize, to: usize) -> usize {
    if from <= 1 {
        0
    } else {
        ((k as f64) * (to - 1) as f64 / (from - 1) as f64).round() as usize
    }
}

/// Renders the field as a binary PGM (P5, maxval 255) with z running left
/// to right and x running top (x_max) to bottom (x_min). Pixels take
/// `round(255 (v / v_norm)^gamma)` counted from the zero end of the palette.
pub fn render_carpet(
    field: &DensityField,
    trajectories: Option<&[Trajectory]>,
    opts: &RenderOptions,
) -> Result<Vec<u8>> {
    let problems = opts.problems();
    if !problems.is_empty() {
        return Err(Error::Config(problems));
    }
    let spec = &field.spec;
    let width = opts.width.unwrap_or(spec.nz);
    let height = opts.height.unwrap_or(spec.nx);
    let overlay = opts.trajectory_overlay && trajectories.is_some_and(|t| !t.is_empty());

    let mut levels = vec![0u8; width * height];
    for col in 0..width {
        let j = nearest(col, width, spec.nz);
        let norm = match opts.normalization {
            Normalization::Global => field.global_max,
            Normalization::PerColumn => field.column_max[j],
        };
        for row in 0..height {
            let i = spec.nx - 1 - nearest(row, height, spec.nx);
            let mut l = level(field.get(i, j), norm, opts.gamma);
            if overlay && l == OVERLAY_LEVEL {
                l -= 1;
            }
            levels[row * width + col] = l;
        }
    }

    if overlay {
        let to_px = |x: f64, z: f64| {
            let c = (z - spec.z_min) / (spec.z_max - spec.z_min) * (width.max(2) - 1) as f64;
            let r = (spec.x_max - x) / (spec.x_max - spec.x_min) * (height.max(2) - 1) as f64;
            (c, r)
        };
        for traj in trajectories.unwrap_or_default() {
            for seg in traj.points.windows(2) {
                let (c0, r0) = to_px(seg[0].x, seg[0].z);
                let (c1, r1) = to_px(seg[1].x, seg[1].z);
                let n = (c1 - c0).abs().max((r1 - r0).abs()).ceil().max(1.0) as usize;
                for k in 0..=n {
                    let f = k as f64 / n as f64;
                    let (c, r) = ((c0 + f * (c1 - c0)).round(), (r0 + f * (r1 - r0)).round());
                    if c >= 0.0 && r >= 0.0 && (c as usize) < width && (r as usize) < height {
                        levels[r as usize * width + c as usize] = OVERLAY_LEVEL;
                    }
                }
            }
        }
    }

    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend(levels.into_iter().map(|l| match opts.palette {
        Palette::WhiteMax => l,
        Palette::BlackMax => 255 - l,
    }));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bohm::{TrajectoryPoint, TrajectoryStatus};
    use crate::fieldgrid::{sample_density, GridSpec};
    use crate::qcore::constants::NEUTRON_MASS;
    use crate::qcore::{BeamParams, EvalContext, GratingConfig};
    use proptest::prelude::*;

    fn pixels(img: &[u8]) -> (usize, usize, &[u8]) {
        let text = String::from_utf8_lossy(&img[..img.len().min(24)]);
        let mut parts = text.split_ascii_whitespace();
        assert_eq!(parts.next(), Some("P5"));
        let w: usize = parts.next().unwrap().parse().unwrap();
        let h: usize = parts.next().unwrap().parse().unwrap();
        (w, h, &img[img.len() - w * h..])
    }

    fn field(values: Vec<f64>, nx: usize, nz: usize) -> DensityField {
        let spec = GridSpec::new((-1.0, 1.0), nx, (1.0, 2.0), nz).unwrap();
        DensityField::from_columns(spec, values).unwrap()
    }

    #[test]
    fn uniform_field_is_full_intensity() {
        let f = field(vec![3.0; 12], 3, 4);
        let img = render_carpet(&f, None, &RenderOptions::default()).unwrap();
        assert!(img.starts_with(b"P5\n4 3\n255\n"));
        let (_, _, px) = pixels(&img);
        assert!(px.iter().all(|&p| p == 0));
        let white = RenderOptions {
            palette: Palette::WhiteMax,
            ..Default::default()
        };
        let img = render_carpet(&f, None, &white).unwrap();
        let (_, _, px) = pixels(&img);
        assert!(px.iter().all(|&p| p == 255));
    }

    #[test]
    fn zero_field_is_zero_intensity() {
        let f = field(vec![0.0; 6], 2, 3);
        let img = render_carpet(&f, None, &RenderOptions::default()).unwrap();
        assert!(pixels(&img).2.iter().all(|&p| p == 255));
    }

    #[test]
    fn mapping_and_orientation() {
        // column j = 0: x_min -> 0, x_max -> 1; column j = 1: 0.25 everywhere
        let f = field(vec![0.0, 1.0, 0.25, 0.25], 2, 2);
        let opts = RenderOptions {
            palette: Palette::WhiteMax,
            gamma: 1.0,
            ..Default::default()
        };
        let img = render_carpet(&f, None, &opts).unwrap();
        // top row is x_max
        assert_eq!(pixels(&img).2, &[255, 64, 0, 64]);
        let per_col = RenderOptions {
            normalization: Normalization::PerColumn,
            ..opts
        };
        assert_eq!(
            pixels(&render_carpet(&f, None, &per_col).unwrap()).2,
            &[255, 255, 0, 255]
        );
    }

    #[test]
    fn invalid_options() {
        let f = field(vec![1.0; 4], 2, 2);
        let bad = RenderOptions {
            gamma: 0.0,
            width: Some(0),
            ..Default::default()
        };
        match render_carpet(&f, None, &bad) {
            Err(Error::Config(p)) => assert_eq!(p.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn overlay_uses_reserved_level() {
        let f = field((0..100).map(|k| k as f64).collect(), 10, 10);
        let traj = Trajectory {
            points: vec![
                TrajectoryPoint {
                    x: 0.0,
                    z: 1.0,
                    t: 0.0,
                },
                TrajectoryPoint {
                    x: 0.0,
                    z: 2.0,
                    t: 1.0,
                },
            ],
            seed_slit: 0,
            seed_offset: 0.0,
            status: TrajectoryStatus::Complete,
            clamp_events: 0,
        };
        let opts = RenderOptions {
            palette: Palette::WhiteMax,
            gamma: 1.0,
            ..Default::default()
        };
        let img = render_carpet(&f, Some(&[traj]), &opts).unwrap();
        let (w, _, px) = pixels(&img);
        // x = 0 sits between rows 4 and 5; rounding picks row 5 (4.5 -> 5)
        let marked: Vec<usize> = px
            .iter()
            .enumerate()
            .filter(|p| *p.1 == OVERLAY_LEVEL)
            .map(|p| p.0)
            .collect();
        assert_eq!(marked, (0..w).map(|c| 5 * w + c).collect::<Vec<_>>());
    }

    #[test]
    fn single_slit_brightest_at_first_column_on_axis() {
        let beam = BeamParams::from_wavelength(NEUTRON_MASS, 5e-9).unwrap();
        let ctx = EvalContext::new(beam, GratingConfig::new(1, 50e-9, 5e-9).unwrap());
        let spec = GridSpec::new((-3e-8, 3e-8), 61, (1e-9, 1e-6), 50).unwrap();
        let f = sample_density(&ctx, &spec).unwrap();
        let opts = RenderOptions {
            palette: Palette::WhiteMax,
            gamma: 1.0,
            ..Default::default()
        };
        let img = render_carpet(&f, None, &opts).unwrap();
        let (w, _, px) = pixels(&img);
        let best = px.iter().enumerate().max_by_key(|p| *p.1).unwrap().0;
        assert_eq!((best / w, best % w), (30, 0));
    }

    proptest! {
        #[test]
        fn larger_density_never_further_from_max(
            vals in proptest::collection::vec(0.0f64..10.0, 16),
            gamma in 0.1f64..3.0,
            white in any::<bool>(),
            per_col in any::<bool>(),
        ) {
            let f = field(vals.clone(), 4, 4);
            let opts = RenderOptions {
                palette: if white { Palette::WhiteMax } else { Palette::BlackMax },
                normalization: if per_col { Normalization::PerColumn } else { Normalization::Global },
                gamma,
                ..Default::default()
            };
            let a = render_carpet(&f, None, &opts).unwrap();
            prop_assert_eq!(&a, &render_carpet(&f, None, &opts).unwrap());
            let (_, _, px) = pixels(&a);
            let dist = |p: u8| if white { 255 - p } else { p };
            // within a column the normalisation is shared
            for col in 0..4 {
                for r1 in 0..4 {
                    for r2 in 0..4 {
                        let (v1, v2) = (f.get(3 - r1, col), f.get(3 - r2, col));
                        if v1 > v2 {
                            prop_assert!(dist(px[r1 * 4 + col]) <= dist(px[r2 * 4 + col]));
                        }
                    }
                }
            }
        }
    }
}
