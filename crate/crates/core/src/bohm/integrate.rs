use rayon::prelude::*;
use serde::Serialize;

use super::guidance::slice_velocity;
use super::seed::Seed;
use crate::qcore::EvalContext;
use crate::{Error, Result};

/// Step-size control for [`integrate_trajectory`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegratorConfig {
    /// m
    pub dz_initial: f64,
    /// Steps below this length end the trajectory, m.
    pub dz_min: f64,
    pub rel_tol: f64,
    /// Cap on |v_x|, m/s.
    pub v_cap: f64,
    /// Attempted steps (accepted plus rejected) before giving up.
    pub max_steps: usize,
}

impl IntegratorConfig {
    /// Defaults scaled to the Talbot length of `ctx`.
    pub fn for_context(ctx: &EvalContext) -> Self {
        let z_t = ctx.talbot_length();
        Self {
            dz_initial: z_t / 2000.0,
            dz_min: z_t / 1e7,
            rel_tol: 1e-8,
            v_cap: 100.0 * ctx.grating.period / z_t * ctx.beam.v_z,
            max_steps: 1_000_000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if !(self.dz_min > 0.0 && self.dz_min <= self.dz_initial) {
            problems.push(format!(
                "need 0 < dz_min <= dz_initial, got dz_min = {}, dz_initial = {}",
                self.dz_min, self.dz_initial
            ));
        }
        if !(self.rel_tol > 0.0) {
            problems.push(format!("rel_tol must be positive, got {}", self.rel_tol));
        }
        if !(self.v_cap > 0.0) {
            problems.push(format!("v_cap must be positive, got {}", self.v_cap));
        }
        if self.max_steps == 0 {
            problems.push("max_steps must be positive".into());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub x: f64,
    pub z: f64,
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TrajectoryStatus {
    /// Reached the requested end.
    Complete,
    /// The step size fell below `dz_min`, normally next to a node.
    NodeTruncated,
    /// `max_steps` attempts were used up.
    StepLimit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    pub seed_slit: usize,
    pub seed_offset: f64,
    pub status: TrajectoryStatus,
    /// Velocity evaluations in accepted steps that hit `v_cap`.
    pub clamp_events: usize,
}

impl Trajectory {
    pub fn is_complete(&self) -> bool {
        self.status == TrajectoryStatus::Complete
    }

    pub fn last(&self) -> Option<&TrajectoryPoint> {
        self.points.last()
    }
}

// Dormand-Prince 5(4)
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth- minus fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_SCALE: f64 = 0.2;
const MAX_SCALE: f64 = 5.0;

/// dx/dz along the guidance field, with the velocity cap applied.
struct Slope<'a> {
    ctx: &'a EvalContext,
    cap: f64,
}

impl Slope<'_> {
    /// `(slope, clamped)`, or `None` at a node.
    fn eval(&self, z: f64, x: f64) -> Option<(f64, bool)> {
        let slice = self.ctx.slice(z).ok()?;
        let s = slice_velocity(&slice, x)? / self.ctx.beam.v_z;
        if s.abs() > self.cap {
            Some((self.cap.copysign(s), true))
        } else {
            Some((s, false))
        }
    }
}

struct StepResult {
    x: f64,
    err: f64,
    k7: f64,
    clamps: usize,
}

fn dopri_step(f: &Slope<'_>, z: f64, x: f64, k1: f64, h: f64) -> Option<StepResult> {
    let mut clamps = 0;
    let mut ev = |z: f64, x: f64| {
        f.eval(z, x).map(|(s, c)| {
            clamps += c as usize;
            s
        })
    };
    let k2 = ev(z + C2 * h, x + h * A21 * k1)?;
    let k3 = ev(z + C3 * h, x + h * (A31 * k1 + A32 * k2))?;
    let k4 = ev(z + C4 * h, x + h * (A41 * k1 + A42 * k2 + A43 * k3))?;
    let k5 = ev(
        z + C5 * h,
        x + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4),
    )?;
    let k6 = ev(
        z + h,
        x + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5),
    )?;
    let x_new = x + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
    let k7 = ev(z + h, x_new)?;
    let err = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
    Some(StepResult {
        x: x_new,
        err: err.abs(),
        k7,
        clamps,
    })
}

/// Integrates from `(x0, z0)` through every z in `stops` (strictly increasing,
/// all above `z0`). Steps are shortened to land exactly on each stop. When
/// `record_all` is set every accepted step is stored, otherwise only `z0`
/// and the stops.
fn integrate(
    x0: f64,
    z0: f64,
    stops: &[f64],
    record_all: bool,
    ctx: &EvalContext,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    if !(z0 >= 0.0) {
        return Err(Error::domain(format!("z0 must be >= 0, got {z0}")));
    }
    if stops.is_empty() || stops[0] <= z0 || stops.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain(
            "end points must be strictly increasing and beyond z0",
        ));
    }
    let v_z = ctx.beam.v_z;
    let (seed_slit, seed_offset) = nearest_slit(ctx, x0);
    let slope = Slope {
        ctx,
        cap: cfg.v_cap / v_z,
    };
    // relative tolerance with an absolute floor of one packet width
    let floor = ctx.grating.sigma;

    let mut traj = Trajectory {
        points: vec![TrajectoryPoint {
            x: x0,
            z: z0,
            t: z0 / v_z,
        }],
        seed_slit,
        seed_offset,
        status: TrajectoryStatus::Complete,
        clamp_events: 0,
    };
    let (mut z, mut x) = (z0, x0);
    let mut k1 = match slope.eval(z, x) {
        Some((s, _)) => s,
        None => {
            traj.status = TrajectoryStatus::NodeTruncated;
            return Ok(traj);
        }
    };
    let mut h = cfg.dz_initial;
    let mut attempts = 0;

    for &stop in stops {
        while z < stop {
            if attempts >= cfg.max_steps {
                traj.status = TrajectoryStatus::StepLimit;
                return Ok(traj);
            }
            attempts += 1;
            let lands = z + h >= stop;
            let h_try = if lands { stop - z } else { h };
            let Some(step) = dopri_step(&slope, z, x, k1, h_try) else {
                h = 0.5 * h_try;
                if h < cfg.dz_min {
                    traj.status = TrajectoryStatus::NodeTruncated;
                    return Ok(traj);
                }
                continue;
            };
            let scale = cfg.rel_tol * x.abs().max(step.x.abs()).max(floor);
            let ratio = step.err / scale;
            if ratio <= 1.0 {
                z = if lands { stop } else { z + h_try };
                x = step.x;
                k1 = step.k7;
                traj.clamp_events += step.clamps;
                if record_all || lands {
                    traj.points.push(TrajectoryPoint { x, z, t: z / v_z });
                }
                let grow = if ratio == 0.0 {
                    MAX_SCALE
                } else {
                    (SAFETY * ratio.powf(-0.2)).clamp(MIN_SCALE, MAX_SCALE)
                };
                // a shortened landing step does not shrink the running step
                h = if lands {
                    h.max(h_try * grow)
                } else {
                    h_try * grow
                };
            } else {
                h = h_try * (SAFETY * ratio.powf(-0.2)).clamp(MIN_SCALE, 1.0);
                if h < cfg.dz_min {
                    traj.status = TrajectoryStatus::NodeTruncated;
                    return Ok(traj);
                }
            }
        }
    }
    Ok(traj)
}

fn nearest_slit(ctx: &EvalContext, x: f64) -> (usize, f64) {
    let centers = ctx.grating.slit_centers();
    let i = centers
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - x).abs().total_cmp(&(b.1 - x).abs()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    (i, x - centers[i])
}

/// Bohmian path from `(x0, z0)` to `z_end`, recording every accepted step.
pub fn integrate_trajectory(
    x0: f64,
    z0: f64,
    z_end: f64,
    ctx: &EvalContext,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    integrate(x0, z0, &[z_end], true, ctx, cfg)
}

/// Bohmian path from `(x0, z0)` recorded only at `z0` and at the given stations.
pub fn integrate_trajectory_sampled(
    x0: f64,
    z0: f64,
    stations: &[f64],
    ctx: &EvalContext,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    integrate(x0, z0, stations, false, ctx, cfg)
}

/// Integrates every seed in parallel; the output order follows `seeds`.
/// With `stations` the paths are recorded at those z only, otherwise at
/// every step up to `z_end`.
pub fn integrate_batch(
    seeds: &[Seed],
    z_end: f64,
    stations: Option<&[f64]>,
    ctx: &EvalContext,
    cfg: &IntegratorConfig,
) -> Result<Vec<Trajectory>> {
    seeds
        .par_iter()
        .map(|s| {
            let mut t = match stations {
                Some(st) => integrate_trajectory_sampled(s.x0, s.z0, st, ctx, cfg)?,
                None => integrate_trajectory(s.x0, s.z0, z_end, ctx, cfg)?,
            };
            t.seed_slit = s.slit;
            t.seed_offset = s.offset;
            Ok(t)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::constants::NEUTRON_MASS;
    use crate::qcore::{BeamParams, GratingConfig};

    fn ctx(n: usize) -> EvalContext {
        let beam = BeamParams::from_wavelength(NEUTRON_MASS, 5e-9).unwrap();
        EvalContext::new(beam, GratingConfig::new(n, 50e-9, 5e-9).unwrap())
    }

    #[test]
    fn defaults() {
        let c = ctx(4);
        let cfg = IntegratorConfig::for_context(&c);
        assert!((cfg.dz_initial - 5e-10).abs() < 1e-24);
        assert!((cfg.dz_min - 1e-13).abs() < 1e-27);
        assert_eq!(cfg.rel_tol, 1e-8);
        assert!((cfg.v_cap / (5.0 * c.beam.v_z) - 1.0).abs() < 1e-12);
        cfg.validate().unwrap();
    }

    #[test]
    fn invalid_config_lists_every_problem() {
        let c = ctx(2);
        let cfg = IntegratorConfig {
            dz_initial: 1e-9,
            dz_min: 1e-8,
            rel_tol: 0.0,
            v_cap: -1.0,
            max_steps: 0,
        };
        match integrate_trajectory(0.0, 1e-9, 1e-6, &c, &cfg) {
            Err(Error::Config(p)) => assert_eq!(p.len(), 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn axis_trajectory_stays_on_axis() {
        let c = ctx(4);
        let cfg = IntegratorConfig::for_context(&c);
        let t = integrate_trajectory(0.0, 1e-9, 2e-6, &c, &cfg).unwrap();
        assert!(t.is_complete());
        assert!(t.points.iter().all(|p| p.x == 0.0));
        assert_eq!(t.last().unwrap().z, 2e-6);
    }

    #[test]
    fn single_slit_matches_closed_form() {
        let c = ctx(1);
        let cfg = IntegratorConfig::for_context(&c);
        let s = 5e-9;
        for &a in &[-7e-9, 2e-9, 1.1e-8] {
            let t = integrate_trajectory(a, 0.0, 5e-6, &c, &cfg).unwrap();
            assert!(t.is_complete());
            for p in &t.points {
                let w = c.slice(p.z).unwrap().sigma_t.norm();
                let want = a * w / s;
                assert!((p.x - want).abs() <= 10.0 * cfg.rel_tol * want.abs().max(s));
            }
        }
    }

    #[test]
    fn time_follows_z() {
        let c = ctx(3);
        let cfg = IntegratorConfig::for_context(&c);
        let t = integrate_trajectory(3e-8, 1e-9, 1e-6, &c, &cfg).unwrap();
        let t0 = 1e-9 / c.beam.v_z;
        for w in t.points.windows(2) {
            assert!(w[1].z > w[0].z);
        }
        for p in &t.points {
            let want = (p.z - 1e-9) / c.beam.v_z + t0;
            assert!((p.t - want).abs() <= 1e-12 * want);
        }
    }

    #[test]
    fn sampled_lands_on_stations() {
        let c = ctx(4);
        let cfg = IntegratorConfig::for_context(&c);
        let st = [2e-7, 5e-7, 5.000001e-7, 1e-6];
        let t = integrate_trajectory_sampled(2.6e-8, 1e-9, &st, &c, &cfg).unwrap();
        let zs: Vec<f64> = t.points.iter().map(|p| p.z).collect();
        assert_eq!(zs, vec![1e-9, 2e-7, 5e-7, 5.000001e-7, 1e-6]);
        assert!(integrate_trajectory_sampled(0.0, 1e-9, &[5e-7, 2e-7], &c, &cfg).is_err());
        assert!(integrate_trajectory(0.0, 1e-6, 1e-7, &c, &cfg).is_err());
    }

    #[test]
    fn step_limit_reported() {
        let c = ctx(4);
        let mut cfg = IntegratorConfig::for_context(&c);
        cfg.max_steps = 3;
        let t = integrate_trajectory(2e-8, 1e-9, 1e-6, &c, &cfg).unwrap();
        assert_eq!(t.status, TrajectoryStatus::StepLimit);
    }

    #[test]
    fn batch_is_ordered_and_deterministic() {
        let c = ctx(4);
        let cfg = IntegratorConfig::for_context(&c);
        let seeds = crate::bohm::seed_trajectories(&c, 3, 0.2, 0.8, 1e-9).unwrap();
        let a = integrate_batch(&seeds, 5e-7, None, &c, &cfg).unwrap();
        let b = integrate_batch(&seeds, 5e-7, None, &c, &cfg).unwrap();
        assert_eq!(a, b);
        for (t, s) in a.iter().zip(&seeds) {
            assert_eq!(t.points[0].x, s.x0);
            assert_eq!(t.seed_slit, s.slit);
        }
    }
}
