//! Bohmian trajectories: the guidance velocity field of the superposed
//! wavefunction and its integral curves through the (x, z) plane.
//!
//! The beam advances uniformly in z (`z = z0 + v_z t`), so paths are
//! integrated in z with `dx/dz = v_x / v_z`.

mod guidance;
mod integrate;
mod seed;

pub use guidance::{guidance_velocity, slice_velocity};
pub use integrate::{
    integrate_batch, integrate_trajectory, integrate_trajectory_sampled, IntegratorConfig,
    Trajectory, TrajectoryPoint, TrajectoryStatus,
};
pub use seed::{seed_trajectories, Seed};
