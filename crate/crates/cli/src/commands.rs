use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use nslit_core::artifact_io::{export_csv, render_carpet};
use nslit_core::bohm::{integrate_batch, seed_trajectories, Trajectory, TrajectoryStatus};
use nslit_core::farfield::{
    central_window, farfield_comparison, FarFieldConvention, FarFieldParams,
};
use nslit_core::fieldgrid::{cross_section, line_section, revival_metrics, sample_density, Axis};
use nslit_core::numerics::{linspace, local_maxima};
use nslit_core::Error;

use crate::{Failure, Setup};

/// Far-field checks warn below this many Talbot lengths.
const FAR_FIELD_MARGIN: f64 = 100.0;

fn out_path(s: &Setup, default: &str) -> PathBuf {
    s.out.clone().unwrap_or_else(|| PathBuf::from(default))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, bytes).map_err(|e| Failure::Core(Error::io(path, e)))
}

/// Prints the report and, with `--out`, also saves it.
fn emit_report(s: &Setup, text: &str) -> Result<(), Failure> {
    print!("{text}");
    if let Some(path) = &s.out {
        write_file(path, text.as_bytes())?;
    }
    Ok(())
}

fn truncation_check(paths: &[Trajectory]) -> Result<(), Failure> {
    let count = |st| paths.iter().filter(|p| p.status == st).count();
    let (nodes, limits) = (
        count(TrajectoryStatus::NodeTruncated),
        count(TrajectoryStatus::StepLimit),
    );
    if nodes + limits == 0 {
        return Ok(());
    }
    Err(Failure::Truncated(format!(
        "{} of {} trajectories stopped early ({nodes} at wavefunction nodes, {limits} at the step limit); outputs were written",
        nodes + limits,
        paths.len()
    )))
}

pub fn params(s: &Setup) -> Result<(), Failure> {
    let c = &s.config;
    let b = &c.beam;
    let g = &c.grating;
    let mut r = String::new();
    let _ = writeln!(r, "beam");
    let _ = writeln!(r, "  mass          {:.10e} kg", b.mass);
    let _ = writeln!(r, "  wavelength    {:.10e} m", b.wavelength);
    let _ = writeln!(r, "  energy E      {:.10e} J", b.energy);
    let _ = writeln!(r, "  temperature T {:.10e} K", b.temperature);
    let _ = writeln!(r, "  velocity v_z  {:.10e} m/s", b.v_z);
    let _ = writeln!(r, "  wavenumber k_z {:.10e} rad/m", b.k_z);
    let _ = writeln!(r, "  frequency w   {:.10e} rad/s", b.omega);
    let _ = writeln!(r, "grating");
    let _ = writeln!(r, "  slits         {}", g.n_slits);
    let _ = writeln!(
        r,
        "  period d      {:.10e} m  ({} wavelengths)",
        g.period,
        g.period / b.wavelength
    );
    let _ = writeln!(r, "  sigma         {:.10e} m", g.sigma);
    let _ = writeln!(r, "  Talbot z_T    {:.10e} m", c.talbot_length());
    let _ = writeln!(r, "slit  center_m");
    for (n, x) in g.slit_centers().iter().enumerate() {
        let _ = writeln!(r, "{n:>4}  {x:.10e}");
    }
    emit_report(s, &r)
}

pub fn carpet(s: &Setup, per_slit: usize, csv: Option<&Path>) -> Result<(), Failure> {
    let ctx = s.config.context();
    let spec = s.config.grid;
    let field = sample_density(&ctx, &spec)?;
    let paths = if per_slit > 0 {
        let seeds = seed_trajectories(&ctx, per_slit, 0.1, 0.9, 0.0)?;
        let stations = linspace(spec.z_min, spec.z_max, spec.nz);
        Some(integrate_batch(
            &seeds,
            spec.z_max,
            Some(&stations),
            &ctx,
            &s.config.integrator,
        )?)
    } else {
        None
    };
    let image = render_carpet(&field, paths.as_deref(), &s.config.render)?;
    let out = out_path(s, "carpet.pgm");
    write_file(&out, &image)?;
    if let Some(path) = csv {
        export_csv(&field, path)?;
    }
    eprintln!(
        "wrote {} ({} x {} samples)",
        out.display(),
        spec.nx,
        spec.nz
    );
    match &paths {
        Some(p) => truncation_check(p),
        None => Ok(()),
    }
}

pub fn farfield(
    s: &Setup,
    z: f64,
    x_min: Option<f64>,
    x_max: Option<f64>,
    samples: usize,
    textbook: bool,
) -> Result<(), Failure> {
    let c = &s.config;
    let convention = if textbook {
        FarFieldConvention::Textbook
    } else {
        FarFieldConvention::Propagated
    };
    let p = FarFieldParams::new(c.beam, c.grating.clone()).with_convention(convention);
    let z_t = c.talbot_length();
    if !(z >= FAR_FIELD_MARGIN * z_t) {
        eprintln!(
            "warning: z = {z:e} m is not far beyond the Talbot length {z_t:e} m; the diffraction formula assumes z >> z_T"
        );
    }
    let (lo, hi) = central_window(2, z, &p)?;
    let rows = farfield_comparison(z, x_min.unwrap_or(lo), x_max.unwrap_or(hi), samples, &p)?;
    let out = out_path(s, "farfield.csv");
    export_csv(&rows, &out)?;
    let dev = rows
        .iter()
        .map(|r| (r.simulated - r.analytic).abs())
        .fold(0.0, f64::max);
    eprintln!(
        "wrote {}; max |simulated - analytic| = {dev:.3e}",
        out.display()
    );
    Ok(())
}

pub fn crosssection(
    s: &Setup,
    fixed_x: bool,
    at: Option<f64>,
    samples: Option<usize>,
) -> Result<(), Failure> {
    let ctx = s.config.context();
    let spec = s.config.grid;
    let (axis, coord, n) = if fixed_x {
        (
            Axis::FixedX,
            at.unwrap_or(ctx.grating.central_midpoint()),
            samples.unwrap_or(spec.nz),
        )
    } else {
        (
            Axis::FixedZ,
            at.unwrap_or(s.config.talbot_length() / 4.0),
            samples.unwrap_or(spec.nx),
        )
    };
    let section = cross_section(&ctx, &spec, axis, coord, n)?;
    let out = out_path(s, "crosssection.csv");
    export_csv(&section, &out)?;
    eprintln!("wrote {} ({n} samples)", out.display());
    Ok(())
}

pub fn trajectories(
    s: &Setup,
    per_slit: usize,
    quantiles: (f64, f64),
    z_end: Option<f64>,
    stations: Option<usize>,
) -> Result<(), Failure> {
    let ctx = s.config.context();
    let spec = s.config.grid;
    let z_end = z_end.unwrap_or(spec.z_max);
    if !(z_end > 0.0) {
        return Err(Failure::Usage(format!(
            "--z-end must be positive, got {z_end}"
        )));
    }
    let seeds = seed_trajectories(&ctx, per_slit, quantiles.0, quantiles.1, 0.0)?;
    let n_stations = stations.unwrap_or(spec.nz);
    let grid = (n_stations > 0).then(|| linspace(z_end / n_stations as f64, z_end, n_stations));
    let paths = integrate_batch(&seeds, z_end, grid.as_deref(), &ctx, &s.config.integrator)?;
    let out = out_path(s, "trajectories.csv");
    export_csv(&paths, &out)?;
    let clamps: usize = paths.iter().map(|p| p.clamp_events).sum();
    eprintln!(
        "wrote {} ({} trajectories, {clamps} velocity clamp events)",
        out.display(),
        paths.len()
    );
    truncation_check(&paths)
}

pub fn revival(s: &Setup, window: Option<f64>, samples: usize) -> Result<(), Failure> {
    let ctx = s.config.context();
    let g = &ctx.grating;
    let z_t = ctx.talbot_length();
    let m = revival_metrics(&ctx, window.unwrap_or(2.0 * g.period))?;
    let x_mid = g.central_midpoint();
    let section = line_section(&ctx, Axis::FixedX, x_mid, z_t / 1000.0, z_t, samples)?;
    let v = section.values();
    let peak = section.max();
    let maxima: Vec<String> = local_maxima(&v)
        .into_iter()
        .filter(|&i| v[i] >= 0.1 * peak)
        .map(|i| format!("{:.4}", section.samples[i].0 / z_t))
        .collect();
    let mut r = String::new();
    let _ = writeln!(r, "full_revival_corr        {:.6}", m.full_revival_corr);
    let _ = writeln!(
        r,
        "half_revival_shift_corr  {:.6}",
        m.half_revival_shift_corr
    );
    let _ = writeln!(r, "midpoint_x_m             {x_mid:.10e}");
    let _ = writeln!(r, "midpoint_maxima_z_over_zT {}", maxima.join(" "));
    let _ = writeln!(r, "midpoint_start_over_max  {:.6}", v[0] / peak);
    let _ = writeln!(r, "midpoint_end_over_max    {:.6}", v[v.len() - 1] / peak);
    emit_report(s, &r)
}
