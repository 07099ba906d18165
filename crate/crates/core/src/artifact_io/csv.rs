use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::bohm::{Trajectory, TrajectoryStatus};
use crate::farfield::FarFieldSample;
use crate::fieldgrid::{Axis, CrossSection, DensityField};
use crate::{Error, Result};

/// Objects that serialise to CSV: UTF-8, LF line endings, SI values with 17
/// significant digits so that parsing returns the exact doubles.
pub trait CsvExport {
    fn write_csv(&self, out: &mut dyn Write) -> io::Result<()>;

    fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Header row `x\z,z_0,..`, then one row per x: `x_i,p(x_i,z_0),..`.
impl CsvExport for DensityField {
    fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        let spec = &self.spec;
        write!(out, "x\\z")?;
        for z in spec.zs() {
            write!(out, ",{}", num(z))?;
        }
        writeln!(out)?;
        for (i, x) in spec.xs().into_iter().enumerate() {
            write!(out, "{}", num(x))?;
            for j in 0..spec.nz {
                write!(out, ",{}", num(self.get(i, j)))?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

impl CsvExport for CrossSection {
    fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        match self.axis {
            Axis::FixedZ => writeln!(out, "x,density")?,
            Axis::FixedX => writeln!(out, "z,density")?,
        }
        for &(p, v) in &self.samples {
            writeln!(out, "{},{}", num(p), num(v))?;
        }
        Ok(())
    }
}

impl CsvExport for Trajectory {
    fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "z,x,t")?;
        for p in &self.points {
            writeln!(out, "{},{},{}", num(p.z), num(p.x), num(p.t))?;
        }
        Ok(())
    }
}

fn status_name(s: TrajectoryStatus) -> &'static str {
    match s {
        TrajectoryStatus::Complete => "complete",
        TrajectoryStatus::NodeTruncated => "node-truncated",
        TrajectoryStatus::StepLimit => "step-limit",
    }
}

/// Long format, one row per recorded point:
/// `trajectory,slit,offset,status,z,x,t`.
impl CsvExport for Vec<Trajectory> {
    fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "trajectory,slit,offset,status,z,x,t")?;
        for (k, traj) in self.iter().enumerate() {
            let status = status_name(traj.status);
            for p in &traj.points {
                writeln!(
                    out,
                    "{k},{},{},{status},{},{},{}",
                    traj.seed_slit,
                    num(traj.seed_offset),
                    num(p.z),
                    num(p.x),
                    num(p.t)
                )?;
            }
        }
        Ok(())
    }
}

/// `x,simulated,analytic`, both curves peak-normalised.
impl CsvExport for Vec<FarFieldSample> {
    fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "x,simulated,analytic")?;
        for r in self {
            writeln!(out, "{},{},{}", num(r.x), num(r.simulated), num(r.analytic))?;
        }
        Ok(())
    }
}

pub fn export_csv(object: &dyn CsvExport, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    object
        .write_csv(&mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

/// Splits CSV text into its header and numeric rows.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::domain("empty CSV"))?
        .split(',')
        .map(str::to_owned)
        .collect();
    let rows = lines
        .enumerate()
        .map(|(n, line)| {
            line.split(',')
                .map(|cell| {
                    cell.parse::<f64>()
                        .map_err(|e| Error::domain(format!("CSV row {}: {cell:?}: {e}", n + 2)))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok((header, rows))
}
