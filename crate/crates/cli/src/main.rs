//! `nslit`: Talbot carpets, far-field patterns and Bohmian trajectories of
//! Gaussian wave packets behind an N-slit grating.

// `!(a > b)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod recipes;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nslit_core::artifact_io::{load_config, parse_config, Normalization, Palette, RunConfig};

use crate::recipes::Recipe;

#[derive(Parser)]
#[command(name = "nslit", version, about, long_about = None)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Run configuration file (TOML)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Built-in configuration; `nslit recipes` lists them
    #[arg(long, global = true, value_name = "NAME", conflicts_with = "config")]
    recipe: Option<String>,
    /// Output file; each command has its own default
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores); results do not depend on it
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
}

#[derive(Subcommand)]
enum Command {
    /// Print beam kinematics, Talbot length and the slit table
    Params,
    /// Render the density p(x, z) as a PGM image
    Carpet(CarpetArgs),
    /// Compare the propagated density with the diffraction formula far away
    Farfield(FarfieldArgs),
    /// Density along a line of constant x or z
    Crosssection(CrossSectionArgs),
    /// Integrate Bohmian trajectories from the slit plane
    Trajectories(TrajectoryArgs),
    /// Talbot revival diagnostics
    Revival(RevivalArgs),
    /// List the built-in recipes
    Recipes,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    Global,
    PerColumn,
}

#[derive(Clone, Copy, ValueEnum)]
enum PaletteArg {
    BlackMax,
    WhiteMax,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AxisArg {
    /// Constant x, sampled along z
    FixedX,
    /// Constant z, sampled along x
    FixedZ,
}

#[derive(Args)]
struct GridArg {
    /// Grid size as NXxNZ, e.g. 2048x2048
    #[arg(long, value_name = "NXxNZ", value_parser = parse_grid)]
    grid: Option<(usize, usize)>,
}

#[derive(Args)]
struct CarpetArgs {
    #[command(flatten)]
    grid: GridArg,
    /// Bohmian trajectories per slit drawn over the carpet
    #[arg(long, value_name = "N")]
    trajectories: Option<usize>,
    #[arg(long, value_enum)]
    normalization: Option<NormArg>,
    #[arg(long, value_name = "F")]
    gamma: Option<f64>,
    #[arg(long, value_enum)]
    palette: Option<PaletteArg>,
    /// Also write the sampled density as CSV
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct FarfieldArgs {
    /// Detector distance, m
    #[arg(long, value_name = "M")]
    z: Option<f64>,
    /// Lower end of the x range, m (default: the central 5 principal maxima)
    #[arg(long, value_name = "M", allow_hyphen_values = true)]
    x_min: Option<f64>,
    /// Upper end of the x range, m
    #[arg(long, value_name = "M", allow_hyphen_values = true)]
    x_max: Option<f64>,
    #[arg(long, default_value_t = 4096)]
    samples: usize,
    /// Use the textbook phase and envelope of the diffraction formula instead
    /// of the propagation-consistent form
    #[arg(long)]
    textbook: bool,
}

#[derive(Args)]
struct CrossSectionArgs {
    #[arg(long, value_enum, default_value = "fixed-x")]
    axis: AxisArg,
    /// Fixed coordinate, m (default: midpoint of the central slits for
    /// fixed-x, a quarter Talbot length for fixed-z)
    #[arg(long, value_name = "M", allow_hyphen_values = true)]
    at: Option<f64>,
    #[command(flatten)]
    grid: GridArg,
    /// Samples along the line (default: the grid size along it)
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args)]
struct TrajectoryArgs {
    /// Trajectories per slit
    #[arg(long, value_name = "N", default_value_t = 8)]
    trajectories: usize,
    /// Seed quantiles of the slit-plane density
    #[arg(long, value_name = "Q", default_value_t = 0.1)]
    q_lo: f64,
    #[arg(long, value_name = "Q", default_value_t = 0.9)]
    q_hi: f64,
    /// End of integration, m (default: grid z_max)
    #[arg(long, value_name = "M")]
    z_end: Option<f64>,
    /// Record at this many evenly spaced z; 0 records every accepted step
    #[arg(long, value_name = "N")]
    stations: Option<usize>,
}

#[derive(Args)]
struct RevivalArgs {
    /// Half width of the central window, m (default: 2 periods)
    #[arg(long, value_name = "M")]
    window: Option<f64>,
    /// Samples along the midpoint cross-section
    #[arg(long, default_value_t = 4001)]
    samples: usize,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NXxNZ, got {s:?}"))?;
    let nx: usize = a.trim().parse().map_err(|e| format!("bad NX {a:?}: {e}"))?;
    let nz: usize = b.trim().parse().map_err(|e| format!("bad NZ {b:?}: {e}"))?;
    if nx < 2 || nz < 2 {
        return Err("grid needs at least 2x2 points".into());
    }
    Ok((nx, nz))
}

/// Everything a command needs besides its own flags.
pub struct Setup {
    pub config: RunConfig,
    pub recipe: Option<&'static Recipe>,
    pub out: Option<PathBuf>,
}

pub enum Failure {
    Usage(String),
    Core(nslit_core::Error),
    /// Outputs were written but some trajectories stopped early.
    Truncated(String),
}

impl From<nslit_core::Error> for Failure {
    fn from(e: nslit_core::Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        use nslit_core::Error;
        match self {
            Failure::Usage(_) => 2,
            Failure::Core(Error::Config(_)) => 3,
            Failure::Core(Error::Domain(_) | Error::Node { .. }) | Failure::Truncated(_) => 4,
            Failure::Core(Error::Io { .. }) => 5,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Truncated(m) => f.write_str(m),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

fn setup(common: &Common) -> Result<Setup, Failure> {
    let (config, recipe) = match (&common.config, &common.recipe) {
        (Some(path), _) => (load_config(path)?, None),
        (None, Some(name)) => {
            let recipe = recipes::find(name).ok_or_else(|| {
                let names: Vec<&str> = recipes::RECIPES.iter().map(|r| r.name).collect();
                Failure::Usage(format!(
                    "unknown recipe {name:?}; available: {}",
                    names.join(", ")
                ))
            })?;
            (parse_config(recipe.config)?, Some(recipe))
        }
        (None, None) => {
            return Err(Failure::Usage(
                "one of --config PATH or --recipe NAME is required".into(),
            ))
        }
    };
    Ok(Setup {
        config,
        recipe,
        out: common.out.clone(),
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Command::Recipes = cli.command {
        for r in recipes::RECIPES {
            println!("{:<6}  {}", r.name, r.summary);
        }
        return Ok(());
    }
    let mut s = setup(&cli.common)?;
    match cli.command {
        Command::Params => commands::params(&s),
        Command::Carpet(a) => {
            if let Some((nx, nz)) = a.grid.grid {
                (s.config.grid.nx, s.config.grid.nz) = (nx, nz);
            }
            let r = &mut s.config.render;
            if let Some(n) = a.normalization {
                r.normalization = match n {
                    NormArg::Global => Normalization::Global,
                    NormArg::PerColumn => Normalization::PerColumn,
                };
            }
            if let Some(p) = a.palette {
                r.palette = match p {
                    PaletteArg::BlackMax => Palette::BlackMax,
                    PaletteArg::WhiteMax => Palette::WhiteMax,
                };
            }
            if let Some(g) = a.gamma {
                r.gamma = g;
            }
            let per_slit = a
                .trajectories
                .or(s.recipe.and_then(|r| r.trajectories))
                .unwrap_or(0);
            commands::carpet(&s, per_slit, a.csv.as_deref())
        }
        Command::Farfield(a) => {
            let z = a.z.or(s.recipe.and_then(|r| r.farfield_z)).ok_or_else(|| {
                Failure::Usage("farfield needs --z (or a recipe that sets it)".into())
            })?;
            commands::farfield(&s, z, a.x_min, a.x_max, a.samples, a.textbook)
        }
        Command::Crosssection(a) => {
            if let Some((nx, nz)) = a.grid.grid {
                (s.config.grid.nx, s.config.grid.nz) = (nx, nz);
            }
            commands::crosssection(&s, a.axis == AxisArg::FixedX, a.at, a.samples)
        }
        Command::Trajectories(a) => {
            commands::trajectories(&s, a.trajectories, (a.q_lo, a.q_hi), a.z_end, a.stations)
        }
        Command::Revival(a) => commands::revival(&s, a.window, a.samples),
        Command::Recipes => unreachable!(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.common.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build()
        {
            Ok(pool) => pool.install(|| run(cli)),
            Err(e) => Err(Failure::Usage(format!(
                "cannot start {n} worker threads: {e}"
            ))),
        },
        None => run(cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(parse_grid("2048x1024"), Ok((2048, 1024)));
        assert_eq!(parse_grid("16X16"), Ok((16, 16)));
        assert!(parse_grid("1x16").is_err());
        assert!(parse_grid("16").is_err());
        assert!(parse_grid("ax16").is_err());
    }

    #[test]
    fn exit_codes_are_distinct() {
        use nslit_core::Error;
        let io = Error::Io {
            path: "p".into(),
            source: std::io::Error::other("x"),
        };
        let codes = [
            Failure::Usage(String::new()).exit_code(),
            Failure::Core(Error::Config(vec![])).exit_code(),
            Failure::Core(Error::Domain(String::new())).exit_code(),
            Failure::Core(Error::Node { x: 0.0, z: 0.0 }).exit_code(),
            Failure::Truncated(String::new()).exit_code(),
            Failure::Core(io).exit_code(),
        ];
        assert_eq!(codes, [2, 3, 4, 4, 4, 5]);
    }

    #[test]
    fn config_and_recipe_conflict() {
        assert!(
            Cli::try_parse_from(["nslit", "params", "--config", "a.toml", "--recipe", "fig5"])
                .is_err()
        );
        assert!(
            Cli::try_parse_from(["nslit", "carpet", "--threads", "0", "--recipe", "fig7"]).is_err()
        );
        assert!(
            Cli::try_parse_from(["nslit", "farfield", "--recipe", "fig5", "--x-min", "-1e-3"])
                .is_ok()
        );
    }
}
