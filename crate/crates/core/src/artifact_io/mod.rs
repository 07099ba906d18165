//! File formats: CSV exports, PGM carpet images and TOML run configurations.

mod config;
mod csv;
mod pgm;

pub use config::{load_config, parse_config, MassSpec, RunConfig};
pub use csv::{export_csv, parse_csv, CsvExport};
pub use pgm::{render_carpet, Normalization, Palette, RenderOptions, OVERLAY_LEVEL};
