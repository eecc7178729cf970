//! Command-line front end for tongue atlases: settings, grid sweeps, tongue
//! tables and SVG rendering.

pub mod commands;
pub mod config;
pub mod svg;
pub mod sweep;
pub mod tongues;

pub use commands::{run, CliError, Verb};
pub use config::{ConfigError, Settings};
pub use sweep::{run_atlas, Cell, SweepConfig};

/// Float formatting used in every CSV: 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}
