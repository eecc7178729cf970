//! Period grids over `(α, β)` for the linear model and `(α, c)` otherwise.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use tongue_core::piecewise::{OrbitError, OrbitOptions};
use tongue_core::{detect_period, FamilySpec, Linear, PiecewiseMap};

use crate::config::{ConfigError, Settings};
use crate::num;

/// A validated sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub family: String,
    /// Columns along `α`, rows along the second parameter.
    pub grid: (usize, usize),
    pub alpha_range: (f64, f64),
    /// `β` for the linear family, `c` otherwise.
    pub y_range: (f64, f64),
    pub max_period: u32,
    pub tol: f64,
    pub seed: u64,
    pub burn_in: usize,
}

/// Axis ranges used when the settings give none.
pub fn default_ranges(family: &str) -> ((f64, f64), (f64, f64)) {
    match family {
        "sine" => ((0.1, 1.25), (0.05, 3.0)),
        "linear" => ((0.05, 0.95), (0.05, 0.95)),
        _ => ((0.05, 0.95), (0.02, 0.98)),
    }
}

impl SweepConfig {
    pub fn from_settings(s: &Settings) -> Result<Self, ConfigError> {
        let family = s.family_name().to_string();
        if !tongue_core::tongue::BUILTIN_FAMILIES.contains(&family.as_str()) {
            return Err(ConfigError::Value {
                key: "family".into(),
                message: format!("unknown family `{family}`"),
            });
        }
        let (da, dy) = default_ranges(&family);
        let alpha_range = (s.alpha_min.unwrap_or(da.0), s.alpha_max.unwrap_or(da.1));
        let y_range = (s.y_min.unwrap_or(dy.0), s.y_max.unwrap_or(dy.1));
        for (key, (lo, hi)) in [("alpha range", alpha_range), ("y range", y_range)] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(ConfigError::Value {
                    key: key.into(),
                    message: format!("need min < max, got [{lo}, {hi}]"),
                });
            }
        }
        Ok(Self {
            family,
            grid: s.grid.unwrap_or((64, 64)),
            alpha_range,
            y_range,
            max_period: s.max_period_or(64)?,
            tol: s.tol_or(1e-9)?,
            seed: s.seed.unwrap_or(0),
            burn_in: s.burn_in.unwrap_or(10_000),
        })
    }

    pub fn alpha_at(&self, i: usize) -> f64 {
        lerp(self.alpha_range, i, self.grid.0)
    }

    pub fn y_at(&self, j: usize) -> f64 {
        lerp(self.y_range, j, self.grid.1)
    }

    pub fn alpha_step(&self) -> f64 {
        (self.alpha_range.1 - self.alpha_range.0) / (self.grid.0 - 1) as f64
    }

    pub fn y_step(&self) -> f64 {
        (self.y_range.1 - self.y_range.0) / (self.grid.1 - 1) as f64
    }
}

fn lerp((lo, hi): (f64, f64), i: usize, count: usize) -> f64 {
    if i + 1 == count {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (count - 1) as f64
    }
}

/// One sweep result. `period == 0` means no cycle was found.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub alpha: f64,
    pub y: f64,
    pub period: usize,
    pub l: usize,
    pub rotation: (u32, u32),
    pub note: String,
}

/// The map at one grid point.
pub fn cell_map(family: &str, alpha: f64, y: f64) -> Result<PiecewiseMap<f64>, String> {
    if family == "linear" {
        let p = Linear::new(alpha, y).map_err(|e| e.to_string())?;
        return Ok(PiecewiseMap::from_linear(&p));
    }
    let fam = FamilySpec::builtin(family, alpha).map_err(|e| e.to_string())?;
    fam.map_at(y).map_err(|e| e.to_string())
}

/// Random starting point of cell `index`, independent of evaluation order.
pub fn start_point(seed: u64, index: u64, domain: (f64, f64)) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    domain.0 + (domain.1 - domain.0) * rng.random::<f64>()
}

fn evaluate(cfg: &SweepConfig, index: usize, alpha: f64, y: f64) -> Cell {
    let mut cell = Cell {
        alpha,
        y,
        period: 0,
        l: 0,
        rotation: (0, 1),
        note: String::new(),
    };
    let map = match cell_map(&cfg.family, alpha, y) {
        Ok(m) => m,
        Err(e) => {
            cell.note = e;
            return cell;
        }
    };
    let opts = OrbitOptions {
        burn_in: cfg.burn_in,
        max_period: cfg.max_period as usize,
        tol: cfg.tol,
        ..OrbitOptions::default()
    };
    let x0 = start_point(cfg.seed, index as u64, map.domain());
    match detect_period(&map, x0, &opts) {
        Ok(orbit) => {
            cell.period = orbit.period;
            cell.l = orbit.wraps;
            cell.rotation = (orbit.rotation.num, orbit.rotation.den);
        }
        Err(OrbitError::NoRecurrence { max_period, .. }) => cell.note = format!("no period up to {max_period}"),
        Err(e) => cell.note = e.to_string(),
    }
    cell
}

/// Evaluates every cell in parallel and returns them in row-major order
/// (rows along the second parameter, `α` varying fastest).
pub fn run_atlas(cfg: &SweepConfig) -> Vec<Cell> {
    let (w, h) = cfg.grid;
    (0..w * h)
        .into_par_iter()
        .map(|k| evaluate(cfg, k, cfg.alpha_at(k % w), cfg.y_at(k / w)))
        .collect()
}

pub const GRID_HEADER: [&str; 7] = ["alpha", "c_or_beta", "period", "l", "rotation_num", "rotation_den", "note"];

pub fn write_grid_csv<W: Write>(out: W, cells: &[Cell]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(GRID_HEADER)?;
    for c in cells {
        w.write_record([
            num(c.alpha),
            num(c.y),
            c.period.to_string(),
            c.l.to_string(),
            c.rotation.0.to_string(),
            c.rotation.1.to_string(),
            c.note.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
