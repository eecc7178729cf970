//! `key = value` settings files and their merge with command-line flags.

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{key}: {message}")]
    Value { key: String, message: String },
    #[error("missing required setting `{0}`")]
    Missing(&'static str),
}

fn value_error(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Value {
        key: key.to_string(),
        message: message.into(),
    }
}

/// Every setting the verbs understand. `None` means unset.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub n: Option<u32>,
    pub l: Option<u32>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub family: Option<String>,
    pub c: Option<f64>,
    pub c_star: Option<f64>,
    pub target_alpha: Option<f64>,
    pub target_beta: Option<f64>,
    pub depth: Option<u32>,
    pub grid: Option<(usize, usize)>,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub max_period: Option<u32>,
    pub alpha_min: Option<f64>,
    pub alpha_max: Option<f64>,
    pub y_min: Option<f64>,
    pub y_max: Option<f64>,
    pub burn_in: Option<usize>,
}

/// `WxH`, or a single number for a square grid.
pub fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let parse = |p: &str| p.trim().parse::<usize>().map_err(|e| format!("bad grid size `{s}`: {e}"));
    let (w, h) = match s.split_once(['x', 'X', '×']) {
        Some((w, h)) => (parse(w)?, parse(h)?),
        None => {
            let k = parse(s)?;
            (k, k)
        }
    };
    if w < 2 || h < 2 {
        return Err(format!("grid {w}x{h} needs at least 2 cells per side"));
    }
    Ok((w, h))
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    v.parse::<T>().map_err(|e| value_error(key, format!("cannot parse `{v}`: {e}")))
}

impl Settings {
    /// Parses a settings file. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut s = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: i + 1,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            s.set(key, value).map_err(|e| match e {
                ConfigError::Value { key, message } => ConfigError::Syntax {
                    line: i + 1,
                    message: format!("{key}: {message}"),
                },
                other => other,
            })?;
        }
        Ok(s)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<(), ConfigError> {
        let k = key.replace('-', "_");
        match k.as_str() {
            "n" => self.n = Some(parse_value(key, v)?),
            "l" => self.l = Some(parse_value(key, v)?),
            "alpha" => self.alpha = Some(parse_value(key, v)?),
            "beta" => self.beta = Some(parse_value(key, v)?),
            "family" => self.family = Some(v.to_string()),
            "c" => self.c = Some(parse_value(key, v)?),
            "c_star" => self.c_star = Some(parse_value(key, v)?),
            "target_alpha" => self.target_alpha = Some(parse_value(key, v)?),
            "target_beta" => self.target_beta = Some(parse_value(key, v)?),
            "depth" => self.depth = Some(parse_value(key, v)?),
            "grid" => self.grid = Some(parse_grid(v).map_err(|m| value_error(key, m))?),
            "out" => self.out = Some(PathBuf::from(v)),
            "svg" => self.svg = Some(PathBuf::from(v)),
            "tol" => self.tol = Some(parse_value(key, v)?),
            "seed" => self.seed = Some(parse_value(key, v)?),
            "max_period" => self.max_period = Some(parse_value(key, v)?),
            "alpha_min" => self.alpha_min = Some(parse_value(key, v)?),
            "alpha_max" => self.alpha_max = Some(parse_value(key, v)?),
            "y_min" => self.y_min = Some(parse_value(key, v)?),
            "y_max" => self.y_max = Some(parse_value(key, v)?),
            "burn_in" => self.burn_in = Some(parse_value(key, v)?),
            _ => return Err(value_error(key, "unknown setting")),
        }
        Ok(())
    }

    /// Values set in `over` win.
    pub fn overridden_by(self, over: Settings) -> Settings {
        Settings {
            n: over.n.or(self.n),
            l: over.l.or(self.l),
            alpha: over.alpha.or(self.alpha),
            beta: over.beta.or(self.beta),
            family: over.family.or(self.family),
            c: over.c.or(self.c),
            c_star: over.c_star.or(self.c_star),
            target_alpha: over.target_alpha.or(self.target_alpha),
            target_beta: over.target_beta.or(self.target_beta),
            depth: over.depth.or(self.depth),
            grid: over.grid.or(self.grid),
            out: over.out.or(self.out),
            svg: over.svg.or(self.svg),
            tol: over.tol.or(self.tol),
            seed: over.seed.or(self.seed),
            max_period: over.max_period.or(self.max_period),
            alpha_min: over.alpha_min.or(self.alpha_min),
            alpha_max: over.alpha_max.or(self.alpha_max),
            y_min: over.y_min.or(self.y_min),
            y_max: over.y_max.or(self.y_max),
            burn_in: over.burn_in.or(self.burn_in),
        }
    }

    pub fn family_name(&self) -> &str {
        self.family.as_deref().unwrap_or("linear")
    }

    pub fn tol_or(&self, default: f64) -> Result<f64, ConfigError> {
        let tol = self.tol.unwrap_or(default);
        if tol > 0.0 && tol.is_finite() {
            Ok(tol)
        } else {
            Err(value_error("tol", format!("must be positive, got {tol}")))
        }
    }

    pub fn max_period_or(&self, default: u32) -> Result<u32, ConfigError> {
        let p = self.max_period.unwrap_or(default);
        if p >= 2 {
            Ok(p)
        } else {
            Err(value_error("max-period", format!("must be at least 2, got {p}")))
        }
    }

    pub fn require_alpha(&self) -> Result<f64, ConfigError> {
        self.alpha.ok_or(ConfigError::Missing("alpha"))
    }
}
