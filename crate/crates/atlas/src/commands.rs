//! The verbs behind the command line. Each produces its primary output as
//! text; the binary decides where it goes.

use std::fs;
use std::path::PathBuf;

use thiserror::Error;
use tongue_core::piecewise::{ChainFailure, OrbitOptions};
use tongue_core::{
    build_homeomorphism, check_assumptions, classify, detect_period, farey_atlas, region_boundaries, solve_in_tree,
    verify_conjugacy, Classification, ConjugacyOptions, FamilySpec, Linear, PiecewiseMap, Rational, SolveOptions,
};

use crate::config::{ConfigError, Settings};
use crate::svg::{parse_grid_csv, parse_overlay_csv, render_svg};
use crate::sweep::{run_atlas, start_point, write_grid_csv, SweepConfig};
use crate::tongues::{overlay, write_tongue_csv};
use crate::num;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn numerical(e: impl std::fmt::Display) -> CliError {
    CliError::Numerical(e.to_string())
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verb {
    Seq,
    Region,
    Classify,
    Orbit,
    Check,
    Solve,
    AtlasTongues,
    Atlas,
    Conjugacy,
    Render { inputs: Vec<PathBuf> },
}

/// What a verb produced. `failure` is reported after the output is written.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub text: String,
    /// `None` for standard output.
    pub dest: Option<PathBuf>,
    /// Informational line for standard error.
    pub note: Option<String>,
    pub failure: Option<String>,
}

impl Outcome {
    fn to(text: String, dest: Option<PathBuf>) -> Self {
        Self {
            text,
            dest,
            ..Self::default()
        }
    }
}

fn csv_text(write: impl FnOnce(&mut Vec<u8>) -> csv::Result<()>) -> Result<String, CliError> {
    let mut buf = Vec::new();
    write(&mut buf).map_err(usage)?;
    String::from_utf8(buf).map_err(usage)
}

fn rows(header: &[&str], body: Vec<Vec<String>>) -> Result<String, CliError> {
    csv_text(|buf| {
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(header)?;
        for r in body {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    })
}

fn rational(s: &Settings) -> Result<Rational, CliError> {
    let n = s.n.ok_or(ConfigError::Missing("n"))?;
    let l = s.l.ok_or(ConfigError::Missing("l"))?;
    Rational::new(n, l).map_err(usage)
}

/// The family at `alpha`; the sine family also accepts `c_star` instead.
fn family(name: &str, alpha: Option<f64>, c_star: Option<f64>) -> Result<FamilySpec<f64>, CliError> {
    match (name, alpha, c_star) {
        ("sine", None, Some(cs)) => FamilySpec::sine_from_c_star(cs).map_err(usage),
        (_, Some(a), _) => FamilySpec::builtin(name, a).map_err(usage),
        _ => Err(ConfigError::Missing("alpha").into()),
    }
}

/// The map selected by `family`, `alpha` and `beta` or `c`.
fn single_map(s: &Settings) -> Result<PiecewiseMap<f64>, CliError> {
    let name = s.family_name();
    if name == "linear" {
        let alpha = s.require_alpha()?;
        let beta = match (s.beta, s.c) {
            (Some(b), _) => b,
            (None, Some(c)) => 1.0 - alpha * c,
            _ => return Err(ConfigError::Missing("beta").into()),
        };
        return Ok(PiecewiseMap::from_linear(&Linear::new(alpha, beta).map_err(usage)?));
    }
    let fam = family(name, s.alpha, s.c_star)?;
    let c = s.c.ok_or(ConfigError::Missing("c"))?;
    fam.map_at(c).map_err(usage)
}

fn seq(s: &Settings) -> Result<Outcome, CliError> {
    let r = rational(s)?;
    let text = rows(
        &["n", "l", "lhat", "bits"],
        vec![vec![
            r.period().to_string(),
            r.wraps().to_string(),
            r.lhat().to_string(),
            r.char_seq().to_string(),
        ]],
    )?;
    Ok(Outcome::to(text, s.out.clone()))
}

fn region(s: &Settings) -> Result<Outcome, CliError> {
    let r = rational(s)?;
    let alpha = s.require_alpha()?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(usage(format!("alpha = {alpha} is outside (0, 1)")));
    }
    let reg = region_boundaries(r, &alpha).map_err(numerical)?;
    let text = rows(
        &["n", "l", "alpha", "lower", "upper"],
        vec![vec![
            r.period().to_string(),
            r.wraps().to_string(),
            num(alpha),
            num(reg.lower),
            num(reg.upper),
        ]],
    )?;
    Ok(Outcome::to(text, s.out.clone()))
}

fn classify_verb(s: &Settings) -> Result<Outcome, CliError> {
    let alpha = s.require_alpha()?;
    let beta = s.beta.ok_or(ConfigError::Missing("beta"))?;
    let p = Linear::new(alpha, beta).map_err(usage)?;
    let (period, l) = match classify(&p, s.max_period_or(64)?) {
        Classification::PeriodOne => (1, 0),
        Classification::Tongue(r) => (r.period(), r.wraps()),
        Classification::NotFound => (0, 0),
    };
    let text = rows(
        &["alpha", "beta", "period", "l"],
        vec![vec![num(alpha), num(beta), period.to_string(), l.to_string()]],
    )?;
    Ok(Outcome::to(text, s.out.clone()))
}

fn orbit(s: &Settings) -> Result<Outcome, CliError> {
    let map = single_map(s)?;
    let opts = OrbitOptions {
        max_period: s.max_period_or(1000)? as usize,
        tol: s.tol_or(1e-9)?,
        burn_in: s.burn_in.unwrap_or(10_000),
        ..OrbitOptions::default()
    };
    let x0 = start_point(s.seed.unwrap_or(0), 0, map.domain());
    let o = detect_period(&map, x0, &opts).map_err(numerical)?;
    let body = o
        .orbit
        .iter()
        .zip(&o.itinerary)
        .enumerate()
        .map(|(k, (x, right))| {
            vec![
                o.period.to_string(),
                o.wraps.to_string(),
                o.rotation.num.to_string(),
                o.rotation.den.to_string(),
                k.to_string(),
                num(*x),
                u8::from(*right).to_string(),
            ]
        })
        .collect();
    let text = rows(&["period", "l", "rotation_num", "rotation_den", "step", "x", "right"], body)?;
    let mut out = Outcome::to(text, s.out.clone());
    out.note = Some(format!("x0 = {}, transient = {}, residual = {:e}", num(x0), o.transient, o.residual));
    Ok(out)
}

fn check(s: &Settings) -> Result<Outcome, CliError> {
    let map = single_map(s)?;
    let rep = check_assumptions(&map, s.max_period_or(64)? as usize).map_err(numerical)?;
    let yes = |b: bool| if b { "true" } else { "false" }.to_string();
    let monotone = rep
        .monotone_witness
        .map_or(String::new(), |(x, y)| format!("f({}) >= f({})", num(x), num(y)));
    let chain = match &rep.chain {
        Ok(c) => format!("rotation {}/{}", c.wraps(), c.period()),
        Err(ChainFailure::TooLong { max_period, .. }) => format!("zero has more than {max_period} preimages"),
        Err(ChainFailure::NotCoprime { chain }) => format!("chain {}/{} is not reduced", chain.wraps(), chain.period()),
        Err(ChainFailure::Degenerate) => "the cut has no preimage".to_string(),
    };
    let body = vec![
        vec![
            "non_overlapping".into(),
            yes(rep.non_overlapping),
            format!("f(0) = {}, f(1) = {}", num(rep.overlap_witness.0), num(rep.overlap_witness.1)),
        ],
        vec![
            "boundary_limits".into(),
            yes(rep.boundary_limits),
            format!("f(c-) = {}, f(c) = {}", num(rep.limit_witness.0), num(rep.limit_witness.1)),
        ],
        vec!["increasing".into(), yes(rep.increasing), monotone],
        vec!["finite_chain".into(), yes(rep.chain.is_ok()), chain],
        vec!["all".into(), yes(rep.passed()), String::new()],
    ];
    Ok(Outcome::to(rows(&["check", "passed", "detail"], body)?, s.out.clone()))
}

fn solve_options(s: &Settings) -> Result<SolveOptions<f64>, CliError> {
    Ok(SolveOptions::with_tol(s.tol_or(1e-10)?))
}

fn solve(s: &Settings) -> Result<Outcome, CliError> {
    let fam = family(s.family_name(), s.alpha, s.c_star)?;
    let r = rational(s)?;
    let t = solve_in_tree(&fam, r, &solve_options(s)?).map_err(numerical)?;
    Ok(Outcome::to(csv_text(|b| write_tongue_csv(b, &[t]))?, s.out.clone()))
}

fn atlas_tongues(s: &Settings) -> Result<Outcome, CliError> {
    let fam = family(s.family_name(), s.alpha, s.c_star)?;
    let atlas = farey_atlas(&fam, s.depth.unwrap_or(5), &solve_options(s)?);
    let mut out = Outcome::to(csv_text(|b| write_tongue_csv(b, &atlas.tongues))?, s.out.clone());
    if !atlas.failures.is_empty() {
        let msgs: Vec<String> = atlas.failures.iter().map(|f| f.error.to_string()).collect();
        out.failure = Some(format!("{} tongue(s) failed: {}", msgs.len(), msgs.join("; ")));
    }
    Ok(out)
}

/// Column slopes sampled for the overlay, at most 64.
fn overlay_alphas(cfg: &SweepConfig) -> Vec<f64> {
    let w = cfg.grid.0;
    let samples = w.min(64);
    let mut idx: Vec<usize> = (0..samples).map(|k| k * (w - 1) / (samples - 1)).collect();
    idx.dedup();
    idx.into_iter().map(|i| cfg.alpha_at(i)).collect()
}

fn atlas(s: &Settings) -> Result<Outcome, CliError> {
    let cfg = SweepConfig::from_settings(s)?;
    let cells = run_atlas(&cfg);
    let text = csv_text(|b| write_grid_csv(b, &cells))?;
    if let Some(path) = &s.svg {
        let ov = overlay(&cfg.family, &overlay_alphas(&cfg), s.depth.unwrap_or(4), &solve_options(s)?);
        let pts = parse_grid_csv(text.as_bytes()).map_err(usage)?;
        let doc = render_svg(&pts, &ov).map_err(usage)?;
        fs::write(path, doc).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    let found = cells.iter().filter(|c| c.period > 0).count();
    let mut out = Outcome::to(text, s.out.clone());
    out.note = Some(format!("{found} of {} cells periodic", cells.len()));
    Ok(out)
}

fn conjugacy(s: &Settings) -> Result<Outcome, CliError> {
    let alpha = s.require_alpha()?;
    let beta = s.beta.ok_or(ConfigError::Missing("beta"))?;
    let source = Linear::new(alpha, beta).map_err(usage)?;
    let max_period = s.max_period_or(64)?;
    let r = match classify(&source, max_period) {
        Classification::Tongue(r) => r,
        other => return Err(numerical(format!("linear map ({alpha}, {beta}) is not in a tongue: {other:?}"))),
    };
    if s.n.is_some() || s.l.is_some() {
        let given = rational(s)?;
        if given != r {
            return Err(usage(format!("linear map has rotation {r}, not {given}")));
        }
    }
    let ta = s.target_alpha.ok_or(ConfigError::Missing("target-alpha"))?;
    let target = if s.family_name() == "linear" && s.target_beta.is_some() {
        PiecewiseMap::from_linear(&Linear::new(ta, s.target_beta.unwrap_or_default()).map_err(usage)?)
    } else {
        let fam = FamilySpec::builtin(s.family_name(), ta).map_err(usage)?;
        fam.map_at(s.c.ok_or(ConfigError::Missing("c"))?).map_err(usage)?
    };
    let opts = ConjugacyOptions::with_depth(s.depth.unwrap_or(40) as usize);
    let h = build_homeomorphism(&source, r, &target, &opts).map_err(numerical)?;
    let check = verify_conjugacy(&h, 10_000);
    let body = h.knots_original().into_iter().map(|(a, b)| vec![num(a), num(b)]).collect();
    let mut out = Outcome::to(rows(&["side_s", "side_t"], body)?, s.out.clone());
    out.note = Some(format!(
        "rotation {r}, {} knots, residual {:e}, increasing {}",
        h.knots.len(),
        check.residual,
        check.increasing
    ));
    if let Some(tol) = s.tol {
        if check.residual > tol {
            out.failure = Some(format!("residual {:e} exceeds tolerance {tol:e}", check.residual));
        }
    }
    Ok(out)
}

fn render(inputs: &[PathBuf], s: &Settings) -> Result<Outcome, CliError> {
    let open = |p: &PathBuf| fs::File::open(p).map_err(|e| usage(format!("{}: {e}", p.display())));
    let (grid, rest) = inputs.split_first().ok_or_else(|| usage("render needs a grid CSV"))?;
    let pts = parse_grid_csv(open(grid)?).map_err(|e| usage(format!("{}: {e}", grid.display())))?;
    let ov = match rest.first() {
        Some(p) => parse_overlay_csv(open(p)?).map_err(|e| usage(format!("{}: {e}", p.display())))?,
        None => Vec::new(),
    };
    let doc = render_svg(&pts, &ov).map_err(usage)?;
    Ok(Outcome::to(doc, s.svg.clone().or_else(|| s.out.clone())))
}

pub fn run(verb: &Verb, s: &Settings) -> Result<Outcome, CliError> {
    match verb {
        Verb::Seq => seq(s),
        Verb::Region => region(s),
        Verb::Classify => classify_verb(s),
        Verb::Orbit => orbit(s),
        Verb::Check => check(s),
        Verb::Solve => solve(s),
        Verb::AtlasTongues => atlas_tongues(s),
        Verb::Atlas => atlas(s),
        Verb::Conjugacy => conjugacy(s),
        Verb::Render { inputs } => render(inputs, s),
    }
}
