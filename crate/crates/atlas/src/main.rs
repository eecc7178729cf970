use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use tongue_atlas::config::parse_grid;
use tongue_atlas::{run, CliError, Settings, Verb};

/// Arnold tongues of piecewise contracting interval maps.
#[derive(Parser)]
#[command(name = "tongue-atlas", version)]
struct Cli {
    #[command(subcommand)]
    verb: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand)]
enum Command {
    /// Characteristic sequence of (n, l)
    Seq,
    /// Linear-model tongue boundaries at a slope
    Region,
    /// Tongue containing a linear map
    Classify,
    /// Periodic orbit of one map
    Orbit,
    /// Structural checks on one map
    Check,
    /// Tongue interval of (n, l) in a family
    Solve,
    /// All tongues of a family down to a tree depth
    AtlasTongues,
    /// Period grid sweep, optionally rendered to SVG
    Atlas,
    /// Conjugacy between a linear map and a target map
    Conjugacy,
    /// SVG from a grid CSV and an optional overlay CSV
    Render {
        #[arg(required = true, num_args = 1..=2)]
        inputs: Vec<PathBuf>,
    },
}

#[derive(Args)]
struct Flags {
    #[arg(long, global = true)]
    n: Option<u32>,
    #[arg(long, global = true)]
    l: Option<u32>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// linear, sine, quadratic or sqrt
    #[arg(long, global = true)]
    family: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Sine family maximum, used when --alpha is absent
    #[arg(long, global = true)]
    c_star: Option<f64>,
    /// Slope of the conjugacy target
    #[arg(long, global = true)]
    target_alpha: Option<f64>,
    /// Offset of a linear conjugacy target
    #[arg(long, global = true)]
    target_beta: Option<f64>,
    #[arg(long, global = true)]
    depth: Option<u32>,
    /// WxH cells
    #[arg(long, global = true, value_parser = parse_grid)]
    grid: Option<(usize, usize)>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    max_period: Option<u32>,
    /// key = value settings; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

impl Flags {
    fn settings(&self) -> Settings {
        Settings {
            n: self.n,
            l: self.l,
            alpha: self.alpha,
            beta: self.beta,
            family: self.family.clone(),
            c: self.c,
            c_star: self.c_star,
            target_alpha: self.target_alpha,
            target_beta: self.target_beta,
            depth: self.depth,
            grid: self.grid,
            out: self.out.clone(),
            svg: self.svg.clone(),
            tol: self.tol,
            seed: self.seed,
            max_period: self.max_period,
            ..Settings::default()
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let base = match &cli.flags.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            Settings::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        None => Settings::default(),
    };
    let settings = base.overridden_by(cli.flags.settings());
    let verb = match cli.verb {
        Command::Seq => Verb::Seq,
        Command::Region => Verb::Region,
        Command::Classify => Verb::Classify,
        Command::Orbit => Verb::Orbit,
        Command::Check => Verb::Check,
        Command::Solve => Verb::Solve,
        Command::AtlasTongues => Verb::AtlasTongues,
        Command::Atlas => Verb::Atlas,
        Command::Conjugacy => Verb::Conjugacy,
        Command::Render { inputs } => Verb::Render { inputs },
    };
    let outcome = run(&verb, &settings)?;
    match &outcome.dest {
        Some(path) => fs::write(path, &outcome.text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?,
        None => print!("{}", outcome.text),
    }
    if let Some(note) = &outcome.note {
        eprintln!("{note}");
    }
    match outcome.failure {
        Some(msg) => Err(CliError::Numerical(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
