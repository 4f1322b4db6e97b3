use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use supercone::commands::{cmd_decompose, cmd_ellipsoid, cmd_evolve, cmd_verify, parse_fault, CliError, Output};
use supercone::config::{Format, RunConfig};
use supercone::output::emit;
use supercone::suites::Faults;

/// Two-bit super phase-spacetime dynamics, probability cones and invariant checks.
#[derive(Parser)]
#[command(name = "supercone", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a state and write its probability trajectory.
    Evolve(Common),
    /// Run the invariant suites (exit 1 on any failure).
    Verify {
        #[command(flatten)]
        common: Common,
        /// Comma-separated suite names, or `all`.
        #[arg(long)]
        suite: Option<String>,
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
    /// Sample (p1, p2, p3) and label the simplex, cone and ellipsoid regions.
    Ellipsoid(Common),
    /// Decompose a closed even superform (exit 4 if it is not closed).
    Decompose {
        #[command(flatten)]
        common: Common,
        /// Superform JSON file; defaults to `input` in the config.
        input: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
}

impl Common {
    fn config(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p).map_err(CliError::Validation)?,
            None => RunConfig::default(),
        };
        // command-line flags win over the file
        if self.out.is_some() {
            cfg.out.clone_from(&self.out);
        } else if let Some(out) = &cfg.out {
            cfg.out = Some(cfg.resolve_path(out));
        }
        cfg.format = self.format.or(cfg.format);
        cfg.seed = self.seed.or(cfg.seed);
        cfg.samples = self.samples.or(cfg.samples);
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<(Output, RunConfig), CliError> {
    match cli.command {
        Command::Evolve(c) => {
            let cfg = c.config()?;
            Ok((cmd_evolve(&cfg)?, cfg))
        }
        Command::Ellipsoid(c) => {
            let cfg = c.config()?;
            Ok((cmd_ellipsoid(&cfg)?, cfg))
        }
        Command::Verify { common, suite, inject_fault } => {
            let mut cfg = common.config()?;
            cfg.suite = suite.or(cfg.suite.take());
            let faults = inject_fault.as_deref().map(parse_fault).transpose()?.unwrap_or(Faults::default());
            Ok((cmd_verify(&cfg, faults)?, cfg))
        }
        Command::Decompose { common, input } => {
            let cfg = common.config()?;
            let path = match (input, &cfg.input) {
                (Some(p), _) => p,
                (None, Some(p)) => cfg.resolve_path(p),
                (None, None) => return Err(CliError::Validation("decompose needs an input superform".into())),
            };
            Ok((cmd_decompose(&cfg, &path)?, cfg))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SUPERCONE_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = run(cli).and_then(|(output, cfg)| {
        emit(cfg.out.as_deref(), &output.text)?;
        Ok(output.code)
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
