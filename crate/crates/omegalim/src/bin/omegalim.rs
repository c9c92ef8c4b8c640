//! Batch CLI: load a config file, run one analysis command, print a report.
//!
//! Exit codes: 0 all requested checks pass, 1 some check failed, 2 parse
//! error (bad config text or unreadable file), 3 semantic error (valid text
//! describing an invalid or mismatched object).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use omegalim::config::{parse_config, ConfigErrorKind};
use omegalim::report::OutputFormat;
use omegalim::runner::{run, CommandKind, Overrides};

#[derive(Parser)]
#[command(
    name = "omegalim",
    version,
    about = "Exact orbit analysis over finite partitions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Config file describing the space, map, and partition or chain.
    #[arg(long)]
    config: PathBuf,

    /// Query point; repeatable. Overrides the config's `points`.
    #[arg(long = "point")]
    points: Vec<u64>,

    /// Chain prefix depth for intersections. Overrides the config's `depth`.
    #[arg(long)]
    depth: Option<usize>,

    /// Output format. Overrides the config's `format`.
    #[arg(long, value_parser = ["text", "machine"])]
    format: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the configured partition and chain for structural validity.
    Validate(RunArgs),
    /// Compute which blocks each query point's orbit visits infinitely often.
    Delta(RunArgs),
    /// Intersect chosen visited blocks along the chain and classify the trend.
    Intersect(RunArgs),
    /// Enumerate all threads of the configured inverse system.
    Threads(RunArgs),
    /// Construct one thread along the chain (extending over a directed poset).
    BuildThread(RunArgs),
    /// Run the full invariant suite on the configured instance.
    Verify(RunArgs),
    /// Run the built-in worked scenarios and diff against frozen expectations.
    Examples {
        /// Output format.
        #[arg(long, value_parser = ["text", "machine"])]
        format: Option<String>,
    },
}

fn parse_format(arg: &Option<String>) -> Option<OutputFormat> {
    arg.as_deref().map(|s| match s {
        "machine" => OutputFormat::Machine,
        _ => OutputFormat::Text,
    })
}

fn dispatch(kind: CommandKind, args: &RunArgs) -> ExitCode {
    let text = match std::fs::read_to_string(&args.config) {
        Ok(text) => text,
        Err(err) => {
            eprintln!("error: cannot read {}: {err}", args.config.display());
            return ExitCode::from(2);
        }
    };
    let config = match parse_config(&text) {
        Ok(config) => config,
        Err(err) => {
            eprintln!("error: {err}");
            return match err.kind {
                ConfigErrorKind::Syntax => ExitCode::from(2),
                ConfigErrorKind::Semantic => ExitCode::from(3),
            };
        }
    };
    let overrides = Overrides {
        points: args.points.clone(),
        depth: args.depth,
        format: parse_format(&args.format),
    };
    let format = omegalim::runner::effective_format(&config, &overrides);
    match run(&config, kind, &overrides) {
        Ok(report) => {
            print!("{}", report.render(format));
            ExitCode::from(report.exit_code as u8)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(3)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Validate(args) => dispatch(CommandKind::Validate, args),
        Command::Delta(args) => dispatch(CommandKind::Delta, args),
        Command::Intersect(args) => dispatch(CommandKind::Intersect, args),
        Command::Threads(args) => dispatch(CommandKind::Threads, args),
        Command::BuildThread(args) => dispatch(CommandKind::BuildThread, args),
        Command::Verify(args) => dispatch(CommandKind::Verify, args),
        Command::Examples { format } => {
            let overrides = Overrides {
                format: parse_format(format),
                ..Default::default()
            };
            let config = omegalim::config::Config::default();
            let format = omegalim::runner::effective_format(&config, &overrides);
            match run(&config, CommandKind::Examples, &overrides) {
                Ok(report) => {
                    print!("{}", report.render(format));
                    ExitCode::from(report.exit_code as u8)
                }
                Err(err) => {
                    eprintln!("error: {err}");
                    ExitCode::from(3)
                }
            }
        }
    }
}
