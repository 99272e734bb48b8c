use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use robust_auction_cli::{
    parse_config, parse_manifest, run, serialize_manifest, CliError, Command, EmitFormat, Result, RunManifest,
};

#[derive(Parser)]
#[command(
    name = "robust-auction",
    version,
    about = "Interval estimation and query-reduced VCG auctions"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Confidence intervals for every bidder/item pair.
    Estimate(RunArgs),
    /// Intervals plus the winnowing decision for every pair.
    Winnow(RunArgs),
    /// Tuned auction on generated worlds, one row per item and method.
    Auction(RunArgs),
    /// Threshold sweep on generated worlds.
    Simulate(RunArgs),
    /// Exact and lower-bound allocation counts for N = 1..max.
    TheoryTable(RunArgs),
    /// Replays a saved manifest.
    Run {
        #[arg(long)]
        manifest: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; `-` writes to stdout.
    #[arg(long, default_value = "-")]
    out: PathBuf,
    #[arg(long, default_value = "csv", value_parser = ["csv", "jsonl"])]
    format: String,
    /// Consecutive seeds starting at the config seed.
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    /// Historical bids file (estimate and winnow only).
    #[arg(long)]
    history: Option<PathBuf>,
    /// Largest N for theory-table.
    #[arg(long)]
    max_n: Option<u32>,
    /// Also write the resolved manifest here.
    #[arg(long)]
    save_manifest: Option<PathBuf>,
}

fn build(command: Command, args: RunArgs) -> Result<(RunManifest, Option<PathBuf>)> {
    let config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
                path: path.clone(),
                source: e,
            })?;
            Some(parse_config(&text)?)
        }
        None => None,
    };
    let mut manifest = RunManifest::new(command, config);
    manifest.output = args.out;
    manifest.format = args.format.parse::<EmitFormat>().map_err(CliError::Usage)?;
    manifest.seeds = args.seeds;
    manifest.history = args.history;
    manifest.max_n = args.max_n;
    manifest.validate()?;
    Ok((manifest, args.save_manifest))
}

fn execute(cli: Cli) -> Result<()> {
    let (manifest, save) = match cli.command {
        Cmd::Estimate(a) => build(Command::Estimate, a)?,
        Cmd::Winnow(a) => build(Command::Winnow, a)?,
        Cmd::Auction(a) => build(Command::Auction, a)?,
        Cmd::Simulate(a) => build(Command::Simulate, a)?,
        Cmd::TheoryTable(a) => build(Command::TheoryTable, a)?,
        Cmd::Run { manifest } => {
            let text = std::fs::read_to_string(&manifest).map_err(|e| CliError::Io {
                path: manifest.clone(),
                source: e,
            })?;
            (parse_manifest(&text)?, None)
        }
    };
    if let Some(path) = save {
        robust_auction_cli::output::write_atomic(&path, serialize_manifest(&manifest)?.as_bytes())?;
    }
    run(&manifest)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.one_line());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
