//! Complete description of one invocation, storable as a flat text file
//! that uses the configuration syntax plus a few run keys.

use std::fmt;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use robust_auction::simulation::ScenarioConfig;

use crate::config::{bad, config_from_entries, parse_value, reject_unknown, serialize_config, tokenize};
use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Estimate,
    Winnow,
    Auction,
    Simulate,
    TheoryTable,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::Estimate,
        Command::Winnow,
        Command::Auction,
        Command::Simulate,
        Command::TheoryTable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Estimate => "estimate",
            Command::Winnow => "winnow",
            Command::Auction => "auction",
            Command::Simulate => "simulate",
            Command::TheoryTable => "theory-table",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EmitFormat {
    #[default]
    Csv,
    Jsonl,
}

impl fmt::Display for EmitFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EmitFormat::Csv => "csv",
            EmitFormat::Jsonl => "jsonl",
        })
    }
}

impl FromStr for EmitFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(EmitFormat::Csv),
            "jsonl" => Ok(EmitFormat::Jsonl),
            other => Err(format!("unknown format `{other}`, expected csv or jsonl")),
        }
    }
}

/// `-` as the output path means standard output.
pub const STDOUT: &str = "-";

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: Command,
    /// Absent only for `theory-table` driven by `max_n`.
    pub config: Option<ScenarioConfig>,
    pub output: PathBuf,
    pub format: EmitFormat,
    /// Number of consecutive seeds starting at the config seed.
    pub seeds: u64,
    pub history: Option<PathBuf>,
    pub max_n: Option<u32>,
}

impl RunManifest {
    pub fn new(command: Command, config: Option<ScenarioConfig>) -> Self {
        RunManifest {
            command,
            config,
            output: PathBuf::from(STDOUT),
            format: EmitFormat::Csv,
            seeds: 1,
            history: None,
            max_n: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds == 0 {
            return Err(CliError::Usage("seeds must be at least 1".into()));
        }
        match self.command {
            Command::TheoryTable => {
                if self.max_n.is_none() && self.config.is_none() {
                    return Err(CliError::Usage("theory-table needs --max-n or a config with N".into()));
                }
            }
            Command::Auction | Command::Simulate if self.history.is_some() => {
                return Err(CliError::Usage(format!(
                    "{} needs true types and runs on generated worlds only; drop --history",
                    self.command
                )));
            }
            _ if self.config.is_none() => {
                return Err(CliError::Usage(format!("{} needs a config", self.command)));
            }
            _ => {}
        }
        Ok(())
    }

    /// Seeds covered by this run.
    pub fn seed_range(&self) -> std::ops::Range<u64> {
        let start = self.config.as_ref().map_or(0, |c| c.seed);
        start..start.saturating_add(self.seeds)
    }
}

fn path_text(key: &str, path: &std::path::Path) -> Result<String> {
    match path.to_str() {
        Some(s) if !s.is_empty() && !s.contains(['#', '\n', '\r']) && s.trim() == s => Ok(s.to_string()),
        _ => Err(CliError::Usage(format!(
            "{key} path `{}` cannot be stored in a manifest",
            path.display()
        ))),
    }
}

pub fn serialize_manifest(manifest: &RunManifest) -> Result<String> {
    let mut out = String::new();
    let _ = writeln!(out, "command={}", manifest.command);
    let _ = writeln!(out, "output={}", path_text("output", &manifest.output)?);
    let _ = writeln!(out, "format={}", manifest.format);
    let _ = writeln!(out, "seeds={}", manifest.seeds);
    if let Some(h) = &manifest.history {
        let _ = writeln!(out, "history={}", path_text("history", h)?);
    }
    if let Some(n) = manifest.max_n {
        let _ = writeln!(out, "max_n={n}");
    }
    if let Some(cfg) = &manifest.config {
        out.push_str(&serialize_config(cfg));
    }
    Ok(out)
}

pub fn parse_manifest(text: &str) -> Result<RunManifest> {
    let mut entries = tokenize(text)?;
    let command = match entries.remove("command") {
        Some(e) => e.value.parse::<Command>().map_err(|msg| bad("command", &e, msg))?,
        None => {
            return Err(CliError::Config {
                line: 0,
                key: "command".into(),
                message: "required key missing".into(),
            })
        }
    };
    let has_config = entries.contains_key("m") || entries.contains_key("N");
    let config = if has_config || command != Command::TheoryTable {
        Some(config_from_entries(&mut entries)?)
    } else {
        None
    };
    let mut manifest = RunManifest::new(command, config);
    if let Some(e) = entries.remove("output") {
        manifest.output = PathBuf::from(&e.value);
    }
    if let Some(e) = entries.remove("format") {
        manifest.format = e.value.parse().map_err(|msg: String| bad("format", &e, msg))?;
    }
    if let Some(e) = entries.remove("seeds") {
        manifest.seeds = parse_value("seeds", &e)?;
    }
    if let Some(e) = entries.remove("history") {
        manifest.history = Some(PathBuf::from(&e.value));
    }
    if let Some(e) = entries.remove("max_n") {
        manifest.max_n = Some(parse_value("max_n", &e)?);
    }
    reject_unknown(&entries)?;
    manifest.validate()?;
    Ok(manifest)
}
