//! Command-line layer over `robust-auction`: configuration and manifest
//! files, historical bid files, and CSV/JSONL output.

pub mod config;
pub mod error;
pub mod history;
pub mod manifest;
pub mod output;
pub mod run;

pub use config::{parse_config, serialize_config};
pub use error::{CliError, Result};
pub use history::{format_history, parse_history, read_history};
pub use manifest::{parse_manifest, serialize_manifest, Command, EmitFormat, RunManifest};
pub use run::{render, run};
