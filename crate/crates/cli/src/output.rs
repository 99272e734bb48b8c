//! Row encoding and atomic file output.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use tempfile::NamedTempFile;

use crate::error::{CliError, Result};
use crate::manifest::{EmitFormat, STDOUT};

/// Encodes rows as CSV with a header line, or as one JSON object per line.
pub fn encode<T: Serialize>(rows: &[T], format: EmitFormat) -> Result<Vec<u8>> {
    match format {
        EmitFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in rows {
                w.serialize(row).map_err(|e| CliError::Encode(e.to_string()))?;
            }
            w.into_inner().map_err(|e| CliError::Encode(e.to_string()))
        }
        EmitFormat::Jsonl => {
            let mut buf = Vec::new();
            for row in rows {
                serde_json::to_writer(&mut buf, row).map_err(|e| CliError::Encode(e.to_string()))?;
                buf.push(b'\n');
            }
            Ok(buf)
        }
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if path.as_os_str() == STDOUT {
        let mut out = std::io::stdout().lock();
        return out
            .write_all(bytes)
            .and_then(|_| out.flush())
            .map_err(|e| CliError::io("<stdout>", e));
    }
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes)
        .and_then(|_| tmp.as_file().sync_all())
        .map_err(|e| CliError::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}
