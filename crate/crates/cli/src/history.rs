//! Plain-text historical bid files.
//!
//! ```text
//! # item bounds, 1-based item index
//! bounds 1 0 10
//! bounds 2 10 20
//! # one observed bid per line: bidder item value
//! bid 1 1 4.2
//! bid 2 1 6.0
//! ```
//!
//! Every item needs a `bounds` line and every (bidder, item) pair at least
//! one `bid` line. The numbers of bidders and items are the largest indices
//! that appear.

use std::fmt::Write as _;
use std::path::Path;

use robust_auction::{Grid, HistoricalDataset, ItemBounds};

use crate::error::{CliError, Result};

fn syntax(line: usize, message: impl Into<String>) -> CliError {
    CliError::Syntax {
        line,
        message: message.into(),
    }
}

fn index(line: usize, tok: Option<&str>, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| syntax(line, format!("missing {what} index")))?;
    match tok.parse::<usize>() {
        Ok(k) if k >= 1 => Ok(k - 1),
        _ => Err(syntax(
            line,
            format!("{what} index must be a positive integer, got `{tok}`"),
        )),
    }
}

fn number(line: usize, tok: Option<&str>, what: &str) -> Result<f64> {
    let tok = tok.ok_or_else(|| syntax(line, format!("missing {what}")))?;
    tok.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| syntax(line, format!("{what} must be a finite number, got `{tok}`")))
}

pub fn parse_history(text: &str) -> Result<HistoricalDataset> {
    let mut bounds: Vec<Option<ItemBounds>> = Vec::new();
    let mut bids: Vec<(usize, usize, f64)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut toks = content.split_whitespace();
        let kind = toks.next().unwrap_or_default();
        match kind {
            "bounds" => {
                let j = index(line, toks.next(), "item")?;
                let a = number(line, toks.next(), "lower bound")?;
                let b = number(line, toks.next(), "upper bound")?;
                let item = ItemBounds::new(a, b).map_err(|e| syntax(line, e.to_string()))?;
                if bounds.len() <= j {
                    bounds.resize(j + 1, None);
                }
                if bounds[j].replace(item).is_some() {
                    return Err(syntax(line, format!("bounds for item {} given twice", j + 1)));
                }
            }
            "bid" => {
                let i = index(line, toks.next(), "bidder")?;
                let j = index(line, toks.next(), "item")?;
                let x = number(line, toks.next(), "bid")?;
                bids.push((i, j, x));
            }
            other => return Err(syntax(line, format!("unknown record `{other}`"))),
        }
        if let Some(extra) = toks.next() {
            return Err(syntax(line, format!("unexpected trailing `{extra}`")));
        }
    }

    let items = bounds.len().max(bids.iter().map(|b| b.1 + 1).max().unwrap_or(0));
    let bidders = bids.iter().map(|b| b.0 + 1).max().unwrap_or(0);
    if items == 0 || bidders == 0 {
        return Err(CliError::Usage("history file contains no bids".into()));
    }
    let bounds = (0..items)
        .map(|j| {
            bounds
                .get(j)
                .copied()
                .flatten()
                .ok_or_else(|| CliError::Usage(format!("history file has no bounds for item {}", j + 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut samples = Grid::from_fn(bidders, items, |_, _| Vec::new());
    for (i, j, x) in bids {
        samples.get_mut(i, j).push(x);
    }
    Ok(HistoricalDataset::new(samples, bounds)?)
}

pub fn read_history(path: &Path) -> Result<HistoricalDataset> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_history(&text).map_err(|e| match e {
        CliError::Syntax { line, message } => CliError::Syntax {
            line,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

pub fn format_history(data: &HistoricalDataset) -> String {
    let mut out = String::new();
    for (j, b) in data.all_bounds().iter().enumerate() {
        let _ = writeln!(out, "bounds {} {} {}", j + 1, b.lower, b.upper);
    }
    for (i, j, bids) in data.samples().iter() {
        for x in bids {
            let _ = writeln!(out, "bid {} {} {}", i + 1, j + 1, x);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_file() {
        let text = "bounds 1 0 10\nbounds 2 10 20\n\
                    bid 1 1 1\nbid 1 2 11\nbid 2 1 2 # note\nbid 2 2 12\nbid 2 2 13\n";
        let data = parse_history(text).unwrap();
        assert_eq!((data.bidders(), data.items()), (2, 2));
        assert_eq!(data.bids(1, 1), &[12.0, 13.0]);
        assert_eq!(parse_history(&format_history(&data)).unwrap(), data);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_history("bounds 1 0 10\nbid 1 1 11\n").is_err());
        assert!(parse_history("bounds 1 0 10\nbid 0 1 1\n").is_err());
        assert!(parse_history("bounds 1 0 10\nbid 1 1 1\n").is_err());
        assert!(parse_history("bounds 2 0 10\nbid 1 2 1\nbid 2 2 1\n").is_err());
        assert!(parse_history("bounds 1 0 10\nask 1 1 1\n").is_err());
        assert!(parse_history("bounds 1 0 10\nbid 1 1 1 2\n").is_err());
        let gap = parse_history("bounds 1 0 10\nbid 1 1 1\nbid 3 1 1\nbid 2 2 1\n");
        assert!(gap.is_err());
    }
}
