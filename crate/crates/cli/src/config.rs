//! Flat `key=value` configuration files.
//!
//! One pair per line; `#` starts a comment. Several pairs may share a line
//! when separated by whitespace (`m=30 N=10 seed=1`). Keys:
//!
//! | key | meaning | default |
//! |-----|---------|---------|
//! | `m` | bidders | required |
//! | `N` | items | required |
//! | `seed` | master seed | 0 |
//! | `history_size` | historical bids per pair | 50 |
//! | `alpha` | significance level | 0.01 |
//! | `eta` | target confidence rate | 0.9 |
//! | `sampling_count` | draws per interval | 1000 |
//! | `d_sweep` | `auto` or comma-separated thresholds | `auto` |
//! | `method` | comma-separated subset of `1,2,3` | `1,2,3` |
//! | `q` | accepted revenue loss | 0 |

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use robust_auction::simulation::{DSweep, Method, ScenarioConfig};

use crate::error::{CliError, Result};

/// A `key=value` occurrence with the line it came from.
#[derive(Debug, Clone)]
pub(crate) struct Entry {
    pub line: usize,
    pub value: String,
}

/// Splits text into key/value entries, rejecting duplicates.
pub(crate) fn tokenize(text: &str) -> Result<BTreeMap<String, Entry>> {
    let mut entries = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let pairs: Vec<&str> = if content.matches('=').count() > 1 {
            content.split_whitespace().collect()
        } else {
            vec![content]
        };
        for pair in pairs {
            let (key, value) = pair.split_once('=').ok_or_else(|| CliError::Syntax {
                line,
                message: format!("expected key=value, got `{pair}`"),
            })?;
            let key = key.trim().to_string();
            if key.is_empty() {
                return Err(CliError::Syntax {
                    line,
                    message: "empty key".into(),
                });
            }
            let entry = Entry {
                line,
                value: value.trim().to_string(),
            };
            if let Some(prev) = entries.insert(key.clone(), entry) {
                return Err(CliError::Config {
                    line,
                    key,
                    message: format!("duplicate key (first set on line {})", prev.line),
                });
            }
        }
    }
    Ok(entries)
}

pub(crate) fn bad(key: &str, entry: &Entry, message: impl Into<String>) -> CliError {
    CliError::Config {
        line: entry.line,
        key: key.to_string(),
        message: message.into(),
    }
}

pub(crate) fn parse_value<T: FromStr>(key: &str, entry: &Entry) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    entry
        .value
        .parse()
        .map_err(|e: T::Err| bad(key, entry, format!("cannot parse `{}`: {e}", entry.value)))
}

const CONFIG_KEYS: [&str; 10] = [
    "m",
    "N",
    "seed",
    "history_size",
    "alpha",
    "eta",
    "sampling_count",
    "d_sweep",
    "method",
    "q",
];

/// Builds a scenario from tokenized entries, consuming the config keys.
pub(crate) fn config_from_entries(entries: &mut BTreeMap<String, Entry>) -> Result<ScenarioConfig> {
    let take = |entries: &mut BTreeMap<String, Entry>, key: &str| entries.remove(key);

    let m = take(entries, "m").ok_or_else(|| CliError::Config {
        line: 0,
        key: "m".into(),
        message: "required key missing".into(),
    })?;
    let n = take(entries, "N").ok_or_else(|| CliError::Config {
        line: 0,
        key: "N".into(),
        message: "required key missing".into(),
    })?;
    let mut cfg = ScenarioConfig::new(parse_value("m", &m)?, parse_value("N", &n)?, 0);
    if cfg.bidders < 2 {
        return Err(bad("m", &m, "at least two bidders are required"));
    }
    if cfg.items < 1 {
        return Err(bad("N", &n, "at least one item is required"));
    }

    if let Some(e) = take(entries, "seed") {
        cfg.seed = parse_value("seed", &e)?;
    }
    if let Some(e) = take(entries, "history_size") {
        cfg.history_size = parse_value("history_size", &e)?;
        if cfg.history_size == 0 {
            return Err(bad("history_size", &e, "must be positive"));
        }
    }
    if let Some(e) = take(entries, "alpha") {
        cfg.alpha = parse_value("alpha", &e)?;
        if !(cfg.alpha > 0.0 && cfg.alpha < 1.0) {
            return Err(bad("alpha", &e, "must lie in (0, 1)"));
        }
    }
    if let Some(e) = take(entries, "eta") {
        cfg.eta = parse_value("eta", &e)?;
        if !(cfg.eta > 0.0 && cfg.eta <= 1.0) {
            return Err(bad("eta", &e, "must lie in (0, 1]"));
        }
    }
    if let Some(e) = take(entries, "sampling_count") {
        cfg.sampling_count = parse_value("sampling_count", &e)?;
        if cfg.sampling_count < 2 {
            return Err(bad("sampling_count", &e, "must be at least 2"));
        }
    }
    if let Some(e) = take(entries, "d_sweep") {
        cfg.d_sweep = if e.value.eq_ignore_ascii_case("auto") {
            DSweep::Auto
        } else {
            let values = e
                .value
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|err| bad("d_sweep", &e, format!("cannot parse `{s}`: {err}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if values.is_empty() || values.iter().any(|d| !(*d >= 0.0 && d.is_finite())) {
                return Err(bad("d_sweep", &e, "thresholds must be nonnegative numbers"));
            }
            DSweep::Values(values)
        };
    }
    if let Some(e) = take(entries, "method") {
        let mut methods = e
            .value
            .split(',')
            .map(|s| s.parse::<Method>().map_err(|err| bad("method", &e, err.to_string())))
            .collect::<Result<Vec<_>>>()?;
        methods.sort();
        methods.dedup();
        cfg.methods = methods;
    }
    if let Some(e) = take(entries, "q") {
        cfg.accepted_loss = parse_value("q", &e)?;
        if !(cfg.accepted_loss >= 0.0 && cfg.accepted_loss.is_finite()) {
            return Err(bad("q", &e, "must be a nonnegative number"));
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

pub(crate) fn reject_unknown(entries: &BTreeMap<String, Entry>) -> Result<()> {
    match entries.iter().min_by_key(|(_, e)| e.line) {
        Some((key, entry)) => Err(CliError::Config {
            line: entry.line,
            key: key.clone(),
            message: "unknown key".into(),
        }),
        None => Ok(()),
    }
}

/// Parses a scenario configuration; absent keys take their defaults.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let mut entries = tokenize(text)?;
    let cfg = config_from_entries(&mut entries)?;
    reject_unknown(&entries)?;
    Ok(cfg)
}

fn join<T: ToString>(values: &[T]) -> String {
    values.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

/// Writes every key explicitly, one per line.
pub fn serialize_config(cfg: &ScenarioConfig) -> String {
    let mut out = String::new();
    let d_sweep = match &cfg.d_sweep {
        DSweep::Auto => "auto".to_string(),
        DSweep::Values(v) => join(v),
    };
    let _ = writeln!(out, "m={}", cfg.bidders);
    let _ = writeln!(out, "N={}", cfg.items);
    let _ = writeln!(out, "seed={}", cfg.seed);
    let _ = writeln!(out, "history_size={}", cfg.history_size);
    let _ = writeln!(out, "alpha={}", cfg.alpha);
    let _ = writeln!(out, "eta={}", cfg.eta);
    let _ = writeln!(out, "sampling_count={}", cfg.sampling_count);
    let _ = writeln!(out, "d_sweep={d_sweep}");
    let _ = writeln!(out, "method={}", join(&cfg.methods));
    let _ = writeln!(out, "q={}", cfg.accepted_loss);
    debug_assert_eq!(out.lines().count(), CONFIG_KEYS.len());
    out
}
