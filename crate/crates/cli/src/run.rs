//! Executes a manifest.

use serde::Serialize;

use robust_auction::mechanism::{run_mechanism, MechanismParams};
use robust_auction::simulation::{generate_world, prepare_methods, sweep, ScenarioConfig, TrueWorld};
use robust_auction::theory::allocation_table;
use robust_auction::{estimate_all_intervals, winnow, HistoricalDataset, IntervalMatrix};

use crate::error::{CliError, Result};
use crate::history::read_history;
use crate::manifest::{Command, RunManifest};
use crate::output::{encode, write_atomic};

#[derive(Debug, Serialize)]
pub struct IntervalRow {
    pub seed: u64,
    pub bidder: usize,
    pub item: usize,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Serialize)]
pub struct WinnowRow {
    pub seed: u64,
    pub bidder: usize,
    pub item: usize,
    pub lower: f64,
    pub upper: f64,
    pub leader: bool,
    pub kept: bool,
}

#[derive(Debug, Serialize)]
pub struct AuctionRow {
    pub seed: u64,
    pub method: String,
    pub item: usize,
    pub winner: usize,
    pub payment: f64,
    pub true_winner: usize,
    pub true_payment: f64,
    pub d: f64,
    pub n_star: usize,
    pub k: usize,
    pub queries: usize,
}

#[derive(Debug, Serialize)]
pub struct SimulateRow {
    pub seed: u64,
    pub method: String,
    pub d: f64,
    pub revenue: f64,
    pub regret: f64,
    pub kd: f64,
    pub refined_regret: f64,
    pub n: usize,
    pub m_star: usize,
    pub k: usize,
    pub prop_no_query: f64,
    pub conf_rate_paper: f64,
    pub conf_rate_theorem: f64,
}

#[derive(Debug, Serialize)]
pub struct TheoryRow {
    #[serde(rename = "N")]
    pub items: u32,
    /// Decimal strings; the counts overflow every fixed-width integer.
    pub count: String,
    pub lower_bound: String,
}

/// Historical data for one seed: the loaded file, or a generated world.
enum Source {
    File(HistoricalDataset),
    Generated,
}

fn config(manifest: &RunManifest) -> Result<&ScenarioConfig> {
    manifest
        .config
        .as_ref()
        .ok_or_else(|| CliError::Usage(format!("{} needs a config", manifest.command)))
}

fn source(manifest: &RunManifest, cfg: &ScenarioConfig) -> Result<Source> {
    let Some(path) = &manifest.history else {
        return Ok(Source::Generated);
    };
    let data = read_history(path)?;
    if (data.bidders(), data.items()) != (cfg.bidders, cfg.items) {
        return Err(CliError::Usage(format!(
            "history file has {} bidders and {} items but the config says m={} N={}",
            data.bidders(),
            data.items(),
            cfg.bidders,
            cfg.items
        )));
    }
    Ok(Source::File(data))
}

fn intervals_for(src: &Source, cfg: &ScenarioConfig, seed: u64) -> Result<IntervalMatrix> {
    Ok(match src {
        Source::File(data) => estimate_all_intervals(data, cfg.estimation_params(), seed)?,
        Source::Generated => {
            let world = generate_world(&cfg.with_seed(seed))?;
            estimate_all_intervals(&world.history, cfg.estimation_params(), seed)?
        }
    })
}

fn estimate_rows(manifest: &RunManifest) -> Result<Vec<IntervalRow>> {
    let cfg = config(manifest)?;
    let src = source(manifest, cfg)?;
    let mut rows = Vec::new();
    for seed in manifest.seed_range() {
        let ivs = intervals_for(&src, cfg, seed)?;
        rows.extend(ivs.intervals.iter().map(|(i, j, iv)| IntervalRow {
            seed,
            bidder: i + 1,
            item: j + 1,
            lower: iv.lower,
            upper: iv.upper,
        }));
    }
    Ok(rows)
}

fn winnow_rows(manifest: &RunManifest) -> Result<Vec<WinnowRow>> {
    let cfg = config(manifest)?;
    let src = source(manifest, cfg)?;
    let mut rows = Vec::new();
    for seed in manifest.seed_range() {
        let ivs = intervals_for(&src, cfg, seed)?;
        let result = winnow(&ivs)?;
        rows.extend(ivs.intervals.iter().map(|(i, j, iv)| WinnowRow {
            seed,
            bidder: i + 1,
            item: j + 1,
            lower: iv.lower,
            upper: iv.upper,
            leader: result.leader(j) == i,
            kept: result.is_kept(i, j),
        }));
    }
    Ok(rows)
}

fn auction_rows_for(world: &TrueWorld, cfg: &ScenarioConfig) -> Result<Vec<AuctionRow>> {
    let params = MechanismParams {
        alpha: cfg.alpha,
        eta: cfg.eta,
        accepted_loss: cfg.accepted_loss,
    };
    let truth = robust_auction::allocate_vcg(&world.true_types)?;
    let mut rows = Vec::new();
    for prepared in prepare_methods(world, cfg)? {
        let tuned = run_mechanism(&prepared.intervals, &prepared.winnow, params, |i, j| {
            Ok::<_, std::convert::Infallible>(*world.true_types.get(i, j))
        })?;
        let alloc = &tuned.allocation;
        rows.extend((0..world.items()).map(|j| AuctionRow {
            seed: world.seed,
            method: prepared.method.to_string(),
            item: j + 1,
            winner: alloc.winners[j] + 1,
            payment: alloc.payments[j],
            true_winner: truth.winners[j] + 1,
            true_payment: truth.payments[j],
            d: tuned.threshold.d,
            n_star: tuned.n_star,
            k: tuned.threshold.k(),
            queries: tuned.estimates.queries_made(),
        }));
    }
    Ok(rows)
}

fn auction_rows(manifest: &RunManifest) -> Result<Vec<AuctionRow>> {
    let cfg = config(manifest)?;
    let mut rows = Vec::new();
    for seed in manifest.seed_range() {
        let world = generate_world(&cfg.with_seed(seed))?;
        rows.extend(auction_rows_for(&world, cfg)?);
    }
    Ok(rows)
}

/// Sweep rows for one generated world.
pub fn simulate_world(cfg: &ScenarioConfig) -> Result<Vec<SimulateRow>> {
    let world = generate_world(cfg)?;
    let mut rows = Vec::new();
    for ms in sweep(&world, cfg)? {
        rows.extend(ms.records.into_iter().map(|r| SimulateRow {
            seed: cfg.seed,
            method: ms.method.to_string(),
            d: r.d,
            revenue: r.revenue,
            regret: r.regret,
            kd: r.theoretical_regret,
            refined_regret: r.refined_regret,
            n: r.n,
            m_star: r.m_star,
            k: r.k,
            prop_no_query: r.proportion_without_queries,
            conf_rate_paper: r.confidence_rate_paper,
            conf_rate_theorem: r.confidence_rate_theorem,
        }));
    }
    Ok(rows)
}

fn simulate_rows(manifest: &RunManifest) -> Result<Vec<SimulateRow>> {
    let cfg = config(manifest)?;
    let mut rows = Vec::new();
    for seed in manifest.seed_range() {
        rows.extend(simulate_world(&cfg.with_seed(seed))?);
    }
    Ok(rows)
}

pub fn theory_rows(max_n: u32) -> Result<Vec<TheoryRow>> {
    Ok(allocation_table(max_n)?
        .into_iter()
        .map(|c| TheoryRow {
            items: c.items,
            count: c.exact.to_string(),
            lower_bound: c.lower_bound.to_string(),
        })
        .collect())
}

/// Produces the encoded output of a manifest without writing it.
pub fn render(manifest: &RunManifest) -> Result<Vec<u8>> {
    manifest.validate()?;
    let f = manifest.format;
    match manifest.command {
        Command::Estimate => encode(&estimate_rows(manifest)?, f),
        Command::Winnow => encode(&winnow_rows(manifest)?, f),
        Command::Auction => encode(&auction_rows(manifest)?, f),
        Command::Simulate => encode(&simulate_rows(manifest)?, f),
        Command::TheoryTable => {
            let max_n = match (manifest.max_n, &manifest.config) {
                (Some(n), _) => n,
                (None, Some(cfg)) => {
                    u32::try_from(cfg.items).map_err(|_| CliError::Usage(format!("N={} is too large", cfg.items)))?
                }
                (None, None) => unreachable!("rejected by validate"),
            };
            encode(&theory_rows(max_n)?, f)
        }
    }
}

/// Runs a manifest and writes its output.
pub fn run(manifest: &RunManifest) -> Result<()> {
    let bytes = render(manifest)?;
    write_atomic(&manifest.output, &bytes)
}
