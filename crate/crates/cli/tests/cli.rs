use std::path::Path;
use std::process::Command as Process;

use robust_auction_cli::{parse_config, render, run, Command, EmitFormat, RunManifest};

const SIMULATE_HEADER: &str =
    "seed,method,d,revenue,regret,kd,refined_regret,n,m_star,k,prop_no_query,conf_rate_paper,conf_rate_theorem";

fn manifest(command: Command, config: &str) -> RunManifest {
    RunManifest::new(command, Some(parse_config(config).unwrap()))
}

fn lines(bytes: &[u8]) -> Vec<String> {
    String::from_utf8(bytes.to_vec())
        .unwrap()
        .lines()
        .map(str::to_string)
        .collect()
}

/// Number of ways to split `n` labelled items into blocks of at most two,
/// listing each split explicitly.
fn brute_force_splits(n: usize) -> u64 {
    fn go(rest: &[usize]) -> u64 {
        match rest.split_first() {
            None => 1,
            Some((_, tail)) => {
                let alone = go(tail);
                let paired: u64 = (0..tail.len())
                    .map(|k| {
                        let mut others = tail.to_vec();
                        others.remove(k);
                        go(&others)
                    })
                    .sum();
                alone + paired
            }
        }
    }
    go(&(0..n).collect::<Vec<_>>())
}

#[test]
fn simulate_row_count() {
    let mut m = manifest(Command::Simulate, "m=30 N=10 seed=1\nd_sweep=0,1,2.5\n");
    m.seeds = 10;
    let out = lines(&render(&m).unwrap());
    assert_eq!(out[0], SIMULATE_HEADER);
    assert_eq!(out.len() - 1, 10 * 3 * 3);
    let seeds: std::collections::BTreeSet<_> = out[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap().to_string())
        .collect();
    assert_eq!(seeds.len(), 10);
}

#[test]
fn auto_sweep_rows_are_ascending_per_method() {
    let m = manifest(Command::Simulate, "m=5 N=2 seed=3\nmethod=1,3\n");
    let out = lines(&render(&m).unwrap());
    let mut last: Option<(String, f64)> = None;
    for row in &out[1..] {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 13);
        assert!(cols[1] == "1" || cols[1] == "3");
        let d: f64 = cols[2].parse().unwrap();
        if let Some((method, prev)) = &last {
            if method == cols[1] {
                assert!(d > *prev);
            }
        }
        last = Some((cols[1].to_string(), d));
    }
}

#[test]
fn jsonl_mirrors_csv() {
    let mut m = manifest(Command::Simulate, "m=4 N=2 seed=9\nd_sweep=0,1\n");
    let csv = lines(&render(&m).unwrap());
    m.format = EmitFormat::Jsonl;
    let json = lines(&render(&m).unwrap());
    assert_eq!(json.len(), csv.len() - 1);
    let header: Vec<&str> = csv[0].split(',').collect();
    for (row, obj) in csv[1..].iter().zip(&json) {
        let value: serde_json::Value = serde_json::from_str(obj).unwrap();
        let map = value.as_object().unwrap();
        assert_eq!(map.keys().count(), header.len());
        for (key, cell) in header.iter().zip(row.split(',')) {
            let field = &map[*key];
            let text = field.as_str().map(str::to_string).unwrap_or_else(|| field.to_string());
            assert_eq!(text.parse::<f64>().ok(), cell.parse::<f64>().ok(), "{key}");
        }
    }
}

#[test]
fn theory_table_matches_enumeration() {
    let mut m = RunManifest::new(Command::TheoryTable, None);
    m.max_n = Some(14);
    let out = lines(&render(&m).unwrap());
    assert_eq!(out[0], "N,count,lower_bound");
    assert_eq!(out.len() - 1, 14);
    for (k, row) in out[1..].iter().enumerate() {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[0], (k + 1).to_string());
        assert_eq!(cols[1], brute_force_splits(k + 1).to_string(), "N={}", k + 1);
        assert!(cols[2].parse::<u64>().unwrap() <= cols[1].parse::<u64>().unwrap());
    }
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for command in [Command::Estimate, Command::Winnow, Command::Auction, Command::Simulate] {
        let mut m = manifest(command, "m=5 N=3 seed=11\nq=1\nd_sweep=0,0.5\n");
        m.seeds = 2;
        m.output = dir.path().join(format!("{command}.csv"));
        run(&m).unwrap();
        let first = std::fs::read(&m.output).unwrap();
        run(&m).unwrap();
        assert_eq!(first, std::fs::read(&m.output).unwrap(), "{command}");
    }
}

#[test]
fn history_file_drives_estimate_and_winnow() {
    let dir = tempfile::tempdir().unwrap();
    let history = dir.path().join("bids.txt");
    let mut text = String::from("bounds 1 0 10\nbounds 2 10 20\n");
    for bidder in 1..=3 {
        for item in 1..=2 {
            for k in 0..8 {
                let x = (item - 1) as f64 * 10.0 + bidder as f64 * 2.0 + k as f64 * 0.1;
                text.push_str(&format!("bid {bidder} {item} {x}\n"));
            }
        }
    }
    std::fs::write(&history, text).unwrap();

    let mut m = manifest(Command::Estimate, "m=3\nN=2\nsampling_count=200\n");
    m.history = Some(history.clone());
    let rows = lines(&render(&m).unwrap());
    assert_eq!(rows[0], "seed,bidder,item,lower,upper");
    assert_eq!(rows.len(), 1 + 6);

    m.command = Command::Winnow;
    let rows = lines(&render(&m).unwrap());
    assert_eq!(rows[0], "seed,bidder,item,lower,upper,leader,kept");
    for item in ["1", "2"] {
        let kept: Vec<_> = rows[1..].iter().filter(|r| r.split(',').nth(2) == Some(item)).collect();
        assert_eq!(kept.iter().filter(|r| r.contains(",true,")).count(), 1);
        assert!(kept.iter().any(|r| r.ends_with(",true")));
    }

    let mut wrong = manifest(Command::Estimate, "m=4\nN=2\n");
    wrong.history = Some(history);
    assert!(render(&wrong).is_err());
}

fn binary() -> Process {
    Process::new(env!("CARGO_BIN_EXE_robust-auction"))
}

#[test]
fn errors_are_one_line_and_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.txt");
    std::fs::write(&config, "m=3\nN=2\nbudget=4\n").unwrap();
    let out_path = dir.path().join("out.csv");
    let out = binary()
        .args(["simulate", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert_eq!(stderr.lines().count(), 1);
    assert!(stderr.starts_with("error[config]: line 3: key `budget`"), "{stderr}");
    assert!(!out_path.exists());

    let missing = binary()
        .args(["estimate", "--config", "/nonexistent/config.txt"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8(missing.stderr).unwrap().starts_with("error[io]:"));
}

#[test]
fn saved_manifest_replays() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.txt");
    std::fs::write(&config, "m=4 N=2 seed=2\nd_sweep=0,1\n").unwrap();
    let out = dir.path().join("sim.jsonl");
    let saved = dir.path().join("run.manifest");
    let status = binary()
        .args(["simulate", "--format", "jsonl", "--seeds", "3", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .arg("--save-manifest")
        .arg(&saved)
        .status()
        .unwrap();
    assert!(status.success());
    let first = std::fs::read(&out).unwrap();
    assert_eq!(lines(&first).len(), 3 * 2 * 3);
    std::fs::remove_file(&out).unwrap();
    assert!(binary()
        .arg("run")
        .arg("--manifest")
        .arg(&saved)
        .status()
        .unwrap()
        .success());
    assert_eq!(std::fs::read(Path::new(&out)).unwrap(), first);
}
