//! Random-graph benchmark: bounds and augmentation sizes averaged over trials.

use rand::seq::index;
use rayon::prelude::*;
use serde::Serialize;
use sscaug_core::augment::augment_distance_best_of;
use sscaug_core::graph::random_digraph;
use sscaug_core::pmi::dl_matrix;
use sscaug_core::rng;
use sscaug_core::zero_forcing::{augment_zf, derived_set};
use sscaug_core::LeaderSet;

use crate::commands::{pmi_sequence, PmiMode};
use crate::error::{CliError, Result};

pub const FORMAT_VERSION: &str = "sscaug-bench/1";
pub const CSV_HEADER: [&str; 7] = [
    "leaders",
    "zf_bound",
    "pmi_bound",
    "edges_orig",
    "edges_zf",
    "edges_dist",
    "edges_dist_same_bound",
];
/// How the equal-bound distance column is produced; echoed into the output.
pub const SAME_BOUND_MECHANISM: &str =
    "distance augmentation against the pmi sequence prefix of length min(zf_bound, pmi_bound)";

const LEADER_SALT: u64 = 1;
const AUGMENT_SALT: u64 = 2;

#[derive(Debug, Clone, Serialize)]
pub struct BenchConfig {
    pub n: usize,
    pub p: f64,
    pub trials: usize,
    pub leader_counts: Vec<usize>,
    pub seed: u64,
    pub pmi_mode: PmiMode,
    pub exact_limit: usize,
    /// Randomized runs per distance augmentation (best kept).
    pub repeats: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            n: 100,
            p: 0.075,
            trials: 30,
            leader_counts: (1..=20).collect(),
            seed: 0,
            pmi_mode: PmiMode::Greedy,
            exact_limit: sscaug_core::pmi::DEFAULT_EXACT_LIMIT,
            repeats: 1,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        let usage = |msg: &str| Err(CliError::Usage(msg.into()));
        if self.n == 0 {
            return usage("n must be positive");
        }
        if !(0.0..=1.0).contains(&self.p) {
            return usage("p must lie in [0, 1]");
        }
        if self.trials == 0 {
            return usage("trials must be at least 1");
        }
        if self.repeats == 0 {
            return usage("repeats must be at least 1");
        }
        if self.leader_counts.is_empty() {
            return usage("leader counts must be nonempty");
        }
        if self.leader_counts.iter().any(|&m| m == 0 || m > self.n) {
            return usage("each leader count must lie in 1..=n");
        }
        Ok(())
    }
}

/// Trial means for one leader count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub leader_count: usize,
    pub mean_zf_bound: f64,
    pub mean_pmi_bound: f64,
    pub mean_edges_original: f64,
    pub mean_edges_zf_aug: f64,
    pub mean_edges_dist_aug: f64,
    pub mean_edges_dist_same_bound: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Sample {
    zf: usize,
    pmi: usize,
    orig: usize,
    zf_edges: usize,
    dist_edges: usize,
    same_edges: usize,
}

fn trial(cfg: &BenchConfig, t: usize) -> Result<Vec<Sample>> {
    let seed = cfg.seed.wrapping_add(t as u64);
    let g = random_digraph(cfg.n, cfg.p, seed)?;
    let leader_seed = rng::mix(seed, LEADER_SALT);
    let aug_seed = rng::mix(seed, AUGMENT_SALT);
    cfg.leader_counts
        .iter()
        .map(|&m| {
            let mut r = rng::stream(leader_seed, m as u64);
            let leaders = LeaderSet::new(index::sample(&mut r, cfg.n, m).into_vec(), cfg.n)?;
            let zf = derived_set(&g, &leaders)?.size();
            let zf_aug = augment_zf(&g, &leaders)?;
            let (seq, _) = pmi_sequence(&dl_matrix(&g, &leaders)?, cfg.pmi_mode, cfg.exact_limit)?;
            let run_seed = rng::mix(aug_seed, m as u64);
            let dist = augment_distance_best_of(&g, &leaders, &seq, run_seed, cfg.repeats)?;
            let same_seq = seq.prefix(zf.min(seq.len()));
            let same = augment_distance_best_of(&g, &leaders, &same_seq, run_seed, cfg.repeats)?;
            Ok(Sample {
                zf,
                pmi: seq.len(),
                orig: g.edge_count(),
                zf_edges: zf_aug.graph.edge_count(),
                dist_edges: dist.graph.edge_count(),
                same_edges: same.graph.edge_count(),
            })
        })
        .collect()
}

/// One row per leader count, in configuration order. Trials run in parallel;
/// sums are integer so the result does not depend on scheduling.
pub fn run(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    cfg.validate()?;
    let per_trial = (0..cfg.trials)
        .into_par_iter()
        .map(|t| trial(cfg, t))
        .collect::<Result<Vec<_>>>()?;
    let k = cfg.trials as f64;
    Ok(cfg
        .leader_counts
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let sum = |f: fn(&Sample) -> usize| {
                per_trial.iter().map(|s| f(&s[i]) as u64).sum::<u64>() as f64 / k
            };
            BenchRow {
                leader_count: m,
                mean_zf_bound: sum(|s| s.zf),
                mean_pmi_bound: sum(|s| s.pmi),
                mean_edges_original: sum(|s| s.orig),
                mean_edges_zf_aug: sum(|s| s.zf_edges),
                mean_edges_dist_aug: sum(|s| s.dist_edges),
                mean_edges_dist_same_bound: sum(|s| s.same_edges),
            }
        })
        .collect())
}

fn pmi_mode_name(mode: PmiMode) -> &'static str {
    match mode {
        PmiMode::Auto => "auto",
        PmiMode::Exact => "exact",
        PmiMode::Greedy => "greedy",
    }
}

pub fn to_csv(cfg: &BenchConfig, rows: &[BenchRow]) -> String {
    let mut out = String::new();
    out.push_str(&format!("# format: {FORMAT_VERSION}\n"));
    out.push_str(&format!(
        "# n={} p={} trials={} seed={} repeats={}\n",
        cfg.n, cfg.p, cfg.trials, cfg.seed, cfg.repeats
    ));
    out.push_str(&format!("# pmi_mode: {}\n", pmi_mode_name(cfg.pmi_mode)));
    let counts: Vec<String> = cfg.leader_counts.iter().map(|m| m.to_string()).collect();
    out.push_str(&format!("# leader_counts: {}\n", counts.join(",")));
    out.push_str(&format!(
        "# edges_dist_same_bound: {SAME_BOUND_MECHANISM}\n"
    ));

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in rows {
        w.write_record([
            r.leader_count.to_string(),
            format!("{:.4}", r.mean_zf_bound),
            format!("{:.4}", r.mean_pmi_bound),
            format!("{:.4}", r.mean_edges_original),
            format!("{:.4}", r.mean_edges_zf_aug),
            format!("{:.4}", r.mean_edges_dist_aug),
            format!("{:.4}", r.mean_edges_dist_same_bound),
        ])
        .expect("in-memory write");
    }
    let bytes = w.into_inner().expect("in-memory flush");
    out.push_str(std::str::from_utf8(&bytes).expect("ascii csv"));
    out
}

#[derive(Serialize)]
struct JsonReport<'a> {
    format: &'static str,
    config: &'a BenchConfig,
    same_bound_mechanism: &'static str,
    rows: &'a [BenchRow],
}

pub fn to_json(cfg: &BenchConfig, rows: &[BenchRow]) -> String {
    let mut s = serde_json::to_string_pretty(&JsonReport {
        format: FORMAT_VERSION,
        config: cfg,
        same_bound_mechanism: SAME_BOUND_MECHANISM,
        rows,
    })
    .expect("bench report serializes");
    s.push('\n');
    s
}

/// Parses `a..b`, `a..=b` or a comma list.
pub fn parse_leader_counts(spec: &str) -> Result<Vec<usize>> {
    let bad = || CliError::Usage(format!("invalid leader counts `{spec}`"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let counts: Vec<usize> = if let Some((a, b)) = spec.split_once("..=") {
        (num(a)?..=num(b)?).collect()
    } else if let Some((a, b)) = spec.split_once("..") {
        (num(a)?..num(b)?).collect()
    } else {
        spec.split(',').map(num).collect::<Result<_>>()?
    };
    if counts.is_empty() {
        return Err(bad());
    }
    Ok(counts)
}
