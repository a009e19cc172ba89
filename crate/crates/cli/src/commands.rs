//! Subcommand implementations. Each returns the text destined for stdout and
//! writes any requested files itself.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use sscaug_core::augment::{augment_distance_run, dpea, respects_windows};
use sscaug_core::oracle::{sample_and_validate, RankReport, ValidateOptions};
use sscaug_core::pmi::{
    dl_matrix, longest_pmi_exact, longest_pmi_greedy, DlMatrix, PmiSequence, DEFAULT_EXACT_LIMIT,
};
use sscaug_core::zero_forcing::{augment_zf, derived_set};
use sscaug_core::{AugmentResult, BoundKind, DiGraph, Dist, Edge, LeaderSet};

use crate::error::{CliError, Result};
use crate::formats::{
    load_graph, parse_dl_file, parse_leaders, read_file, to_dot, write_edge_list,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PmiMode {
    /// Exact search when the candidate count is within the limit, else greedy.
    Auto,
    Exact,
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum BoundArg {
    Zf,
    Distance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Dot,
}

/// Longest PMI sequence under `mode`; also reports which search ran.
pub fn pmi_sequence(dl: &DlMatrix, mode: PmiMode, limit: usize) -> Result<(PmiSequence, PmiMode)> {
    let exact = match mode {
        PmiMode::Exact => true,
        PmiMode::Greedy => false,
        PmiMode::Auto => dl.candidates().len() <= limit,
    };
    if exact {
        Ok((longest_pmi_exact(dl, limit)?, PmiMode::Exact))
    } else {
        Ok((longest_pmi_greedy(dl)?, PmiMode::Greedy))
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn pairs(edges: &[Edge]) -> Vec<[usize; 2]> {
    edges.iter().map(|&(u, v)| [u, v]).collect()
}

#[derive(Debug, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub leaders: Option<LeaderSet>,
    pub zf_bound: Option<usize>,
    pub pmi_bound: usize,
    pub pmi_mode: PmiMode,
    pub sequence: PmiSequence,
}

pub struct BoundsArgs {
    pub graph: Option<PathBuf>,
    pub dl_file: Option<PathBuf>,
    pub leaders: Option<String>,
    pub pmi: PmiMode,
    pub exact_limit: usize,
}

pub fn bounds(args: &BoundsArgs) -> Result<String> {
    let report = match (&args.graph, &args.dl_file) {
        (Some(path), None) => {
            let g = load_graph(path)?;
            let leaders = required_leaders(args.leaders.as_deref(), g.node_count())?;
            let zf = derived_set(&g, &leaders)?.size();
            let dl = dl_matrix(&g, &leaders)?;
            let (sequence, pmi_mode) = pmi_sequence(&dl, args.pmi, args.exact_limit)?;
            BoundsReport {
                n: g.node_count(),
                leaders: Some(leaders),
                zf_bound: Some(zf),
                pmi_bound: sequence.len(),
                pmi_mode,
                sequence,
            }
        }
        (None, Some(path)) => {
            let dl = parse_dl_file(&read_file(path)?).map_err(|e| e.at(path))?;
            let (sequence, pmi_mode) = pmi_sequence(&dl, args.pmi, args.exact_limit)?;
            BoundsReport {
                n: dl.node_count(),
                leaders: None,
                zf_bound: None,
                pmi_bound: sequence.len(),
                pmi_mode,
                sequence,
            }
        }
        _ => {
            return Err(CliError::Usage(
                "exactly one of --graph or --dl-file is required".into(),
            ))
        }
    };
    Ok(to_json(&report))
}

fn required_leaders(spec: Option<&str>, n: usize) -> Result<LeaderSet> {
    let spec = spec.ok_or_else(|| CliError::Usage("--leaders is required".into()))?;
    parse_leaders(spec, n)
}

#[derive(Debug, Serialize)]
pub struct AugmentSummary {
    pub n: usize,
    pub leaders: LeaderSet,
    pub bound_kind: BoundKind,
    pub bound_value: usize,
    pub edges_before: usize,
    pub edges_after: usize,
    pub added_edges: Vec<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub repeats: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sequence: Option<PmiSequence>,
}

pub struct AugmentArgs {
    pub graph: PathBuf,
    pub leaders: String,
    pub bound: BoundArg,
    pub repeats: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub pmi: PmiMode,
    pub exact_limit: usize,
}

/// Best of `repeats` randomized runs, evaluated in parallel; the result is
/// the same as [`sscaug_core::augment::augment_distance_best_of`].
pub fn best_of_parallel(
    g: &DiGraph,
    leaders: &LeaderSet,
    seq: &PmiSequence,
    seed: u64,
    repeats: usize,
) -> Result<AugmentResult> {
    if repeats == 0 {
        return Err(CliError::Usage("--repeats must be at least 1".into()));
    }
    let runs = (0..repeats as u64)
        .into_par_iter()
        .map(|run| augment_distance_run(g, leaders, seq, seed, run))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let mut best = 0;
    for (i, r) in runs.iter().enumerate() {
        if r.graph.edge_count() > runs[best].graph.edge_count() {
            best = i;
        }
    }
    Ok(runs.into_iter().nth(best).expect("repeats >= 1"))
}

/// Re-checks the preserved bound on an augmented graph.
pub fn verify_augmented(
    original: &DiGraph,
    augmented: &DiGraph,
    leaders: &LeaderSet,
    kind: BoundKind,
    sequence: Option<&PmiSequence>,
) -> Result<()> {
    if !original.edges().all(|(u, v)| augmented.has_edge(u, v)) {
        return Err(CliError::Verification(
            "augmented graph lost original edges".into(),
        ));
    }
    let ok = match kind {
        BoundKind::ZeroForcing => {
            derived_set(original, leaders)?.black == derived_set(augmented, leaders)?.black
        }
        BoundKind::Distance => {
            let seq = sequence.expect("distance bound carries its sequence");
            respects_windows(augmented, leaders, seq)?
                && seq.still_pmi_in(&dl_matrix(augmented, leaders)?)
        }
    };
    if ok {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "{} bound not preserved",
            kind.as_str()
        )))
    }
}

fn write_out(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

pub fn augment(args: &AugmentArgs) -> Result<String> {
    let g = load_graph(&args.graph)?;
    let leaders = parse_leaders(&args.leaders, g.node_count())?;
    let (result, sequence) = match args.bound {
        BoundArg::Zf => (augment_zf(&g, &leaders)?, None),
        BoundArg::Distance => {
            let dl = dl_matrix(&g, &leaders)?;
            let (seq, _) = pmi_sequence(&dl, args.pmi, args.exact_limit)?;
            let result = best_of_parallel(&g, &leaders, &seq, args.seed, args.repeats)?;
            (result, Some(seq))
        }
    };
    verify_augmented(
        &g,
        &result.graph,
        &leaders,
        result.bound_kind,
        sequence.as_ref(),
    )?;

    let randomized = sequence.is_some();
    let summary = AugmentSummary {
        n: g.node_count(),
        leaders: leaders.clone(),
        bound_kind: result.bound_kind,
        bound_value: result.bound_value,
        edges_before: g.edge_count(),
        edges_after: result.graph.edge_count(),
        added_edges: pairs(&result.added),
        repeats: randomized.then_some(args.repeats),
        seed: randomized.then_some(args.seed),
        sequence,
    };
    let json = to_json(&summary);
    let dot = to_dot(&result.graph, Some(&leaders), &result.added);

    if let Some(dir) = &args.out {
        let edges_path = write_out(dir, "augmented.edges", &write_edge_list(&result.graph))?;
        write_out(dir, "summary.json", &json)?;
        if args.format == Format::Dot {
            write_out(dir, "augmented.dot", &dot)?;
        }
        let reloaded = load_graph(&edges_path)?;
        if reloaded != result.graph {
            return Err(CliError::Verification(
                "written edge list does not reload to the augmented graph".into(),
            ));
        }
        verify_augmented(
            &g,
            &reloaded,
            &leaders,
            result.bound_kind,
            summary.sequence.as_ref(),
        )?;
    }
    Ok(match args.format {
        Format::Dot => dot,
        Format::Json | Format::Csv => json,
    })
}

#[derive(Debug, Serialize)]
pub struct DpeaSummary {
    pub n: usize,
    pub source: usize,
    pub target: usize,
    pub distance: u32,
    pub levels: Vec<Dist>,
    pub edges_before: usize,
    pub edges_after: usize,
    pub added_edges: Vec<[usize; 2]>,
}

pub struct DpeaArgs {
    pub graph: PathBuf,
    pub source: usize,
    pub target: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
}

pub fn dpea_cmd(args: &DpeaArgs) -> Result<String> {
    let g = load_graph(&args.graph)?;
    for node in [args.source, args.target] {
        if node >= g.node_count() {
            return Err(CliError::Usage(format!(
                "node {node} out of range for {} nodes",
                g.node_count()
            )));
        }
    }
    let (h, part) = dpea(&g, args.source, args.target)?;
    if h.distance(args.source, args.target)? != Dist::Finite(part.k) {
        return Err(CliError::Verification("pair distance changed".into()));
    }
    let added: Vec<Edge> = h.edges().filter(|&(u, v)| !g.has_edge(u, v)).collect();
    let summary = DpeaSummary {
        n: g.node_count(),
        source: args.source,
        target: args.target,
        distance: part.k,
        levels: part.levels,
        edges_before: g.edge_count(),
        edges_after: h.edge_count(),
        added_edges: pairs(&added),
    };
    let json = to_json(&summary);
    let dot = to_dot(&h, None, &added);
    if let Some(dir) = &args.out {
        write_out(dir, "augmented.edges", &write_edge_list(&h))?;
        write_out(dir, "summary.json", &json)?;
        if args.format == Format::Dot {
            write_out(dir, "augmented.dot", &dot)?;
        }
    }
    Ok(match args.format {
        Format::Dot => dot,
        Format::Json | Format::Csv => json,
    })
}

#[derive(Debug, Serialize)]
pub struct ValidateSummary {
    pub n: usize,
    pub leaders: LeaderSet,
    pub pmi_mode: PmiMode,
    #[serde(flatten)]
    pub report: RankReport,
}

pub struct ValidateArgs {
    pub graph: PathBuf,
    pub leaders: String,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub max_nodes: usize,
    pub pmi: PmiMode,
}

/// Returns the JSON report and whether every sampled rank dominated both bounds.
pub fn validate(args: &ValidateArgs) -> Result<(String, bool)> {
    let g = load_graph(&args.graph)?;
    let leaders = parse_leaders(&args.leaders, g.node_count())?;
    let zf = derived_set(&g, &leaders)?.size();
    let (seq, pmi_mode) = pmi_sequence(&dl_matrix(&g, &leaders)?, args.pmi, DEFAULT_EXACT_LIMIT)?;
    let options = ValidateOptions {
        tolerance: args.tolerance,
        max_nodes: args.max_nodes,
    };
    let report = sample_and_validate(
        &g,
        &leaders,
        zf,
        seq.len(),
        args.samples,
        args.seed,
        options,
    )?;
    let sound = report.is_sound();
    let summary = ValidateSummary {
        n: g.node_count(),
        leaders,
        pmi_mode,
        report,
    };
    Ok((to_json(&summary), sound))
}
