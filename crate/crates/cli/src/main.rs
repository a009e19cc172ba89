use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sscaug::bench::{self, BenchConfig};
use sscaug::commands::{self, BoundArg, Format, PmiMode};
use sscaug::{CliError, Result};
use sscaug_core::oracle::{DEFAULT_MAX_NODES, DEFAULT_TOLERANCE};
use sscaug_core::pmi::DEFAULT_EXACT_LIMIT;

/// Strong structural controllability bounds and bound-preserving edge augmentation.
#[derive(Parser)]
#[command(name = "sscaug", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Zero-forcing and distance (PMI) lower bounds.
    Bounds {
        #[arg(long, conflicts_with = "dl_file")]
        graph: Option<PathBuf>,
        /// Distance-to-leader matrix, one row of integers or `inf` per node.
        #[arg(long)]
        dl_file: Option<PathBuf>,
        #[arg(long)]
        leaders: Option<String>,
        #[arg(long, value_enum, default_value = "auto")]
        pmi: PmiMode,
        #[arg(long, default_value_t = DEFAULT_EXACT_LIMIT)]
        exact_limit: usize,
    },
    /// Add as many edges as possible while preserving a bound.
    Augment {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        leaders: String,
        #[arg(long, value_enum, default_value = "zf")]
        bound: BoundArg,
        #[arg(long, default_value_t = 1)]
        repeats: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory receiving augmented.edges, summary.json and (with dot) augmented.dot.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, value_enum, default_value = "auto")]
        pmi: PmiMode,
        #[arg(long, default_value_t = DEFAULT_EXACT_LIMIT)]
        exact_limit: usize,
    },
    /// Maximal augmentation preserving one pairwise distance.
    Dpea {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        source: usize,
        #[arg(long)]
        target: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Compare both bounds with numerically sampled controllability ranks.
    Validate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        leaders: String,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
        max_nodes: usize,
        #[arg(long, value_enum, default_value = "auto")]
        pmi: PmiMode,
    },
    /// Random-graph benchmark averaged over trials.
    Bench {
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 0.075)]
        p: f64,
        #[arg(long, default_value_t = 30)]
        trials: usize,
        /// `a..=b`, `a..b` or a comma list.
        #[arg(long, default_value = "1..=20")]
        leader_counts: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "greedy")]
        pmi: PmiMode,
        #[arg(long, default_value_t = 1)]
        repeats: usize,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

fn run(cli: Cli) -> Result<(String, bool)> {
    let ok = |s: String| Ok((s, true));
    match cli.command {
        Command::Bounds {
            graph,
            dl_file,
            leaders,
            pmi,
            exact_limit,
        } => ok(commands::bounds(&commands::BoundsArgs {
            graph,
            dl_file,
            leaders,
            pmi,
            exact_limit,
        })?),
        Command::Augment {
            graph,
            leaders,
            bound,
            repeats,
            seed,
            out,
            format,
            pmi,
            exact_limit,
        } => ok(commands::augment(&commands::AugmentArgs {
            graph,
            leaders,
            bound,
            repeats,
            seed,
            out,
            format,
            pmi,
            exact_limit,
        })?),
        Command::Dpea {
            graph,
            source,
            target,
            out,
            format,
        } => ok(commands::dpea_cmd(&commands::DpeaArgs {
            graph,
            source,
            target,
            out,
            format,
        })?),
        Command::Validate {
            graph,
            leaders,
            samples,
            seed,
            tol,
            max_nodes,
            pmi,
        } => commands::validate(&commands::ValidateArgs {
            graph,
            leaders,
            samples,
            seed,
            tolerance: tol,
            max_nodes,
            pmi,
        }),
        Command::Bench {
            n,
            p,
            trials,
            leader_counts,
            seed,
            pmi,
            repeats,
            out,
            format,
        } => {
            let cfg = BenchConfig {
                n,
                p,
                trials,
                leader_counts: bench::parse_leader_counts(&leader_counts)?,
                seed,
                pmi_mode: pmi,
                exact_limit: DEFAULT_EXACT_LIMIT,
                repeats,
            };
            let rows = bench::run(&cfg)?;
            let text = match format {
                Format::Csv => bench::to_csv(&cfg, &rows),
                Format::Json => bench::to_json(&cfg, &rows),
                Format::Dot => return Err(CliError::Usage("bench has no dot output".into())),
            };
            match out {
                Some(path) => {
                    std::fs::write(&path, &text).map_err(|e| CliError::Io { path, source: e })?;
                    ok(String::new())
                }
                None => ok(text),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok((text, sound)) => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            if sound {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: a sampled rank fell below a bound");
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
