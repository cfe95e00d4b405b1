mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use fieldscope::breakpoint::{BreakpointError, ScreeMode};
use fieldscope::citestats::CiteError;
use fieldscope::corpus::{CorpusError, Origin};
use fieldscope::evalkit::EvalError;
use fieldscope::graphout::GraphError;
use fieldscope::lexquery::{QueryError, QueryFileError};
use fieldscope::pipelines::PipelineError;
use fieldscope::reproduce::ReproError;

use commands::{ApproachChoice, Ctx, GraphArgs, GraphFormat, Sink};
use config::{ConfigError, ReportFormat, RunConfig};

/// Field delineation for journal corpora: lexical queries, citation scree
/// analysis, set comparison and evaluation.
#[derive(Parser)]
#[command(name = "fieldscope", version)]
struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides `output_dir`. Without one, single-file
    /// commands print to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format; overrides `format`.
    #[arg(long, global = true, value_enum)]
    format: Option<ReportFormat>,
    /// Raise log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OriginArg {
    ScopusLike,
    WosLike,
}

impl From<OriginArg> for Origin {
    fn from(o: OriginArg) -> Self {
        match o {
            OriginArg::ScopusLike => Origin::ScopusLike,
            OriginArg::WosLike => Origin::WosLike,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Vertical,
    Horizontal,
}

#[derive(Subcommand)]
enum Command {
    /// Load registry and corpus, report counts.
    Ingest {
        /// Also write the inverted index as `index.txt`.
        #[arg(long)]
        dump_index: bool,
    },
    /// Run the configured query files, or one inline query.
    Query {
        #[arg(long, value_enum)]
        origin: Option<OriginArg>,
        /// Inline query in the origin's dialect.
        #[arg(long)]
        text: Option<String>,
    },
    /// Two-segment breakpoint of a `rank,value[,journal_id]` CSV.
    Scree {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "vertical")]
        mode: ModeArg,
    },
    /// Build journal sets; writes JSON, CSV and step counts per approach.
    Delineate {
        #[arg(long, value_enum)]
        approach: ApproachChoice,
    },
    /// Venn partition of two or three result files.
    Compare {
        #[arg(num_args = 2..=3, required = true)]
        results: Vec<PathBuf>,
    },
    /// Journal-level scores for result files, publication-level scores from ballots.
    Evaluate {
        results: Vec<PathBuf>,
        /// Recall denominator; defaults to the union of the given results.
        #[arg(long)]
        pool: Option<usize>,
        /// Item precision at which a publication counts as relevant.
        #[arg(long, default_value_t = 0.8)]
        threshold: f64,
    },
    /// Fleiss's kappa over the configured ballots.
    Kappa,
    /// Export the journal citation network.
    ExportGraph {
        #[arg(long, value_enum, default_value = "labeled-network")]
        graph_format: GraphFormat,
        #[arg(long)]
        directed: bool,
        #[arg(long)]
        self_loops: bool,
        /// Result files whose union is the node set; default is the registry.
        #[arg(long)]
        universe: Vec<PathBuf>,
        /// Result files counted as per-approach publication overlays.
        #[arg(long)]
        overlay: Vec<PathBuf>,
    },
    /// Check the bundled (or given) fixtures against the reference numbers.
    Reproduce {
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<bool> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    cfg.validate()?;
    if let Some(o) = cli.out {
        cfg.output_dir = Some(o);
    }
    let format = cli.format.unwrap_or(cfg.format);
    let ctx = Ctx {
        sink: Sink {
            dir: cfg.output_dir.clone(),
        },
        cfg,
        format,
    };
    match cli.command {
        Command::Ingest { dump_index } => commands::ingest(&ctx, dump_index)?,
        Command::Query { origin, text } => commands::query(&ctx, origin.map(Origin::from), text.as_deref())?,
        Command::Scree { input, mode } => {
            let mode = match mode {
                ModeArg::Vertical => ScreeMode::VerticalError,
                ModeArg::Horizontal => ScreeMode::HorizontalError,
            };
            commands::scree(&ctx, &input, mode)?
        }
        Command::Delineate { approach } => commands::delineate(&ctx, approach)?,
        Command::Compare { results } => commands::compare_cmd(&ctx, &results)?,
        Command::Evaluate {
            results,
            pool,
            threshold,
        } => commands::evaluate_cmd(&ctx, &results, pool, threshold)?,
        Command::Kappa => commands::kappa(&ctx)?,
        Command::ExportGraph {
            graph_format,
            directed,
            self_loops,
            universe,
            overlay,
        } => commands::export_graph_cmd(
            &ctx,
            GraphArgs {
                graph_format,
                directed,
                self_loops,
                universe: &universe,
                overlays: &overlay,
            },
        )?,
        Command::Reproduce { fixtures } => return commands::reproduce_cmd(&ctx, fixtures.as_deref()),
    }
    Ok(true)
}

/// 1: reproduction mismatch, 2: configuration, 3: unreadable input,
/// 4: computation failure.
fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.is::<ConfigError>() {
            return 2;
        }
        if cause.is::<PipelineError>()
            || cause.is::<BreakpointError>()
            || cause.is::<CiteError>()
            || cause.is::<GraphError>()
        {
            return 4;
        }
        if cause.is::<CorpusError>()
            || cause.is::<EvalError>()
            || cause.is::<QueryError>()
            || cause.is::<QueryFileError>()
            || cause.is::<ReproError>()
        {
            return 3;
        }
    }
    3
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
