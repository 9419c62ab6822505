//! `poxverifi`: corpus ingestion, training, evaluation, ad-hoc queries and
//! the API server.
//!
//! Exit codes: 0 success, 1 usage error, 2 runtime or data error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "poxverifi", version, about = "Claim corpus, classifier and verification API")]
struct Cli {
    /// Write reports as line-delimited JSON on stdout.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ingest a fact-check feed snapshot (JSON Lines) into a new corpus file.
    IngestFeed {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Write quarantined records here as JSON Lines.
        #[arg(long)]
        reject_report: Option<PathBuf>,
    },
    /// Add check-worthy sentences from authoritative articles to a corpus.
    IngestArticles {
        #[arg(long)]
        input: PathBuf,
        /// Corpus file; merged into when it already exists.
        #[arg(long)]
        output: PathBuf,
        /// Keep sentences scoring strictly above this value.
        #[arg(long, default_value_t = 0.8)]
        threshold: f64,
        #[arg(long, value_enum, default_value_t = ScorerKind::Local)]
        scorer: ScorerKind,
        /// Endpoint for `--scorer remote`.
        #[arg(long, env = "SCORER_URL")]
        scorer_url: Option<String>,
        #[arg(long)]
        reject_report: Option<PathBuf>,
    },
    /// Train the classifier and write its model artifact.
    Train {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        hyper: Hyper,
    },
    /// Stratified k-fold cross-validation.
    Crossval {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 10)]
        k: usize,
        /// Evaluate a constant majority-class model instead of the classifier.
        #[arg(long)]
        majority_dummy: bool,
        #[command(flatten)]
        hyper: Hyper,
    },
    /// Classify one headline with a trained model.
    Classify {
        #[arg(long)]
        model: PathBuf,
        headline: String,
    },
    /// List vetted claims similar to a headline.
    Similar {
        #[arg(long)]
        corpus: PathBuf,
        headline: String,
        #[arg(long, default_value_t = poxverifi_core::similarity::DEFAULT_THRESHOLD)]
        threshold: u8,
        #[arg(long, default_value_t = 0)]
        page: usize,
        #[arg(long, default_value_t = poxverifi_core::similarity::DEFAULT_PAGE_SIZE)]
        page_size: usize,
    },
    /// Fetch a page and print its headline and author.
    ExtractHeadline { url: String },
    /// Run the HTTP API.
    Serve {
        /// TOML config file; environment variables override it.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScorerKind {
    Local,
    Remote,
}

#[derive(Debug, Args)]
struct Hyper {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    lr: Option<f64>,
    #[arg(long)]
    l2: Option<f64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env()
                .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("info")),
        )
        .with_writer(std::io::stderr)
        .init();

    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
