use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Exit status for command-line usage errors (BSD `EX_USAGE`).
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "cswud",
    version,
    about = "Dependency annotation pipeline for code-switched text"
)]
struct Cli {
    /// Worker threads for annotate and evaluate.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: u16,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Read a raw token-per-line corpus and write it as an eight-column table.
    Ingest {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = RawFormatArg::Miami)]
        format: RawFormatArg,
        /// Output .bln file (stdout when omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write corpus counts as JSON.
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Split a corpus into its code-switched and analysis subsets.
    Filter {
        input: PathBuf,
        #[arg(long)]
        csw_out: Option<PathBuf>,
        #[arg(long)]
        analysis_out: Option<PathBuf>,
        /// Counts as JSON (stdout when omitted).
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Annotate every sentence with the chat model, using and filling a response cache.
    Annotate {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// JSON-lines response cache.
        #[arg(long)]
        cache: PathBuf,
        /// Never contact the model; cache misses are errors.
        #[arg(long)]
        offline: bool,
        /// Model settings (TOML).
        #[arg(long)]
        llm_config: Option<PathBuf>,
        #[command(flatten)]
        subset: SubsetArgs,
    },
    /// Check sentence structure. Exits 1 when violations are found.
    Validate {
        input: PathBuf,
        /// Only hard violations count toward the exit status.
        #[arg(long)]
        hard_only: bool,
        /// Print violations as a JSON array.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        subset: SubsetArgs,
    },
    /// Score predicted annotations against a reference.
    Evaluate {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        /// Equivalence groups JSON for relaxed scores.
        #[arg(long)]
        groups: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        subset: SubsetArgs,
    },
    /// Export switch-point label distributions as CSV.
    Analyze {
        input: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Hold)]
        mode: ModeArg,
        #[command(flatten)]
        subset: SubsetArgs,
    },
    /// Run the review service.
    Serve {
        /// Service settings (TOML).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Machine annotations to load before serving.
        #[arg(long, requires = "corpus_id")]
        import: Option<PathBuf>,
        /// Reference annotations for the imported corpus.
        #[arg(long, requires = "import")]
        gold: Option<PathBuf>,
        #[arg(long)]
        corpus_id: Option<String>,
    },
    /// Convert eight-column tables to 10-column CoNLL-U.
    ExportConllu {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        subset: SubsetArgs,
    },
}

#[derive(Args, Debug, Clone, Default)]
#[group(multiple = false)]
pub struct SubsetArgs {
    /// Keep code-switched sentences only.
    #[arg(long)]
    pub csw_only: bool,
    /// Keep code-switched sentences with at least three tokens.
    #[arg(long)]
    pub analysis_only: bool,
    /// Keep sentences containing an emoji.
    #[arg(long)]
    pub emoji: bool,
    /// Keep sentences without emoji.
    #[arg(long)]
    pub non_emoji: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum RawFormatArg {
    Miami,
    Guaspa,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum ModeArg {
    /// Neutral tokens are skipped; compare with the last content language.
    Hold,
    /// Compare with the literal previous token.
    Strict,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
