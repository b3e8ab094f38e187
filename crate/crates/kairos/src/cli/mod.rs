//! Argument parsing, config merging, dispatch and exit codes.

mod data;
mod experiments;
mod impact;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::SystemTime;

use clap::{Args, CommandFactory, Parser, Subcommand};
use serde::Serialize;

use crate::config::{config_args, parse_config};
use crate::error::{Error, Result};
use crate::report::{write_outputs, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "kairos", version, about = "Persuasion and argument-impact experiments on debate corpora")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Flat `key = value` file of option defaults; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory for report.txt, report.csv and manifest.json.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Reject unknown JSON fields instead of warning.
    #[arg(long)]
    pub strict: bool,
    /// Lexicon directory (falls back to KAIROS_LEXICON_DIR, then built-ins).
    #[arg(long)]
    pub lexicon_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CorpusArgs {
    /// Directory with catalog.json, users.json, debates.json and/or trees.json.
    #[arg(long)]
    pub corpus: PathBuf,
}

/// Which rows to build and which feature groups describe them.
#[derive(Debug, Clone, Args, Serialize)]
pub struct TaskArgs {
    /// task1, task1:<category>, task2, setting1, setting2 or setting3.
    #[arg(long)]
    pub task: String,
    /// Comma-separated feature groups: user, linguistic, tfidf, interplay,
    /// graph (voter rows) or network, friends, linguistic (user pairs).
    #[arg(long)]
    pub features: String,
    /// Vocabulary cap of the tf-idf group.
    #[arg(long, default_value_t = 2000)]
    pub tfidf_features: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ModelArgs {
    /// `logistic` (fixed penalty and C) or `grid` (penalty and C by inner CV).
    #[arg(long, default_value = "logistic")]
    pub model: String,
    /// l1 or l2.
    #[arg(long, default_value = "l2")]
    pub penalty: String,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Inverse-frequency class weights; always on for the settings.
    #[arg(long)]
    pub class_weighted: bool,
    /// Folds of the inner grid search.
    #[arg(long, default_value_t = 3)]
    pub inner_folds: usize,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "lowercase")]
pub enum Command {
    /// Validate a corpus and write its canonical JSON under OUT/corpus.
    Ingest {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        #[command(flatten)]
        #[serde(flatten)]
        corpus: CorpusArgs,
        /// Drop debates with this many ballots or fewer.
        #[arg(long)]
        min_votes: Option<usize>,
    },
    /// Corpus counts, voter cases and the BigIssues projection.
    Stats {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        #[command(flatten)]
        #[serde(flatten)]
        corpus: CorpusArgs,
    },
    /// Debate winners, user success records and claim impact labels.
    Labels {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        #[command(flatten)]
        #[serde(flatten)]
        corpus: CorpusArgs,
    },
    /// Write the feature matrix of a task to OUT/features.csv.
    Featurize {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        #[command(flatten)]
        #[serde(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        #[serde(flatten)]
        task: TaskArgs,
    },
    /// Friendship and voter graph scores; edge lists go to OUT.
    Graph {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        #[command(flatten)]
        #[serde(flatten)]
        corpus: CorpusArgs,
        /// Users listed, by voter-graph PageRank.
        #[arg(long, default_value_t = 20)]
        top: usize,
    },
    /// Fit one model on every row and save it.
    Train {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        #[command(flatten)]
        #[serde(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        #[serde(flatten)]
        task: TaskArgs,
        #[command(flatten)]
        #[serde(flatten)]
        model: ModelArgs,
        /// Where to write the model; defaults to OUT/model.json.
        #[arg(long)]
        model_file: Option<PathBuf>,
    },
    /// Cross-validate one feature set against the majority baseline.
    Evaluate {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        #[command(flatten)]
        #[serde(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        #[serde(flatten)]
        task: TaskArgs,
        #[command(flatten)]
        #[serde(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 5)]
        folds: usize,
    },
    /// Cross-validate several feature sets; `--features` holds
    /// `;`-separated group lists such as `user;user+linguistic`.
    Ablate {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        #[command(flatten)]
        #[serde(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        #[serde(flatten)]
        task: TaskArgs,
        #[command(flatten)]
        #[serde(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 5)]
        folds: usize,
        /// Row the significance tests compare against (default: majority).
        #[arg(long)]
        baseline: Option<String>,
    },
    /// Train claim-impact models on argument trees.
    Impact {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        #[command(flatten)]
        #[serde(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        #[serde(flatten)]
        args: impact::ImpactArgs,
    },
    /// Generate a synthetic corpus with planted effects into OUT.
    Synth {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        #[command(flatten)]
        #[serde(flatten)]
        args: data::SynthArgs,
    },
    /// Merge the reports of earlier runs.
    Report {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        /// Comma-separated run directories.
        #[arg(long, value_delimiter = ',', required = true)]
        runs: Vec<PathBuf>,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Ingest { common, .. }
            | Command::Stats { common, .. }
            | Command::Labels { common, .. }
            | Command::Featurize { common, .. }
            | Command::Graph { common, .. }
            | Command::Train { common, .. }
            | Command::Evaluate { common, .. }
            | Command::Ablate { common, .. }
            | Command::Impact { common, .. }
            | Command::Synth { common, .. }
            | Command::Report { common, .. } => common,
        }
    }
}

/// What a command produced besides the standard report files.
pub struct Outcome {
    pub report: Report,
    pub extra: Vec<String>,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Outcome { report, extra: Vec::new() }
    }
}

fn execute(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Ingest { common, corpus, min_votes } => data::ingest(common, corpus, *min_votes),
        Command::Stats { common, corpus } => data::stats(common, corpus).map(Into::into),
        Command::Labels { common, corpus } => data::labels(common, corpus).map(Into::into),
        Command::Graph { common, corpus, top } => data::graph(common, corpus, *top),
        Command::Synth { common, args } => data::synth(common, args),
        Command::Report { common, runs } => data::merge(common, runs).map(Into::into),
        Command::Featurize { common, corpus, task } => experiments::featurize(common, corpus, task),
        Command::Train { common, corpus, task, model, model_file } => {
            experiments::train(common, corpus, task, model, model_file.as_deref())
        }
        Command::Evaluate { common, corpus, task, model, folds } => {
            experiments::evaluate(common, corpus, task, model, *folds).map(Into::into)
        }
        Command::Ablate { common, corpus, task, model, folds, baseline } => {
            experiments::ablate(common, corpus, task, model, *folds, baseline.as_deref()).map(Into::into)
        }
        Command::Impact { common, corpus, args } => impact::impact(common, corpus, args),
    }
}

/// Splices `--config FILE` entries in front of the user's own flags so that
/// flags given later on the line override them.
fn expand_config(argv: Vec<OsString>) -> Result<Vec<OsString>> {
    let strs: Vec<String> = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let mut path = None;
    for (i, a) in strs.iter().enumerate() {
        if a == "--config" {
            path = strs.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let (Some(path), Some(sub)) = (path, strs.get(1)) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let entries = parse_config(&text)?;
    let injected = config_args(&command(), sub, &entries)?;
    let mut out: Vec<OsString> = argv[..2].to_vec();
    out.extend(injected.into_iter().map(OsString::from));
    out.extend(argv[2..].iter().cloned());
    Ok(out)
}

fn command() -> clap::Command {
    let mut cmd = Cli::command();
    let names: Vec<String> = cmd.get_subcommands().map(|s| s.get_name().to_string()).collect();
    for n in names {
        cmd = cmd.mut_subcommand(n, |s| s.args_override_self(true));
    }
    cmd
}

/// Runs one invocation and returns its exit status.
pub fn run(argv: Vec<OsString>) -> i32 {
    if argv.len() <= 1 {
        eprintln!("{}", command().render_help());
        return EXIT_USAGE;
    }
    let argv = match expand_config(argv) {
        Ok(a) => a,
        Err(e @ Error::Config { .. }) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID;
        }
    };
    let matches = match command().try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let cli = match <Cli as clap::FromArgMatches>::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return EXIT_USAGE;
        }
    };
    let started = SystemTime::now();
    let common = cli.command.common().clone();
    let result = execute(&cli.command).and_then(|outcome| {
        let config = serde_json::to_value(&cli.command).expect("arguments serialize");
        write_outputs(&common.out, &outcome.report, &config, started, &outcome.extra)?;
        Ok(outcome)
    });
    match result {
        Ok(outcome) => {
            print!("{}", outcome.report.to_text());
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}
