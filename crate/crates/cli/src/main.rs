//! `geopack`: command-line front end for the geometric packing toolkit.
//!
//! Exit codes: 0 success, 1 property violated (a witness is printed),
//! 2 input or format error, 3 node budget exceeded.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "geopack",
    version,
    about = "Exact geometric bin packing and packing-dimension tools"
)]
pub struct Cli {
    /// Print a machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Node budget for each exact search.
    #[arg(long, global = true, default_value_t = geopack::Budget::DEFAULT_NODES)]
    pub budget: u64,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the packing instance of a DIMACS graph.
    Reduce {
        #[arg(long)]
        graph: PathBuf,
        /// Diagonal side, in (0, 1/10].
        #[arg(long, default_value = "1/20")]
        alpha: String,
        /// Reduce the complement graph instead.
        #[arg(long)]
        complement: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide whether all boxes of an instance fit in one unit cube.
    Fit {
        instance: PathBuf,
        /// Also run the grid oracle with this granularity.
        #[arg(long)]
        grid: Option<u32>,
    },
    /// Count bins, exactly or by first fit.
    Solve {
        instance: PathBuf,
        #[arg(
            long,
            conflicts_with = "first_fit",
            required_unless_present = "first_fit"
        )]
        exact: bool,
        #[arg(long)]
        first_fit: bool,
        /// First-fit order: comma-separated 0-based box indices, or
        /// "volume" for decreasing volume. Defaults to input order.
        #[arg(long, requires = "first_fit")]
        order: Option<String>,
    },
    /// Chromatic number of a DIMACS graph.
    Chromatic {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        complement: bool,
    },
    /// Maximal box subsets that fit in one cube.
    Configs { instance: PathBuf },
    /// Write the lines family over F_3^n.
    Lines {
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Set-family hygiene.
    Family {
        #[command(subcommand)]
        action: FamilyAction,
    },
    /// Induced matching and the packing-dimension lower bound.
    Matching {
        family: PathBuf,
        #[arg(long)]
        exact: bool,
    },
    /// Verify or search embeddings.
    Embed {
        #[command(subcommand)]
        action: EmbedAction,
    },
    /// Violating triple for a 1-D embedding of a lines family.
    #[command(name = "counterexample-1d")]
    Counterexample1d { family: PathBuf, embedding: PathBuf },
    /// Seeded randomized lemma checks.
    VerifyLemmas(LemmaArgs),
    /// Re-validate a witness or a report containing one.
    CheckWitness { report: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum FamilyAction {
    /// Downward closure, isolated elements and the (k, B) profile.
    Check { family: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum EmbedAction {
    Verify {
        family: PathBuf,
        embedding: PathBuf,
        /// Compare fit and membership on every subset (at most 20 elements).
        #[arg(long)]
        exhaustive: bool,
    },
    Search {
        family: PathBuf,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        grid: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct LemmaArgs {
    /// pair, triple, single-coord, reduction, matching-bound, bins, oracle,
    /// monotone, lines or one-dim.
    #[arg(long)]
    pub lemma: String,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 4)]
    pub max_dim: usize,
    #[arg(long, default_value_t = 8)]
    pub max_den: u32,
    #[arg(long, default_value_t = 4)]
    pub max_boxes: usize,
    /// Vertices of random graphs; the maximum with --exhaustive.
    #[arg(long, default_value_t = 5)]
    pub vertices: usize,
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long, default_value_t = 30)]
    pub universe: usize,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 3)]
    pub b: usize,
    #[arg(long, default_value_t = 12)]
    pub grid: u32,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = commands::run(&cli);
    let code = match outcome {
        Ok(out) => {
            print!("{}", if cli.json { out.json_text() } else { out.text });
            out.code
        }
        Err(e) => {
            let code = if e.is_budget() { 3 } else { 2 };
            if cli.json {
                let report = serde_json::json!({ "error": e.to_string(), "exit": code });
                print!("{}", geopack::io::to_json(&report));
            }
            eprintln!("error: {e}");
            code
        }
    };
    ExitCode::from(code)
}
