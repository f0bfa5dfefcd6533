//! `vtm`: command-line experiments on squarefree words, the ternary
//! Thue–Morse word and cyclic squarefree morphisms.

mod cache;
mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

use report::{Outcome, RunReport};

#[derive(Parser)]
#[command(name = "vtm", version, about = "Squarefree words and the ternary Thue-Morse word")]
struct Cli {
    /// Emit reports as JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Reserved; every algorithm is deterministic
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a prefix of a morphic fixed point
    Generate(GenerateArgs),
    /// Check squarefreeness, progression evidence or occurrence residues
    Check(CheckArgs),
    /// Compile and query a first-order predicate over automatic sequences
    Predicate(PredicateArgs),
    /// Search for cyclic squarefree uniform morphisms, or embed a word
    Morphism(MorphismArgs),
    /// Reconstruct the base-2 DFAO of vtm
    Dfao(DfaoArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["vtm", "morphism"])))]
pub struct GenerateArgs {
    /// The vtm morphism 0:012,1:02,2:1
    #[arg(long)]
    pub vtm: bool,
    /// Morphism such as "0:01,1:10"; iterated from letter 0
    #[arg(long, value_name = "SPEC")]
    pub morphism: Option<String>,
    #[arg(long, value_name = "N")]
    pub length: usize,
    /// Write the word here and print a report instead of the word
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["squarefree", "theorem1", "residues"])))]
pub struct CheckArgs {
    /// Word file (digit string) to test for squares
    #[arg(long, value_name = "FILE")]
    pub squarefree: Option<PathBuf>,
    /// For each k, look for n with v[kn] = v[k(n+1)] in {0, 2}
    #[arg(long, requires = "k_range")]
    pub theorem1: bool,
    /// Residues modulo k of the occurrences of a factor
    #[arg(long, requires_all = ["k", "factor"])]
    pub residues: bool,
    /// Inclusive range A..B (or A..=B)
    #[arg(long, value_name = "A..B")]
    pub k_range: Option<String>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_name = "DIGITS")]
    pub factor: Option<String>,
    /// Length of the vtm prefix scanned
    #[arg(long, value_name = "N", default_value_t = 1_000_000)]
    pub prefix: usize,
    /// Scan this word instead of a vtm prefix (residues only)
    #[arg(long, value_name = "FILE", conflicts_with = "theorem1")]
    pub word: Option<PathBuf>,
}

#[derive(Args)]
pub struct PredicateArgs {
    /// The formula, e.g. "Ei VTM[i]=@0"
    #[arg(long, value_name = "FORMULA")]
    pub eval: String,
    /// NAME=FILE binding a sequence name to a DFAO text file; VTM is built in
    #[arg(long, value_name = "NAME=FILE")]
    pub seq: Vec<String>,
    /// Membership query such as k=4096 or i=1,k=2; repeatable
    #[arg(long, value_name = "ASSIGNMENT")]
    pub member: Vec<String>,
    /// List the first L accepted tuples
    #[arg(long, value_name = "L")]
    pub enumerate: Option<usize>,
    #[arg(long, value_name = "FILE")]
    pub dot: Option<PathBuf>,
    /// Write the automaton in text format
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Largest intermediate automaton allowed
    #[arg(long, value_name = "STATES", default_value_t = vtm_core::logic::DEFAULT_STATE_CEILING)]
    pub ceiling: usize,
}

#[derive(Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["search", "embed"])))]
pub struct MorphismArgs {
    #[arg(long, requires = "k")]
    pub search: bool,
    #[arg(long, requires_all = ["word", "morphism"])]
    pub embed: bool,
    #[arg(long)]
    pub k: Option<usize>,
    /// List every solution (k <= 13)
    #[arg(long, requires = "search")]
    pub exhaustive: bool,
    /// Node budget of a first-solution search
    #[arg(long, default_value_t = vtm_core::cyclic::DEFAULT_NODE_BUDGET)]
    pub budget: u64,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Squarefree word to embed
    #[arg(long, value_name = "FILE")]
    pub word: Option<PathBuf>,
    /// Morphism file ("k K", "image0 D", "certified yes|no")
    #[arg(long, value_name = "FILE")]
    pub morphism: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct DfaoArgs {
    /// Write the DFAO in text format
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub dot: Option<PathBuf>,
    /// Check that v[i] in {0, 2} implies v[2i] = v[i] for i below this bound
    #[arg(long, value_name = "N", default_value_t = 1_000_000)]
    pub doubling_bound: u64,
    /// Check v[2^l] = 2 for 1 <= l <= this exponent
    #[arg(long, value_name = "L", default_value_t = 19)]
    pub power_exp: u32,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let result = match cli.command {
        Command::Generate(args) => match commands::generate(&args, &echo) {
            Ok(None) => return ExitCode::SUCCESS,
            Ok(Some(report)) => Ok(report),
            Err(e) => Err(e),
        },
        Command::Check(args) => commands::check(&args, &echo),
        Command::Predicate(args) => commands::predicate(&args, &echo),
        Command::Morphism(args) => commands::morphism(&args, &echo),
        Command::Dfao(args) => commands::dfao(&args, &echo),
    };
    let report = result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        let mut r = RunReport::new(echo);
        r.outcome = Outcome::Error;
        r.evidence("error", format!("{e:#}"));
        r
    });
    if cli.json {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    ExitCode::from(report.outcome.exit_code())
}
