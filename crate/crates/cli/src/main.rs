//! `zswlab`: weighted zero-sum constants from the command line.

mod cache;
mod commands;
mod output;
mod weights;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use weights::WeightSetSpec;

#[derive(Parser, Debug)]
#[command(name = "zswlab", version, about = "Weighted zero-sum constants over Z_n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute C, D or E for one modulus and weight pair.
    Compute(ComputeArgs),
    /// Tabulate C/D/E of (Q_p, {1}) over several primes and compare with the known values.
    Table(TableArgs),
    /// Exhaustively verify lemma statements at given primes.
    VerifyLemma(VerifyLemmaArgs),
    /// Find a qualifying subsequence and print it as a certificate bundle.
    Find(FindArgs),
    /// Check certificate bundles written by `find`.
    CheckCertificate(CheckCertificateArgs),
    /// Compute D of (Q_p, {1}) for p ≡ 1 (mod 4) and report whether it is 4 or 5.
    OpenQuestion(OpenQuestionArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct ModulusArgs {
    /// An odd prime p.
    #[arg(long, conflicts_with = "modulus", required_unless_present = "modulus")]
    pub prime: Option<u32>,
    /// Any modulus n in 2..=64.
    #[arg(long)]
    pub modulus: Option<u32>,
}

#[derive(Args, Debug, Clone)]
pub struct WeightArgs {
    /// Weight set A: qp, np, units, ones, zero, or a list such as "1,4".
    #[arg(long, default_value = "qp")]
    pub weights: WeightSetSpec,
    /// Weight set B, same syntax.
    #[arg(long = "b-weights", default_value = "ones")]
    pub b_weights: WeightSetSpec,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Worker threads for the search.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Longest sequence length to search before giving up (exit 3).
    #[arg(long)]
    pub cap: Option<usize>,
    /// Result cache (JSON lines).
    #[arg(long, env = "ZSWLAB_CACHE")]
    pub cache: Option<PathBuf>,
    /// Neither read nor write the cache.
    #[arg(long)]
    pub no_cache: bool,
    /// Recompute cache hits and fail (exit 5) unless they agree.
    #[arg(long)]
    pub recheck: bool,
    /// Seconds between checkpoint writes.
    #[arg(long, default_value_t = 60)]
    pub checkpoint_interval: u64,
    /// Allow D and E at p = 13.
    #[arg(long)]
    pub allow_long: bool,
    /// Allow C at p = 13 and any kind above 13 (needs checkpointing).
    #[arg(long)]
    pub allow_very_long: bool,
}

#[derive(Args, Debug)]
pub struct ComputeArgs {
    #[arg(long)]
    pub kind: zswlab::ConstantKind,
    #[command(flatten)]
    pub modulus: ModulusArgs,
    #[command(flatten)]
    pub weights: WeightArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Checkpoint file; an existing one is resumed.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    /// Comma-separated primes.
    #[arg(long, value_delimiter = ',', default_value = "3,5,7,11")]
    pub primes: Vec<u32>,
    /// Kinds to tabulate (comma-separated).
    #[arg(long, value_delimiter = ',', default_value = "C,D,E")]
    pub kind: Vec<zswlab::ConstantKind>,
    #[command(flatten)]
    pub run: RunArgs,
    /// Directory for per-row checkpoint files.
    #[arg(long)]
    pub checkpoint_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct VerifyLemmaArgs {
    /// Lemma ids (comma-separated), or "all".
    #[arg(long, value_delimiter = ',', required = true)]
    pub id: Vec<String>,
    /// Primes (comma-separated).
    #[arg(long, value_delimiter = ',', required = true)]
    pub prime: Vec<u32>,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct FindArgs {
    #[command(flatten)]
    pub modulus: ModulusArgs,
    #[command(flatten)]
    pub weights: WeightArgs,
    /// Sequence terms, e.g. "1,2,3".
    #[arg(long)]
    pub sequence: String,
    /// any, contiguous, exact:K, or a kind letter C/D/E.
    #[arg(long, default_value = "any")]
    pub mode: String,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct CheckCertificateArgs {
    /// Certificate bundle files.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct OpenQuestionArgs {
    #[arg(long)]
    pub prime: u32,
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute(a) => commands::compute(a),
        Command::Table(a) => commands::table(a),
        Command::VerifyLemma(a) => commands::verify_lemma(a),
        Command::Find(a) => commands::find(a),
        Command::CheckCertificate(a) => commands::check_certificate(a),
        Command::OpenQuestion(a) => commands::open_question(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
