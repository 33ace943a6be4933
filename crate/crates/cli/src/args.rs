use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

/// Integers with restricted digits in several bases at once.
///
/// Numbers accept `a^b` power syntax (e.g. `4^25`). Options can also be set
/// in a config file of `key = value` lines; flags on the command line win.
#[derive(Debug, Parser)]
#[command(name = "polybase", version, propagate_version = true)]
pub struct Cli {
    /// Worker threads [default: available parallelism].
    #[arg(long, global = true, env = "POLYBASE_THREADS")]
    pub threads: Option<usize>,

    /// Config file with `key = value` lines; `[subcommand]` headers scope keys.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Write the main output here instead of stdout.
    #[arg(long, short, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Validate flags and stop before computing.
    #[arg(long, global = true)]
    pub dry_run: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print expansions of a number in several bases.
    Digits(DigitsArgs),
    /// Enumerate or count integers satisfying several digit constraints.
    Search(SearchArgs),
    /// Block counts S(n) of the base-3&4 binary system with slope classes.
    #[command(name = "sequence-s")]
    SequenceS(SequenceArgs),
    /// Avoided slope windows of the block geometry and their log-measure.
    Slopes(SlopesArgs),
    /// Count n <= N with C(2n, n) coprime to a product of odd primes.
    Graham(GrahamArgs),
    /// Digit-special census: Real(N), Est(N) and the checklist audit.
    Special(SpecialArgs),
    /// Dimension budgets, pair conditions and base-list partial sums.
    Budget(BudgetArgs),
    /// Show a search checkpoint file and optionally check it against a spec.
    #[command(name = "checkpoint-inspect")]
    CheckpointInspect(InspectArgs),
}

#[derive(Debug, Args)]
pub struct DigitsArgs {
    /// The number to expand.
    #[arg(long)]
    pub value: String,
    /// Bases to expand in (repeatable or comma separated).
    #[arg(long = "base", required = true, value_delimiter = ',')]
    pub bases: Vec<u32>,
}

/// Constraint flags shared by `search` and `checkpoint-inspect`.
#[derive(Debug, Args, Clone, Default)]
pub struct SpecArgs {
    /// Generator constraint `base:digits`, e.g. `4:0,1` or `7:0-3`.
    #[arg(long = "gen", value_name = "SPEC")]
    pub generator: Option<String>,
    /// Filter constraint `base:digits` (repeatable).
    #[arg(long = "filter", value_name = "SPEC")]
    pub filters: Vec<String>,
    /// Lower end of the range (inclusive).
    #[arg(long, default_value = "0", value_name = "N")]
    pub from: String,
    /// Upper end of the range (exclusive).
    #[arg(long, value_name = "N")]
    pub below: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MemberFormat {
    /// One decimal integer per line.
    Lines,
    /// `value` plus one column per base with the expansion.
    Csv,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Print only the number of members.
    #[arg(long)]
    pub count_only: bool,
    /// Print only the largest member (descending traversal).
    #[arg(long, conflicts_with = "count_only")]
    pub largest: bool,
    #[arg(long, value_enum, default_value_t = MemberFormat::Lines)]
    pub format: MemberFormat,
    /// Checkpoint file; enables a resumable single-threaded run.
    #[arg(long, value_name = "PATH", conflicts_with = "largest")]
    pub checkpoint: Option<PathBuf>,
    /// Nodes between checkpoint writes.
    #[arg(long, default_value_t = 1 << 24, value_name = "NODES")]
    pub checkpoint_every: u64,
    /// Continue from the checkpoint file instead of starting over.
    #[arg(long, requires = "checkpoint")]
    pub resume: bool,
}

#[derive(Debug, Args)]
pub struct SequenceArgs {
    #[arg(long, value_name = "N")]
    pub max_n: u64,
    #[arg(long, default_value_t = 0, value_name = "N")]
    pub min_n: u64,
    /// Extra base-4 digits resolved in the slope windows.
    #[arg(long, default_value_t = 0)]
    pub depth_x: u32,
    /// Extra base-3 digits resolved in the slope windows.
    #[arg(long, default_value_t = 0)]
    pub depth_y: u32,
    /// Largest working precision of the slope classifier, in bits.
    #[arg(long, default_value_t = 4096, value_name = "BITS")]
    pub precision_cap: u32,
}

#[derive(Debug, Args)]
pub struct SlopesArgs {
    /// Extra digits in both covers (overridden by --depth-x / --depth-y).
    #[arg(long, default_value_t = 0)]
    pub depth: u32,
    #[arg(long)]
    pub depth_x: Option<u32>,
    #[arg(long)]
    pub depth_y: Option<u32>,
    /// Also report how many n in [1, N] have their block slope in a window.
    #[arg(long, value_name = "N")]
    pub classify_upto: Option<u64>,
    #[arg(long, default_value_t = 4096, value_name = "BITS")]
    pub precision_cap: u32,
}

#[derive(Debug, Args)]
pub struct GrahamArgs {
    /// Odd primes, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "3,5,7")]
    pub primes: Vec<u32>,
    /// Horizons N (repeatable).
    #[arg(long = "n", required = true, value_name = "N")]
    pub horizons: Vec<String>,
    /// List the members in [0, N] instead of counting.
    #[arg(long)]
    pub members: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Strict,
    Exhaustive,
    Both,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("what").required(true).args(["horizons", "audit"])))]
pub struct SpecialArgs {
    /// Horizons N (repeatable).
    #[arg(long = "horizon", value_name = "N")]
    pub horizons: Vec<String>,
    #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
    pub mode: ModeArg,
    /// Compare the two checklist modes on [1, N] and list witnesses.
    #[arg(long, value_name = "N")]
    pub audit: Option<u64>,
    /// Witnesses listed by --audit.
    #[arg(long, default_value_t = 20)]
    pub witnesses: usize,
}

#[derive(Debug, Args)]
#[command(group(
    ArgGroup::new("what")
        .required(true)
        .args(["terms", "egrs", "canonical", "constant", "deficit", "heuristic"])
))]
pub struct BudgetArgs {
    /// Budget term `base:allowed_size` (repeatable).
    #[arg(long = "term", value_name = "B:S")]
    pub terms: Vec<String>,
    /// `p,q,A,B`: A/(p-1) + B/(q-1) >= 1.
    #[arg(long, value_name = "P,Q,A,B", value_delimiter = ',')]
    pub egrs: Option<Vec<u64>>,
    /// `p,q,A,B`: log(A+1)/log p + log(B+1)/log q >= 1.
    #[arg(long, value_name = "P,Q,A,B", value_delimiter = ',')]
    pub canonical: Option<Vec<u64>>,
    /// Partial sums of 1/(p log p) over 3, 4, 5, 7, ... up to k terms.
    #[arg(long, value_name = "K")]
    pub constant: Option<usize>,
    /// Partial sums of 1 - log(p-1)/log p over the same bases.
    #[arg(long, value_name = "K")]
    pub deficit: Option<usize>,
    /// Uncertified estimate of the full 1/(p log p) series with a tail beyond X.
    #[arg(long, value_name = "X")]
    pub heuristic: Option<u64>,
    /// Working precision in bits.
    #[arg(long, default_value_t = 128, value_name = "BITS")]
    pub precision: u32,
    #[arg(long, default_value_t = 4096, value_name = "BITS")]
    pub precision_cap: u32,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    #[arg(long, value_name = "PATH")]
    pub checkpoint: PathBuf,
    /// Check the checkpoint digest against this spec.
    #[command(flatten)]
    pub spec: SpecArgs,
}
