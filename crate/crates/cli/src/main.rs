use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod report;

/// Kazhdan–Lusztig polynomials of maximally-clustered hexagon-avoiding
/// permutations from 10*-avoiding Deodhar masks.
#[derive(Debug, Parser)]
#[command(name = "deodhar", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Emit JSON instead of text.
    #[arg(long, global = true, conflicts_with = "tsv")]
    pub json: bool,

    /// Emit tab-separated values where a table is printed.
    #[arg(long, global = true)]
    pub tsv: bool,

    /// Worker threads for sweeps (default: DEODHAR_THREADS, then all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Masks,
    Recursion,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FilterArg {
    #[value(name = "10star")]
    TenStar,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    Mc,
    Fb,
    All,
}

/// A permutation given by `--w` or by a reduced word.
#[derive(Debug, Args)]
pub struct Target {
    /// Permutation in 1-line notation, e.g. 3412 or 3,4,1,2.
    #[arg(long)]
    pub w: Option<String>,

    /// Comma-separated generator indices, e.g. 2,3,1,2.
    #[arg(long, conflicts_with = "w")]
    pub word: Option<String>,

    /// Rank for --word (default: largest letter + 1).
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pattern classification of a permutation.
    Classify {
        /// Permutation in 1-line notation.
        perm: String,
    },
    /// Contracted reduced expression a_0 c_1 a_1 ... c_M a_M.
    Contract {
        #[command(flatten)]
        target: Target,
    },
    /// Draw a heap, optionally decorated by a mask.
    Heap {
        #[command(flatten)]
        target: Target,
        /// Bit string aligned with the word, e.g. 1001.
        #[arg(long)]
        mask: Option<String>,
        /// List every commutativity class instead of one heap.
        #[arg(long)]
        classes: bool,
        /// Cap on the number of commutativity classes.
        #[arg(long, default_value_t = deodhar::heap::DEFAULT_CLASS_CAP)]
        cap: usize,
    },
    /// Kazhdan–Lusztig polynomials P_{x,w}.
    Kl {
        #[arg(long)]
        w: String,
        /// Lower element; omit for the full table.
        #[arg(long)]
        x: Option<String>,
        #[arg(long, value_enum, default_value_t = MethodArg::Masks)]
        method: MethodArg,
    },
    /// The element C'_w in the T-basis.
    Cbasis {
        #[arg(long)]
        w: String,
    },
    /// Masks on the contracted expression with their defect statistics.
    Masks {
        #[arg(long)]
        w: String,
        #[arg(long, value_enum, default_value_t = FilterArg::TenStar)]
        filter: FilterArg,
    },
    /// Compare the mask formula with the recursion.
    Verify {
        /// A single element to verify.
        #[arg(long, conflicts_with = "n")]
        w: Option<String>,
        /// Verify every eligible element of S_n.
        #[arg(long)]
        n: Option<usize>,
        /// Verify a seeded random sample of this size instead.
        #[arg(long, requires = "n")]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Class counts for S_1 .. S_n.
    Census {
        #[arg(long)]
        n: usize,
    },
    /// Ideal-pattern test and upper set of a pattern.
    Ideal {
        #[arg(long)]
        w: String,
        #[arg(long, value_enum, default_value_t = ClassArg::Mc)]
        class: ClassArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let out = deodhar::census::with_threads(cli.threads, || commands::dispatch(&cli));
    match out {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(err) => {
            if json {
                println!("{}", err.to_json());
            } else {
                eprintln!("error: {err}");
            }
            ExitCode::from(err.exit_code())
        }
    }
}
