mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Outcome;

/// Exact duality computations over Z_p and F_q[[x]].
#[derive(Parser, Debug)]
#[command(name = "dvrdual", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Seed for every random choice (default 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Cap on the number of elements any enumeration may visit.
    #[arg(long, global = true)]
    pub budget: Option<u128>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Smith normal form and invariant factors of a presentation matrix.
    Snf {
        /// Matrix JSON, inline or as a file path (a leading `@` is optional).
        #[arg(long)]
        matrix: String,
    },
    /// Structure of the dual module.
    Dual {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        module: String,
    },
    /// Evaluates a functional on an element.
    Pair {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        module: String,
        /// `{"torsion": [...], "t": [{"n": .., "num": [...]}, ...]}`
        #[arg(long)]
        phi: String,
        /// `{"torsion": [...], "free": [...]}`
        #[arg(long)]
        elem: String,
    },
    /// Image of an element under the double-dual map.
    DoubleDual {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        module: String,
        #[arg(long)]
        elem: String,
    },
    /// The inflation/restriction square for `R/pi^a -> R/pi^b`.
    Square {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        /// A functional on `R/pi^b`; all of them when omitted.
        #[arg(long)]
        phi: Option<String>,
    },
    /// The map from continuous characters of F_q[[x]] to T.
    Ell {
        #[arg(long)]
        ring: String,
        /// `{"coeffs": [...]}`
        #[arg(long)]
        phi: String,
    },
    /// Transports R-linear functionals on a finite module to additive characters.
    Transport {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        module: String,
        /// One functional to tabulate; all of them when omitted.
        #[arg(long)]
        phi: Option<String>,
    },
    /// Counts T[p^n] by enumeration.
    TorsionCount {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        n: usize,
    },
    /// Checks whether Z[delta] with delta^2 = a + b delta is admissible.
    Zdelta {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
    },
    /// Runs the property suite.
    Verify {
        /// Configuration JSON, inline or as a file path.
        #[arg(long)]
        config: Option<String>,
        /// Ring to test; repeat for several. Replaces the default rings.
        #[arg(long)]
        ring: Vec<String>,
        /// Entry to run; repeat for several. Runs all entries when omitted.
        #[arg(long)]
        suite: Vec<String>,
        /// Runs no entries at all.
        #[arg(long, conflicts_with = "suite")]
        none: bool,
        #[arg(long, hide = true)]
        corrupt_snf_pivot: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = cli.common;
    let outcome = match commands::run(cli.command, &common) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("dvrdual: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&outcome, &common) {
        eprintln!("dvrdual: {e}");
        return ExitCode::from(2);
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn emit(outcome: &Outcome, common: &Common) -> std::io::Result<()> {
    let mut text = match common.format {
        Format::Json => serde_json::to_string_pretty(&outcome.json).expect("output serializes"),
        Format::Text => outcome.text.trim_end().to_string(),
    };
    text.push('\n');
    match &common.out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
