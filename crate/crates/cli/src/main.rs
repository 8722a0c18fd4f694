//! `plab`: partition recurrences from the command line.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod render;

use commands::Failure;

#[derive(Parser, Debug)]
#[command(
    name = "plab",
    version,
    about = "Exact partition recurrences, rewrite systems and path codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Dot,
    Plain,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print p(n).
    Count {
        n: u64,
        /// An engine (euler, integral, sigma, minpart, bounded, maxpart),
        /// `oracle`, or `rewrite:<minpart|maxpart|bounded>`.
        #[arg(long, default_value = "euler")]
        method: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Print a coefficient table.
    Coeffs {
        #[arg(value_enum)]
        kind: commands::CoeffsKind,
        #[arg(long)]
        upto: usize,
        /// Allow DAG kinds beyond the default cap.
        #[arg(long)]
        lift_caps: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run an invariant suite; exits 1 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: commands::SuiteArg,
        #[arg(long, default_value_t = 30)]
        upto: usize,
        /// Run past the built-in caps.
        #[arg(long)]
        lift_caps: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Export the reduction DAG rooted at p(n).
    Dag {
        #[arg(long, value_enum)]
        system: commands::SystemArg,
        #[arg(long)]
        n: u64,
        /// Allow n beyond the default cap.
        #[arg(long)]
        lift_caps: bool,
        /// Write to a file instead of stdout.
        #[arg(long)]
        output: Option<std::path::PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
    /// Time the engines and compare recurrent-term counters.
    Bench {
        #[arg(long, default_value_t = 200)]
        upto: usize,
        /// Comma-separated engine names; all six by default.
        #[arg(long, value_delimiter = ',')]
        methods: Option<Vec<String>>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Orbit table of the involution on B_j ∪ B_{j-1}.
    Involution {
        #[arg(long)]
        j: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Path code utilities.
    Codes {
        #[command(subcommand)]
        action: CodesAction,
    },
}

#[derive(Subcommand, Debug)]
enum CodesAction {
    /// Valuation, polarity, edge count and partition of each code; with
    /// `--n`, also its walk and termination predicates.
    Info {
        codes: Vec<String>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// The codes with leading bit 1 and valuation j.
    Bj {
        j: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// The first words of (100)*(1+011).
    Pentagonal {
        count: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn run(cli: Cli) -> Result<commands::Output, Failure> {
    match cli.command {
        Command::Count { n, method, format } => commands::count(n, &method, format),
        Command::Coeffs {
            kind,
            upto,
            lift_caps,
            format,
        } => commands::coeffs(kind, upto, lift_caps, format),
        Command::Verify {
            suite,
            upto,
            lift_caps,
            seed,
            format,
        } => commands::verify(suite, upto, lift_caps, seed, format),
        Command::Dag {
            system,
            n,
            lift_caps,
            output,
            format,
        } => commands::dag(system, n, lift_caps, output.as_deref(), format),
        Command::Bench {
            upto,
            methods,
            format,
        } => commands::bench(upto, methods, format),
        Command::Involution { j, format } => commands::involution(j, format),
        Command::Codes { action } => match action {
            CodesAction::Info { codes, n, format } => commands::codes_info(&codes, n, format),
            CodesAction::Bj { j, format } => commands::codes_bj(j, format),
            CodesAction::Pentagonal { count, format } => commands::codes_pentagonal(count, format),
        },
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("plab: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
