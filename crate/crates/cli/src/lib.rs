//! The `col` command line: parsing, counting, enumeration, valuation, canonical
//! structures, symbolic families and the check suite.

pub mod config;
pub mod output;
pub mod suite;

mod commands;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::SessionConfig;
use output::{CliError, Output, EXIT_OK, EXIT_USAGE};

#[derive(Parser, Debug)]
#[command(name = "col", version, about = "Finite-depth biworld semantics for knowing, knowing at most, and common knowledge")]
struct Cli {
    #[command(flatten)]
    session: SessionArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct SessionArgs {
    /// Comma-separated atoms (an empty string for none).
    #[arg(long, global = true, value_delimiter = ',', default_value = "p")]
    atoms: Vec<String>,
    /// Comma-separated agents.
    #[arg(long, global = true, value_delimiter = ',', default_value = "a")]
    agents: Vec<String>,
    /// Largest registry or structure to build; defaults to $COL_CAP or 1000000.
    #[arg(long, global = true)]
    cap: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Machine-readable output, including errors.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the canonical form and modal depth of a formula.
    Parse {
        #[arg(short, long)]
        formula: String,
    },
    /// Number of biworlds per level, from the counting recurrence.
    Count {
        #[arg(long, default_value_t = 1)]
        level: usize,
    },
    /// Dump the registry of one level.
    Enumerate {
        #[arg(long, default_value_t = 1)]
        level: usize,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Three-valued valuation of a formula at a biworld (inline JSON or @file).
    Eval {
        #[arg(short, long)]
        formula: String,
        #[arg(short, long)]
        world: String,
        /// Probe twice as many iterates for common knowledge.
        #[arg(long)]
        extended_probe: bool,
    },
    /// Two-valued evaluation or entailment over the canonical structure on level k+1.
    Kripke {
        #[arg(short, long, default_value_t = 0)]
        k: usize,
        #[arg(short, long)]
        formula: String,
        /// Evaluate at this world; without it, check entailment from the premises.
        #[arg(short, long)]
        world: Option<String>,
        #[arg(short, long)]
        premise: Vec<String>,
        /// Use this many sampled worlds instead of all of them.
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Worlds of the level-(k+1) structure satisfying a formula, or an only-knowing world.
    Models {
        #[arg(short, long, default_value_t = 0)]
        k: usize,
        #[arg(short, long)]
        formula: String,
        #[arg(long, default_value_t = 20)]
        limit: usize,
        /// Build the world where --agent only knows the formula.
        #[arg(long)]
        oknow: bool,
        /// With --oknow, the positively introspective variant.
        #[arg(long)]
        pi: bool,
        #[arg(long)]
        agent: Option<String>,
        /// Comma-separated atoms true in the objective world.
        #[arg(long, default_value = "")]
        obj: String,
    },
    /// Rule-defined omega families.
    Symbolic {
        /// Family definitions (inline JSON or @file); defaults to the v and u families.
        #[arg(long)]
        families: Option<String>,
        /// Registry depth to build.
        #[arg(long, default_value_t = 1)]
        build: usize,
        #[command(subcommand)]
        action: SymbolicAction,
    },
    /// Run the property and example checks.
    Suite {
        #[arg(long, value_enum, default_value_t = Profile::Fast)]
        profile: Profile,
    },
}

#[derive(Subcommand, Debug)]
enum SymbolicAction {
    /// Level-k member of a family.
    Materialize { family: String, level: usize },
    /// Valuation along a family's prefixes.
    Eval {
        family: String,
        #[arg(short, long)]
        formula: String,
        #[arg(long, default_value_t = col_omega::DEFAULT_K_MAX)]
        kmax: usize,
    },
    /// Common knowledge over the finite closure of a family.
    Closure {
        family: String,
        #[arg(short, long)]
        formula: String,
        #[arg(short, long)]
        group: String,
    },
    /// Level-k biworlds where common knowledge of the formula is not false.
    Survivors {
        #[arg(short, long)]
        formula: String,
        #[arg(short, long)]
        group: String,
        #[arg(long)]
        level: usize,
    },
    /// The only-knowing-not-common-knowledge world built from v and u.
    Example3 {
        #[arg(long, default_value = "p")]
        obj: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Profile {
    Fast,
    Full,
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let json = args.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(std::io::stdout().lock(), "{e}");
                return EXIT_OK;
            }
            return report(&CliError::usage("Usage", e.to_string().trim_end()), json);
        }
    };
    let session = SessionConfig {
        atoms: cli.session.atoms.into_iter().filter(|s| !s.is_empty()).collect(),
        agents: cli.session.agents.into_iter().filter(|s| !s.is_empty()).collect(),
        cap: cli.session.cap.unwrap_or_else(config::default_cap),
        seed: cli.session.seed,
        json,
    };
    let mut out = Output::new(json);
    let result = if session.agents.is_empty() {
        Err(CliError::usage("NoAgents", "the agent set must not be empty"))
    } else {
        commands::dispatch(&session, cli.command, &mut out)
    };
    match result {
        Ok(code) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.render().as_bytes());
            code
        }
        Err(e) => report(&e, json),
    }
}

fn report(e: &CliError, json: bool) -> i32 {
    if json {
        let _ = writeln!(std::io::stdout().lock(), "{}", e.to_json());
    } else {
        eprintln!("error[{}]: {}", e.kind, e.message);
    }
    if e.code == 0 {
        EXIT_USAGE
    } else {
        e.code
    }
}
