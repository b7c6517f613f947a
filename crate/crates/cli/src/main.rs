use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use laxframe::search::SearchConfig;
use laxframe::Mutation;
use laxframe_cli::commands::{self, Check, Report};

/// Normal distributive lattices, lax limits and compact regular frames over
/// finite categories.
#[derive(Parser)]
#[command(name = "laxframe", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a .lat, .cat or .psh file.
    Validate { path: PathBuf },
    /// Run one check on a fixture; exit 1 with a witness when it fails.
    Check {
        #[command(flatten)]
        which: Which,
        path: PathBuf,
    },
    /// Randomized search for counterexamples to every invariant.
    Search {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: u64,
        #[arg(long, default_value_t = 3)]
        max_objects: usize,
        #[arg(long, default_value_t = 6)]
        max_lattice: usize,
        /// Enable a debug mutation (drop-ideal-bottom, skip-lax-inequality, raw-image).
        #[arg(long)]
        mutation: Option<Mutation>,
    },
    /// Print the canonical form of a fixture with computed metadata.
    Show { path: PathBuf },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Which {
    #[arg(long)]
    normal: bool,
    #[arg(long)]
    regular: bool,
    #[arg(long)]
    complete: bool,
    #[arg(long)]
    tilde: bool,
    #[arg(long)]
    powerset_iso: bool,
    #[arg(long)]
    idl_iso: bool,
    #[arg(long)]
    c_iso: bool,
    #[arg(long)]
    theorem: bool,
}

impl Which {
    fn check(&self) -> Check {
        [
            (self.normal, Check::Normal),
            (self.regular, Check::Regular),
            (self.complete, Check::Complete),
            (self.tilde, Check::Tilde),
            (self.powerset_iso, Check::PowersetIso),
            (self.idl_iso, Check::IdlIso),
            (self.c_iso, Check::CIso),
            (self.theorem, Check::Theorem),
        ]
        .into_iter()
        .find_map(|(on, c)| on.then_some(c))
        .expect("clap requires one check")
    }
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    match &cli.command {
        Command::Validate { path } => commands::validate(path),
        Command::Check { which, path } => commands::check(path, which.check()),
        Command::Search { seed, cases, max_objects, max_lattice, mutation } => commands::run_search(&SearchConfig {
            seed: *seed,
            cases: *cases,
            max_objects: *max_objects,
            max_lattice: *max_lattice,
            mutation: *mutation,
        }),
        Command::Show { path } => commands::show(path),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let text = report.render(cli.json);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
