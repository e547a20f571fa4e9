//! `ideal-conv`: JSON reports on ideal convergence, finite topology labs
//! and one-point compactifications.

mod cmd_seq;
mod cmd_topo;
mod dsl;
mod json;
mod report;
mod scenarios;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cmd_topo::Property;
use report::{CmdResult, UsageError};

#[derive(Parser)]
#[command(name = "ideal-conv", version, about = "Ideal convergence toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Prefix count, finiteness and density of a set expression.
    Density {
        #[arg(long)]
        set: String,
        /// Window size; defaults to ICONV_WINDOW or 4096.
        #[arg(long)]
        window: Option<u64>,
    },
    /// Ideal membership and admissibility.
    Ideal {
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        set: Option<String>,
        #[arg(long)]
        admissible: bool,
    },
    /// Convergence, eventual constancy and cluster points of a sequence.
    Analyze(Analyze),
    /// Shrinking-condition witnesses.
    #[command(subcommand)]
    Shrink(Shrink),
    /// Exhaustive checks over small finite spaces.
    #[command(subcommand)]
    Topolab(Topolab),
    /// One-point compactifications.
    #[command(subcommand)]
    Onepoint(Onepoint),
    /// Named reproducible scenarios compared against committed goldens.
    Scenario {
        /// Scenario name, or `list`.
        name: String,
        #[arg(long)]
        update_golden: bool,
    },
}

#[derive(Args)]
struct Analyze {
    #[arg(long)]
    seq: String,
    #[arg(long)]
    ideal: String,
    /// Index set of the sequence.
    #[arg(long)]
    domain: Option<String>,
    /// Comma-separated ε values.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    limit: Option<String>,
    #[arg(long)]
    eventually_constant: bool,
    /// Comma-separated candidate points.
    #[arg(long, allow_hyphen_values = true)]
    cluster: Option<String>,
}

#[derive(Subcommand)]
enum Shrink {
    /// Build and verify a condition-(C) witness for A.
    CWitness {
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        set: String,
        #[arg(long)]
        window: Option<u64>,
    },
    /// Verify a condition-(C) witness, optionally with a custom B.
    Verify {
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        set: String,
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        window: Option<u64>,
    },
    /// Build and check a condition-(B) witness for a family.
    BWitness {
        #[arg(long)]
        ideal: String,
        /// `tails`, `constant:<set>` or `cycle:<set>;<set>;...`.
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 5)]
        k: usize,
    },
}

#[derive(Subcommand)]
enum Topolab {
    /// Check a property on every topology with at most n points.
    Check {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ideal: String,
        #[arg(long, value_enum)]
        property: Property,
        #[arg(long)]
        parallel: bool,
    },
    /// Closures and separation facts of one space.
    Inspect {
        #[arg(long)]
        space: String,
        #[arg(long)]
        ideal: String,
    },
}

#[derive(Subcommand)]
enum Onepoint {
    Build {
        #[arg(long)]
        space: String,
        #[arg(long)]
        ideal: String,
    },
    /// Extend a map by sending α to α.
    Extend {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        /// Comma-separated target labels, one per source point.
        #[arg(long)]
        map: String,
        #[arg(long)]
        ideal: String,
    },
    /// The circle as the compactification of the real line.
    Circle {
        #[arg(long)]
        scenario: String,
    },
}

fn dispatch(cmd: Cmd) -> CmdResult {
    match cmd {
        Cmd::Density { set, window } => cmd_seq::density_cmd(&set, window),
        Cmd::Ideal { ideal, set, admissible } => cmd_seq::ideal_cmd(&ideal, set.as_deref(), admissible),
        Cmd::Analyze(a) => cmd_seq::analyze_cmd(&cmd_seq::AnalyzeArgs {
            seq: &a.seq,
            ideal: &a.ideal,
            domain: a.domain.as_deref(),
            grid: a.grid.as_deref(),
            limit: a.limit.as_deref(),
            eventually_constant: a.eventually_constant,
            cluster: a.cluster.as_deref(),
        }),
        Cmd::Shrink(Shrink::CWitness { ideal, set, window }) => cmd_seq::c_witness_cmd(&ideal, &set, window),
        Cmd::Shrink(Shrink::Verify { ideal, set, b, window }) => cmd_seq::c_verify_cmd(&ideal, &set, b.as_deref(), window),
        Cmd::Shrink(Shrink::BWitness { ideal, family, k }) => cmd_seq::b_witness_cmd(&ideal, &family, k),
        Cmd::Topolab(Topolab::Check { n, ideal, property, parallel }) => cmd_topo::topolab_check(n, &ideal, property, parallel),
        Cmd::Topolab(Topolab::Inspect { space, ideal }) => cmd_topo::topolab_inspect(&space, &ideal),
        Cmd::Onepoint(Onepoint::Build { space, ideal }) => cmd_topo::onepoint_build(&space, &ideal),
        Cmd::Onepoint(Onepoint::Extend { source, target, map, ideal }) => {
            cmd_topo::onepoint_extend(&source, &target, &map, &ideal)
        }
        Cmd::Onepoint(Onepoint::Circle { scenario }) => cmd_topo::onepoint_circle(&scenario),
        Cmd::Scenario { name, .. } if name == "list" => Ok(scenarios::list()),
        Cmd::Scenario { name, update_golden } => scenarios::run(&name, update_golden),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.cmd) {
        Ok(out) => {
            print!("{}", json::render(&out.report));
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
