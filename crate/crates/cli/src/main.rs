mod commands;
mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{ClosureArgs, Construction, InstrMode};
use report::{Failure, Outcome, Report, EXIT_FAIL, EXIT_PASS};
use suites::SuiteOptions;

#[derive(Parser)]
#[command(name = "anet", version, about = "Automata network simulation toolkit")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// `long` enables the slow suites.
    #[arg(long, global = true, value_enum, default_value_t = Tier::Default)]
    tier: Tier,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Leave the elapsed time out of the report.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Tier {
    Default,
    Long,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite.
    Verify {
        /// Suite id or descriptive name, e.g. `factor-universality`.
        suite: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
        /// Random cases per size for randomized suites.
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// Checkpoint file for the cover search.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Compile a target into a word for a universal simulator.
    Universal {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
        /// Include the word in the report.
        #[arg(long)]
        emit_word: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Instruction decompositions.
    Instr {
        #[command(subcommand)]
        action: InstrAction,
    },
    /// Compile a target into a word or an instruction program file.
    Compile {
        #[arg(long, value_enum)]
        mode: CompileMode,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Puzzle group of a Hamming graph.
    Puzzle {
        /// `hamming:N,Q`
        #[arg(long)]
        graph: String,
        #[arg(long, default_value_t = 0)]
        hole: usize,
        /// Add graph statistics to the report.
        #[arg(long)]
        report: bool,
    },
    /// Interaction-graph universality.
    Graph {
        #[command(subcommand)]
        action: GraphAction,
    },
    /// Close a generator set and report statistics.
    Closure {
        #[arg(long = "gen", required = true, num_args = 1..)]
        gens: Vec<PathBuf>,
        #[arg(long, default_value = "seq")]
        mode: String,
        #[arg(long, default_value_t = anet_core::semigroup::DEFAULT_MEMBER_LIMIT)]
        limit: usize,
        /// Write every member, one image table per line.
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Networks to test for membership.
        #[arg(long, num_args = 1..)]
        query: Vec<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Factor,
    Init,
}

#[derive(Clone, Copy, ValueEnum)]
enum DecomposeMode {
    Singular,
    Assignment,
}

#[derive(Clone, Copy, ValueEnum)]
enum CompileMode {
    Factor,
    Init,
    Singular,
    Assignment,
}

#[derive(Subcommand)]
enum InstrAction {
    Decompose {
        #[arg(long, value_enum)]
        mode: DecomposeMode,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GraphAction {
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        q: usize,
        #[arg(long, default_value = "seq")]
        mode: String,
    },
}

fn instr_mode(m: DecomposeMode) -> InstrMode {
    match m {
        DecomposeMode::Singular => InstrMode::Singular,
        DecomposeMode::Assignment => InstrMode::Assignment,
    }
}

fn construction(k: Kind) -> Construction {
    match k {
        Kind::Factor => Construction::Factor,
        Kind::Init => Construction::Init,
    }
}

fn name(c: &Command) -> String {
    match c {
        Command::Verify { suite, .. } => format!("verify {suite}"),
        Command::Universal { kind: Kind::Factor, .. } => "universal factor".into(),
        Command::Universal { kind: Kind::Init, .. } => "universal init".into(),
        Command::Instr { .. } => "instr decompose".into(),
        Command::Compile { .. } => "compile".into(),
        Command::Puzzle { .. } => "puzzle".into(),
        Command::Graph { .. } => "graph check".into(),
        Command::Closure { .. } => "closure".into(),
    }
}

fn run(cli: &Cli, report: &mut Report) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Verify { suite, n, q, count, checkpoint } => {
            let opts = SuiteOptions {
                n: *n,
                q: *q,
                long: g.tier == Tier::Long,
                seed: g.seed,
                count: *count,
                checkpoint: checkpoint.clone(),
            };
            suites::run(suite, &opts, report)
        }
        Command::Universal { kind, target, n, q, emit_word, out } => {
            commands::universal(construction(*kind), target, *n, *q, *emit_word, out.as_deref(), report)
        }
        Command::Instr { action: InstrAction::Decompose { mode, input, out } } => {
            commands::decompose(instr_mode(*mode), input, out.as_deref(), report)
        }
        Command::Compile { mode, input, out } => {
            report.param("mode", mode.to_possible_value().expect("no skipped variants").get_name().to_string());
            match mode {
                CompileMode::Factor => commands::universal(Construction::Factor, input, None, None, false, Some(out), report),
                CompileMode::Init => commands::universal(Construction::Init, input, None, None, false, Some(out), report),
                CompileMode::Singular => commands::decompose(InstrMode::Singular, input, Some(out), report),
                CompileMode::Assignment => commands::decompose(InstrMode::Assignment, input, Some(out), report),
            }
        }
        Command::Puzzle { graph, hole, report: full } => commands::puzzle(graph, *hole, *full, report),
        Command::Graph { action: GraphAction::Check { input, q, mode } } => {
            commands::graph_check(input, *q, commands::parse_mode(mode)?, report)
        }
        Command::Closure { gens, mode, limit, dump, query } => commands::closure(
            &ClosureArgs {
                gens,
                mode: commands::parse_mode(mode)?,
                limit: *limit,
                dump: dump.as_deref(),
                query,
            },
            report,
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = name(&cli.command);
    if let Some(k) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            let f = Failure::Usage(format!("cannot start {k} threads: {e}"));
            println!("{}", f.to_json(&command));
            return ExitCode::from(f.code() as u8);
        }
    }
    let mut report = Report::new(&command);
    match run(&cli, &mut report) {
        Ok(()) => {
            let json = report.to_json(!cli.global.no_timing);
            println!("{}", serde_json::to_string_pretty(&json).expect("reports serialize"));
            ExitCode::from(if report.passed() { EXIT_PASS } else { EXIT_FAIL } as u8)
        }
        Err(f) => {
            println!("{}", serde_json::to_string_pretty(&f.to_json(&command)).expect("reports serialize"));
            ExitCode::from(f.code() as u8)
        }
    }
}
