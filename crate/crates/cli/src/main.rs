use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use slst_cli::bench::{parse_t_range, BenchParams};
use slst_cli::commands::{cmd_bench, cmd_gen, cmd_solve, cmd_verify, SolveArgs};
use slst_cli::format::parse_epsilon;
use slst_cli::gen::GenParams;
use slst_core::{Epsilon, SolveMode};

#[derive(Parser)]
#[command(name = "slst", version, about = "Shallow-light Steiner tree solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance exactly or approximately.
    Solve(SolveCmd),
    /// Check a solution file against its instance.
    Verify {
        instance: PathBuf,
        solution: PathBuf,
    },
    /// Print a random instance.
    Gen(GenCmd),
    /// Tabulate solver work as the terminal count grows.
    Bench(BenchCmd),
}

#[derive(Args)]
struct SolveCmd {
    #[arg(long, conflicts_with = "approx")]
    exact: bool,
    #[arg(long, requires = "epsilon")]
    approx: bool,
    /// Exact fraction p/q.
    #[arg(long, value_parser = parse_epsilon)]
    epsilon: Option<Epsilon>,
    input: PathBuf,
    /// Defaults to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the solved tree as DOT.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Write the layered search graph as DOT.
    #[arg(long)]
    dot_layered: Option<PathBuf>,
    /// Keep layered vertices that lie on no root-to-terminal path.
    #[arg(long)]
    no_prune: bool,
}

#[derive(Args)]
struct GenCmd {
    #[arg(long)]
    nodes: usize,
    #[arg(long)]
    edges: usize,
    /// Root included.
    #[arg(long)]
    terminals: usize,
    #[arg(long, default_value_t = 9)]
    max_cost: u64,
    #[arg(long, default_value_t = 9)]
    max_delay: u64,
    #[arg(long)]
    bound: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    ensure_feasible: bool,
    #[arg(long)]
    directed: bool,
}

#[derive(Args)]
struct BenchCmd {
    /// Terminal counts, root included: a..b (exclusive) or a..=b.
    #[arg(long, default_value = "2..8")]
    t_range: String,
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 30)]
    nodes: usize,
    #[arg(long, default_value_t = 60)]
    edges: usize,
    #[arg(long, default_value_t = 20)]
    bound: u64,
    /// Print '-' instead of times, for reproducible output.
    #[arg(long)]
    no_timings: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mut out, mut err) = (io::stdout().lock(), io::stderr().lock());
    let code = match cli.command {
        Command::Solve(c) => {
            let mode = match (c.exact, c.approx, c.epsilon) {
                (_, true, Some(eps)) => SolveMode::Approx(eps),
                (_, false, None) => SolveMode::Exact,
                (_, false, Some(_)) => {
                    eprintln!("error: --epsilon needs --approx");
                    return ExitCode::from(1);
                }
                (_, true, None) => unreachable!("clap enforces --epsilon"),
            };
            let args = SolveArgs {
                input: c.input,
                mode,
                out: c.out,
                dot: c.dot,
                dot_layered: c.dot_layered,
                prune: !c.no_prune,
            };
            cmd_solve(&args, &mut out, &mut err)
        }
        Command::Verify { instance, solution } => {
            cmd_verify(&instance, &solution, &mut out, &mut err)
        }
        Command::Gen(c) => {
            let params = GenParams {
                nodes: c.nodes,
                edges: c.edges,
                terminals: c.terminals,
                max_cost: c.max_cost,
                max_delay: c.max_delay,
                bound: c.bound,
                seed: c.seed,
                ensure_feasible: c.ensure_feasible,
                directed: c.directed,
            };
            cmd_gen(&params, &mut out, &mut err)
        }
        Command::Bench(c) => {
            let (t_start, t_end) = match parse_t_range(&c.t_range) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            let params = BenchParams {
                t_start,
                t_end,
                trials: c.trials,
                seed: c.seed,
                nodes: c.nodes,
                edges: c.edges,
                bound: c.bound,
                timings: !c.no_timings,
                ..BenchParams::default()
            };
            cmd_bench(&params, &mut out, &mut err)
        }
    };
    ExitCode::from(code as u8)
}
