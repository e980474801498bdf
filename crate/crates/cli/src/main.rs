mod script;
mod selfcheck;

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sole::bench;
use sole::decomp::{from_tree, validate_separator_decomposition, SeparatorDecomposition, MAX_WIDTH};
use sole::semigroup::Add;
use sole::{metrics, ComplementStrategy, Graph, GraphSole, NaiveSole, Sole, TreeSole};

/// Sum-of-local-effects queries on trees and graphs of bounded separator width.
#[derive(Parser)]
#[command(name = "sole", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Replay an operation script and print one line per query.
    Run {
        #[command(flatten)]
        input: Input,
        /// Script of add/remove/sum/top commands.
        #[arg(long)]
        script: PathBuf,
        /// Print instrumentation counters to stderr.
        #[arg(long)]
        stats: bool,
    },
    /// Doubling experiment over random instances, counting elementary steps.
    Bench {
        #[arg(long, value_enum, default_value_t = BenchEngine::Tree)]
        engine: BenchEngine,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Queries per size.
        #[arg(long, default_value_t = 400)]
        ops: usize,
        /// Comma-separated sizes; defaults to powers of two.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        /// Only report this operation.
        #[arg(long, value_parser = ["add", "sum", "top"])]
        op: Option<String>,
        #[arg(long, value_enum, default_value_t = Strategy::Direct)]
        strategy: Strategy,
    },
    /// Random differential test of an engine against the brute-force oracle.
    Selfcheck {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        ops: usize,
        /// Widen every query radius by one to show a failing report.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Args)]
struct Input {
    #[arg(long)]
    graph: PathBuf,
    /// Separator decomposition for the graph engine.
    #[arg(long)]
    decomp: Option<PathBuf>,
    /// Defaults to `graph` when a decomposition is given, else `tree`.
    #[arg(long, value_enum)]
    engine: Option<Engine>,
    #[arg(long, value_enum, default_value_t = Strategy::Direct)]
    strategy: Strategy,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Tree,
    Graph,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchEngine {
    Tree,
    Graph,
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    Direct,
    Boxes,
}

impl From<Strategy> for ComplementStrategy {
    fn from(s: Strategy) -> Self {
        match s {
            Strategy::Direct => ComplementStrategy::Direct,
            Strategy::Boxes => ComplementStrategy::Boxes,
        }
    }
}

/// Failure with its exit status.
struct Fail(u8, String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(1, e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail(1, format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: sole::Result<T>) -> Result<T, Fail> {
    r.map_err(|e| Fail(1, format!("{}: {e}", path.display())))
}

/// Loads the graph and builds the requested engine. Without a
/// decomposition the graph engine falls back to the one for trees when
/// `allow_tree_fallback` is set.
fn load(input: &Input, allow_tree_fallback: bool) -> Result<(Graph, Box<dyn Sole<Add>>), Fail> {
    let g = in_file(&input.graph, Graph::parse(&read(&input.graph)?))?;
    let engine = input.engine.unwrap_or(if input.decomp.is_some() {
        Engine::Graph
    } else {
        Engine::Tree
    });
    let built: Box<dyn Sole<Add>> = match engine {
        Engine::Oracle => Box::new(NaiveSole::new(g.clone())),
        Engine::Tree => {
            if !g.is_tree() {
                return Err(Fail(1, "the tree engine needs a tree".into()));
            }
            Box::new(TreeSole::new(&g)?)
        }
        Engine::Graph => {
            let c = match &input.decomp {
                Some(p) => in_file(p, SeparatorDecomposition::parse(&read(p)?, &g))?,
                None if allow_tree_fallback && g.is_tree() => from_tree(&g)?,
                None => return Err(Fail(1, "the graph engine needs --decomp".into())),
            };
            let report = validate_separator_decomposition(&g, &c, MAX_WIDTH);
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            report.into_result()?;
            Box::new(GraphSole::new(&g, &c)?.with_strategy(input.strategy.into()))
        }
    };
    Ok((g, built))
}

fn run(input: &Input, script_path: &Path, stats: bool) -> Result<(), Fail> {
    let (g, mut engine) = load(input, false)?;
    let lines = script::parse(&read(script_path)?, &g)
        .map_err(|e| Fail(1, format!("{}: {e}", script_path.display())))?;
    let mut names = script::Names::default();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    metrics::reset();
    for l in &lines {
        match script::step(engine.as_mut(), &g, &mut names, &l.cmd) {
            Ok(Some(s)) => writeln!(out, "{s}")?,
            Ok(None) => {}
            Err(e) => {
                out.flush()?;
                return Err(Fail(1, format!("{}: line {}: {e}", script_path.display(), l.line)));
            }
        }
    }
    out.flush()?;
    if stats {
        let c = metrics::snapshot();
        eprintln!(
            "node_visits={} rebuild_nodes={} store_queries={}",
            c.node_visits, c.rebuild_nodes, c.store_queries
        );
    }
    Ok(())
}

fn bench_cmd(
    engine: BenchEngine,
    seed: u64,
    ops: usize,
    sizes: &[usize],
    op: Option<&str>,
    strategy: Strategy,
) -> Result<(), Fail> {
    if let Some(&bad) = sizes.iter().find(|&&n| n < 2) {
        return Err(Fail(1, format!("size {bad} is too small")));
    }
    let rows = match engine {
        BenchEngine::Tree => {
            let sizes = if sizes.is_empty() { bench::tree_sizes() } else { sizes.to_vec() };
            bench::bench_tree(&sizes, seed, ops)
        }
        BenchEngine::Graph => {
            let sizes = if sizes.is_empty() { bench::graph_sizes() } else { sizes.to_vec() };
            bench::bench_graph(&sizes, seed, ops, strategy.into())
        }
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    writeln!(out, "{:>7} {:>7} {:>4} {:>12} {:>10}", "n", "m", "op", "mean", "normalized")?;
    for r in rows.iter().filter(|r| op.is_none_or(|o| o == r.op)) {
        writeln!(
            out,
            "{:>7} {:>7} {:>4} {:>12.2} {:>10.3}",
            r.n, r.m, r.op, r.mean, r.normalized
        )?;
    }
    for o in ["add", "sum", "top"].into_iter().filter(|o| op.is_none_or(|x| x == *o)) {
        let ratios = bench::growth_ratios(&rows, o);
        if !ratios.is_empty() {
            let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.2}")).collect();
            writeln!(out, "growth {o}: {}", shown.join(" "))?;
        }
    }
    out.flush()?;
    Ok(())
}

fn selfcheck_cmd(input: &Input, seed: u64, ops: usize, fault: bool) -> Result<(), Fail> {
    let (g, engine) = load(input, true)?;
    let mut engine: Box<dyn Sole<Add>> = if fault {
        Box::new(selfcheck::Faulty(engine))
    } else {
        engine
    };
    let cmds = selfcheck::random_script(&g, seed, ops);
    match selfcheck::compare(&g, engine.as_mut(), &cmds) {
        Ok(()) => {
            writeln!(io::stdout().lock(), "selfcheck PASS: {ops} ops, seed {seed}")?;
            Ok(())
        }
        Err(d) => {
            let mut msg = format!(
                "selfcheck FAIL at op {}\n  engine: {}\n  oracle: {}\ntranscript:",
                d.transcript.len(),
                d.engine,
                d.oracle
            );
            for t in &d.transcript {
                msg.push_str("\n  ");
                msg.push_str(t);
            }
            // A closed pipe must not mask the divergence status.
            let _ = writeln!(io::stdout().lock(), "{msg}");
            Err(Fail(2, "engine diverged from oracle".into()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Run { input, script, stats } => run(input, script, *stats),
        Cmd::Bench { engine, seed, ops, sizes, op, strategy } => {
            bench_cmd(*engine, *seed, *ops, sizes, op.as_deref(), *strategy)
        }
        Cmd::Selfcheck { input, seed, ops, inject_fault } => {
            selfcheck_cmd(input, *seed, *ops, *inject_fault)
        }
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
