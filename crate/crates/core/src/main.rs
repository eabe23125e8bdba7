//! `genbranch` command line: solve model files, compare against brute
//! force, check stack covering between two JSON reports, and dump search
//! trees.
//!
//! Flags given on the command line override the model's `[solver]` and
//! `[cost]` blocks; the model's values override built-in defaults.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use genbranch::constraint::CspInstance;
use genbranch::engine::{solve, Schema, SolveResult, SolveStatus, SolverConfig};
use genbranch::filter::FilteringKind;
use genbranch::model::{parse_model, CostChoice, Mode, Overrides};
use genbranch::oracle::{enumerate_solutions, optimal_by_order};
use genbranch::report::{trace_entries, trace_text, RunReport};
use genbranch::select::SelectorKind;

const EXIT_EMPTY: u8 = 1;
const EXIT_ERROR: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "genbranch",
    version,
    about = "Generic branch-and-prune constraint solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a model and print the final stack.
    Solve {
        #[command(flatten)]
        run: RunArgs,
        /// Also write the search trace as JSON to this file.
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Solve a finite model and compare the result with brute-force enumeration.
    Verify {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Check that every store of the first report lies below some store of the second.
    VerifyCovering { finer: PathBuf, coarser: PathBuf },
    /// Print the path-labelled search tree.
    Trace {
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeFlag {
    Classical,
    Min,
    Max,
}

#[derive(Clone, Copy, ValueEnum)]
enum CostFlag {
    /// Sum of every numeric variable.
    Sum,
    /// The constant 1.
    Constant,
}

#[derive(Clone, Copy, ValueEnum)]
enum FilterFlag {
    Consistency,
    Fixpoint,
}

#[derive(Clone, Copy, ValueEnum)]
enum SelectorFlag {
    Naive,
    Ff,
}

#[derive(Clone, Copy, ValueEnum)]
enum StackFlag {
    Full,
    Incumbent,
}

#[derive(Args)]
struct RunArgs {
    model: PathBuf,
    #[arg(long, value_enum)]
    mode: Option<ModeFlag>,
    #[arg(long, value_enum)]
    cost: Option<CostFlag>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, value_enum)]
    filter: Option<FilterFlag>,
    #[arg(long, value_enum)]
    selector: Option<SelectorFlag>,
    #[arg(long, value_enum)]
    stack: Option<StackFlag>,
    /// Run the plain schema: push every final store, ignore costs.
    #[arg(long)]
    plain: bool,
    #[arg(long, env = "GENBRANCH_NODE_BUDGET")]
    node_budget: Option<u64>,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

fn load(run: &RunArgs) -> Result<(CspInstance, SolverConfig), String> {
    let text =
        fs::read_to_string(&run.model).map_err(|e| format!("{}: {e}", run.model.display()))?;
    let (instance, mut cfg) =
        parse_model(&text).map_err(|e| format!("{}: {e}", run.model.display()))?;
    let overrides = Overrides {
        mode: run.mode.map(|m| match m {
            ModeFlag::Classical => Mode::Classical,
            ModeFlag::Min => Mode::Min,
            ModeFlag::Max => Mode::Max,
        }),
        cost: run.cost.map(|c| match c {
            CostFlag::Sum => CostChoice::Sum,
            CostFlag::Constant => CostChoice::Constant,
        }),
        epsilon: run.epsilon,
        filtering: run.filter.map(|f| match f {
            FilterFlag::Consistency => FilteringKind::ConsistencyCheck,
            FilterFlag::Fixpoint => FilteringKind::fixpoint(),
        }),
        selector: run.selector.map(|s| match s {
            SelectorFlag::Naive => SelectorKind::Naive,
            SelectorFlag::Ff => SelectorKind::FirstFail,
        }),
        keep_full_stack: run.stack.map(|s| matches!(s, StackFlag::Full)),
        schema: run.plain.then_some(Schema::Plain),
        node_budget: run.node_budget,
    };
    overrides.apply(&instance, &mut cfg)?;
    Ok((instance, cfg))
}

fn run_solver(instance: &CspInstance, cfg: &SolverConfig) -> Result<SolveResult, String> {
    solve(instance, cfg).map_err(|e| e.to_string())
}

fn outcome_code(r: &SolveResult) -> ExitCode {
    if r.status == SolveStatus::BudgetExhausted {
        ExitCode::from(EXIT_BUDGET)
    } else if r.stack.is_empty() {
        ExitCode::from(EXIT_EMPTY)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_solve(run: &RunArgs, trace_out: Option<&PathBuf>) -> Result<ExitCode, String> {
    let (instance, mut cfg) = load(run)?;
    cfg.trace = trace_out.is_some();
    let result = run_solver(&instance, &cfg)?;
    let mut report = RunReport::new(&instance, &cfg, &result);
    if let (Some(path), Some(trace)) = (trace_out, &result.trace) {
        let json =
            serde_json::to_string_pretty(&trace_entries(trace)).map_err(|e| e.to_string())?;
        fs::write(path, json).map_err(|e| format!("{}: {e}", path.display()))?;
        report.trace_file = Some(path.display().to_string());
    }
    if run.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    Ok(outcome_code(&result))
}

fn cmd_verify(run: &RunArgs) -> Result<ExitCode, String> {
    let (instance, cfg) = load(run)?;
    let oracle = enumerate_solutions(&instance).map_err(|e| e.to_string())?;
    let result = run_solver(&instance, &cfg)?;
    if result.status == SolveStatus::BudgetExhausted {
        return Err("node budget exhausted before the search finished".into());
    }
    let stack: Vec<_> = result.stack.iter().cloned().collect();

    let agree = if cfg.cost.is_classical() || cfg.schema == Schema::Plain {
        let engine_in_oracle = stack.iter().all(|s| oracle.solutions.contains(s));
        let oracle_in_engine = oracle.solutions.iter().all(|s| stack.contains(s));
        println!("solutions: engine {}, oracle {}", stack.len(), oracle.len());
        engine_in_oracle && oracle_in_engine
    } else {
        match (result.stack.top(), oracle.is_empty()) {
            (None, true) => {
                println!("no solutions");
                true
            }
            (Some(top), false) => {
                let optima = optimal_by_order(&oracle, &cfg.cost).map_err(|e| e.to_string())?;
                let cost = cfg.cost.eval(top).map_err(|e| e.to_string())?;
                let listed: Vec<String> = optima.costs.iter().map(|c| c.to_string()).collect();
                println!("top cost {cost}, oracle optima [{}]", listed.join(", "));
                oracle.solutions.contains(top) && optima.costs.contains(&cost)
            }
            _ => false,
        }
    };
    println!("{}", if agree { "agree" } else { "disagree" });
    Ok(if agree {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_EMPTY)
    })
}

fn cmd_verify_covering(finer: &PathBuf, coarser: &PathBuf) -> Result<ExitCode, String> {
    let read = |p: &PathBuf| -> Result<RunReport, String> {
        let text = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
        RunReport::from_json(&text).map_err(|e| format!("{}: {e}", p.display()))
    };
    let a = read(finer)?.decode_stack()?;
    let b = read(coarser)?.decode_stack()?;
    let covered = a.covered_by(&b).map_err(|e| e.to_string())?;
    println!("{}", if covered { "covered" } else { "not covered" });
    Ok(if covered {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_EMPTY)
    })
}

fn cmd_trace(run: &RunArgs) -> Result<ExitCode, String> {
    let (instance, mut cfg) = load(run)?;
    cfg.trace = true;
    let result = run_solver(&instance, &cfg)?;
    let nodes = result.trace.as_deref().unwrap_or(&[]);
    if run.json {
        let json =
            serde_json::to_string_pretty(&trace_entries(nodes)).map_err(|e| e.to_string())?;
        println!("{json}");
    } else {
        print!("{}", trace_text(nodes));
    }
    Ok(outcome_code(&result))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Solve { run, trace_out } => cmd_solve(run, trace_out.as_ref()),
        Command::Verify { run } => cmd_verify(run),
        Command::VerifyCovering { finer, coarser } => cmd_verify_covering(finer, coarser),
        Command::Trace { run } => cmd_trace(run),
    };
    match outcome {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
