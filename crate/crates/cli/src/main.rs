mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use bmva::bench::{run_profile, to_csv, Profile};
use bmva::oct::pipeline_2bmva;
use bmva::preprocess::{kernelize, KernelVerdict};
use bmva::reductions::{
    gen_cross_composition, gen_from_coloring, gen_from_hitting_set, parse_dpm_list, ColoringInstance, Graph,
    HittingSetInstance,
};
use bmva::solvers::{brute_force_with_cap, solve, SolveOutcome, Strategy, DEFAULT_ENUMERATION_CAP};
use bmva::{evaluate, parse_instance, serialize_instance, Instance};

use report::Report;

const EXIT_NO: u8 = 1;
const EXIT_ERROR: u8 = 2;
const EXIT_DISAGREE: u8 = 3;

#[derive(Parser)]
#[command(name = "bmva", version, about = "Solve, kernelize and generate binary vector assignment instances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide (with a budget) or optimize an instance
    Solve {
        file: PathBuf,
        /// Budget; overrides the one in the file header
        #[arg(short, long)]
        k: Option<u64>,
        #[arg(long, default_value = "auto", value_parser = parse_strategy)]
        strategy: Strategy,
        /// List the stacks of the solution
        #[arg(long)]
        emit_solution: bool,
        /// Write the kernel or the bip-OCT and OCT instances next to the input
        #[arg(long)]
        dump_intermediate: bool,
    },
    /// Apply the reduction rules and write `<file>.kernel`
    Kernelize {
        file: PathBuf,
        #[arg(short, long)]
        k: Option<u64>,
        /// Print the trace and write it to `<file>.kernel.trace`
        #[arg(long)]
        emit_trace: bool,
    },
    /// Encode a source problem as an instance
    Generate {
        kind: GenKind,
        source: PathBuf,
        out: PathBuf,
        /// Number of colours for `coloring`
        #[arg(long, default_value_t = 3)]
        chi: usize,
    },
    /// Cross-check the dispatched solver against exhaustive enumeration
    Verify {
        file: PathBuf,
        #[arg(short, long)]
        k: Option<u64>,
        /// Largest number of assignments the oracle may enumerate
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        oracle_cap: u128,
    },
    /// Run a benchmark profile and print CSV
    Bench {
        profile: PathBuf,
        /// Overrides the profile seed
        #[arg(long)]
        seed: Option<u64>,
        /// Write CSV to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    HittingSet,
    Coloring,
    CrossCompose,
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse().map_err(|e: bmva::Error| e.to_string())
}

type CliResult = Result<(String, u8), Box<dyn std::error::Error>>;

fn read(path: &Path) -> Result<String, Box<dyn std::error::Error>> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn load(path: &Path) -> Result<Instance, Box<dyn std::error::Error>> {
    parse_instance(&read(path)?).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn verdict_code(out: &SolveOutcome) -> u8 {
    if out.is_yes() {
        0
    } else {
        EXIT_NO
    }
}

/// The strategy `solve` will actually run, for choosing what to dump.
fn routes_to_oct(inst: &Instance, strategy: Strategy) -> bool {
    match strategy {
        Strategy::Oct => true,
        Strategy::Auto => inst.m() > 2 && inst.n() == 2,
        _ => false,
    }
}

fn cmd_solve(
    command: &str,
    file: &Path,
    k: Option<u64>,
    strategy: Strategy,
    emit_solution: bool,
    dump: bool,
) -> CliResult {
    let inst = load(file)?;
    let k = k.or(inst.budget());
    let start = Instant::now();
    let mut rep = Report::new(command);
    rep.instance("instance", &inst, k);
    rep.line(format_args!("strategy: {strategy}"));

    let out = if dump && routes_to_oct(&inst, strategy) {
        let run = pipeline_2bmva(&inst, k)?;
        if let Some(bi) = &run.bip_oct {
            let path = sibling(file, ".bipoct");
            fs::write(&path, bi.to_string())?;
            rep.line(format_args!("wrote: {}", path.display()));
        }
        if let Some(g) = &run.graph {
            let path = sibling(file, ".oct");
            fs::write(&path, g.to_string())?;
            rep.line(format_args!("wrote: {}", path.display()));
        }
        rep.line(format_args!(
            "reduction: dropped={} forced={} p'={} transversal={}",
            run.dropped_columns.len(),
            run.forced_columns.len(),
            run.reduced_p,
            run.transversal.map_or("-".into(), |x| x.to_string())
        ));
        run.outcome
    } else {
        if dump {
            if let Some(k) = k {
                let kernel = kernelize(&inst, k);
                if let Some(reduced) = &kernel.reduced {
                    let path = sibling(file, ".kernel");
                    fs::write(&path, serialize_instance(reduced))?;
                    rep.line(format_args!("wrote: {}", path.display()));
                }
            }
        }
        solve(&inst, k, strategy)?
    };
    rep.outcome(&out, emit_solution);
    Ok((rep.finish(start.elapsed()), verdict_code(&out)))
}

fn cmd_kernelize(command: &str, file: &Path, k: Option<u64>, emit_trace: bool) -> CliResult {
    let inst = load(file)?;
    let k = k
        .or(inst.budget())
        .ok_or("kernelize needs a budget: pass -k or put it in the header")?;
    let start = Instant::now();
    let mut rep = Report::new(command);
    rep.instance("instance", &inst, Some(k));
    let kernel = kernelize(&inst, k);
    let code = match &kernel.verdict {
        KernelVerdict::No { reason } => {
            rep.line(format_args!("verdict: NO"));
            rep.line(format_args!("reason: {reason}"));
            EXIT_NO
        }
        KernelVerdict::Reduced => {
            let reduced = kernel.reduced.as_ref().expect("reduced instance present");
            let path = sibling(file, ".kernel");
            fs::write(&path, serialize_instance(reduced))?;
            rep.line(format_args!("verdict: REDUCED"));
            rep.instance("kernel", reduced, Some(k));
            rep.line(format_args!("wrote: {}", path.display()));
            0
        }
    };
    rep.line(format_args!(
        "trace: {} dropped columns, {} peeled stacks",
        kernel.trace.dropped_columns().count(),
        kernel.trace.peels().count()
    ));
    if emit_trace {
        let text = kernel.trace.to_string();
        for step in text.lines() {
            rep.line(format_args!("  {step}"));
        }
        let path = sibling(file, ".kernel.trace");
        fs::write(&path, text)?;
        rep.line(format_args!("wrote: {}", path.display()));
    }
    Ok((rep.finish(start.elapsed()), code))
}

fn cmd_generate(command: &str, kind: GenKind, source: &Path, out: &Path, chi: usize) -> CliResult {
    let text = read(source)?;
    let start = Instant::now();
    let mut rep = Report::new(command);
    let (inst, k) = match kind {
        GenKind::HittingSet => {
            let hs: HittingSetInstance = text.parse()?;
            gen_from_hitting_set(&hs)?
        }
        GenKind::Coloring => {
            let graph: Graph = text.parse()?;
            gen_from_coloring(&ColoringInstance { graph, chi })?
        }
        GenKind::CrossCompose => {
            let list = parse_dpm_list(&text)?;
            let cc = gen_cross_composition(&list)?;
            rep.line(format_args!(
                "composition: t={} q={} padding={}",
                list.len(),
                cc.q,
                cc.padding
            ));
            if cc.had_duplicates() {
                rep.line(format_args!(
                    "note: repeated hyperedges were merged; multiplicities per instance {:?}",
                    cc.multiplicities
                ));
            }
            (cc.instance, cc.k)
        }
    };
    let inst = inst.with_budget(Some(k));
    fs::write(out, serialize_instance(&inst))?;
    rep.instance("generated", &inst, Some(k));
    rep.line(format_args!("declared_k: {k}"));
    rep.line(format_args!("wrote: {}", out.display()));
    Ok((rep.finish(start.elapsed()), 0))
}

fn cmd_verify(command: &str, file: &Path, k: Option<u64>, cap: u128) -> CliResult {
    let inst = load(file)?;
    let k = k.or(inst.budget());
    let start = Instant::now();
    let mut rep = Report::new(command);
    rep.instance("instance", &inst, k);
    let oracle = brute_force_with_cap(&inst, k, cap)?;
    let fast = solve(&inst, k, Strategy::Auto)?;

    let certificate_ok = fast.best.as_ref().is_none_or(|best| {
        evaluate(&inst, &best.assignment).is_ok_and(|re| re == *best) && k.is_none_or(|k| best.total_cost <= k)
    });
    let optimum_ok = match (oracle.optimum, fast.optimum) {
        (Some(a), Some(b)) => a == b,
        _ => true,
    };
    let optimum_ok = optimum_ok
        && (k.is_some()
            || fast.best.as_ref().map(|b| b.total_cost) == oracle.optimum);
    let agree = oracle.verdict == fast.verdict && certificate_ok && optimum_ok;

    rep.line(format_args!(
        "oracle: {} verdict={} optimum={}",
        oracle.solver,
        oracle.verdict,
        oracle.optimum.map_or("-".into(), |o| o.to_string())
    ));
    rep.stats("oracle_stats", &oracle.stats);
    rep.line(format_args!(
        "fast: {} verdict={} cost={}",
        fast.solver,
        fast.verdict,
        fast.best.as_ref().map_or("-".into(), |b| b.total_cost.to_string())
    ));
    rep.stats("fast_stats", &fast.stats);
    rep.line(format_args!("agreement: {}", if agree { "yes" } else { "NO" }));
    let code = if agree { verdict_code(&oracle) } else { EXIT_DISAGREE };
    Ok((rep.finish(start.elapsed()), code))
}

fn cmd_bench(profile: &Path, seed: Option<u64>, out: Option<&Path>) -> CliResult {
    let mut profile = Profile::parse(&read(profile)?)?;
    if let Some(seed) = seed {
        profile.seed = seed;
    }
    let csv = to_csv(&profile, &run_profile(&profile));
    match out {
        Some(path) => {
            fs::write(path, &csv)?;
            Ok((format!("wrote: {}\n", path.display()), 0))
        }
        None => Ok((csv, 0)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = std::iter::once("bmva".to_string())
        .chain(std::env::args().skip(1))
        .collect::<Vec<_>>()
        .join(" ");
    let result = match &cli.command {
        Command::Solve {
            file,
            k,
            strategy,
            emit_solution,
            dump_intermediate,
        } => cmd_solve(&command, file, *k, *strategy, *emit_solution, *dump_intermediate),
        Command::Kernelize { file, k, emit_trace } => cmd_kernelize(&command, file, *k, *emit_trace),
        Command::Generate { kind, source, out, chi } => cmd_generate(&command, *kind, source, out, *chi),
        Command::Verify { file, k, oracle_cap } => cmd_verify(&command, file, *k, *oracle_cap),
        Command::Bench { profile, seed, out } => cmd_bench(profile, *seed, out.as_deref()),
    };
    match result {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
