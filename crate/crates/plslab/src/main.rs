//! plslab command line: generate instances, run reductions and local
//! search, export transition graphs, and drive the verification suites.
//!
//! Exit codes: 0 success, 1 verification violations, 2 usage or validation
//! errors, 3 enumeration caps or truncated searches.

use clap::{Parser, Subcommand};
use plslab::engine::{
    build_transition_graph, run_local_search, initial_solution, PivotRule, DEFAULT_CAP,
};
use plslab::error::Error;
use plslab::exact::format_rat;
use plslab::io::{
    from_json, to_canonical_json, transition_graph_dot, InstanceFile, SolutionFile, TraceFile,
    TransitionGraphFile,
};
use plslab::problems::{cost, validate_instance, Instance, ProblemKind};
use plslab::reductions::{chain_reduce, map_solution, ReductionCert, ReductionId};
use plslab::verify::{run_suite, SuiteReport, SUITES};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "plslab", version, about = "exact-arithmetic local search laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded random instance file
    Generate {
        /// problem tag, e.g. maxcut5 or kmeans:2
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        weight_max: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a comma-separated reduction path to an instance file
    Reduce {
        #[arg(long = "in")]
        input: PathBuf,
        /// e.g. r1,r2 or r5min,r9
        #[arg(long)]
        path: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cert_out: Option<PathBuf>,
    },
    /// Run the standard local-search algorithm and print cost + iterations
    Solve {
        #[arg(long = "in")]
        input: PathBuf,
        /// "standard" or a solution file path
        #[arg(long, default_value = "standard")]
        start: String,
        #[arg(long, default_value = "first")]
        pivot: String,
        #[arg(long)]
        max_iters: Option<usize>,
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Map a target solution back through a reduction certificate
    MapBack {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite over a seeded corpus
    Verify {
        /// preservation | tightness | identities | distinct | types | all
        #[arg(long)]
        suite: String,
        #[arg(long)]
        reduction: Option<String>,
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        weight_max: u32,
        #[arg(long)]
        report_out: Option<PathBuf>,
    },
    /// Export the exhaustive transition graph of an instance
    TransitionGraph {
        #[arg(long = "in")]
        input: PathBuf,
        /// dot | json
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        cap: Option<u128>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } => 3,
        _ => 2,
    }
}

fn effective_cap(flag: Option<u128>) -> Result<u128, Error> {
    if let Some(c) = flag {
        return Ok(c);
    }
    match std::env::var("PLSLAB_CAP") {
        Ok(raw) => raw
            .parse::<u128>()
            .map_err(|_| Error::Validation(format!("PLSLAB_CAP is not an integer: {raw:?}"))),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(Error::from),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn read_instance(path: &PathBuf) -> Result<Instance, Error> {
    let raw = std::fs::read_to_string(path)?;
    let file: InstanceFile = from_json(&raw)?;
    let inst = file.to_instance()?;
    let problems = validate_instance(&inst);
    if !problems.is_empty() {
        return Err(Error::Validation(format!("instance fails validation: {problems:?}")));
    }
    Ok(inst)
}

fn parse_kind(tag: &str) -> Result<ProblemKind, Error> {
    match tag.split_once(':') {
        Some((t, k)) => {
            let k: usize = k
                .parse()
                .map_err(|_| Error::Validation(format!("bad cluster count in {tag:?}")))?;
            ProblemKind::from_tag(t, Some(k))
        }
        None => ProblemKind::from_tag(tag, None),
    }
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Generate { kind, n, seed, weight_max, out } => {
            let kind = parse_kind(&kind)?;
            let inst = plslab::verify::random_instance(kind, n, weight_max, seed)?;
            emit(&out, &to_canonical_json(&InstanceFile::from_instance(&inst))?)?;
            Ok(0)
        }
        Command::Reduce { input, path, out, cert_out } => {
            let inst = read_instance(&input)?;
            let ids = path
                .split(',')
                .map(|s| ReductionId::parse(s.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            let (target, cert) = chain_reduce(&inst, &ids)?;
            emit(&out, &to_canonical_json(&InstanceFile::from_instance(&target))?)?;
            if cert_out.is_some() {
                emit(&cert_out, &to_canonical_json(&cert)?)?;
            }
            Ok(0)
        }
        Command::Solve { input, start, pivot, max_iters, trace_out } => {
            let inst = read_instance(&input)?;
            let rule = match pivot.as_str() {
                "first" => PivotRule::FirstImprovement,
                "best" => PivotRule::BestImprovement,
                other => {
                    return Err(Error::Validation(format!("unknown pivot rule {other:?}")))
                }
            };
            let start_solution = if start == "standard" {
                initial_solution(&inst)?
            } else {
                let raw = std::fs::read_to_string(&start)?;
                let file: SolutionFile = from_json(&raw)?;
                file.to_solution(inst.kind)?
            };
            let trace = run_local_search(&inst, start_solution, rule, max_iters)?;
            println!("cost {}", format_rat(&cost(&inst, &trace.final_solution)?));
            println!("iterations {}", trace.iterations);
            if trace_out.is_some() {
                emit(&trace_out, &to_canonical_json(&TraceFile::from_trace(&trace))?)?;
            }
            Ok(if trace.truncated { 3 } else { 0 })
        }
        Command::MapBack { cert, solution, out } => {
            let cert: ReductionCert = from_json(&std::fs::read_to_string(&cert)?)?;
            let file: SolutionFile = from_json(&std::fs::read_to_string(&solution)?)?;
            let target_solution = file.to_solution(cert.kind_to)?;
            let mapped = map_solution(&cert, &target_solution)?;
            emit(&out, &to_canonical_json(&SolutionFile::from_solution(cert.kind_from, &mapped))?)?;
            Ok(0)
        }
        Command::Verify { suite, reduction, n, trials, seed, weight_max, report_out } => {
            let cap = effective_cap(None)?;
            let reduction = reduction.map(|r| ReductionId::parse(&r)).transpose()?;
            let suites: Vec<&str> = if suite == "all" {
                SUITES
                    .into_iter()
                    .filter(|s| {
                        reduction.is_some()
                            || !matches!(*s, "preservation" | "tightness" | "identities")
                    })
                    .collect()
            } else {
                vec![suite.as_str()]
            };
            let mut reports: Vec<SuiteReport> = Vec::new();
            for s in suites {
                match run_suite(s, reduction, n, trials, seed, weight_max, cap) {
                    Ok(r) => reports.push(r),
                    // identities are only defined for some reductions; skip
                    // silently under --suite all
                    Err(Error::NotApplicable(_)) if suite == "all" => {}
                    Err(e) => return Err(e),
                }
            }
            let violations: usize = reports.iter().map(|r| r.violation_count).sum();
            for r in &reports {
                println!(
                    "suite {}{}: {} trials, {} violations",
                    r.suite,
                    r.reduction.as_ref().map(|x| format!(" ({x})")).unwrap_or_default(),
                    r.trials,
                    r.violation_count
                );
            }
            if report_out.is_some() {
                emit(&report_out, &to_canonical_json(&reports)?)?;
            }
            Ok(if violations > 0 { 1 } else { 0 })
        }
        Command::TransitionGraph { input, format, cap, out } => {
            let inst = read_instance(&input)?;
            let cap = effective_cap(cap)?;
            let tg = build_transition_graph(&inst, cap)?;
            match format.as_str() {
                "dot" => emit(&out, &transition_graph_dot(&tg))?,
                "json" => emit(&out, &to_canonical_json(&TransitionGraphFile::from_graph(&tg))?)?,
                other => return Err(Error::Validation(format!("unknown format {other:?}"))),
            }
            Ok(0)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}
