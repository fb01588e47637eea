use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use misforge_core::avgfree::verify_avg_free;
use misforge_core::dupgraph::{build_dup, build_dup_for_size, parse_dupg, verify_dup, write_dupg};
use misforge_core::hardness::{check_properties, parse_misr, write_misr, GenConfig, ParamMode};
use misforge_core::oracle::{
    all_search_sequences, enumerate_all_mis, eval_predicate, extract_predicate_from_mis,
    SearchSequence,
};
use misforge_core::report::Report;
use misforge_core::streaming::{rows_to_csv, tradeoff_bench, BenchSpec};
use misforge_core::{Budget, Error};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_INVALID_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "misforge", version)]
#[command(about = "Build, verify and benchmark hard MIS instances for multi-pass graph streams")]
struct Cli {
    /// Budget overrides: one integer for every counting cap, or
    /// `vectors=..,multisets=..,paths=..,edges=..,mis_vertices=..`. Applied after MISFORGE_BUDGET.
    #[arg(long, global = true)]
    budget: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a DUP graph and write it as `dupg 1`.
    GenDup(GenDupArgs),
    /// Check a `dupg 1` file: layering, UPC partition, unique paths, average-freeness.
    Verify(VerifyArgs),
    /// Sample a hard instance and write it as `misr 1`.
    GenInstance(GenInstanceArgs),
    /// Audit the structural properties of a `misr 1` file.
    CheckInstance {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Evaluate the search predicate, or cross-check it against every MIS.
    Predicate(PredicateArgs),
    /// Run the pass/space/communication benchmark.
    Bench {
        /// JSON bench spec.
        #[arg(long)]
        spec: PathBuf,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GenDupArgs {
    #[arg(long, requires = "d", conflicts_with = "n")]
    ell: Option<u32>,
    #[arg(long, requires = "ell")]
    d: Option<u32>,
    /// Target vertex count; dimensions are derived.
    #[arg(long)]
    n: Option<u64>,
    /// Path length in edges; the graph has k+1 layers.
    #[arg(long)]
    k: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Largest multiset size checked for average-freeness.
    #[arg(long, default_value_t = 5)]
    max_multiset: usize,
    /// Cap on layered-path search nodes.
    #[arg(long)]
    path_budget: Option<u64>,
}

#[derive(Args)]
struct GenInstanceArgs {
    #[arg(long)]
    r: usize,
    #[arg(long)]
    n0: usize,
    /// Total vertex count; derives every level from the parameter equations.
    #[arg(long, conflicts_with = "toy")]
    n: Option<u64>,
    /// `ell,d` of one level's DUP graph, repeated once per level, level 1 first.
    #[arg(long, value_parser = parse_pair)]
    toy: Vec<(u32, u32)>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    eta_p: f64,
    #[arg(long, default_value_t = 1.0)]
    eta_q: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PredicateArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Search sequence, top level first, comma separated, 0-based. Omit to
    /// cross-check every sequence against every MIS.
    #[arg(long = "K")]
    k: Option<String>,
    /// Vertex set to extract the predicate from, comma separated.
    #[arg(long)]
    mis: Option<String>,
}

fn parse_pair(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("`{s}` is not `ell,d`"))?;
    let parse = |x: &str| x.trim().parse::<u32>().map_err(|_| format!("`{x}` is not an integer"));
    Ok((parse(a)?, parse(b)?))
}

fn parse_list(s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| {
            x.parse::<usize>()
                .map_err(|_| Failure::Input(format!("`{x}` is not a non-negative integer")))
        })
        .collect()
}

enum Failure {
    Core(Error),
    Input(String),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn finish(report: &Report) -> Outcome {
    print!("{report}");
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn gen_dup(args: &GenDupArgs, budget: &Budget) -> Outcome {
    let dup = match (args.ell, args.d, args.n) {
        (Some(ell), Some(d), None) => build_dup(ell, d, args.k, budget)?,
        (None, None, Some(n)) => build_dup_for_size(n as u128, args.k, budget)?,
        _ => return Err(Failure::Input("give either --ell and --d, or --n".into())),
    };
    emit(args.out.as_deref(), &write_dupg(&dup))?;
    if args.out.is_some() {
        let p = dup.params();
        println!(
            "ell={} d={} k={} layer_size={} p={} q={}",
            p.ell,
            p.d,
            p.k,
            dup.layer_size(),
            p.p,
            p.q
        );
    }
    Ok(())
}

fn verify(args: &VerifyArgs, budget: &Budget) -> Outcome {
    let mut budget = *budget;
    if let Some(paths) = args.path_budget {
        if paths == 0 {
            return Err(Failure::Input("--path-budget must be positive".into()));
        }
        budget.paths = paths;
    }
    let dup = parse_dupg(&read(&args.input)?)?;
    let mut report = verify_dup(&dup, &budget)?;
    match dup.avg_free() {
        Some(set) => {
            let ok = verify_avg_free(set, args.max_multiset, &budget)?;
            report.push(
                "avg-free",
                ok,
                format!("{} vectors, multisets up to {}", set.len(), args.max_multiset),
            );
        }
        None => report.push("avg-free", false, "path steps do not decode to a vector set"),
    }
    finish(&report)
}

fn gen_instance(args: &GenInstanceArgs, budget: &Budget) -> Outcome {
    let mode = match args.n {
        Some(n) => ParamMode::Formula { n },
        None if args.toy.is_empty() && args.r > 0 => {
            return Err(Failure::Input("give --n or one --toy per level".into()))
        }
        None => ParamMode::Toy {
            levels: args.toy.clone(),
        },
    };
    let config = GenConfig {
        r: args.r,
        n0: args.n0,
        mode,
        eta_p: args.eta_p,
        eta_q: args.eta_q,
        seed: args.seed,
    };
    let inst = config.generate(budget)?;
    emit(args.out.as_deref(), &write_misr(&config, &inst))?;
    if args.out.is_some() {
        println!(
            "r={} vertices={} players={} edges={} seed={}",
            inst.rounds(),
            inst.num_vertices(),
            inst.num_players(),
            inst.edges().len(),
            args.seed
        );
    }
    Ok(())
}

fn check_instance(input: &Path, budget: &Budget) -> Outcome {
    let loaded = parse_misr(&read(input)?, budget)?;
    println!(
        "seed={} edges-match-seed={}",
        loaded.config.seed, loaded.matches_seed
    );
    finish(&check_properties(&loaded.instance))
}

fn predicate(args: &PredicateArgs, budget: &Budget) -> Outcome {
    let loaded = parse_misr(&read(&args.input)?, budget)?;
    let inst = &loaded.instance;
    if let Some(k) = &args.k {
        let k = SearchSequence(parse_list(k)?);
        let bits = eval_predicate(inst, &k)?;
        println!("predicate {bits}");
        if let Some(mis) = &args.mis {
            let set: BTreeSet<usize> = parse_list(mis)?.into_iter().collect();
            let extracted = extract_predicate_from_mis(inst, &set, &k)?;
            println!("extracted {extracted}");
            if extracted != bits {
                return Err(Failure::Check);
            }
        }
        return Ok(());
    }
    let sets = enumerate_all_mis(&inst.graph(), budget)?;
    let sequences = all_search_sequences(inst);
    let mut mismatches = 0usize;
    for k in &sequences {
        let expected = eval_predicate(inst, k)?;
        for set in &sets {
            match extract_predicate_from_mis(inst, set, k) {
                Ok(bits) if bits == expected => {}
                _ => mismatches += 1,
            }
        }
    }
    let mut report = Report::new();
    report.push(
        "predicate-extraction",
        mismatches == 0,
        format!(
            "{mismatches} mismatches over {} sequences x {} MIS",
            sequences.len(),
            sets.len()
        ),
    );
    finish(&report)
}

fn bench(spec: &Path, out: Option<&Path>, budget: &Budget) -> Outcome {
    let spec = BenchSpec::from_json(&read(spec)?)?;
    let rows = tradeoff_bench(&spec, budget)?;
    emit(out, &rows_to_csv(&rows)?)
}

fn run(cli: &Cli) -> Outcome {
    let mut budget = Budget::from_env()?;
    if let Some(spec) = &cli.budget {
        budget = budget.with_overrides(spec)?;
    }
    match &cli.command {
        Command::GenDup(args) => gen_dup(args, &budget),
        Command::Verify(args) => verify(args, &budget),
        Command::GenInstance(args) => gen_instance(args, &budget),
        Command::CheckInstance { input } => check_instance(input, &budget),
        Command::Predicate(args) => predicate(args, &budget),
        Command::Bench { spec, out } => bench(spec, out.as_deref(), &budget),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(EXIT_CHECK_FAILED),
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_budget() { EXIT_BUDGET } else { EXIT_INVALID_INPUT })
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID_INPUT)
        }
    }
}
