//! `evenodd`: count, decide, approximate and reduce even/odd induced
//! k-vertex subgraph problems from the command line.
//!
//! Exit codes: 0 success, 2 input error, 3 budget/sample-cap exceeded,
//! 4 internal-consistency failure (e.g. reduction integrality).

mod report;

use clap::{Parser, Subcommand, ValueEnum};
use evenodd::approx::{
    density_lower_bound, estimate_parity_count, ApproxOptions, SamplingMode,
};
use evenodd::decide::{decide_parity, DecideOptions};
use evenodd::exact::{
    count_parity_both_with_kernel, count_parity_subsets, count_parity_tuples,
    edge_count_histogram, EnumOptions, Kernel,
};
use evenodd::gf2::total_even_subgraphs;
use evenodd::graph::{generate, GraphSpec};
use evenodd::reduction::{exact_oracle, run_reduction, ReductionOptions};
use evenodd::{Colouring, Error, Graph, ParityTarget};
use num_bigint::BigUint;
use num_traits::One;
use report::Report;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "evenodd",
    version,
    about = "Exact, decision and approximate counting of even/odd induced k-vertex subgraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
}

impl From<ParityArg> for ParityTarget {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Even => ParityTarget::Even,
            ParityArg::Odd => ParityTarget::Odd,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Guaranteed,
    Adaptive,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Clique,
    Independent,
    TwoCliques,
    Bipartite,
    Gnp,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Small,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Exact count of k-subsets inducing an even/odd subgraph.
    Count {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        parity: ParityArg,
        /// Also report the labelled (tuple) count, k! times the subset count.
        #[arg(long)]
        tuples: bool,
        /// Max subsets scanned; 0 lifts the limit.
        #[arg(long, default_value_t = evenodd::exact::DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Decide whether any even/odd k-subset exists.
    Decide {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        parity: ParityArg,
        /// Print a certifying subset on YES.
        #[arg(long)]
        witness: bool,
        #[arg(long, default_value_t = evenodd::exact::DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Randomised approximation of the even/odd k-subset count.
    Approx {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        parity: ParityArg,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Adaptive mode: abort after this many samples.
        #[arg(long, default_value_t = 50_000_000)]
        sample_cap: u64,
        /// Guaranteed mode: refuse above this required sample count.
        #[arg(long, default_value_t = 10_000_000)]
        guaranteed_cap: u64,
        /// Run guaranteed mode beyond the cap anyway.
        #[arg(long)]
        force: bool,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Total number of even induced subgraphs over all sizes (GF(2) route).
    TotalEven {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Recover the multicolour clique count through the parity-counting
    /// oracle reduction.
    Reduce {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        colours: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        parity: ParityArg,
        /// Dump the pattern family, oracle answers and recovered counts.
        #[arg(long)]
        trace: bool,
        /// Testing aid: corrupt the oracle to exercise the integrity checks.
        #[arg(long)]
        corrupt_oracle: bool,
        /// Lift the k guard (the pattern family grows as 2^C(k,2)).
        #[arg(long)]
        force_large_k: bool,
        #[arg(long, default_value_t = evenodd::exact::DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Generate a graph and write it in edge-list format.
    Gen {
        #[arg(long, value_enum)]
        class: ClassArg,
        /// Class parameters: n | a,b | n,p (for gnp).
        #[arg(long)]
        params: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Edge-count histogram over all k-subsets.
    Census {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = evenodd::exact::DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Enumeration throughput micro-benchmark across bitset kernels.
    Bench {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn exit_code_for(err: &CliError) -> u8 {
    match err {
        CliError::Io(_) | CliError::Usage(_) => 2,
        CliError::Core(e) => match e {
            Error::Parse { .. } | Error::InvalidInput(_) => 2,
            Error::BudgetExceeded { .. }
            | Error::SampleCapExceeded { .. }
            | Error::GuaranteedInfeasible { .. } => 3,
            Error::OracleInconsistency(_) | Error::Internal(_) => 4,
        },
    }
}

enum CliError {
    Io(String),
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(m) | CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    Ok(Graph::parse(&read_file(path)?)?)
}

fn budget_option(budget: u64) -> Option<u64> {
    if budget == 0 {
        None
    } else {
        Some(budget)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Count {
            graph,
            k,
            parity,
            tuples,
            budget,
            workers,
        } => {
            let g = load_graph(&graph)?;
            let target: ParityTarget = parity.into();
            let opts = EnumOptions {
                budget: budget_option(budget),
                workers,
            };
            let start = Instant::now();
            let subsets = count_parity_subsets(&g, k, target, &opts)?;
            let tuple_count = if tuples {
                Some(count_parity_tuples(&g, k, target, &opts)?)
            } else {
                None
            };
            let mut r = Report::new("count");
            r.push_graph(&graph.display().to_string(), &g);
            r.push("params.k", k);
            r.push("params.parity", target);
            r.push("result.subsets", &subsets);
            if let Some(t) = tuple_count {
                r.push("result.tuples", t);
            }
            r.finish(start.elapsed().as_millis());
            Ok(())
        }
        Command::Decide {
            graph,
            k,
            parity,
            witness,
            budget,
            workers,
        } => {
            let g = load_graph(&graph)?;
            let target: ParityTarget = parity.into();
            let opts = DecideOptions {
                budget: budget_option(budget),
                workers,
                want_witness: witness,
            };
            let start = Instant::now();
            let d = decide_parity(&g, k, target, &opts)?;
            let mut r = Report::new("decide");
            r.push_graph(&graph.display().to_string(), &g);
            r.push("params.k", k);
            r.push("params.parity", target);
            r.push("result.answer", if d.answer { "YES" } else { "NO" });
            r.push("result.route", d.route.name());
            if witness && d.answer {
                match &d.witness {
                    Some(w) => {
                        let members: Vec<String> = w.iter().map(|v| v.to_string()).collect();
                        r.push("result.witness", members.join(" "));
                    }
                    None => r.push("result.witness", "-"),
                }
            }
            r.finish(start.elapsed().as_millis());
            Ok(())
        }
        Command::Approx {
            graph,
            k,
            parity,
            eps,
            delta,
            mode,
            seed,
            sample_cap,
            guaranteed_cap,
            force,
            workers,
        } => {
            let g = load_graph(&graph)?;
            let target: ParityTarget = parity.into();
            let opts = ApproxOptions {
                eps,
                delta,
                mode: match mode {
                    ModeArg::Guaranteed => SamplingMode::Guaranteed,
                    ModeArg::Adaptive => SamplingMode::Adaptive,
                },
                seed,
                sample_cap,
                guaranteed_cap,
                force,
                workers,
                decide_budget: Some(evenodd::exact::DEFAULT_BUDGET),
            };
            let start = Instant::now();
            let est = estimate_parity_count(&g, k, target, &opts)?;
            let mut r = Report::new("approx");
            r.push_graph(&graph.display().to_string(), &g);
            r.push("params.k", k);
            r.push("params.parity", target);
            r.push("params.eps", eps);
            r.push("params.delta", delta);
            r.push("params.mode", est.mode.name());
            r.push("params.seed", seed);
            r.push("result.estimate", est.value_f64());
            r.push("result.estimate.rational", &est.value);
            r.push("result.samples_used", est.samples_used);
            r.push("result.successes", est.successes);
            r.push("result.shortcircuit", est.shortcircuit);
            match density_lower_bound(k, g.n().max(1)) {
                Ok(b) => {
                    r.push("density.bound", &b.bound);
                    r.push("density.applicable", b.applicable);
                }
                Err(_) => r.push("density.bound", "n/a (k < 3)"),
            }
            r.finish(start.elapsed().as_millis());
            Ok(())
        }
        Command::TotalEven { graph } => {
            let g = load_graph(&graph)?;
            let start = Instant::now();
            let total = total_even_subgraphs(&g)?;
            let mut r = Report::new("total-even");
            r.push_graph(&graph.display().to_string(), &g);
            r.push("result.total_even_subgraphs", &total);
            r.push("result.includes_empty_set", true);
            r.finish(start.elapsed().as_millis());
            Ok(())
        }
        Command::Reduce {
            graph,
            colours,
            k,
            parity,
            trace,
            corrupt_oracle,
            force_large_k,
            budget,
        } => {
            let g = load_graph(&graph)?;
            let f = Colouring::parse(&read_file(&colours)?, k, g.n())?;
            let target: ParityTarget = parity.into();
            let eopts = EnumOptions {
                budget: budget_option(budget),
                workers: 1,
            };
            let ropts = ReductionOptions { force_large_k };
            let base = exact_oracle(k, target, eopts);
            let start = Instant::now();
            let run = if corrupt_oracle {
                let corrupted = |gi: &Graph, fi: &Colouring| -> evenodd::Result<BigUint> {
                    Ok(base(gi, fi)? + BigUint::one())
                };
                run_reduction(&g, &f, k, target, &corrupted, &ropts)?
            } else {
                run_reduction(&g, &f, k, target, &base, &ropts)?
            };
            let mut r = Report::new("reduce");
            r.push_graph(&graph.display().to_string(), &g);
            r.push("params.k", k);
            r.push("params.parity", target);
            r.push("result.multicolour_cliques", &run.multicolour_cliques);
            r.push("reduction.oracle_calls", run.oracle_calls);
            r.push("reduction.matrix_dim", run.matrix_dim);
            if trace {
                for (i, pattern) in run.family.iter().enumerate() {
                    let pairs: Vec<String> = pattern
                        .pairs()
                        .into_iter()
                        .map(|(a, b)| format!("{a}-{b}"))
                        .collect();
                    r.push(&format!("reduction.family.{i}"), format!("{{{}}}", pairs.join(",")));
                }
                for (i, zi) in run.z.iter().enumerate() {
                    r.push(&format!("reduction.z.{i}"), zi);
                }
                for (i, ni) in run.solution.iter().enumerate() {
                    r.push(&format!("reduction.n.{i}"), ni);
                }
            }
            r.finish(start.elapsed().as_millis());
            Ok(())
        }
        Command::Gen {
            class,
            params,
            seed,
            out,
        } => {
            let spec = parse_gen_spec(class, &params, seed)?;
            let start = Instant::now();
            let g = generate(&spec)?;
            let text = g.to_edge_list();
            let mut r = Report::new("gen");
            match &out {
                Some(path) => {
                    std::fs::write(path, &text).map_err(|e| {
                        CliError::Io(format!("cannot write {}: {e}", path.display()))
                    })?;
                    r.push("graph.file", path.display());
                }
                None => {
                    print!("{text}");
                    return Ok(());
                }
            }
            r.push("graph.vertices", g.n());
            r.push("graph.edges", g.edge_count());
            r.push("params.seed", seed);
            r.finish(start.elapsed().as_millis());
            Ok(())
        }
        Command::Census {
            graph,
            k,
            budget,
            workers,
        } => {
            let g = load_graph(&graph)?;
            let opts = EnumOptions {
                budget: budget_option(budget),
                workers,
            };
            let start = Instant::now();
            let hist = edge_count_histogram(&g, k, &opts)?;
            let mut r = Report::new("census");
            r.push_graph(&graph.display().to_string(), &g);
            r.push("params.k", k);
            let mut even = BigUint::ZERO;
            let mut odd = BigUint::ZERO;
            for (e, c) in hist.iter().enumerate() {
                r.push(&format!("census.{e}"), c);
                if e % 2 == 0 {
                    even += c;
                } else {
                    odd += c;
                }
            }
            r.push("census.even_total", even);
            r.push("census.odd_total", odd);
            r.finish(start.elapsed().as_millis());
            Ok(())
        }
        Command::Bench { suite, seed } => run_bench(suite, seed),
    }
}

fn parse_gen_spec(class: ClassArg, params: &str, seed: u64) -> Result<GraphSpec, CliError> {
    let parts: Vec<&str> = params.split(',').map(str::trim).collect();
    let usage = |msg: &str| CliError::Usage(format!("bad --params for this class: {msg}"));
    let int = |s: &str| -> Result<usize, CliError> {
        s.parse().map_err(|_| usage(&format!("`{s}` is not an integer")))
    };
    match class {
        ClassArg::Clique => {
            if parts.len() != 1 {
                return Err(usage("clique takes `n`"));
            }
            Ok(GraphSpec::Clique(int(parts[0])?))
        }
        ClassArg::Independent => {
            if parts.len() != 1 {
                return Err(usage("independent takes `n`"));
            }
            Ok(GraphSpec::Independent(int(parts[0])?))
        }
        ClassArg::TwoCliques => {
            if parts.len() != 2 {
                return Err(usage("two-cliques takes `a,b`"));
            }
            Ok(GraphSpec::TwoCliques(int(parts[0])?, int(parts[1])?))
        }
        ClassArg::Bipartite => {
            if parts.len() != 2 {
                return Err(usage("bipartite takes `a,b`"));
            }
            Ok(GraphSpec::CompleteBipartite(int(parts[0])?, int(parts[1])?))
        }
        ClassArg::Gnp => {
            if parts.len() != 2 {
                return Err(usage("gnp takes `n,p`"));
            }
            let n = int(parts[0])?;
            let p: f64 = parts[1]
                .parse()
                .map_err(|_| usage(&format!("`{}` is not a probability", parts[1])))?;
            Ok(GraphSpec::Gnp { n, p, seed })
        }
    }
}

fn run_bench(suite: SuiteArg, seed: u64) -> Result<(), CliError> {
    let start = Instant::now();
    let instances: Vec<(String, Graph, usize)> = match suite {
        SuiteArg::Small => [(0.3, 6), (0.5, 6), (0.5, 8), (0.7, 8)]
            .iter()
            .map(|&(p, k)| {
                let g = generate(&GraphSpec::Gnp { n: 24, p, seed }).unwrap();
                (format!("gnp-24-{p}-k{k}"), g, k)
            })
            .collect(),
        SuiteArg::Structured => vec![
            (
                "clique-32-k5".into(),
                generate(&GraphSpec::Clique(32)).unwrap(),
                5,
            ),
            (
                "independent-32-k5".into(),
                generate(&GraphSpec::Independent(32)).unwrap(),
                5,
            ),
            (
                "two-cliques-16-16-k5".into(),
                generate(&GraphSpec::TwoCliques(16, 16)).unwrap(),
                5,
            ),
            (
                "bipartite-16-16-k5".into(),
                generate(&GraphSpec::CompleteBipartite(16, 16)).unwrap(),
                5,
            ),
        ],
    };

    let mut r = Report::new("bench");
    r.push("params.suite", match suite {
        SuiteArg::Small => "small",
        SuiteArg::Structured => "structured",
    });
    r.push("params.seed", seed);
    let opts = EnumOptions {
        budget: None,
        workers: 1,
    };
    for (i, (name, g, k)) in instances.iter().enumerate() {
        let subsets = evenodd::combin::binom(g.n() as u64, *k as u64);
        r.push(&format!("bench.{i}.instance"), name);
        r.push(&format!("bench.{i}.n"), g.n());
        r.push(&format!("bench.{i}.k"), k);
        r.push(&format!("bench.{i}.subsets"), subsets);
        let mut results = Vec::new();
        for (kernel, label) in [(Kernel::Word, "word"), (Kernel::Wide, "wide")] {
            let t = Instant::now();
            let (even, odd) = count_parity_both_with_kernel(g, *k, &opts, kernel)?;
            let elapsed = t.elapsed();
            let rate = subsets as f64 / elapsed.as_secs_f64().max(1e-9);
            r.push(&format!("bench.{i}.{label}.ms"), elapsed.as_millis());
            r.push(&format!("bench.{i}.{label}.subsets_per_sec"), format!("{rate:.0}"));
            results.push((even, odd));
        }
        if results[0] != results[1] {
            return Err(CliError::Core(Error::Internal(
                "kernel disagreement in benchmark".into(),
            )));
        }
    }
    r.finish(start.elapsed().as_millis());
    Ok(())
}
