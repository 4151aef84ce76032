use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use forestcount::algebra::DistanceConfig;
use forestcount::counting::{count, partition_table};
use forestcount::oracle::{self, brute_count, verify, Sampling};
use forestcount::ranks::{is_independent, rank_from_poly, tuple_rank};
use forestcount::treegen::{lift, GenSpec};
use forestcount::{Formula, Graph, Poly2, VertexSet};
use num_bigint::BigInt;

#[derive(Parser)]
#[command(name = "forestcount", version, about = "Counting polynomials and ranks on large-girth regular graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph
    Gen(GenArgs),
    /// Print the girth of a graph ("inf" if acyclic, "> C" above the cutoff)
    Girth {
        file: PathBuf,
        #[arg(long)]
        cutoff: Option<usize>,
    },
    /// Write the girth-doubling lift of a graph
    Lift {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Brute-force and symbolic count of a formula at given parameters
    Count {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        formula: String,
        /// Parameter assignment, e.g. "a1=0,a2=5"
        #[arg(long)]
        params: String,
    },
    /// Counting polynomial of a formula for a parameter configuration
    Poly {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        formula: String,
    },
    /// Polynomials of a schema for every class of parameter configurations
    Partition {
        #[arg(long)]
        schema: String,
    },
    /// Morley rank from a polynomial, or rank of a tuple over a base set
    Rank(RankArgs),
    /// Path criterion for independence of A and B over C
    Indep {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: String,
        #[arg(long = "C")]
        c: String,
    },
    /// Compare brute-force counts with polynomials on random parameters
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        schema: String,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// Draw parameters after the first within this radius of it
        #[arg(long)]
        local: Option<usize>,
    },
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
    /// Output file (stdout if omitted)
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenKind {
    /// Iterated lifts of the complete graph K_{d+1}
    LiftedComplete {
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        lifts: usize,
    },
    /// Seeded random d-regular graph with girth at least the given bound
    RandomRegular {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        min_girth: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Built-in graph: petersen, heawood, kN, path_N, cycle_N
    Named { name: String },
}

#[derive(Args)]
#[group(required = true, multiple = true)]
struct RankArgs {
    #[arg(long, conflicts_with_all = ["graph", "tuple", "base"])]
    poly: Option<String>,
    #[arg(long, requires_all = ["tuple", "base"])]
    graph: Option<PathBuf>,
    #[arg(long, requires = "graph")]
    tuple: Option<String>,
    #[arg(long, requires = "graph")]
    base: Option<String>,
}

enum Failure {
    /// Bad invocation or unreadable input; exit code 2.
    Usage(String),
    /// Well-formed input the computation rejects; exit code 1.
    Domain(String),
}

impl Failure {
    fn usage(e: impl ToString) -> Self {
        Failure::Usage(e.to_string())
    }

    fn domain(e: impl ToString) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = Result<(String, ExitCode), Failure>;

fn ok(text: String) -> Outcome {
    Ok((text, ExitCode::SUCCESS))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            let msg = first.strip_prefix("error: ").unwrap_or(first);
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok((text, code)) => {
            print!("{text}");
            code
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {}", one_line(&msg));
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {}", one_line(&msg));
            ExitCode::from(1)
        }
    }
}

fn one_line(msg: &str) -> String {
    msg.lines().collect::<Vec<_>>().join("; ")
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Gen(args) => {
            let spec = match args.kind {
                GenKind::LiftedComplete { degree, lifts } => GenSpec::LiftedComplete { degree, lifts },
                GenKind::RandomRegular { n, degree, min_girth, seed } => {
                    GenSpec::RandomRegular { n, degree, min_girth, seed }
                }
                GenKind::Named { name } => GenSpec::Named(name),
            };
            let g = spec.generate().map_err(Failure::domain)?;
            emit(&g.to_text(), args.output.as_deref())
        }
        Command::Girth { file, cutoff } => ok(format!("{}\n", read_graph(&file)?.girth(cutoff))),
        Command::Lift { file, output } => {
            let g = lift(&read_graph(&file)?).map_err(Failure::domain)?;
            emit(&g.to_text(), Some(&output))
        }
        Command::Count { graph, formula, params } => {
            let g = read_graph(&graph)?;
            let f = parse_formula(&formula)?;
            let params = parse_params(&params, &f, &g)?;
            let brute = brute_count(&g, &f, &params).map_err(Failure::domain)?;
            // on graphs with short cycles the parameters may not sit in a
            // tree, and then there is no polynomial to report
            let cfg = DistanceConfig::from_graph(&g, &params);
            let (poly, value) = match (cfg.validate_one_based(), g.regular_degree()) {
                (Err(e), _) => (format!("n/a ({e})"), "n/a".to_string()),
                (Ok(()), degree) => {
                    let poly = count(&cfg, &f).map_err(Failure::domain)?;
                    let value = match degree {
                        Some(d) => poly.eval(&BigInt::from(g.n()), &BigInt::from(d)).to_string(),
                        None => "n/a (graph is not regular)".to_string(),
                    };
                    (poly.to_string(), value)
                }
            };
            let admissible = if oracle::admissible(&g, &f) { "yes" } else { "no" };
            ok(format!("count {brute}\npoly {poly}\nvalue {value}\nadmissible {admissible}\n"))
        }
        Command::Poly { config, formula } => {
            let cfg = DistanceConfig::parse(&read(&config)?).map_err(Failure::usage)?;
            cfg.validate_one_based().map_err(Failure::domain)?;
            let f = parse_formula(&formula)?;
            ok(format!("{}\n", count(&cfg, &f).map_err(Failure::domain)?))
        }
        Command::Partition { schema } => {
            let f = parse_formula(&schema)?;
            ok(partition_table(&f).map_err(Failure::domain)?.render())
        }
        Command::Rank(args) => {
            if let Some(p) = args.poly {
                let p: Poly2 = p.parse().map_err(Failure::usage)?;
                return ok(format!("{}\n", rank_from_poly(&p).map_err(Failure::domain)?));
            }
            let g = read_graph(&args.graph.expect("clap enforces --graph"))?;
            let tuple = parse_tuple(&args.tuple.unwrap_or_default(), &g)?;
            let base = parse_vertices(&args.base.unwrap_or_default(), &g)?;
            ok(format!("{}\n", tuple_rank(&g, &tuple, &base).map_err(Failure::domain)?))
        }
        Command::Indep { graph, a, b, c } => {
            let g = read_graph(&graph)?;
            let sets = [&a, &b, &c].map(|s| parse_vertices(s, &g));
            let [a, b, c] = sets;
            let yes = is_independent(&g, &a?, &b?, &c?).map_err(Failure::domain)?;
            ok(format!("{}\n", if yes { "yes" } else { "no" }))
        }
        Command::Verify { graph, schema, trials, seed, local } => {
            let g = read_graph(&graph)?;
            let f = parse_formula(&schema)?;
            let sampling = local.map_or(Sampling::Uniform, |radius| Sampling::Local { radius });
            let report = verify(&g, &f, trials, seed, sampling).map_err(Failure::domain)?;
            let code = if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) };
            Ok((report.to_string(), code))
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    Graph::parse(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(text: &str, output: Option<&Path>) -> Outcome {
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            ok(String::new())
        }
        None => ok(text.to_string()),
    }
}

fn parse_formula(text: &str) -> Result<Formula, Failure> {
    Formula::parse(text).map_err(Failure::usage)
}

/// Comma-separated vertex ids in order; the empty string is empty.
fn parse_tuple(text: &str, g: &Graph) -> Result<Vec<usize>, Failure> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let v: usize = item.parse().map_err(|_| Failure::Usage(format!("bad vertex {item:?}")))?;
        if v >= g.n() {
            return Err(Failure::Domain(format!("vertex {v} out of range for graph on {} vertices", g.n())));
        }
        out.push(v);
    }
    Ok(out)
}

fn parse_vertices(text: &str, g: &Graph) -> Result<VertexSet, Failure> {
    Ok(parse_tuple(text, g)?.into_iter().collect())
}

/// `a1=V,a2=W,...`; every parameter of the formula must be assigned.
/// Indices the formula skips default to vertex 0 and play no role.
fn parse_params(text: &str, f: &Formula, g: &Graph) -> Result<Vec<usize>, Failure> {
    let n = f.param_count() as usize;
    let used = f.params();
    let mut slots: Vec<Option<usize>> = vec![None; n];
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let bad = || Failure::Usage(format!("bad parameter assignment {item:?}, expected aN=V"));
        let (name, value) = item.split_once('=').ok_or_else(bad)?;
        let idx: usize = name.trim().strip_prefix('a').and_then(|s| s.parse().ok()).filter(|&i| i >= 1).ok_or_else(bad)?;
        let v: usize = value.trim().parse().map_err(|_| bad())?;
        if v >= g.n() {
            return Err(Failure::Domain(format!("vertex {v} out of range for graph on {} vertices", g.n())));
        }
        if idx > slots.len() {
            slots.resize(idx, None);
        }
        if slots[idx - 1].replace(v).is_some() {
            return Err(Failure::Usage(format!("parameter a{idx} assigned twice")));
        }
    }
    slots
        .iter()
        .enumerate()
        .map(|(i, s)| match s {
            Some(v) => Ok(*v),
            None if used.contains(&(i as u32 + 1)) => {
                Err(Failure::Usage(format!("parameter a{} is not assigned", i + 1)))
            }
            None => Ok(0),
        })
        .collect()
}
