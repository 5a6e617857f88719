use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ecw::decomposition::{tree_decomposition_from_ecw, validate_tree_decomposition};
use ecw::dp::{default_tree, TableStats};
use ecw::fixtures::{self, Seed};
use ecw::io::{self, Instance, IoError, ResultReport, Verdict};
use ecw::width::{ecw_enumerate_oracle, ecw_exact_forest, ecw_heuristic, EcwResult};
use ecw::{Graph, RootedSpanningTree};

/// Edge-cut width toolkit.
#[derive(Parser)]
#[command(name = "ecw", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the edge-cut width of a graph.
    Ecw(EcwArgs),
    /// Solve an instance by dynamic programming over a spanning tree.
    Solve(SolveArgs),
    /// Write a generated instance.
    Gen(GenArgs),
    /// Validate a tree decomposition.
    CheckDecomp {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        decomp: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Heuristic,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dimacs,
}

#[derive(Args)]
struct EcwArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    /// Search nodes for exact mode; the best forest found is reported when
    /// it runs out.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Local-search steps in heuristic mode.
    #[arg(long, default_value_t = 1000)]
    iterations: usize,
    /// Also write the tree decomposition derived from the witness.
    #[arg(long)]
    decomposition: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Problem {
    Edp,
    Lcol,
    Csp,
    Srti,
    Mincca,
}

impl Problem {
    fn kind(self) -> &'static str {
        match self {
            Problem::Edp => "edp",
            Problem::Lcol => "lcol",
            Problem::Csp => "csp",
            Problem::Srti => "srti",
            Problem::Mincca => "mincca",
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(value_enum)]
    problem: Problem,
    #[arg(long)]
    input: PathBuf,
    /// Spanning forest of the instance graph to use instead of searching.
    #[arg(long)]
    tree: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    family: Family,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Family {
    /// 2 x RUNGS grid.
    Ladder { rungs: usize },
    /// Two complete binary trees of the given depth sharing their leaves.
    Gbt { depth: usize },
    /// Uniform graph with N vertices and M edges.
    Random { n: usize, m: usize },
    RandEdp { n: usize, m: usize, demands: usize },
    RandLcol { n: usize, m: usize, colors: usize },
    RandCsp {
        variables: usize,
        constraints: usize,
        arity: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
    },
    RandSrti {
        n: usize,
        m: usize,
        #[arg(long, default_value_t = 0.3)]
        tie: f64,
        #[arg(long, default_value_t = 1)]
        pi: usize,
    },
    RandMincca {
        n: usize,
        m: usize,
        colors: usize,
        #[arg(long, default_value_t = 9)]
        max_cost: u64,
    },
}

enum Failure {
    Validation(String),
    Parse(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Budget(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Validation(m) | Failure::Parse(m) | Failure::Budget(m) => f.write_str(m),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Invalid(ecw::Error::Budget(m)) => Failure::Budget(m),
            other => Failure::Parse(other.to_string()),
        }
    }
}

impl From<ecw::Error> for Failure {
    fn from(e: ecw::Error) -> Self {
        match e {
            ecw::Error::Budget(m) => Failure::Budget(format!("budget exceeded: {m}")),
            other => Failure::Validation(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ecw(args) => run_ecw(args),
        Command::Solve(args) => run_solve(args),
        Command::Gen(args) => run_gen(args),
        Command::CheckDecomp { graph, decomp } => run_check(&graph, &decomp),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => std::fs::write(p, format!("{text}\n")).map_err(|e| Failure::Validation(format!("{}: {e}", p.display()))),
        None => {
            let _ = writeln!(std::io::stdout(), "{text}");
            Ok(())
        }
    }
}

fn load_graph(path: &Path, format: Format) -> Result<Graph, Failure> {
    let text = read(path)?;
    Ok(match format {
        Format::Json => io::parse_instance(&text)?.host_graph(),
        Format::Dimacs => io::parse_dimacs(&text)?,
    })
}

fn emit(report: &ResultReport, json: bool, human: impl FnOnce() -> String) {
    let text = if json {
        serde_json::to_string_pretty(report).expect("reports serialize")
    } else {
        human()
    };
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn edge_list(edges: &[(usize, usize)]) -> String {
    edges.iter().map(|(u, w)| format!("{u}-{w}")).collect::<Vec<_>>().join(" ")
}

fn run_ecw(args: EcwArgs) -> Outcome {
    let g = load_graph(&args.input, args.format)?;
    let clock = Instant::now();
    let result: EcwResult = match args.mode {
        Mode::Exact => ecw_exact_forest(&g, args.budget)?,
        Mode::Heuristic => ecw_heuristic(&g, Seed(args.seed), args.iterations)?,
        Mode::Oracle => ecw_enumerate_oracle(&g)?,
    };
    let mut report = ResultReport::new("ecw", Verdict::Value(result.width as u64)).with_tree(&g, &result.witness);
    report.width = Some(result.width);
    report.exact = Some(result.exact);
    report.wall_ms = clock.elapsed().as_millis() as u64;
    report.seed = matches!(args.mode, Mode::Heuristic).then_some(args.seed);
    if let Some(path) = &args.decomposition {
        let td = tree_decomposition_from_ecw(&g, &result.witness);
        write_out(Some(path), &serde_json::to_string_pretty(&td).expect("decompositions serialize"))?;
    }
    emit(&report, args.json, || {
        let tag = if result.exact { "exact" } else { "upper bound" };
        format!("width {} ({tag})\nwitness {}", result.width, edge_list(&report.witness))
    });
    Ok(())
}

fn run_solve(args: SolveArgs) -> Outcome {
    let inst = io::parse_instance(&read(&args.input)?)?;
    if inst.kind() != args.problem.kind() {
        return Err(IoError::Kind {
            expected: args.problem.kind(),
            found: inst.kind(),
        }
        .into());
    }
    let host = inst.host_graph();
    let clock = Instant::now();
    let tree: RootedSpanningTree = match &args.tree {
        Some(path) => io::parse_tree(&read(path)?)?.to_tree(&host)?,
        None => default_tree(&host)?,
    };
    let (verdict, value, stats): (Verdict, Option<u64>, TableStats) = match &inst {
        Instance::Edp(i) => {
            let o = ecw::edp::solve_edp_with(i, &tree)?;
            (yes_no(o.answer), None, o.stats)
        }
        Instance::Lcol(i) => {
            let o = ecw::coloring::solve_list_coloring_with(i, &tree)?;
            (yes_no(o.answer), None, o.stats)
        }
        Instance::Csp(i) => {
            let o = ecw::csp::solve_csp_with(i, &tree)?;
            (yes_no(o.answer), None, o.stats)
        }
        Instance::Srti(i) => {
            let o = ecw::roommates::solve_maxsrti_with(i, &tree)?;
            let size = o.answer.map(|s| s as u64);
            (yes_no(size.is_some_and(|s| s >= i.target() as u64)), size, o.stats)
        }
        Instance::Mincca(i) => {
            let o = ecw::changeover::solve_mincca_with(i, &tree)?;
            (o.answer.map_or(Verdict::None, Verdict::Value), None, o.stats)
        }
        Instance::Graph(_) => unreachable!("kind checked above"),
    };
    let mut report = ResultReport::new(&format!("solve {}", args.problem.kind()), verdict).with_tree(&host, &tree);
    report.value = value;
    report.width = Some(stats.width);
    report.tables = Some(stats);
    report.wall_ms = clock.elapsed().as_millis() as u64;
    emit(&report, args.json, || {
        let head = match verdict {
            Verdict::Yes => "YES".to_string(),
            Verdict::No => "NO".to_string(),
            Verdict::Value(v) => format!("optimum {v}"),
            Verdict::None => "infeasible".to_string(),
        };
        let extra = value.map(|v| format!(" (largest stable matching {v})")).unwrap_or_default();
        format!("{head}{extra}\nwidth {}, largest table {}", stats.width, stats.max_table)
    });
    Ok(())
}

fn yes_no(b: bool) -> Verdict {
    if b {
        Verdict::Yes
    } else {
        Verdict::No
    }
}

fn run_gen(args: GenArgs) -> Outcome {
    let seed = Seed(args.seed);
    let inst = match args.family {
        Family::Ladder { rungs } => Instance::Graph(fixtures::ladder(rungs)?.0),
        Family::Gbt { depth } => Instance::Graph(fixtures::glued_binary_trees(depth)?),
        Family::Random { n, m } => Instance::Graph(fixtures::random_graph(n, m, seed)?),
        Family::RandEdp { n, m, demands } => Instance::Edp(fixtures::random_edp(n, m, demands, seed)?),
        Family::RandLcol { n, m, colors } => Instance::Lcol(fixtures::random_lists(n, m, colors, seed)?),
        Family::RandCsp {
            variables,
            constraints,
            arity,
            density,
        } => Instance::Csp(fixtures::random_csp(variables, constraints, arity, density, seed)?),
        Family::RandSrti { n, m, tie, pi } => Instance::Srti(fixtures::random_srti(n, m, tie, pi, seed)?),
        Family::RandMincca { n, m, colors, max_cost } => {
            Instance::Mincca(fixtures::random_mincca(n, m, colors, max_cost, seed)?)
        }
    };
    write_out(args.out.as_deref(), &io::instance_to_json(&inst))
}

fn run_check(graph: &Path, decomp: &Path) -> Outcome {
    let g = io::parse_instance(&read(graph)?)?.host_graph();
    let td = io::parse_decomposition(&read(decomp)?)?;
    match validate_tree_decomposition(&g, &td) {
        Ok(()) => {
            println!("valid, width {}", td.width());
            Ok(())
        }
        Err(v) => Err(Failure::Validation(format!("invalid decomposition: {v}"))),
    }
}
