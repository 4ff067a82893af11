use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mpld::decomp::{parse_graph, simplify, DecompositionGraph};
use mpld::generate::{random_graph, random_layout, LayoutParams};
use mpld::geometry::{parse_layout, Layout};
use mpld::pipeline::{finish, layout_to_graph, solve_components, Decomposition, SolverKind, DEFAULT_NODE_LIMIT};
use mpld::stats::{cost_value, RunRecord, RunReport};
use mpld::svg::render_svg;
use mpld::{Alpha, Error, SolverConfig};

#[derive(Parser)]
#[command(name = "mpld", version, about = "Multiple patterning layout decomposition")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a layout or graph and print a JSON report.
    Decompose(DecomposeArgs),
    /// Repeat a decomposition over several seeds and report mean and spread.
    Benchmark(BenchmarkArgs),
    /// Print a random layout or decomposition graph as JSON.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Solver {
    Deappm,
    Exact,
}

#[derive(Args)]
struct InputArgs {
    /// Layout JSON file (`-` for stdin).
    #[arg(long, conflicts_with = "graph", required_unless_present = "graph")]
    layout: Option<PathBuf>,
    /// Decomposition graph JSON file (`-` for stdin).
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Number of masks.
    #[arg(long, default_value_t = 3)]
    masks: usize,
    /// Minimum coloring spacing in nm.
    #[arg(long, default_value_t = 120)]
    min_cs: i64,
    /// Stitch weight as a decimal.
    #[arg(long, default_value = "0.1")]
    alpha: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    pop_size: usize,
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
    #[arg(long, default_value_t = 0.5)]
    inherit_rate: f64,
    #[arg(long, default_value_t = 0.25)]
    refine_rate: f64,
    #[arg(long, value_enum, default_value_t = Solver::Deappm)]
    solver: Solver,
    /// Branch-and-bound node cap for `--solver exact`.
    #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
    node_limit: u64,
    /// Write the decomposition graph JSON here.
    #[arg(long)]
    emit_graph: Option<PathBuf>,
}

#[derive(Args)]
struct DecomposeArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Write an SVG of the colored layout here (needs `--layout`).
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct BenchmarkArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 10)]
    runs: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Layout,
    Graph,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Layout mode: number of rectangles.
    #[arg(long, default_value_t = LayoutParams::default().rects)]
    rects: usize,
    #[arg(long, default_value_t = LayoutParams::default().wire_width)]
    wire_width: i64,
    #[arg(long, default_value_t = LayoutParams::default().track_pitch)]
    track_pitch: i64,
    #[arg(long, default_value_t = LayoutParams::default().min_len)]
    min_len: i64,
    #[arg(long, default_value_t = LayoutParams::default().max_len)]
    max_len: i64,
    #[arg(long, default_value_t = LayoutParams::default().min_space)]
    min_space: i64,
    #[arg(long, default_value_t = LayoutParams::default().max_space)]
    max_space: i64,
    /// Graph mode: vertex count.
    #[arg(long, default_value_t = 0)]
    n: usize,
    /// Graph mode: conflict edge count.
    #[arg(long, default_value_t = 0)]
    ce: usize,
    /// Graph mode: stitch edge count.
    #[arg(long, default_value_t = 0)]
    se: usize,
}

enum Failure {
    Io(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) | Failure::Core(Error::Parse(_) | Error::Invalid(_)) => 2,
            Failure::Core(Error::Contract(_)) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Io(m) => f.write_str(m),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Io(format!("reading stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("reading {}: {e}", path.display())))
}

fn write_output(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("writing {}: {e}", path.display())))
}

struct Problem {
    layout: Option<Layout>,
    dg: DecompositionGraph,
    config: SolverConfig,
    solver: SolverKind,
}

fn load(args: &InputArgs) -> Result<Problem, Failure> {
    let (layout, dg) = match (&args.layout, &args.graph) {
        (Some(path), _) => {
            let layout = parse_layout(&read_input(path)?)?;
            let dg = layout_to_graph(&layout, args.min_cs)?;
            (Some(layout), dg)
        }
        (None, Some(path)) => (None, parse_graph(&read_input(path)?)?),
        (None, None) => unreachable!("clap requires one input"),
    };
    if let Some(path) = &args.emit_graph {
        write_output(path, &dg.to_json())?;
    }
    let config = SolverConfig {
        k: args.masks,
        alpha: Alpha::parse(&args.alpha)?,
        pop_size: args.pop_size,
        max_outer_iters: args.max_iter,
        inherit_rate: args.inherit_rate,
        refine_rate: args.refine_rate,
        seed: args.seed,
        ..SolverConfig::default()
    };
    config.validate()?;
    let solver = match args.solver {
        Solver::Deappm => SolverKind::DeaPpm,
        Solver::Exact => SolverKind::Exact {
            node_limit: args.node_limit,
        },
    };
    Ok(Problem {
        layout,
        dg,
        config,
        solver,
    })
}

/// Runs simplify → solve → recover, timing the component solve only.
fn run_once(p: &Problem, seed: u64) -> Result<(Decomposition, f64), Failure> {
    let config = SolverConfig {
        seed,
        ..p.config.clone()
    };
    let simplified = simplify(&p.dg, config.k)?;
    let start = Instant::now();
    let solved = solve_components(&simplified, &config, p.solver)?;
    let elapsed = start.elapsed().as_secs_f64();
    Ok((finish(&p.dg, &simplified, solved, &config.objective())?, elapsed))
}

fn solver_name(kind: SolverKind) -> &'static str {
    match kind {
        SolverKind::DeaPpm => "deappm",
        SolverKind::Exact { .. } => "exact",
    }
}

#[derive(Serialize)]
struct DecomposeReport<'a> {
    solver: &'a str,
    masks: usize,
    alpha: String,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_cs: Option<i64>,
    vertices: usize,
    conflict_edges: usize,
    stitch_edges: usize,
    components: usize,
    hidden: usize,
    st: u64,
    cn: u64,
    cost: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    proved_optimal: Option<bool>,
    colors: &'a [usize],
    time_s: f64,
}

fn cmd_decompose(args: &DecomposeArgs) -> Result<(), Failure> {
    let p = load(&args.input)?;
    let (d, time_s) = run_once(&p, p.config.seed)?;
    let sol = &d.solution;
    let report = DecomposeReport {
        solver: solver_name(p.solver),
        masks: p.config.k,
        alpha: p.config.alpha.to_string(),
        seed: p.config.seed,
        min_cs: p.layout.as_ref().map(|_| args.input.min_cs),
        vertices: p.dg.n(),
        conflict_edges: p.dg.conflict_edges().len(),
        stitch_edges: p.dg.stitch_edges().len(),
        components: d.components,
        hidden: d.hidden,
        st: sol.cost.stitches,
        cn: sol.cost.conflicts,
        cost: cost_value(sol.cost, &p.config.alpha),
        proved_optimal: matches!(p.solver, SolverKind::Exact { .. }).then_some(d.proved_optimal),
        colors: &sol.colors,
        time_s,
    };
    if let Some(path) = &args.svg {
        write_output(path, &render_svg(&p.dg, &sol.colors, p.config.k)?)?;
    }
    print_json(&report)
}

#[derive(Serialize)]
struct BenchmarkReport<'a> {
    solver: &'a str,
    masks: usize,
    alpha: String,
    vertices: usize,
    #[serde(flatten)]
    report: RunReport,
}

fn cmd_benchmark(args: &BenchmarkArgs) -> Result<(), Failure> {
    if args.runs == 0 {
        return Err(Error::Contract("--runs must be at least 1".into()).into());
    }
    let p = load(&args.input)?;
    let mut records = Vec::with_capacity(args.runs);
    for run in 0..args.runs {
        let seed = p.config.seed.wrapping_add(run as u64);
        let (d, time_s) = run_once(&p, seed)?;
        records.push(RunRecord::new(run, seed, d.solution.cost, &p.config.alpha, time_s));
    }
    let report = RunReport::new(records, &p.config.alpha);

    let mut err = io::stderr().lock();
    let _ = writeln!(
        err,
        "{:>4} {:>8} {:>8} {:>10} {:>10}",
        "run", "st#", "cn#", "cost", "time(s)"
    );
    for r in &report.runs {
        let _ = writeln!(
            err,
            "{:>4} {:>8} {:>8} {:>10} {:>10.3}",
            r.run,
            r.st,
            r.cn,
            format!("{:?}", r.cost),
            r.time_s
        );
    }
    let _ = writeln!(
        err,
        "mean {:>8.2} {:>8.2} {:>10.3} {:>10.3}\nstd  {:>8.2} {:>8.2} {:>10.3} {:>10.3}",
        report.mean_st,
        report.mean_cn,
        report.mean_cost,
        report.mean_time_s,
        report.std_st,
        report.std_cn,
        report.std_cost,
        report.std_time_s
    );

    print_json(&BenchmarkReport {
        solver: solver_name(p.solver),
        masks: p.config.k,
        alpha: p.config.alpha.to_string(),
        vertices: p.dg.n(),
        report,
    })
}

fn cmd_generate(args: &GenerateArgs) -> Result<(), Failure> {
    let text = match args.mode {
        Mode::Layout => random_layout(&LayoutParams {
            rects: args.rects,
            wire_width: args.wire_width,
            track_pitch: args.track_pitch,
            min_len: args.min_len,
            max_len: args.max_len,
            min_space: args.min_space,
            max_space: args.max_space,
            seed: args.seed,
        })?
        .to_json(),
        Mode::Graph => random_graph(args.n, args.ce, args.se, args.seed)?.to_json(),
    };
    println!("{text}");
    Ok(())
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string(value).map_err(|e| Failure::Io(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Decompose(a) => cmd_decompose(a),
        Command::Benchmark(a) => cmd_benchmark(a),
        Command::Generate(a) => cmd_generate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mpld: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
