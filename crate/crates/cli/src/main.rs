//! `capsp`: command-line front end for clustered-apsp.
//!
//! Exit status: 0 on success, 1 when an `--oracle` check disagrees, 2 on
//! any input, parse or I/O error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use clustered_apsp::bench::{run_bench, BenchInstance, BenchOptions};
use clustered_apsp::diskgraph::{build_disk_graph, generate_dense_points, row_tree_from_euclidean_mst};
use clustered_apsp::io;
use clustered_apsp::mixed::{mixed_left_naive, mixed_right_naive};
use clustered_apsp::mst::{compile_traversal, MstMode};
use clustered_apsp::oracle::{bfs_closure, floyd_warshall_edge_classes, floyd_warshall_vertex_weighted};
use clustered_apsp::par::with_threads;
use clustered_apsp::{
    apsp, apsp_bounded_edge_classes, mixed_left, mixed_right, transitive_closure, ApspConfig, ApspStats, Error,
    ScalarMatrix, Side, SidePolicy,
};

const ORACLE_REL_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "capsp", version, about = "All-pairs shortest paths via mixed products over Hamming spanning trees")]
struct Cli {
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Vertex-weighted all-pairs distances of a graph file.
    Apsp(ApspArgs),
    /// Reflexive-transitive closure of a Boolean matrix.
    Closure(ClosureArgs),
    /// Mixed product of a real matrix with a Boolean matrix.
    Mixed(MixedArgs),
    /// Spanning tree over the rows of a Boolean matrix (or a disk graph).
    Mst(MstArgs),
    /// Random bounded-density point set.
    GenDisk(GenDiskArgs),
    /// Clustered versus random op-count benchmark, one JSON line per instance.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MstChoice {
    Exact,
    Lsh,
    Euclid,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideChoice {
    Auto,
    Right,
    Left,
}

impl From<SideChoice> for SidePolicy {
    fn from(s: SideChoice) -> Self {
        match s {
            SideChoice::Auto => SidePolicy::Auto,
            SideChoice::Right => SidePolicy::Right,
            SideChoice::Left => SidePolicy::Left,
        }
    }
}

#[derive(Args)]
struct TreeFlags {
    /// Spanning-tree construction; `euclid` needs point-set input (`--disk`).
    #[arg(long, value_enum)]
    mst: Option<MstChoice>,
    /// LSH approximation parameter (default depends on the input size).
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ApspArgs {
    /// Graph file (point-set file with `--disk`, edge-class file with `--classes`).
    input: PathBuf,
    /// Input is a point set; the graph is its uniform disk graph.
    #[arg(long, conflicts_with = "classes")]
    disk: bool,
    /// Input uses the edge-class graph format.
    #[arg(long)]
    classes: bool,
    #[command(flatten)]
    tree: TreeFlags,
    #[arg(long, value_enum, default_value_t = SideChoice::Auto)]
    side: SideChoice,
    /// Horizon override.
    #[arg(long = "t")]
    t: Option<usize>,
    /// Compare against Floyd-Warshall; exit 1 on disagreement.
    #[arg(long)]
    oracle: bool,
    /// Distance CSV (stdout if omitted).
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Append one JSON stats line to this file.
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Args)]
struct ClosureArgs {
    /// Square Boolean matrix file.
    input: PathBuf,
    #[command(flatten)]
    tree: TreeFlags,
    #[arg(long)]
    oracle: bool,
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Args)]
struct MixedArgs {
    /// Real matrix A (CSV).
    #[arg(long)]
    a: PathBuf,
    /// Boolean matrix B (bit-matrix format).
    #[arg(long)]
    b: PathBuf,
    /// `right`: C = A (x) B; `left`: C = B (x) A.
    #[arg(long, value_enum, default_value_t = SideChoice::Right)]
    side: SideChoice,
    #[command(flatten)]
    tree: TreeFlags,
    /// Use the direct evaluation instead of the tree sweep.
    #[arg(long, conflicts_with = "oracle")]
    naive: bool,
    #[arg(long)]
    oracle: bool,
    /// Output C (CSV, stdout if omitted).
    #[arg(long)]
    c: Option<PathBuf>,
    /// Output W (witness CSV).
    #[arg(long)]
    w: Option<PathBuf>,
}

#[derive(Args)]
struct MstArgs {
    /// Boolean matrix file (point-set file with `--disk`).
    input: PathBuf,
    #[arg(long)]
    disk: bool,
    #[command(flatten)]
    tree: TreeFlags,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenDiskArgs {
    #[arg(long)]
    n: usize,
    /// Maximum points per grid cell.
    #[arg(long, default_value_t = 4)]
    b: usize,
    /// Disk radius.
    #[arg(long, default_value_t = 0.1)]
    r: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Clustered,
    Random,
    Both,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum, default_value_t = Suite::Both)]
    suite: Suite,
    /// Instance sizes.
    #[arg(long, value_delimiter = ',', default_values_t = [256usize, 512])]
    n: Vec<usize>,
    #[arg(long, default_value_t = 8)]
    clusters: usize,
    #[arg(long, default_value_t = 4)]
    noise: usize,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[command(flatten)]
    tree: TreeFlags,
    #[arg(long, value_enum, default_value_t = SideChoice::Auto)]
    side: SideChoice,
    /// Also time the full APSP pipeline on each instance.
    #[arg(long)]
    apsp: bool,
    #[arg(long)]
    oracle: bool,
    /// Append JSON lines here instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

enum Failure {
    Input(String),
    Oracle(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: clustered_apsp::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> CmdResult {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Input(e.to_string())),
    }
}

fn append_json_line(path: Option<&Path>, value: &impl Serialize) -> CmdResult {
    let line = serde_json::to_string(value).expect("stats serialize") + "\n";
    match path {
        Some(p) => fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(p)
            .and_then(|mut f| f.write_all(line.as_bytes()))
            .map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            eprint!("{line}");
            Ok(())
        }
    }
}

fn hamming_mode(tree: &TreeFlags) -> Result<MstMode, Failure> {
    match tree.mst {
        Some(MstChoice::Exact) => Ok(MstMode::Exact),
        Some(MstChoice::Lsh) | None => Ok(MstMode::Lsh { epsilon: tree.epsilon }),
        Some(MstChoice::Euclid) => Err(Failure::Input("--mst euclid requires point-set input (--disk)".into())),
    }
}

fn check_distances(d: &ScalarMatrix, oracle: &ScalarMatrix) -> CmdResult {
    match d.first_mismatch(oracle, ORACLE_REL_TOL) {
        None => Ok(()),
        Some((v, u, a, b)) => Err(Failure::Oracle(format!("D[{v},{u}] = {a}, oracle {b}"))),
    }
}

#[derive(Serialize)]
struct RunStats<'a> {
    command: &'a str,
    input: String,
    #[serde(flatten)]
    stats: &'a ApspStats,
    seconds: f64,
    oracle_agrees: Option<bool>,
}

fn cmd_apsp(args: &ApspArgs) -> CmdResult {
    let text = read(&args.input)?;
    let mut config = ApspConfig {
        mst: MstMode::Exact,
        side: args.side.into(),
        horizon: args.t,
        seed: args.tree.seed,
    };
    let clock = Instant::now();
    let (result, oracle) = if args.classes {
        let g = with_path(&args.input, io::parse_edge_class_graph(&text))?;
        config.mst = hamming_mode(&args.tree)?;
        let r = apsp_bounded_edge_classes(&g, &config)?;
        (r, args.oracle.then(|| floyd_warshall_edge_classes(&g)))
    } else {
        let g = if args.disk {
            let pts = with_path(&args.input, io::parse_point_set(&text))?;
            let g = build_disk_graph(&pts);
            config.mst = match args.tree.mst {
                Some(MstChoice::Euclid) | None => MstMode::Fixed(row_tree_from_euclidean_mst(&g, &pts)?),
                Some(_) => hamming_mode(&args.tree)?,
            };
            g
        } else {
            config.mst = hamming_mode(&args.tree)?;
            with_path(&args.input, io::parse_graph(&text))?
        };
        let r = apsp(&g, &config)?;
        (r, args.oracle.then(|| floyd_warshall_vertex_weighted(&g)))
    };
    let seconds = clock.elapsed().as_secs_f64();
    emit(args.out.as_deref(), &io::format_scalar_csv(&result.distances))?;
    let verdict = oracle.map(|o| check_distances(&result.distances, &o));
    append_json_line(
        args.stats.as_deref(),
        &RunStats {
            command: "apsp",
            input: args.input.display().to_string(),
            stats: &result.stats,
            seconds,
            oracle_agrees: verdict.as_ref().map(Result::is_ok),
        },
    )?;
    verdict.unwrap_or(Ok(()))
}

fn cmd_closure(args: &ClosureArgs) -> CmdResult {
    let text = read(&args.input)?;
    let b = with_path(&args.input, io::parse_bit_matrix(&text))?;
    let config = ApspConfig {
        mst: hamming_mode(&args.tree)?,
        seed: args.tree.seed,
        ..ApspConfig::default()
    };
    let clock = Instant::now();
    let closure = transitive_closure(&b, &config)?;
    let seconds = clock.elapsed().as_secs_f64();
    emit(args.out.as_deref(), &io::format_bit_matrix(&closure))?;
    let verdict = args.oracle.then(|| {
        if bfs_closure(&b)? == closure {
            Ok(())
        } else {
            Err(Failure::Oracle("closure differs from breadth-first search".into()))
        }
    });
    #[derive(Serialize)]
    struct ClosureStats {
        command: &'static str,
        input: String,
        n: usize,
        reachable_pairs: usize,
        seconds: f64,
        oracle_agrees: Option<bool>,
    }
    append_json_line(
        args.stats.as_deref(),
        &ClosureStats {
            command: "closure",
            input: args.input.display().to_string(),
            n: b.rows(),
            reachable_pairs: closure.count_ones(),
            seconds,
            oracle_agrees: verdict.as_ref().map(Result::is_ok),
        },
    )?;
    verdict.unwrap_or(Ok(()))
}

fn cmd_mixed(args: &MixedArgs) -> CmdResult {
    let a = with_path(&args.a, io::parse_scalar_csv(&read(&args.a)?))?;
    let b = with_path(&args.b, io::parse_bit_matrix(&read(&args.b)?))?;
    let side = match args.side {
        SideChoice::Right => Side::Right,
        SideChoice::Left => Side::Left,
        SideChoice::Auto => return Err(Failure::Input("mixed needs --side right or left".into())),
    };
    let naive = || match side {
        Side::Right => mixed_right_naive(&a, &b),
        Side::Left => mixed_left_naive(&b, &a),
    };
    let (result, tree_cost) = if args.naive {
        (naive()?, None)
    } else {
        let rows = match side {
            Side::Right => b.transpose(),
            Side::Left => b.clone(),
        };
        let plan = compile_traversal(&hamming_mode(&args.tree)?.build(&rows, args.tree.seed)?, &rows)?;
        let r = match side {
            Side::Right => mixed_right(&a, &b, &plan)?,
            Side::Left => mixed_left(&b, &a, &plan)?,
        };
        (r, Some(plan.tree_cost()))
    };
    emit(args.c.as_deref(), &io::format_scalar_csv(&result.c))?;
    if let Some(w) = &args.w {
        emit(Some(w), &io::format_witness_csv(&result.w))?;
    }
    let verdict = args.oracle.then(|| {
        let o = naive()?;
        if o.c.bit_eq(&result.c) && o.w == result.w {
            Ok(())
        } else {
            Err(Failure::Oracle("mixed product differs from direct evaluation".into()))
        }
    });
    #[derive(Serialize)]
    struct MixedStats {
        command: &'static str,
        side: Side,
        op_count: u64,
        tree_cost: Option<usize>,
        oracle_agrees: Option<bool>,
    }
    append_json_line(
        None,
        &MixedStats {
            command: "mixed",
            side,
            op_count: result.op_count,
            tree_cost,
            oracle_agrees: verdict.as_ref().map(Result::is_ok),
        },
    )?;
    verdict.unwrap_or(Ok(()))
}

fn cmd_mst(args: &MstArgs) -> CmdResult {
    let text = read(&args.input)?;
    let tree = if args.disk {
        let pts = with_path(&args.input, io::parse_point_set(&text))?;
        let g = build_disk_graph(&pts);
        match args.tree.mst {
            Some(MstChoice::Euclid) | None => row_tree_from_euclidean_mst(&g, &pts)?,
            Some(_) => hamming_mode(&args.tree)?.build(g.adjacency(), args.tree.seed)?,
        }
    } else {
        let m = with_path(&args.input, io::parse_bit_matrix(&text))?;
        hamming_mode(&args.tree)?.build(&m, args.tree.seed)?
    };
    emit(args.out.as_deref(), &io::format_tree(&tree))
}

fn cmd_gen_disk(args: &GenDiskArgs) -> CmdResult {
    let pts = generate_dense_points(args.n, args.b, args.r, args.seed)?;
    emit(args.out.as_deref(), &io::format_point_set(&pts))
}

fn cmd_bench(args: &BenchArgs) -> CmdResult {
    let opts = BenchOptions {
        mst: hamming_mode(&args.tree)?,
        side: args.side.into(),
        seed: args.tree.seed,
        run_apsp: args.apsp,
        oracle: args.oracle,
    };
    let mut all_agree = true;
    for &n in &args.n {
        let mut instances = Vec::new();
        if matches!(args.suite, Suite::Clustered | Suite::Both) {
            instances.push(BenchInstance::clustered(n, args.clusters.min(n), args.noise, args.tree.seed)?);
        }
        if matches!(args.suite, Suite::Random | Suite::Both) {
            instances.push(BenchInstance::random(n, args.density, args.tree.seed));
        }
        for inst in &instances {
            let report = run_bench(inst, &opts)?;
            all_agree &= report.oracle_agrees != Some(false);
            let line = serde_json::to_string(&report).expect("report serializes") + "\n";
            match &args.out {
                Some(p) => append_json_line(Some(p), &report)?,
                None => emit(None, &line)?,
            }
        }
    }
    if all_agree {
        Ok(())
    } else {
        Err(Failure::Oracle("a benchmark instance disagreed with its oracle".into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = with_threads(cli.threads, || match &cli.command {
        Command::Apsp(a) => cmd_apsp(a),
        Command::Closure(a) => cmd_closure(a),
        Command::Mixed(a) => cmd_mixed(a),
        Command::Mst(a) => cmd_mst(a),
        Command::GenDisk(a) => cmd_gen_disk(a),
        Command::Bench(a) => cmd_bench(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Oracle(msg)) => {
            eprintln!("capsp: oracle mismatch: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("capsp: error: {msg}");
            ExitCode::from(2)
        }
    }
}
