//! netmoments: motif counting, graphon simulation, node subsampling,
//! network comparison, and KS-error experiments from the command line.

mod manifest;

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use netmoments::compare::{case1_compare, case2_compare};
use netmoments::experiment::{ks_error_experiment, BRule, ExperimentGrid};
use netmoments::graph::{Graph, LoadOptions};
use netmoments::graphon::{Graphon, GraphonModel, RhoSchedule};
use netmoments::motif::{CountMode, Motif};
use netmoments::subsample::{run_subsampling, MomentSample, SubsampleConfig};
use netmoments::{algebra, motif};

use manifest::{load_config_value, ManifestBuilder};

#[derive(Parser)]
#[command(
    name = "netmoments",
    version,
    about = "Node-subsampling inference for joint network moments"
)]
struct Cli {
    /// Worker thread cap (default: all cores; env NETMOMENTS_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// JSON config (or a previous run manifest); explicit flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Manifest path override (default: <first output>.manifest.json).
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count motif occurrences in an edge-list graph.
    Count(CountArgs),
    /// Network moments U_R(G) of an edge-list graph.
    Moment(CountArgs),
    /// Print the merge table of a motif pair.
    MergeTable(MergeTableArgs),
    /// Sample a graph from a built-in graphon and write its edge list.
    Simulate(SimulateArgs),
    /// Run uniform node subsampling and write the moment matrix.
    Subsample(SubsampleArgs),
    /// Unmatchable-network comparison workflows.
    #[command(subcommand)]
    Compare(CompareCommand),
    /// Experiment harnesses.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
    /// Monte Carlo population moment P_w(R) of a built-in graphon.
    GraphonMoment(GraphonMomentArgs),
}

#[derive(Subcommand)]
enum CompareCommand {
    /// Imbalanced sizes: subsample the large network at the small one's size.
    Case1(Case1Args),
    /// Comparable sizes: subsample both at a common size b.
    Case2(Case2Args),
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// KS distance between subsampling and reference CDFs over a size grid.
    KsError(KsErrorArgs),
}

#[derive(Args, Serialize, Deserialize, Default, Clone)]
struct GraphInputArgs {
    /// Input edge-list file.
    #[arg(long = "in")]
    #[serde(rename = "in")]
    input: Option<PathBuf>,
    /// Smallest legal node id in the input (0 or 1).
    #[arg(long)]
    index_base: Option<u64>,
    /// Drop self-loops instead of rejecting the file.
    #[arg(long)]
    #[serde(default)]
    drop_self_loops: bool,
}

#[derive(Args, Serialize, Deserialize, Default, Clone)]
struct CountArgs {
    #[command(flatten)]
    #[serde(flatten)]
    graph: GraphInputArgs,
    /// Comma-separated motif names or inline edge lists.
    #[arg(long)]
    motifs: Option<String>,
    /// noninduced or induced.
    #[arg(long)]
    mode: Option<CountMode>,
}

#[derive(Args, Serialize, Deserialize, Default, Clone)]
struct MergeTableArgs {
    /// First motif.
    left: Option<String>,
    /// Second motif.
    right: Option<String>,
}

#[derive(Args, Serialize, Deserialize, Default, Clone)]
struct SimulateArgs {
    /// Built-in graphon: 1 or 2.
    #[arg(long)]
    graphon: Option<String>,
    /// Number of nodes.
    #[arg(long)]
    n: Option<usize>,
    /// Sparsity schedule, e.g. "0.25*n^-0.1".
    #[arg(long)]
    rho_schedule: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output edge-list path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize, Default, Clone)]
struct SubsampleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    graph: GraphInputArgs,
    /// Subsample size.
    #[arg(long)]
    b: Option<usize>,
    /// Replication count N_sub.
    #[arg(long)]
    nsub: Option<usize>,
    #[arg(long)]
    motifs: Option<String>,
    #[arg(long)]
    mode: Option<CountMode>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path; a JSON sidecar lands next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize, Default, Clone)]
struct Case1Args {
    /// Edge list of the larger network.
    #[arg(long)]
    large: Option<PathBuf>,
    /// Edge list of the smaller network.
    #[arg(long)]
    small: Option<PathBuf>,
    #[arg(long)]
    motifs: Option<String>,
    #[arg(long)]
    nsub: Option<usize>,
    #[arg(long)]
    mode: Option<CountMode>,
    #[arg(long)]
    seed: Option<u64>,
    /// Conditional-slice bandwidth override.
    #[arg(long)]
    bandwidth: Option<f64>,
    #[arg(long)]
    index_base: Option<u64>,
    #[arg(long)]
    #[serde(default)]
    drop_self_loops: bool,
    /// JSON report path.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Subsample cloud CSV path.
    #[arg(long)]
    cloud: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize, Default, Clone)]
struct Case2Args {
    /// Edge list of the first network.
    #[arg(long)]
    a: Option<PathBuf>,
    /// Edge list of the second network.
    #[arg(long)]
    b: Option<PathBuf>,
    /// Common subsample size.
    #[arg(long)]
    subsample_size: Option<usize>,
    #[arg(long)]
    motifs: Option<String>,
    #[arg(long)]
    nsub: Option<usize>,
    #[arg(long)]
    mode: Option<CountMode>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    index_base: Option<u64>,
    #[arg(long)]
    #[serde(default)]
    drop_self_loops: bool,
    #[arg(long)]
    report: Option<PathBuf>,
    /// Pooled cloud CSV (leading `source` column: a or b).
    #[arg(long)]
    cloud: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize, Default, Clone)]
struct KsErrorArgs {
    #[arg(long)]
    graphon: Option<String>,
    /// Comma-separated host sizes, increasing.
    #[arg(long)]
    n: Option<String>,
    /// n23 (ceil n^(2/3)) or sqrt2 (ceil 2 sqrt n).
    #[arg(long)]
    b_rule: Option<BRule>,
    /// Sparsity schedule, e.g. "0.25*n^-0.1".
    #[arg(long)]
    rho: Option<String>,
    /// Motif sets: comma within a set, semicolon between sets,
    /// e.g. "triangle;twostar,triangle".
    #[arg(long)]
    motif_sets: Option<String>,
    #[arg(long)]
    mode: Option<CountMode>,
    #[arg(long)]
    nsub: Option<usize>,
    /// Independent hosts per n.
    #[arg(long)]
    reps: Option<usize>,
    /// Reference CDF pool size (and its centering pool).
    #[arg(long)]
    reference_pool: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize, Default, Clone)]
struct GraphonMomentArgs {
    #[arg(long)]
    graphon: Option<String>,
    #[arg(long)]
    motif: Option<String>,
    #[arg(long)]
    draws: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

fn main() {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| std::env::var("NETMOMENTS_THREADS").ok().and_then(|v| v.parse().ok()));
    if let Some(t) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    if let Err(err) = run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

/// CLI value, else config-file value, else default.
fn pick<T: Clone>(cli: Option<T>, file: Option<T>, default: Option<T>, name: &str) -> Result<T> {
    cli.or(file)
        .or(default)
        .ok_or_else(|| anyhow!("missing required option --{name} (flag or config file)"))
}

fn merge_from_config<T: for<'de> Deserialize<'de> + Default>(
    config: Option<&PathBuf>,
) -> Result<T> {
    match config {
        Some(path) => {
            let value = load_config_value(path)?;
            Ok(serde_json::from_value(value)?)
        }
        None => Ok(T::default()),
    }
}

fn fresh_seed() -> u64 {
    let nanos = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_nanos() as u64)
        .unwrap_or(0);
    netmoments::rng::mix64(nanos ^ (std::process::id() as u64) << 32)
}

fn load_graph(path: &Path, index_base: u64, drop_self_loops: bool) -> Result<Graph> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let options = LoadOptions { index_base, allow_comments: true, drop_self_loops };
    Ok(Graph::load_edge_list(BufReader::new(file), options)?)
}

fn parse_motifs(spec: &str) -> Result<Vec<Motif>> {
    Ok(Motif::parse_list(spec)?)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut file =
        File::create(path).with_context(|| format!("creating {}", path.display()))?;
    file.write_all(text.as_bytes())?;
    Ok(())
}

fn moment_csv(sample: &MomentSample) -> String {
    let mut out = String::new();
    let names: Vec<&str> = sample.config.motifs.iter().map(Motif::name).collect();
    writeln!(out, "{}", names.join(",")).unwrap();
    for row in sample.y.iter_rows() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", cells.join(",")).unwrap();
    }
    out
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Count(args) => run_count(args, &cli.config, cli.manifest.as_deref(), false),
        Command::Moment(args) => run_count(args, &cli.config, cli.manifest.as_deref(), true),
        Command::MergeTable(args) => run_merge_table(args, &cli.config),
        Command::Simulate(args) => run_simulate(args, &cli.config, cli.manifest.as_deref()),
        Command::Subsample(args) => run_subsample(args, &cli.config, cli.manifest.as_deref()),
        Command::Compare(CompareCommand::Case1(args)) => {
            run_case1(args, &cli.config, cli.manifest.as_deref())
        }
        Command::Compare(CompareCommand::Case2(args)) => {
            run_case2(args, &cli.config, cli.manifest.as_deref())
        }
        Command::Experiment(ExperimentCommand::KsError(args)) => {
            run_ks_error(args, &cli.config, cli.manifest.as_deref())
        }
        Command::GraphonMoment(args) => run_graphon_moment(args, &cli.config),
    }
}

fn run_count(
    args: CountArgs,
    config: &Option<PathBuf>,
    manifest_path: Option<&Path>,
    as_moment: bool,
) -> Result<()> {
    let file: CountArgs = merge_from_config(config.as_ref())?;
    let input = pick(args.graph.input, file.graph.input, None, "in")?;
    let index_base = pick(args.graph.index_base, file.graph.index_base, Some(0), "index-base")?;
    let drop = args.graph.drop_self_loops || file.graph.drop_self_loops;
    let motifs = pick(args.motifs, file.motifs, None, "motifs")?;
    let mode = pick(args.mode, file.mode, Some(CountMode::NonInduced), "mode")?;

    let command = if as_moment { "moment" } else { "count" };
    let mut builder = ManifestBuilder::new(command);
    builder.record_input(&input)?;
    let g = load_graph(&input, index_base, drop)?;
    let motif_list = parse_motifs(&motifs)?;
    for m in &motif_list {
        if as_moment {
            println!("{} {}", m.name(), motif::network_moment(&g, m, mode)?);
        } else {
            println!("{} {}", m.name(), motif::count(&g, m, mode)?);
        }
    }
    let resolved = CountArgs {
        graph: GraphInputArgs {
            input: Some(input),
            index_base: Some(index_base),
            drop_self_loops: drop,
        },
        motifs: Some(motifs),
        mode: Some(mode),
    };
    builder.write(0, serde_json::to_value(&resolved)?, manifest_path)?;
    Ok(())
}

fn run_merge_table(args: MergeTableArgs, config: &Option<PathBuf>) -> Result<()> {
    let file: MergeTableArgs = merge_from_config(config.as_ref())?;
    let left = Motif::parse(&pick(args.left, file.left, None, "left")?)?;
    let right = Motif::parse(&pick(args.right, file.right, None, "right")?)?;
    let table = algebra::merge_table(&left, &right)?;
    println!("# merge table {} x {}", left.name(), right.name());
    println!("q\tc\ts\tedges");
    for entry in &table.entries {
        let edges: Vec<String> =
            entry.merged.edges().iter().map(|(a, b)| format!("{a}-{b}")).collect();
        println!("{}\t{}\t{}\t{}", entry.q, entry.multiplicity, entry.node_count, edges.join(","));
    }
    Ok(())
}

fn run_simulate(
    args: SimulateArgs,
    config: &Option<PathBuf>,
    manifest_path: Option<&Path>,
) -> Result<()> {
    let file: SimulateArgs = merge_from_config(config.as_ref())?;
    let graphon_name = pick(args.graphon, file.graphon, None, "graphon")?;
    let n = pick(args.n, file.n, None, "n")?;
    let rho_text = pick(args.rho_schedule, file.rho_schedule, None, "rho-schedule")?;
    let seed = pick(args.seed, file.seed, Some(fresh_seed()), "seed")?;
    let out = pick(args.out, file.out, None, "out")?;

    let mut builder = ManifestBuilder::new("simulate");
    let graphon = Graphon::builtin(&graphon_name)?;
    let schedule = RhoSchedule::parse(&rho_text)?;
    let rho = schedule.eval(n);
    if !(0.0..=1.0).contains(&rho) {
        bail!("schedule {rho_text:?} gives rho = {rho} at n = {n}, outside [0, 1]");
    }
    let model = GraphonModel::new(graphon, rho);
    let g = model.sample_graph(n, seed);
    write_text(&out, &g.to_canonical_edge_list())?;
    builder.record_output(&out);
    eprintln!(
        "wrote {} nodes, {} edges (rho = {rho}) to {}",
        g.node_count(),
        g.edge_count(),
        out.display()
    );

    let resolved = SimulateArgs {
        graphon: Some(graphon_name),
        n: Some(n),
        rho_schedule: Some(rho_text),
        seed: Some(seed),
        out: Some(out),
    };
    builder.write(seed, serde_json::to_value(&resolved)?, manifest_path)?;
    Ok(())
}

fn run_subsample(
    args: SubsampleArgs,
    config: &Option<PathBuf>,
    manifest_path: Option<&Path>,
) -> Result<()> {
    let file: SubsampleArgs = merge_from_config(config.as_ref())?;
    let input = pick(args.graph.input, file.graph.input, None, "in")?;
    let index_base = pick(args.graph.index_base, file.graph.index_base, Some(0), "index-base")?;
    let drop = args.graph.drop_self_loops || file.graph.drop_self_loops;
    let b = pick(args.b, file.b, None, "b")?;
    let nsub = pick(args.nsub, file.nsub, None, "nsub")?;
    let motifs_text = pick(args.motifs, file.motifs, None, "motifs")?;
    let mode = pick(args.mode, file.mode, Some(CountMode::Induced), "mode")?;
    let seed = pick(args.seed, file.seed, Some(fresh_seed()), "seed")?;
    let out = pick(args.out, file.out, None, "out")?;

    let mut builder = ManifestBuilder::new("subsample");
    builder.record_input(&input)?;
    let g = load_graph(&input, index_base, drop)?;
    let motifs = parse_motifs(&motifs_text)?;
    let sample = run_subsampling(&g, &SubsampleConfig { b, n_sub: nsub, motifs, mode, seed })?;
    write_text(&out, &moment_csv(&sample))?;
    builder.record_output(&out);

    let sidecar_path = out.with_extension("json");
    let sidecar = serde_json::json!({
        "rho_hat": sample.rho_hat,
        "host_moments": sample.host_moments,
        "host_nodes": g.node_count(),
        "host_edges": g.edge_count(),
        "b": b,
        "nsub": nsub,
        "mode": mode,
        "motifs": sample.config.motifs.iter().map(|m| m.name().to_string()).collect::<Vec<_>>(),
        "seed": seed,
        "replicate_seed_rule": "splitmix64(seed, replicate_index)",
        "diagnostics": diagnostics(&g, &sample),
    });
    write_text(&sidecar_path, &(serde_json::to_string_pretty(&sidecar)? + "\n"))?;
    builder.record_output(&sidecar_path);

    let resolved = SubsampleArgs {
        graph: GraphInputArgs {
            input: Some(input),
            index_base: Some(index_base),
            drop_self_loops: drop,
        },
        b: Some(b),
        nsub: Some(nsub),
        motifs: Some(motifs_text),
        mode: Some(mode),
        seed: Some(seed),
        out: Some(out),
    };
    builder.write(seed, serde_json::to_value(&resolved)?, manifest_path)?;
    Ok(())
}

/// Heuristic assumption diagnostics; printed, never pass/fail.
fn diagnostics(g: &Graph, sample: &MomentSample) -> serde_json::Value {
    let rho = sample.rho_hat;
    let b = sample.config.b as f64;
    let signal: Vec<serde_json::Value> = sample
        .config
        .motifs
        .iter()
        .map(|m| {
            let e = m.edge_count() as i32;
            serde_json::json!({
                "motif": m.name(),
                "b_rho_2r": b * rho.powi(2 * e),
            })
        })
        .collect();
    serde_json::json!({
        "rho_hat": rho,
        "n": g.node_count(),
        "b_over_n": b / g.node_count() as f64,
        "signal_scale": signal,
    })
}

fn run_case1(
    args: Case1Args,
    config: &Option<PathBuf>,
    manifest_path: Option<&Path>,
) -> Result<()> {
    let file: Case1Args = merge_from_config(config.as_ref())?;
    let large = pick(args.large, file.large, None, "large")?;
    let small = pick(args.small, file.small, None, "small")?;
    let motifs_text = pick(args.motifs, file.motifs, None, "motifs")?;
    let nsub = pick(args.nsub, file.nsub, None, "nsub")?;
    let mode = pick(args.mode, file.mode, Some(CountMode::Induced), "mode")?;
    let seed = pick(args.seed, file.seed, Some(fresh_seed()), "seed")?;
    let bandwidth = args.bandwidth.or(file.bandwidth);
    let index_base = pick(args.index_base, file.index_base, Some(0), "index-base")?;
    let drop = args.drop_self_loops || file.drop_self_loops;
    let report_path = pick(args.report, file.report, None, "report")?;
    let cloud_path = args.cloud.or(file.cloud);

    let mut builder = ManifestBuilder::new("compare case1");
    builder.record_input(&large)?;
    builder.record_input(&small)?;
    let g_large = load_graph(&large, index_base, drop)?;
    let g_small = load_graph(&small, index_base, drop)?;
    let motifs = parse_motifs(&motifs_text)?;
    let outcome = case1_compare(&g_large, &g_small, &motifs, nsub, mode, seed, bandwidth)?;

    write_text(&report_path, &(serde_json::to_string_pretty(&outcome.report)? + "\n"))?;
    builder.record_output(&report_path);
    if let Some(cloud) = &cloud_path {
        write_text(cloud, &moment_csv(&outcome.cloud))?;
        builder.record_output(cloud);
    }

    let resolved = Case1Args {
        large: Some(large),
        small: Some(small),
        motifs: Some(motifs_text),
        nsub: Some(nsub),
        mode: Some(mode),
        seed: Some(seed),
        bandwidth,
        index_base: Some(index_base),
        drop_self_loops: drop,
        report: Some(report_path),
        cloud: cloud_path,
    };
    builder.write(seed, serde_json::to_value(&resolved)?, manifest_path)?;
    Ok(())
}

fn run_case2(
    args: Case2Args,
    config: &Option<PathBuf>,
    manifest_path: Option<&Path>,
) -> Result<()> {
    let file: Case2Args = merge_from_config(config.as_ref())?;
    let a_path = pick(args.a, file.a, None, "a")?;
    let b_path = pick(args.b, file.b, None, "b")?;
    let b_size = pick(args.subsample_size, file.subsample_size, None, "subsample-size")?;
    let motifs_text = pick(args.motifs, file.motifs, None, "motifs")?;
    let nsub = pick(args.nsub, file.nsub, None, "nsub")?;
    let mode = pick(args.mode, file.mode, Some(CountMode::Induced), "mode")?;
    let seed = pick(args.seed, file.seed, Some(fresh_seed()), "seed")?;
    let index_base = pick(args.index_base, file.index_base, Some(0), "index-base")?;
    let drop = args.drop_self_loops || file.drop_self_loops;
    let report_path = pick(args.report, file.report, None, "report")?;
    let cloud_path = args.cloud.or(file.cloud);

    let mut builder = ManifestBuilder::new("compare case2");
    builder.record_input(&a_path)?;
    builder.record_input(&b_path)?;
    let g_a = load_graph(&a_path, index_base, drop)?;
    let g_b = load_graph(&b_path, index_base, drop)?;
    let motifs = parse_motifs(&motifs_text)?;
    let outcome = case2_compare(&g_a, &g_b, b_size, &motifs, nsub, mode, seed)?;

    write_text(&report_path, &(serde_json::to_string_pretty(&outcome.report)? + "\n"))?;
    builder.record_output(&report_path);
    if let Some(cloud) = &cloud_path {
        let mut text = String::new();
        let names: Vec<&str> = motifs.iter().map(Motif::name).collect();
        writeln!(text, "source,{}", names.join(",")).unwrap();
        for (label, sample) in [("a", &outcome.cloud_a), ("b", &outcome.cloud_b)] {
            for row in sample.y.iter_rows() {
                let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                writeln!(text, "{label},{}", cells.join(",")).unwrap();
            }
        }
        write_text(cloud, &text)?;
        builder.record_output(cloud);
    }

    let resolved = Case2Args {
        a: Some(a_path),
        b: Some(b_path),
        subsample_size: Some(b_size),
        motifs: Some(motifs_text),
        nsub: Some(nsub),
        mode: Some(mode),
        seed: Some(seed),
        index_base: Some(index_base),
        drop_self_loops: drop,
        report: Some(report_path),
        cloud: cloud_path,
    };
    builder.write(seed, serde_json::to_value(&resolved)?, manifest_path)?;
    Ok(())
}

fn parse_motif_sets(spec: &str) -> Result<Vec<Vec<Motif>>> {
    spec.split(';').map(parse_motifs).collect()
}

fn run_ks_error(
    args: KsErrorArgs,
    config: &Option<PathBuf>,
    manifest_path: Option<&Path>,
) -> Result<()> {
    let file: KsErrorArgs = merge_from_config(config.as_ref())?;
    let graphon_name = pick(args.graphon, file.graphon, None, "graphon")?;
    let n_text = pick(args.n, file.n, None, "n")?;
    let b_rule = pick(args.b_rule, file.b_rule, Some(BRule::N23), "b-rule")?;
    let rho_text = pick(args.rho, file.rho, None, "rho")?;
    let motif_sets_text = pick(
        args.motif_sets,
        file.motif_sets,
        Some("twostar;triangle;threestar;twostar,triangle".to_string()),
        "motif-sets",
    )?;
    let mode = pick(args.mode, file.mode, Some(CountMode::NonInduced), "mode")?;
    let nsub = pick(args.nsub, file.nsub, Some(500), "nsub")?;
    let reps = pick(args.reps, file.reps, Some(10), "reps")?;
    let reference_pool = pick(args.reference_pool, file.reference_pool, Some(2000), "reference-pool")?;
    let seed = pick(args.seed, file.seed, Some(fresh_seed()), "seed")?;
    let out = pick(args.out, file.out, None, "out")?;

    let n_values: Vec<usize> = n_text
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| anyhow!("bad n value {t:?}")))
        .collect::<Result<_>>()?;
    let grid = ExperimentGrid {
        graphon: Graphon::builtin(&graphon_name)?,
        n_values,
        b_rule,
        rho: RhoSchedule::parse(&rho_text)?,
        motif_sets: parse_motif_sets(&motif_sets_text)?,
        mode,
        n_sub: nsub,
        replicates: reps,
        reference_pool,
        seed,
    };

    let mut builder = ManifestBuilder::new("experiment ks-error");
    let rows = ks_error_experiment(&grid)?;
    let mut text = String::from("graphon,n,b,rho,motif_set,mean_ks,se_ks,runtime_s\n");
    for row in &rows {
        writeln!(
            text,
            "{},{},{},{},{},{},{},{:.3}",
            row.graphon, row.n, row.b, row.rho, row.motif_set, row.mean_ks, row.se_ks,
            row.runtime_s
        )
        .unwrap();
    }
    write_text(&out, &text)?;
    builder.record_output(&out);
    eprintln!("wrote {} rows to {}", rows.len(), out.display());

    let resolved = KsErrorArgs {
        graphon: Some(graphon_name),
        n: Some(n_text),
        b_rule: Some(b_rule),
        rho: Some(rho_text),
        motif_sets: Some(motif_sets_text),
        mode: Some(mode),
        nsub: Some(nsub),
        reps: Some(reps),
        reference_pool: Some(reference_pool),
        seed: Some(seed),
        out: Some(out),
    };
    builder.write(seed, serde_json::to_value(&resolved)?, manifest_path)?;
    Ok(())
}

fn run_graphon_moment(args: GraphonMomentArgs, config: &Option<PathBuf>) -> Result<()> {
    let file: GraphonMomentArgs = merge_from_config(config.as_ref())?;
    let graphon_name = pick(args.graphon, file.graphon, None, "graphon")?;
    let motif_text = pick(args.motif, file.motif, None, "motif")?;
    let draws = pick(args.draws, file.draws, Some(2_000_000), "draws")?;
    let seed = pick(args.seed, file.seed, Some(fresh_seed()), "seed")?;

    let graphon = Graphon::builtin(&graphon_name)?;
    let m = Motif::parse(&motif_text)?;
    let est = netmoments::graphon::population_moment(&graphon, &m, draws, seed);
    let scaled = netmoments::graphon::theoretical_mean(&graphon, &m, draws, seed);
    println!("P_w({}) {} se {} draws {}", m.name(), est.value, est.std_error, est.n_draws);
    println!("limit_mean({}) {} se {}", m.name(), scaled.value, scaled.std_error);
    Ok(())
}
