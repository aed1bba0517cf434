//! Command-line front end: partition, separator, edgepartition, map,
//! generate and evaluate. Reports are machine-readable key=value lines
//! on stdout; solution files go to --output.

use clap::{Args, Parser, Subcommand};
use partix::bagen::{ba_generate, BaParams};
use partix::error::Error;
use partix::graph::{block_weight_bound, cut_value, Graph, Partition};
use partix::io;
use partix::mapping::{comm_cost, top_down_map, HierarchySpec, ProcessMapping};
use partix::multilevel::{self, PartitionConfig};
use partix::separator::{multilevel_separator, Separator, V1, V2};
use partix::spac::{edge_partition, eval_edge_partition, EdgePartition};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "partix", version, about = "Multilevel graph partitioning toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Input graph in METIS format.
    graph: PathBuf,
    /// Write the solution file here.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Label propagation rounds.
    #[arg(long, default_value_t = 3)]
    rounds: usize,
}

#[derive(Subcommand)]
enum Command {
    /// k-way node partition minimizing the edge cut.
    Partition {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.03)]
        eps: f64,
    },
    /// Balanced node separator.
    Separator {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, default_value_t = 0.3)]
        eps: f64,
    },
    /// Edge partition via the split-and-connect graph.
    Edgepartition {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.03)]
        eps: f64,
    },
    /// Map a communication graph onto a machine hierarchy.
    Map {
        #[command(flatten)]
        common: CommonOpts,
        /// Hierarchy factors a1:a2:...:ak, a1 innermost.
        #[arg(long)]
        hierarchy: String,
    },
    /// Generate Barabási–Albert edges.
    Generate {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 0)]
        n0: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Edge index range lo:hi (default: all).
        #[arg(long)]
        range: Option<String>,
        /// Dedupe and drop self-loops, emitting METIS instead of an edge list.
        #[arg(long)]
        simplify: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Recompute metrics for a solution file.
    Evaluate {
        /// Input graph in METIS format.
        graph: PathBuf,
        #[arg(long)]
        partition: Option<PathBuf>,
        #[arg(long)]
        separator: Option<PathBuf>,
        #[arg(long)]
        edgepartition: Option<PathBuf>,
        #[arg(long)]
        mapping: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0.03)]
        eps: f64,
        #[arg(long)]
        hierarchy: Option<String>,
    },
}

fn main() -> ExitCode {
    // clap's own usage-error exit code is 2, which this tool reserves
    // for infeasible instances; remap flag errors to 1.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
        Err(e) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Infeasible(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn write_output(path: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    if let Some(path) = path {
        std::fs::write(path, content)?;
    }
    Ok(())
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Partition { common, k, eps } => {
            if k < 1 {
                return Err(Error::InvalidInput("--k must be >= 1".into()));
            }
            let g = io::load_metis(&common.graph)?;
            let mut cfg = PartitionConfig::new(k, eps).with_seed(common.seed);
            cfg.rounds = common.rounds;
            let p = multilevel::partition(&g, &cfg)?;
            write_output(&common.output, &io::write_values(&p.assignment))?;
            report_partition(&g, &p);
        }
        Command::Separator { common, eps } => {
            let g = io::load_metis(&common.graph)?;
            let mut cfg = PartitionConfig::new(2, eps).with_seed(common.seed);
            cfg.rounds = common.rounds;
            let sep = multilevel_separator(&g, eps, &cfg)?;
            let labels: Vec<u32> = sep.assignment.iter().map(|&l| l as u32).collect();
            write_output(&common.output, &io::write_values(&labels))?;
            report_separator(&g, &sep, eps);
        }
        Command::Edgepartition { common, k, eps } => {
            if k < 1 {
                return Err(Error::InvalidInput("--k must be >= 1".into()));
            }
            let g = io::load_metis(&common.graph)?;
            let mut cfg = PartitionConfig::new(k, eps).with_seed(common.seed);
            cfg.rounds = common.rounds;
            let ep = edge_partition(&g, &cfg)?;
            write_output(&common.output, &io::write_values(&ep.edge_assignment))?;
            report_edge_partition(&g, &ep);
        }
        Command::Map { common, hierarchy } => {
            let g = io::load_metis(&common.graph)?;
            let spec = HierarchySpec::parse(&hierarchy)?;
            let cfg = PartitionConfig::new(1, 0.0).with_seed(common.seed);
            let m = top_down_map(&g, &spec, &cfg)?;
            write_output(&common.output, &io::write_values(&m.sigma))?;
            println!("cost={}", comm_cost(&g, &m, &spec));
            println!("pes={}", spec.num_pes());
        }
        Command::Generate {
            n,
            d,
            n0,
            seed,
            range,
            simplify,
            output,
        } => {
            let params = BaParams::new(n, d, n0, seed)?;
            let (lo, hi) = match range {
                Some(text) => {
                    let (a, b) = text.split_once(':').ok_or_else(|| {
                        Error::InvalidInput("--range must be lo:hi".into())
                    })?;
                    let lo = a.parse().map_err(|_| {
                        Error::InvalidInput(format!("bad --range bound `{a}`"))
                    })?;
                    let hi = b.parse().map_err(|_| {
                        Error::InvalidInput(format!("bad --range bound `{b}`"))
                    })?;
                    (lo, hi)
                }
                None => (0, params.num_edges()),
            };
            let edges = ba_generate(&params, lo, hi)?;
            let text = if simplify {
                let unit: Vec<(usize, usize, i64)> = edges
                    .iter()
                    .map(|&(u, v)| (u as usize, v as usize, 1))
                    .collect();
                // from_edges merges parallels by summing weights; rebuild
                // with unit weights so the simplified graph is unweighted.
                let merged = Graph::from_edges(n as usize, &unit, None)?;
                let simple: Vec<(usize, usize, i64)> =
                    merged.edges().map(|(u, v, _)| (u, v, 1)).collect();
                let g = Graph::from_edges(n as usize, &simple, None)?;
                io::write_metis(&g)
            } else {
                let mut out = String::new();
                for (u, v) in &edges {
                    out.push_str(&format!("{u} {v}\n"));
                }
                out
            };
            match output {
                Some(path) => {
                    std::fs::write(path, &text)?;
                    println!("edges={}", hi - lo);
                }
                None => print!("{text}"),
            }
        }
        Command::Evaluate {
            graph,
            partition,
            separator,
            edgepartition,
            mapping,
            k,
            eps,
            hierarchy,
        } => {
            let g = io::load_metis(&graph)?;
            let chosen = [&partition, &separator, &edgepartition, &mapping]
                .iter()
                .filter(|o| o.is_some())
                .count();
            if chosen != 1 {
                return Err(Error::InvalidInput(
                    "evaluate needs exactly one of --partition/--separator/--edgepartition/--mapping"
                        .into(),
                ));
            }
            if let Some(path) = partition {
                let k = k.ok_or_else(|| Error::InvalidInput("--partition needs --k".into()))?;
                let values = io::parse_values(&std::fs::read_to_string(path)?, k as u32, "block")?;
                if values.len() != g.n() {
                    return Err(Error::InvalidInput(format!(
                        "partition file has {} lines, graph has {} nodes",
                        values.len(),
                        g.n()
                    )));
                }
                let p = Partition::from_assignment(&g, k, eps, values);
                report_partition(&g, &p);
            } else if let Some(path) = separator {
                let values = io::parse_values(&std::fs::read_to_string(path)?, 3, "label")?;
                if values.len() != g.n() {
                    return Err(Error::InvalidInput(format!(
                        "separator file has {} lines, graph has {} nodes",
                        values.len(),
                        g.n()
                    )));
                }
                let sep = Separator::from_assignment(&g, values.iter().map(|&v| v as u8).collect());
                report_separator(&g, &sep, eps);
            } else if let Some(path) = edgepartition {
                let k = k.ok_or_else(|| Error::InvalidInput("--edgepartition needs --k".into()))?;
                let values = io::parse_values(&std::fs::read_to_string(path)?, k as u32, "block")?;
                if values.len() != g.m() {
                    return Err(Error::InvalidInput(format!(
                        "edge partition file has {} lines, graph has {} edges",
                        values.len(),
                        g.m()
                    )));
                }
                let mut block_edges = vec![0usize; k];
                for &b in &values {
                    block_edges[b as usize] += 1;
                }
                let ep = EdgePartition {
                    k,
                    edge_assignment: values,
                    block_edges,
                    cut_dominant_edges: 0,
                };
                report_edge_partition(&g, &ep);
            } else if let Some(path) = mapping {
                let spec = HierarchySpec::parse(&hierarchy.ok_or_else(|| {
                    Error::InvalidInput("--mapping needs --hierarchy".into())
                })?)?;
                let values = io::parse_values(
                    &std::fs::read_to_string(path)?,
                    spec.num_pes() as u32,
                    "pe",
                )?;
                if values.len() != g.n() {
                    return Err(Error::InvalidInput(format!(
                        "mapping file has {} lines, graph has {} tasks",
                        values.len(),
                        g.n()
                    )));
                }
                let m = ProcessMapping { sigma: values };
                println!("cost={}", comm_cost(&g, &m, &spec));
                println!("pes={}", spec.num_pes());
            }
        }
    }
    Ok(())
}

fn report_partition(g: &Graph, p: &Partition) {
    println!("cut={}", cut_value(g, p));
    println!("k={}", p.k);
    println!("max_block_weight={}", p.max_block_weight());
    println!("bound={}", p.bound(g));
    println!("balanced={}", p.is_balanced(g));
}

fn report_separator(g: &Graph, sep: &Separator, eps: f64) {
    println!("separator_weight={}", sep.separator_weight());
    println!("v1_weight={}", sep.weights[V1 as usize]);
    println!("v2_weight={}", sep.weights[V2 as usize]);
    println!("bound={}", block_weight_bound(g.total_node_weight(), 2, eps));
    println!("valid={}", sep.is_valid(g));
    println!("balanced={}", sep.is_balanced(g, eps));
}

fn report_edge_partition(g: &Graph, ep: &EdgePartition) {
    let (rf, max_block) = eval_edge_partition(g, ep);
    println!("replication_factor={rf:.6}");
    println!("max_block_edges={max_block}");
}
