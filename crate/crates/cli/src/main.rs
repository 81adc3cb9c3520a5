use std::fmt::Display;
use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use stokesflag::bipartite::{
    apply_move, configuration_dimension_with, configuration_from_connection, dynkin_to_bipartite, is_minimal,
    random_connection, BipartiteGraph, DimensionMode, MoveId,
};
use stokesflag::flags::{circuit_classify, CircuitClass};
use stokesflag::growth::stokes_word_with_retries;
use stokesflag::lattice::newton_polygon;
use stokesflag::poly::DynkinType;
use stokesflag::render::{graph_dot, growth_svg, polygon_svg};
use stokesflag::report::PipelineInput;
use stokesflag::words::{braid_equivalent, CyclicWord, DEFAULT_NODE_LIMIT};
use stokesflag::{run_pipeline, Error};

#[derive(Parser)]
#[command(
    name = "stokesflag",
    version,
    about = "Stokes words and point configurations of ADE symbols"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Picture {
    Polygon,
    Growth,
    Graph,
}

#[derive(Subcommand)]
enum Command {
    /// Newton polygon, growth diagram and Stokes word of a preset or polynomial.
    Analyze {
        /// Preset name (A5, D4, E8, ..) or polynomial text in x and p.
        input: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4096)]
        resolution: usize,
        /// Exchange x and p before analysing.
        #[arg(long)]
        swap: bool,
    },
    /// Bipartite graph of a Dynkin diagram with its configuration dimension.
    Dynkin {
        /// Dynkin type such as A4, D5 or E8.
        dynkin: String,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Majority vote over trials instead of the largest rank.
        #[arg(long)]
        symbolic: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Realize the point configuration of a random connection.
    Config {
        /// Dynkin type or path to a graph JSON file.
        graph: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Decide whether two cyclic words are related by braid and commutation moves.
    BraidEq {
        left: String,
        right: String,
        /// Number of strands; inferred from the letters when omitted.
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
        node_limit: usize,
    },
    /// Apply move 1, 1', 2 or 2' to a graph.
    Move {
        /// Dynkin type or path to a graph JSON file.
        graph: String,
        /// One of 1, 1', 2, 2'.
        #[arg(long = "move")]
        id: String,
        /// Vertex label for moves 1 and 1'; `P,R` for moves 2 and 2'.
        #[arg(long)]
        at: String,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Draw a Newton polygon or growth diagram (SVG) or a graph (DOT).
    Render {
        /// Preset or polynomial; Dynkin type or graph file for `--what graph`.
        input: String,
        #[arg(long, value_enum, default_value_t = Picture::Polygon)]
        what: Picture,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4096)]
        resolution: usize,
        #[arg(long)]
        swap: bool,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

fn domain<E: Into<Error>>(e: E) -> Failure {
    Failure::from(e.into())
}

fn usage(e: impl Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn load_graph(source: &str) -> Result<BipartiteGraph, Failure> {
    if let Ok(t) = source.parse::<DynkinType>() {
        return dynkin_to_bipartite(t).map_err(domain);
    }
    let text = fs::read_to_string(source).map_err(|e| usage(format!("{source}: {e}")))?;
    let json: stokesflag::bipartite::GraphJson =
        serde_json::from_str(&text).map_err(|e| usage(format!("{source}: {e}")))?;
    BipartiteGraph::from_json(&json).map_err(domain)
}

fn mode(symbolic: bool) -> DimensionMode {
    if symbolic {
        DimensionMode::Majority
    } else {
        DimensionMode::Max
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Analyze {
            input,
            seed,
            resolution,
            swap,
        } => {
            let report = run_pipeline(&input, seed, resolution, swap)?;
            Ok(to_json(&report))
        }
        Command::Dynkin {
            dynkin,
            trials,
            seed,
            symbolic,
            format,
        } => {
            let t: DynkinType = dynkin.parse().map_err(usage)?;
            let g = dynkin_to_bipartite(t).map_err(domain)?;
            match format {
                Format::Dot => Ok(graph_dot(&g)),
                Format::Svg => Err(usage("dynkin supports --format json or dot")),
                Format::Json => Ok(to_json(&json!({
                    "type": t,
                    "white": g.white_count(),
                    "black": g.black_count(),
                    "dimension": configuration_dimension_with(&g, trials, seed, mode(symbolic)),
                    "minimal": is_minimal(&g, trials),
                    "graph": g,
                }))),
            }
        }
        Command::Config { graph, seed } => {
            let g = load_graph(&graph)?;
            let config = configuration_from_connection(&random_connection(&g, seed)).map_err(domain)?;
            let mut circuits = true;
            for nb in g.black_neighbourhoods() {
                let pts: Vec<_> = nb.iter().map(|&w| config.points()[w].clone()).collect();
                circuits &= circuit_classify(&pts).map_err(domain)? == CircuitClass::Circuit;
            }
            let groups: Vec<Vec<String>> = config
                .collinear_groups()
                .into_iter()
                .map(|s| s.into_iter().collect())
                .collect();
            Ok(to_json(&json!({
                "seed": seed,
                "configuration": config,
                "circuits_valid": circuits,
                "collinear_groups": groups,
            })))
        }
        Command::BraidEq {
            left,
            right,
            rank,
            node_limit,
        } => {
            let (l, r) = parse_pair(&left, &right, rank)?;
            let verdict = braid_equivalent(&l, &r, node_limit).map_err(domain)?;
            Ok(to_json(&json!({
                "left": l.canonical().to_string(),
                "right": r.canonical().to_string(),
                "abelianization": [l.abelianization(), r.abelianization()],
                "result": verdict,
            })))
        }
        Command::Move {
            graph,
            id,
            at,
            trials,
            seed,
            format,
        } => {
            let g = load_graph(&graph)?;
            let id: MoveId = id.parse().map_err(usage)?;
            let h = apply_move(&g, id, &at).map_err(domain)?;
            match format {
                Format::Dot => Ok(graph_dot(&h)),
                Format::Svg => Err(usage("move supports --format json or dot")),
                Format::Json => Ok(to_json(&json!({
                    "move": id.to_string(),
                    "at": at,
                    "dimension_before": configuration_dimension_with(&g, trials, seed, DimensionMode::Max),
                    "dimension_after": configuration_dimension_with(&h, trials, seed, DimensionMode::Max),
                    "graph": h,
                }))),
            }
        }
        Command::Render {
            input,
            what,
            seed,
            resolution,
            swap,
        } => match what {
            Picture::Graph => Ok(graph_dot(&load_graph(&input)?)),
            Picture::Polygon | Picture::Growth => {
                let mut poly = PipelineInput::detect(&input).polynomial()?;
                if swap {
                    poly = poly.swap_variables();
                }
                let polygon = newton_polygon(&poly).map_err(domain)?;
                if what == Picture::Polygon {
                    return Ok(polygon_svg(&polygon));
                }
                let (diagram, _, _) = stokes_word_with_retries(&polygon, seed, resolution).map_err(domain)?;
                Ok(growth_svg(&diagram))
            }
        },
    }
}

fn parse_pair(left: &str, right: &str, rank: Option<usize>) -> Result<(CyclicWord, CyclicWord), Failure> {
    let l = CyclicWord::parse(left, rank).map_err(usage)?;
    let r = CyclicWord::parse(right, rank).map_err(usage)?;
    let n = l.rank().max(r.rank());
    let widen = |w: &CyclicWord| CyclicWord::new(w.letters().to_vec(), n).map_err(usage);
    Ok((widen(&l)?, widen(&r)?))
}

fn to_json(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
