//! `ktcol`: generate graphs, check minors, colour, verify, run scaling experiments.
//!
//! Exit codes: 0 ok, 1 the checked property fails, 2 undecided within the
//! search budget, 3 error (a JSON error document goes to stderr).

mod experiment;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ktcol_core::algorithm::Stats;
use ktcol_core::generators::{random_lists, Family, GenSpec};
use ktcol_core::io::{colouring_from_str, colouring_to_string, graph_from_str, graph_to_string, lists_from_str, lists_to_string};
use ktcol_core::minors::{clique_minor, is_kt_minor_free, is_locally_minor_free, LocalFreeness, MinorFreeness, DEFAULT_BUDGET};
use ktcol_core::{distributed_list_colour, verify_colouring, AlgoParams, Error, Graph, Verdict};

const EXIT_FAILS: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "ktcol", version, about = "List colouring of graphs without a fixed clique minor")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph (and optionally random lists for it).
    Gen(GenArgs),
    /// Minor-freeness checks.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Colour a graph with the distributed algorithm, verify, write.
    Color(ColorArgs),
    /// Verify a colouring against a graph and lists.
    Verify(VerifyArgs),
    /// Run an experiment described by a config file.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Necklace,
    Sp,
    Planar,
    WagnerSum,
    V8,
    Tree,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Necklace => Family::Necklace,
            FamilyArg::Sp => Family::Sp,
            FamilyArg::Planar => Family::Planar,
            FamilyArg::WagnerSum => Family::WagnerSum,
            FamilyArg::V8 => Family::V8,
            FamilyArg::Tree => Family::Tree,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Vertex count (necklace: number of copies).
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Clique order for necklaces.
    #[arg(long, default_value_t = 4)]
    t: usize,
    /// Required for random families.
    #[arg(long)]
    seed: Option<u64>,
    /// Vertices per planar block (wagner-sum).
    #[arg(long, default_value_t = 12)]
    block_size: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write random lists of this size.
    #[arg(long, requires = "lists_out")]
    lists: Option<usize>,
    /// Colour universe for --lists (default twice the list size).
    #[arg(long)]
    universe: Option<u32>,
    #[arg(long, requires = "lists")]
    lists_out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Whether the graph has no K_t minor.
    MinorFree {
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..=5))]
        t: u32,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        graph: PathBuf,
    },
    /// Whether every ball of the given radius has no K_t minor.
    Local {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        radius: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        graph: PathBuf,
    },
}

#[derive(Args)]
struct ColorArgs {
    #[arg(long)]
    lists: PathBuf,
    /// List size the algorithm relies on; 3..=5 selects tuned defaults.
    #[arg(long)]
    c: u32,
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long)]
    size_cap: Option<usize>,
    #[arg(long)]
    k_base: Option<usize>,
    #[arg(long)]
    contact_degree: Option<usize>,
    #[arg(long)]
    max_levels: Option<usize>,
    graph: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    lists: Option<PathBuf>,
    #[arg(long)]
    coloring: PathBuf,
    graph: PathBuf,
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Rounds against n over a list of sizes.
    Scaling {
        #[arg(long)]
        config: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_graph(path: &Path) -> Result<Graph> {
    let (g, _) = graph_from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    Ok(g)
}

fn gen(a: GenArgs) -> Result<u8> {
    let family = Family::from(a.family);
    let random = !matches!(family, Family::Necklace | Family::V8);
    if random && a.seed.is_none() {
        bail!(Error::InvalidParameter(format!("--seed is required for the {} family", family.name())));
    }
    let mut spec = GenSpec::new(family, a.n, a.seed.unwrap_or(0));
    spec.t = a.t;
    spec.block_size = a.block_size;
    let (g, meta) = spec.generate()?;
    let text = graph_to_string(&g, Some(&meta));
    match &a.output {
        Some(p) => write(p, &text)?,
        None => println!("{text}"),
    }
    if let (Some(k), Some(path)) = (a.lists, &a.lists_out) {
        let universe = a.universe.unwrap_or(2 * k as u32);
        let l = random_lists(&g, k, universe, a.seed.unwrap_or(0))?;
        write(path, &lists_to_string(&l))?;
    }
    Ok(0)
}

fn check(c: CheckCommand) -> Result<u8> {
    match c {
        CheckCommand::MinorFree { t, budget, graph } => {
            let g = load_graph(&graph)?;
            let t = t as usize;
            let verdict = is_kt_minor_free(&g, t, budget)?;
            let witness = match verdict {
                MinorFreeness::HasMinor => clique_minor(&g, t, budget)?.model().cloned(),
                _ => None,
            };
            let (name, code) = match verdict {
                MinorFreeness::Free => ("free", 0),
                MinorFreeness::HasMinor => ("has-minor", EXIT_FAILS),
                MinorFreeness::Unknown => ("unknown", EXIT_UNKNOWN),
            };
            println!("{}", json!({"t": t, "verdict": name, "witness": witness}));
            Ok(code)
        }
        CheckCommand::Local { t, radius, budget, graph } => {
            let g = load_graph(&graph)?;
            let out = is_locally_minor_free(&g, t, radius, budget)?;
            let (doc, code) = match out {
                LocalFreeness::Free => (json!({"verdict": "free", "vertex": null, "witness": null}), 0),
                LocalFreeness::NotFree { vertex, model } => {
                    (json!({"verdict": "not-free", "vertex": vertex, "witness": model}), EXIT_FAILS)
                }
                LocalFreeness::Unknown { vertex } => {
                    (json!({"verdict": "unknown", "vertex": vertex, "witness": null}), EXIT_UNKNOWN)
                }
            };
            let mut doc = doc;
            doc["t"] = json!(t);
            doc["radius"] = json!(radius);
            println!("{doc}");
            Ok(code)
        }
    }
}

/// Tuned defaults for `c` in 3..=5, otherwise `general(c, 2c, 4)`; flags override.
fn params(a: &ColorArgs) -> Result<AlgoParams> {
    let mut p = match a.c {
        3..=5 => AlgoParams::for_t(a.c as usize)?,
        c => {
            let cap = 2 * c as usize;
            AlgoParams::general(c, cap, cap.min(4))
        }
    };
    if let Some(x) = a.cap {
        p.cap = x;
    }
    if let Some(x) = a.size_cap {
        p.size_cap = x;
    }
    if let Some(x) = a.k_base {
        p.k_base = x;
    }
    if let Some(x) = a.contact_degree {
        p.contact_degree = x;
    }
    if let Some(x) = a.max_levels {
        p.max_levels = x;
    }
    p.validate()?;
    Ok(p)
}

fn color(a: ColorArgs) -> Result<u8> {
    let p = params(&a)?;
    let g = load_graph(&a.graph)?;
    let l = lists_from_str(&read(&a.lists)?, g.n()).with_context(|| format!("parsing {}", a.lists.display()))?;
    let (phi, trace, levels) = distributed_list_colour(&g, &l, &p)?;
    let verdict = verify_colouring(&g, &phi, Some(&l))?;
    if !verdict.is_ok() {
        bail!(Error::Refused(format!("self-verification failed: {}", serde_json::to_string(&verdict)?)));
    }
    let stats = Stats {
        rounds: trace.rounds,
        levels,
        verified: true,
    };
    write(&a.output, &colouring_to_string(&phi))?;
    let stats_text = serde_json::to_string(&stats)?;
    match &a.stats {
        Some(path) => write(path, &stats_text)?,
        None => println!("{stats_text}"),
    }
    Ok(0)
}

fn verify(a: VerifyArgs) -> Result<u8> {
    let g = load_graph(&a.graph)?;
    let lists = match &a.lists {
        Some(p) => Some(lists_from_str(&read(p)?, g.n()).with_context(|| format!("parsing {}", p.display()))?),
        None => None,
    };
    let phi = colouring_from_str(&read(&a.coloring)?, g.n()).with_context(|| format!("parsing {}", a.coloring.display()))?;
    if let Some(v) = phi.as_slice().iter().position(|c| c.is_none()) {
        println!("{}", json!({"verdict": "uncoloured", "vertex": v}));
        return Ok(EXIT_FAILS);
    }
    let verdict = verify_colouring(&g, &phi, lists.as_ref())?;
    println!("{}", serde_json::to_string(&verdict)?);
    Ok(if verdict == Verdict::Ok { 0 } else { EXIT_FAILS })
}

fn error_kind(e: &anyhow::Error) -> &'static str {
    let Some(core) = e.downcast_ref::<Error>() else {
        return if e.downcast_ref::<std::io::Error>().is_some() { "io" } else { "error" };
    };
    match core {
        Error::VertexOutOfRange { .. } | Error::InvalidEdge { .. } | Error::DuplicateVertex(_) | Error::EmptySet => {
            "invalid-input"
        }
        Error::InvalidParameter(_) => "invalid-parameter",
        Error::Parse { .. } => "parse",
        Error::PartialColouring(_) => "partial-colouring",
        Error::Refused(_) => "refused",
        Error::ListTooShort { .. } => "list-too-short",
        Error::Program { .. } | Error::RoundLimit { .. } | Error::Deadlock { .. } => "simulation",
        Error::Stalled { .. } | Error::LevelLimit { .. } => "no-progress",
        Error::ExtensionFailed(_) => "extension-failed",
    }
}

fn report(kind: &str, message: String) -> ExitCode {
    eprintln!("{}", json!({"error": {"kind": kind, "message": message}}));
    ExitCode::from(EXIT_ERROR)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return report("usage", e.render().to_string().trim_end().to_string()),
    };
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Check(c) => check(c),
        Command::Color(a) => color(a),
        Command::Verify(a) => verify(a),
        Command::Experiment(ExperimentCommand::Scaling { config, output }) => {
            experiment::scaling(&config, &output).map(|_| 0)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => report(error_kind(&e), format!("{e:#}")),
    }
}
