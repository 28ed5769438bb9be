//! Command-line front end: counting, alternating enumerators, properties,
//! witness sets, the explicit Sylow construction, the classification scan,
//! the oracle pipelines and the verification suites, all with
//! machine-readable output.
//!
//! Exit codes: 0 on success, 2 on usage errors (bad flags, unreadable or
//! malformed inputs, exceeded caps), 1 if an internal invariant fired.
//! With a fixed seed the default output is byte-identical across runs;
//! `--timings` adds wall-clock fields, which are exempt from that rule.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use indsub::chi::{chi_naive_with, chi_orbit, ChiOptions};
use indsub::counting::{
    count_cp_hom, count_cp_indsub_prop, count_emb, count_hom, count_indsub,
    count_indsub_prop_budgeted, count_strong_emb, count_sub, ColoredGraph, CountMode, CountResult,
};
use indsub::graph::EdgeSubset;
use indsub::perm::{closure_default, sylow_exponent, sylow_generators};
use indsub::properties::{self, witness_set};
use indsub::reductions::{
    classify_p_edge_transitive, pipeline_clique_decision, pipeline_exact, PipelineOptions,
};
use indsub::verify::{run_suite, Suite};
use indsub::{Error, Graph};

#[derive(Parser)]
#[command(name = "indsub", version, about = "Subgraph counting, alternating enumerators and oracle-reduction pipelines")]
struct Cli {
    /// Output format: a JSON document, or top-level fields as tab-separated
    /// key/value lines (nested values stay JSON-encoded).
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Bound the worker-thread count for parallel enumerations.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Add wall-clock fields (elapsed_ms) to the output.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CountWhat {
    Hom,
    Emb,
    Stremb,
    Sub,
    Indsub,
    CpHom,
    CpIndsubProp,
    IndsubProp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ChiMethodArg {
    Naive,
    Orbit,
}

#[derive(Subcommand)]
enum Command {
    /// Count homomorphisms, embeddings or (induced) subgraphs, plain or
    /// color-prescribed or property-restricted.
    Count {
        #[arg(long, value_enum)]
        what: CountWhat,
        /// Pattern graph file (edge list or graph6).
        #[arg(long)]
        pattern: Option<PathBuf>,
        /// Host graph file.
        #[arg(long)]
        host: PathBuf,
        /// Host coloring file (one pattern vertex per host vertex,
        /// whitespace-separated) for the color-prescribed variants.
        #[arg(long)]
        coloring: Option<PathBuf>,
        /// Property name for the property-restricted variants.
        #[arg(long)]
        property: Option<String>,
        /// Subgraph size for property-restricted induced counting.
        #[arg(long)]
        k: Option<usize>,
        /// Edge-subset mask of the pattern for the color-prescribed
        /// variants (default: all pattern edges).
        #[arg(long)]
        subset: Option<u64>,
        /// Count modulo this prime.
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// Alternating enumerator of a property over a pattern's edge subsets.
    Chi {
        #[arg(long)]
        property: String,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = ChiMethodArg::Naive)]
        method: ChiMethodArg,
        /// Also report the residue modulo these values (repeatable).
        #[arg(long = "mod")]
        moduli: Vec<u64>,
        /// Raise the edge cap for the naive sum (default 24, env
        /// INDSUB_MAX_EDGES).
        #[arg(long)]
        max_edges: Option<usize>,
        /// Print progress to standard error every few million masks.
        #[arg(long)]
        progress: bool,
    },
    /// Evaluate a named property on a graph.
    Property {
        #[arg(long)]
        name: String,
        #[arg(long)]
        graph: PathBuf,
    },
    /// Prime powers t <= bound where the property separates the edgeless
    /// graph on 2t vertices from the side-t biclique.
    WitnessSet {
        #[arg(long)]
        property: String,
        #[arg(long)]
        bound: u64,
    },
    /// Generators of the Sylow p-subgroup of the symmetric group on p^k
    /// points, with closure order and wreath-graph transitivity checks.
    Sylow {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
    },
    /// Exhaustively classify connected edge-transitive graphs with a
    /// prime-power edge count on up to max-n vertices.
    Classify {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
    /// Run an oracle pipeline: biclique homomorphism counting through
    /// simulated induced-subgraph oracles, or (with --clique) the k-clique
    /// decision chain.
    Pipeline {
        #[arg(long)]
        property: String,
        /// Biclique side for the counting pipeline.
        #[arg(long)]
        t: Option<u64>,
        #[arg(long)]
        host: PathBuf,
        /// Run the clique-decision chain for this clique size instead.
        #[arg(long)]
        clique: Option<usize>,
        #[arg(long = "mod")]
        modulus: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override the mod-p amplification count (default 2^k).
        #[arg(long)]
        reps: Option<u32>,
        /// Keep at most this many per-stage query records verbatim.
        #[arg(long, default_value_t = 4096)]
        transcript_limit: usize,
    },
    /// Run a named verification suite with a fixed seed.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let started = Instant::now();
    match run(&cli) {
        Ok(mut value) => {
            if cli.timings {
                if let Value::Object(map) = &mut value {
                    map.insert(
                        "elapsed_ms".into(),
                        json!(started.elapsed().as_millis() as u64),
                    );
                }
            }
            print_value(&value, cli.format);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_invariant_breach() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn print_value(value: &Value, format: Format) {
    match format {
        Format::Json => println!("{value}"),
        Format::Tsv => match value {
            Value::Object(map) => {
                for (key, v) in map {
                    match v {
                        Value::String(s) => println!("{key}\t{s}"),
                        other => println!("{key}\t{other}"),
                    }
                }
            }
            Value::Array(items) => {
                let cells: Vec<String> = items.iter().map(Value::to_string).collect();
                println!("{}", cells.join("\t"));
            }
            other => println!("{other}"),
        },
    }
}

fn mode_of(modulus: Option<u64>) -> indsub::Result<CountMode> {
    match modulus {
        None => Ok(CountMode::Exact),
        Some(p) if indsub::arith::is_prime(p) => Ok(CountMode::Mod(p)),
        Some(p) => Err(Error::NotPrime(p)),
    }
}

fn count_json(result: &CountResult) -> Map<String, Value> {
    let mut map = Map::new();
    match result {
        CountResult::Exact(v) => {
            map.insert("mode".into(), json!("exact"));
            map.insert("value".into(), json!(v.to_string()));
        }
        CountResult::Residue { value, modulus } => {
            map.insert("mode".into(), json!("mod"));
            map.insert("residue".into(), json!(value));
            map.insert("modulus".into(), json!(modulus));
        }
    }
    map
}

fn read_coloring(path: &PathBuf, host: &Graph, pattern: &Graph) -> indsub::Result<ColoredGraph> {
    let text = std::fs::read_to_string(path)?;
    let values = text
        .split_whitespace()
        .map(|w| {
            w.parse::<u32>().map_err(|_| Error::Parse {
                line: 1,
                msg: format!("invalid color {w:?}"),
            })
        })
        .collect::<indsub::Result<Vec<u32>>>()?;
    ColoredGraph::new(host.clone(), pattern.clone(), values)
}

fn run(cli: &Cli) -> indsub::Result<Value> {
    match &cli.command {
        Command::Count {
            what,
            pattern,
            host,
            coloring,
            property,
            k,
            subset,
            modulus,
        } => {
            let mode = mode_of(*modulus)?;
            let host = indsub::io::read_graph_file(host)?;
            let need_pattern = !matches!(what, CountWhat::IndsubProp);
            let pattern = if need_pattern {
                let path = pattern.as_ref().ok_or_else(|| {
                    Error::Unsupported("this variant needs --pattern".into())
                })?;
                Some(indsub::io::read_graph_file(path)?)
            } else {
                None
            };
            let result = match what {
                CountWhat::Hom => count_hom(pattern.as_ref().unwrap(), &host, mode)?,
                CountWhat::Emb => count_emb(pattern.as_ref().unwrap(), &host, mode)?,
                CountWhat::Stremb => count_strong_emb(pattern.as_ref().unwrap(), &host, mode)?,
                CountWhat::Sub => count_sub(pattern.as_ref().unwrap(), &host, mode)?,
                CountWhat::Indsub => count_indsub(pattern.as_ref().unwrap(), &host, mode)?,
                CountWhat::CpHom | CountWhat::CpIndsubProp => {
                    let pattern = pattern.as_ref().unwrap();
                    let coloring_path = coloring.as_ref().ok_or_else(|| {
                        Error::Unsupported("color-prescribed variants need --coloring".into())
                    })?;
                    let cg = read_coloring(coloring_path, &host, pattern)?;
                    match what {
                        CountWhat::CpHom => {
                            let s = match subset {
                                Some(mask) => EdgeSubset::new(*mask, pattern.edge_count())?,
                                None => EdgeSubset::full_of(pattern)?,
                            };
                            count_cp_hom(s, &cg, mode)?
                        }
                        _ => {
                            let name = property.as_ref().ok_or_else(|| {
                                Error::Unsupported("cp-indsub-prop needs --property".into())
                            })?;
                            count_cp_indsub_prop(&properties::by_name(name)?, &cg, mode)?
                        }
                    }
                }
                CountWhat::IndsubProp => {
                    let name = property.as_ref().ok_or_else(|| {
                        Error::Unsupported("indsub-prop needs --property".into())
                    })?;
                    let k = k.ok_or_else(|| Error::Unsupported("indsub-prop needs --k".into()))?;
                    let budget = env_u128("INDSUB_ENUM_BUDGET")
                        .unwrap_or(indsub::caps::DEFAULT_ENUM_BUDGET);
                    count_indsub_prop_budgeted(&properties::by_name(name)?, k, &host, mode, budget)?
                }
            };
            Ok(Value::Object(count_json(&result)))
        }
        Command::Chi {
            property,
            graph,
            method,
            moduli,
            max_edges,
            progress,
        } => {
            let phi = properties::by_name(property)?;
            let g = indsub::io::read_graph_file(graph)?;
            let opts = ChiOptions {
                max_edges: max_edges.or_else(|| env_u128("INDSUB_MAX_EDGES").map(|v| v as usize)),
                progress: progress.then(|| {
                    std::sync::Arc::new(|done: u64, total: u64| {
                        eprintln!("chi: {done}/{total} masks");
                    }) as std::sync::Arc<dyn Fn(u64, u64) + Send + Sync>
                }),
                sequential: false,
            };
            let result = match method {
                ChiMethodArg::Naive => chi_naive_with(&phi, &g, &opts)?,
                ChiMethodArg::Orbit => chi_orbit(&phi, &g)?,
            };
            let mut residues = Map::new();
            for &m in moduli {
                if m < 2 {
                    return Err(Error::NotPrime(m));
                }
                residues.insert(m.to_string(), json!(result.residue(m)));
            }
            Ok(json!({
                "value": result.value,
                "method": match result.method {
                    indsub::chi::ChiMethod::Naive => "naive",
                    indsub::chi::ChiMethod::Orbit => "orbit",
                },
                "phi_evaluations": result.phi_evaluations,
                "residues": residues,
            }))
        }
        Command::Property { name, graph } => {
            let phi = properties::by_name(name)?;
            let g = indsub::io::read_graph_file(graph)?;
            Ok(json!({ "value": u8::from(phi.eval(&g)) }))
        }
        Command::WitnessSet { property, bound } => {
            let phi = properties::by_name(property)?;
            let ws = witness_set(&phi, *bound)?;
            Ok(json!(ws.members))
        }
        Command::Sylow { p, k } => {
            let gens = sylow_generators(*p, *k)?;
            for g in &gens {
                println!("{g}");
            }
            let group = closure_default(&gens)?;
            let w = indsub::graph::wreath(*p, *k)?;
            let acts = group.acts_on_edges_of(&w);
            let edge_transitive = acts && group.is_transitive_on_edges_of(&w)?;
            Ok(json!({
                "degree": w.n(),
                "generators": gens.len(),
                "order": group.order(),
                "e": sylow_exponent(*p, *k),
                "transitive_on_vertices": group.is_transitive_on_vertices()?,
                "transitive_on_edges": edge_transitive,
            }))
        }
        Command::Classify { max_n } => {
            let report = classify_p_edge_transitive(*max_n)?;
            Ok(serde_json::to_value(&report).expect("report serializes"))
        }
        Command::Pipeline {
            property,
            t,
            host,
            clique,
            modulus,
            seed,
            reps,
            transcript_limit,
        } => {
            let phi = properties::by_name(property)?;
            let g = indsub::io::read_graph_file(host)?;
            let mode = mode_of(*modulus)?;
            let opts = PipelineOptions {
                transcript_query_limit: *transcript_limit,
                repetitions: *reps,
                ..Default::default()
            };
            match clique {
                Some(k) => {
                    let out = pipeline_clique_decision(&phi, &g, *k, mode, *seed, &opts)?;
                    let truth = !count_sub(&indsub::graph::clique(*k)?, &g, CountMode::Exact)?
                        .is_zero();
                    Ok(json!({
                        "mode": out.transcript.mode,
                        "seed": out.transcript.seed,
                        "stages": serde_json::to_value(&out.transcript.stages).expect("serializes"),
                        "ell": out.ell,
                        "final": if out.decision { "yes" } else { "no" },
                        "reference": if truth { "yes" } else { "no" },
                        "match": out.decision == truth,
                    }))
                }
                None => {
                    let t = t.ok_or_else(|| {
                        Error::Unsupported("counting pipeline needs --t (or use --clique)".into())
                    })?;
                    let out = pipeline_exact(&phi, t, &g, mode, &opts)?;
                    let pattern = indsub::graph::complete_bipartite(t as usize, t as usize)?;
                    let reference = count_hom(&pattern, &g, mode)?;
                    Ok(json!({
                        "mode": out.transcript.mode,
                        "seed": out.transcript.seed,
                        "stages": serde_json::to_value(&out.transcript.stages).expect("serializes"),
                        "final": out.value.to_decimal(),
                        "reference": reference.to_decimal(),
                        "match": out.value == reference,
                    }))
                }
            }
        }
        Command::Verify { suite, seed } => {
            let report = run_suite(Suite::parse(suite)?, *seed);
            Ok(json!({
                "suite": report.suite,
                "seed": report.seed,
                "passed": report.passed,
                "failed": report.failed,
                "checks": serde_json::to_value(&report.checks).expect("serializes"),
            }))
        }
    }
}

fn env_u128(name: &str) -> Option<u128> {
    std::env::var(name).ok()?.parse().ok()
}
