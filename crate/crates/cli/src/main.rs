use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use amalgamlab::action::classify_action;
use amalgamlab::amalgam::{amalgam_from_pair, core_sequence, faithful_kernel, Amalgam};
use amalgamlab::fiber_product::{construct_from_catalog, verify_fiber_product};
use amalgamlab::graph::Graph;
use amalgamlab::local::{ball_series, catalog_graph, coset_graph, PairInstance};
use amalgamlab::pairs::{build_ordered_pairs, verify_lemma_approx};
use amalgamlab::report::{Report, Status};
use amalgamlab::verify::{hauptlemma_check, proof_trace, verify_theorem, LocalInput};
use amalgamlab::PermGroup;
use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "amalgamlab", version, about = "Permutation-group verifiers for locally L pairs and amalgams")]
struct Cli {
    /// Print reports as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ordered-pairs actions and action classification.
    #[command(subcommand)]
    Action(ActionCmd),
    /// Verify the two-point stabiliser lemma.
    #[command(subcommand)]
    Lemma(LemmaCmd),
    /// Graphs, automorphisms and coset graphs.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Vertex-edge amalgams.
    #[command(subcommand)]
    Amalgam(AmalgamCmd),
    /// Fiber-product construction of locally L amalgams.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Fixity bound on an instance.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Trace the proof's intermediate claims on an instance.
    #[command(subcommand)]
    Trace(TraceCmd),
    /// Hauptlemma consistency check.
    #[command(subcommand)]
    Check(CheckCmd),
}

#[derive(Subcommand)]
enum ActionCmd {
    /// Sym(n) acting on ordered pairs.
    BuildPairs {
        #[arg(long)]
        n: usize,
        /// Write the group in group-file format.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Place a group in the transitive-action hierarchy.
    Classify {
        #[arg(long, conflicts_with = "pairs", required_unless_present = "pairs")]
        group: Option<PathBuf>,
        /// Classify Sym(N) on ordered pairs instead of a file.
        #[arg(long)]
        pairs: Option<usize>,
    },
}

#[derive(Subcommand)]
enum LemmaCmd {
    Verify {
        /// `N`, or an inclusive range `A..B`.
        #[arg(long)]
        n: String,
        /// Verify the values of a range concurrently (output order is kept).
        #[arg(long)]
        parallel: bool,
    },
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Automorphism group of a graph file.
    Autos {
        file: PathBuf,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Orders of the pointwise ball stabilisers G_x^[r].
    Balls {
        file: PathBuf,
        /// Defaults to the full automorphism group.
        #[arg(long)]
        group: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        vertex: usize,
        #[arg(long, default_value_t = 3)]
        radius: usize,
    },
    /// Coset graph of G with vertex group X and edge group E.
    Coset {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        e: PathBuf,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// One of k4, k33, petersen, heawood, tutte-coxeter.
    Catalog {
        name: String,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

/// Where a vertex-edge amalgam comes from.
#[derive(Args, Clone)]
struct Source {
    /// Fiber-product amalgam built from this catalog graph (uses --n).
    #[arg(long)]
    construct: Option<String>,
    /// Catalog graph with its full automorphism group.
    #[arg(long)]
    catalog: Option<String>,
    /// Graph file.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Group file for --graph; defaults to the full automorphism group.
    #[arg(long)]
    group: Option<PathBuf>,
    /// Edge `u,v`; defaults to 0 and its least neighbour.
    #[arg(long)]
    edge: Option<String>,
}

#[derive(Subcommand)]
enum AmalgamCmd {
    Extract {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
    Faithful {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
    Cores {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Build a locally L amalgam from a catalog amalgam and check it.
    Section4 {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long = "h-amalgam")]
        h_amalgam: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    Theorem {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum TraceCmd {
    Claims {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    Hauptlemma {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// `trivial`, `gxy1` (G_xy^[1]), `gxy` or a group file.
        #[arg(long, default_value = "gxy1")]
        k: String,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_group(path: &Path) -> Result<PermGroup> {
    PermGroup::parse_group_file(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn read_graph(path: &Path) -> Result<Graph> {
    Graph::parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn parse_range(text: &str) -> Result<Vec<usize>> {
    let num = |s: &str| s.trim().parse::<usize>().with_context(|| format!("bad value {s:?} in --n"));
    if let Some((a, b)) = text.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if a > b {
            bail!("empty range {text}");
        }
        Ok((a..=b).collect())
    } else {
        Ok(vec![num(text)?])
    }
}

fn parse_edge(text: &str) -> Result<(usize, usize)> {
    let (u, v) = text.split_once(',').ok_or_else(|| anyhow!("edge must be u,v"))?;
    Ok((u.trim().parse()?, v.trim().parse()?))
}

fn strings<'a>(gens: impl IntoIterator<Item = &'a amalgamlab::Permutation>) -> Vec<String> {
    gens.into_iter().map(ToString::to_string).collect()
}

fn instance_from(source: &Source) -> Result<Option<PairInstance>> {
    if let Some(name) = &source.catalog {
        return Ok(Some(catalog_graph(name)?));
    }
    if let Some(path) = &source.graph {
        let graph = read_graph(path)?;
        let group = match &source.group {
            Some(g) => read_group(g)?,
            None => graph.automorphisms()?,
        };
        return Ok(Some(PairInstance::new(graph, group)?));
    }
    Ok(None)
}

fn local_input(source: &Source, n: usize) -> Result<LocalInput> {
    if let Some(name) = &source.construct {
        return Ok(LocalInput::Amalgam(construct_from_catalog(n, name)?.output));
    }
    let inst = instance_from(source)?
        .ok_or_else(|| anyhow!("give one of --construct, --catalog or --graph"))?;
    Ok(match &source.edge {
        Some(e) => {
            let (x, y) = parse_edge(e)?;
            LocalInput::Graph { instance: inst, x, y }
        }
        None => LocalInput::graph(inst),
    })
}

fn amalgam_from(source: &Source, n: usize) -> Result<Amalgam> {
    Ok(match local_input(source, n)? {
        LocalInput::Amalgam(am) => am,
        LocalInput::Graph { instance, x, y } => amalgam_from_pair(&instance, x, y)?,
    })
}

fn info(command: &str, inputs: Value, name: &str, details: Value) -> Report {
    let mut r = Report::new(command, inputs);
    r.push(name, Status::Pass, "computation", details);
    r
}

fn group_summary(g: &PermGroup) -> Value {
    json!({ "degree": g.degree(), "order": g.order().to_string(), "generators": strings(g.generators()) })
}

fn run(cli: &Cli) -> Result<Vec<Report>> {
    Ok(match &cli.command {
        Command::Action(ActionCmd::BuildPairs { n, emit }) => {
            let act = build_ordered_pairs(*n)?;
            if let Some(path) = emit {
                write(path, &act.group.to_group_file())?;
            }
            vec![info(
                "action build-pairs",
                json!({ "n": n }),
                "ordered-pairs action",
                group_summary(&act.group),
            )]
        }
        Command::Action(ActionCmd::Classify { group, pairs }) => {
            let g = match (group, pairs) {
                (Some(path), _) => read_group(path)?,
                (None, Some(n)) => build_ordered_pairs(*n)?.group,
                (None, None) => bail!("give --group or --pairs"),
            };
            let c = classify_action(&g)?;
            let witnesses: Vec<Value> = c
                .witnesses
                .iter()
                .map(|w| {
                    json!({
                        "fails": w.fails.name(),
                        "normal_subgroup": w.normal_subgroup.as_ref().map(group_summary),
                        "block_system": w.block_system,
                    })
                })
                .collect();
            vec![info(
                "action classify",
                json!({ "degree": g.degree(), "order": g.order().to_string() }),
                "classification",
                json!({
                    "level": c.level.name(),
                    "witnesses": witnesses,
                    "plinth_orders": c.plinths.iter().map(|p| p.order().to_string()).collect::<Vec<_>>(),
                    "plinth_type": c.plinth_type().map(|t| format!("{t:?}")),
                }),
            )]
        }
        Command::Lemma(LemmaCmd::Verify { n, parallel }) => {
            let values = parse_range(n)?;
            let results: Vec<_> = if *parallel {
                std::thread::scope(|s| {
                    let handles: Vec<_> = values
                        .iter()
                        .map(|&n| s.spawn(move || verify_lemma_approx(n)))
                        .collect();
                    handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
                })
            } else {
                values.iter().map(|&n| verify_lemma_approx(n)).collect()
            };
            results
                .into_iter()
                .map(|r| r.map(|v| v.report).map_err(Into::into))
                .collect::<Result<_>>()?
        }
        Command::Graph(GraphCmd::Autos { file, emit }) => {
            let graph = read_graph(file)?;
            let aut = graph.automorphisms()?;
            if let Some(path) = emit {
                write(path, &aut.to_group_file())?;
            }
            vec![info(
                "graph autos",
                json!({ "file": file, "vertices": graph.vertex_count(), "edges": graph.edge_count() }),
                "automorphism group",
                group_summary(&aut),
            )]
        }
        Command::Graph(GraphCmd::Balls { file, group, vertex, radius }) => {
            let source = Source {
                construct: None,
                catalog: None,
                graph: Some(file.clone()),
                group: group.clone(),
                edge: None,
            };
            let inst = instance_from(&source)?.expect("graph given");
            let series = ball_series(&inst, *vertex, *radius)?;
            vec![info(
                "graph balls",
                json!({ "file": file, "vertex": vertex, "radius": radius }),
                "ball stabiliser orders",
                json!({ "orders": series }),
            )]
        }
        Command::Graph(GraphCmd::Coset { group, x, e, emit }) => {
            let (g, xg, eg) = (read_group(group)?, read_group(x)?, read_group(e)?);
            let inst = coset_graph(&g, &xg, &eg)?;
            if let Some(path) = emit {
                write(path, &inst.graph.to_text())?;
            }
            vec![info(
                "graph coset",
                json!({ "group_order": g.order().to_string(), "x_order": xg.order().to_string(), "e_order": eg.order().to_string() }),
                "coset graph",
                json!({
                    "vertices": inst.graph.vertex_count(),
                    "edges": inst.graph.edge_count(),
                    "valency": inst.valency(),
                    "vertex_transitive": inst.vertex_transitive,
                    "group_order": inst.group.order().to_string(),
                }),
            )]
        }
        Command::Graph(GraphCmd::Catalog { name, emit }) => {
            let inst = catalog_graph(name)?;
            if let Some(path) = emit {
                write(path, &inst.graph.to_text())?;
            }
            vec![info(
                "graph catalog",
                json!({ "name": name }),
                "catalog graph",
                json!({
                    "vertices": inst.graph.vertex_count(),
                    "edges": inst.graph.edge_count(),
                    "automorphism_order": inst.group.order().to_string(),
                    "ball_orders": ball_series(&inst, 0, 3)?,
                }),
            )]
        }
        Command::Amalgam(AmalgamCmd::Extract { source, n }) => {
            let am = amalgam_from(source, *n)?;
            vec![info(
                "amalgam extract",
                json!({}),
                "vertex-edge amalgam",
                json!({
                    "a": group_summary(&am.a),
                    "b": group_summary(&am.b),
                    "c": group_summary(&am.c_in_a),
                    "index_in_a": am.index_in_a(),
                    "index_in_b": am.index_in_b(),
                }),
            )]
        }
        Command::Amalgam(AmalgamCmd::Faithful { source, n }) => {
            let am = amalgam_from(source, *n)?;
            let kernel = faithful_kernel(&am)?;
            let mut r = Report::new("amalgam faithful", json!({}));
            r.push(
                "faithful amalgam",
                if kernel.is_trivial() { Status::Pass } else { Status::Violated },
                "faithful amalgam",
                json!({ "kernel": group_summary(&kernel) }),
            );
            vec![r]
        }
        Command::Amalgam(AmalgamCmd::Cores { source, depth, n }) => {
            let am = amalgam_from(source, *n)?;
            let seq = core_sequence(&am, *depth)?;
            vec![info(
                "amalgam cores",
                json!({ "depth": depth }),
                "core sequence",
                json!({ "vertex_orders": seq.vertex_orders(), "edge_orders": seq.edge_orders() }),
            )]
        }
        Command::Construct(ConstructCmd::Section4 { n, h_amalgam, depth }) => {
            let cert = construct_from_catalog(*n, h_amalgam)?;
            let mut r = verify_fiber_product(&cert, *depth)?;
            r.command = "construct section4".into();
            r.inputs["h_amalgam"] = json!(h_amalgam);
            vec![r]
        }
        Command::Verify(VerifyCmd::Theorem { source, n }) => {
            vec![verify_theorem(&local_input(source, *n)?, *n)?]
        }
        Command::Trace(TraceCmd::Claims { source, n }) => {
            vec![proof_trace(&local_input(source, *n)?, *n)?.1]
        }
        Command::Check(CheckCmd::Hauptlemma { source, n, k }) => {
            let input = local_input(source, *n)?;
            let am = amalgam_from(source, *n)?;
            let k = match k.as_str() {
                "trivial" => PermGroup::trivial(am.a.degree()),
                "gxy" => am.c_in_a.clone(),
                "gxy1" => core_sequence(&am, 1)?.edge.remove(0),
                path => read_group(Path::new(path))?,
            };
            vec![hauptlemma_check(&input, &k)?]
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(reports) => {
            let text = if cli.json {
                let value = match reports.as_slice() {
                    [one] => serde_json::to_value(one),
                    many => serde_json::to_value(many),
                }
                .expect("reports serialise");
                serde_json::to_string_pretty(&value).expect("valid JSON")
            } else {
                reports.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n")
            };
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if reports.iter().all(Report::passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
