//! Command-line interface: twin-width 1 recognition with certificate files,
//! sequence verification, the exact small-graph oracle, distance-hereditary
//! classification, decomposition dumps, permutation diagrams, and a timing
//! harness.
//!
//! Exit codes: 0 accept, 1 reject, 2 input error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use twinwidth::dh::{classify_dh_twin_width, classify_by_split_structure, dh_elimination, split_tree_dh, DhClassification};
use twinwidth::formats;
use twinwidth::gen;
use twinwidth::graph::Graph;
use twinwidth::modular::modular_decomposition;
use twinwidth::oracle::{brute_force_tww_with, OracleOptions, OracleResult};
use twinwidth::permgraph::{compute_realiser, diagram_layout};
use twinwidth::sequence::verify_sequence;
use twinwidth::tww1::{recognize, RecognitionOutcome, RefusalReason};

#[derive(Parser)]
#[command(name = "tww", about = "twin-width 1 recognition and related tools", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Auto,
    EdgeList,
    Graph6,
}

#[derive(Clone, Copy, ValueEnum)]
enum DiagramFormat {
    Svg,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Generator {
    Caterpillar,
    RandomTww1,
    RandomRealiser,
    RandomGraph,
}

#[derive(Subcommand)]
enum Command {
    /// Decide twin-width <= 1 and emit a certifying sequence.
    Recognize {
        input: PathBuf,
        /// write the sequence to this JSON file on success
        #[arg(long)]
        emit: Option<PathBuf>,
        /// machine-readable report on stdout
        #[arg(long)]
        json: bool,
        #[arg(long, value_enum, default_value = "auto")]
        format: GraphFormat,
    },
    /// Verify a sequence file against a graph at a width bound.
    Verify {
        graph: PathBuf,
        seq: PathBuf,
        #[arg(long)]
        width: usize,
        #[arg(long, value_enum, default_value = "auto")]
        format: GraphFormat,
    },
    /// Exact twin-width by exhaustive search (small graphs).
    Oracle {
        input: PathBuf,
        /// vertex cap; defaults to 10 or the TWW_MAX_ORACLE_N variable
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long, value_enum, default_value = "auto")]
        format: GraphFormat,
    },
    /// Classify the twin-width of a distance-hereditary graph.
    Dh {
        input: PathBuf,
        /// write the certificate sequence to this JSON file
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        #[arg(long, value_enum, default_value = "auto")]
        format: GraphFormat,
    },
    /// Dump the modular decomposition (and split tree when available) as JSON.
    Decompose {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        format: GraphFormat,
    },
    /// Draw the permutation diagram of a permutation graph.
    Diagram {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "svg")]
        format: DiagramFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "auto")]
        graph_format: GraphFormat,
    },
    /// Timing table over generated instances, as CSV on stdout.
    Bench {
        #[arg(long, value_enum)]
        generator: Generator,
        /// comma-separated instance sizes
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// timing repetitions per size; the median is reported
        #[arg(long, default_value_t = 5)]
        reps: usize,
        /// edge probability for random-graph
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// red-core budget for random-tww1
        #[arg(long, default_value_t = 32)]
        core: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_graph(path: &PathBuf, format: GraphFormat) -> Result<Graph, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let parse_el = |t: &str| formats::parse_edge_list(t).map_err(|e| e.to_string());
    let parse_g6 = |t: &str| {
        let line = t.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
        formats::parse_graph6(line).map_err(|e| e.to_string())
    };
    match format {
        GraphFormat::EdgeList => parse_el(&text),
        GraphFormat::Graph6 => parse_g6(&text),
        GraphFormat::Auto => {
            if path.extension().is_some_and(|e| e == "g6") {
                parse_g6(&text)
            } else {
                parse_el(&text).or_else(|el_err| {
                    parse_g6(&text).map_err(|g6_err| {
                        format!("not an edge list ({el_err}) nor graph6 ({g6_err})")
                    })
                })
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Recognize { input, emit, json, format } => {
            let g = load_graph(&input, format)?;
            match recognize(&g) {
                RecognitionOutcome::Sequence(seq) => {
                    let text = formats::emit_sequence(&seq);
                    if let Some(path) = emit {
                        fs::write(&path, &text).map_err(|e| e.to_string())?;
                    }
                    if json {
                        println!(
                            "{}",
                            serde_json::json!({
                                "accepted": true,
                                "n": g.n(),
                                "m": g.m(),
                                "width": seq.claimed_width,
                                "steps": seq.steps,
                            })
                        );
                    } else {
                        println!("twin-width <= 1: yes (sequence of width {})", seq.claimed_width);
                    }
                    Ok(ExitCode::SUCCESS)
                }
                RecognitionOutcome::Refusal(reason) => {
                    let tag = match &reason {
                        RefusalReason::NotPermutation(id) => format!("not-permutation({})", id.0),
                        RefusalReason::PrimeNodePeelFailed(id) => {
                            format!("prime-node-peel-failed({})", id.0)
                        }
                        RefusalReason::Structural(s) => format!("structural({s})"),
                    };
                    if json {
                        println!("{}", serde_json::json!({ "accepted": false, "reason": tag }));
                    } else {
                        println!("twin-width <= 1: no ({tag})");
                    }
                    Ok(ExitCode::FAILURE)
                }
            }
        }
        Command::Verify { graph, seq, width, format } => {
            let g = load_graph(&graph, format)?;
            let text = fs::read_to_string(&seq).map_err(|e| e.to_string())?;
            let sequence = formats::parse_sequence(&text).map_err(|e| e.to_string())?;
            let report = verify_sequence(&g, &sequence, width).map_err(|e| e.to_string())?;
            if report.ok {
                println!(
                    "ok: width <= {width} over {} steps (max red degree {})",
                    sequence.steps.len(),
                    report.max_red_degree
                );
                Ok(ExitCode::SUCCESS)
            } else {
                let (step, vertex) = report.violation.unwrap();
                println!("violation at step {step}: vertex {vertex} exceeds red degree {width}");
                Ok(ExitCode::FAILURE)
            }
        }
        Command::Oracle { input, max_n, format } => {
            let g = load_graph(&input, format)?;
            let cap = max_n
                .or_else(|| std::env::var("TWW_MAX_ORACLE_N").ok().and_then(|v| v.parse().ok()))
                .unwrap_or(twinwidth::oracle::DEFAULT_MAX_N);
            let opts = OracleOptions { max_n: cap, budget: None };
            match brute_force_tww_with(&g, &opts).map_err(|e| e.to_string())? {
                OracleResult::Exact(t) => {
                    println!("twin-width: {t}");
                    Ok(ExitCode::SUCCESS)
                }
                OracleResult::Inconclusive => {
                    println!("inconclusive");
                    Ok(ExitCode::FAILURE)
                }
            }
        }
        Command::Dh { input, emit, json, format } => {
            let g = load_graph(&input, format)?;
            match classify_dh_twin_width(&g) {
                DhClassification::NotDistanceHereditary => {
                    if json {
                        println!("{}", serde_json::json!({ "class": "not-DH" }));
                    } else {
                        println!("not distance-hereditary");
                    }
                    Ok(ExitCode::FAILURE)
                }
                DhClassification::Classified { width, certificate } => {
                    if let Some(path) = emit {
                        fs::write(&path, formats::emit_sequence(&certificate))
                            .map_err(|e| e.to_string())?;
                    }
                    let split_width = (g.n() >= 1 && g.is_connected() && g.n() <= 2000)
                        .then(|| {
                            dh_elimination(&g)
                                .and_then(|o| split_tree_dh(&g, &o).ok())
                                .map(|t| classify_by_split_structure(&t))
                        })
                        .flatten();
                    if json {
                        println!(
                            "{}",
                            serde_json::json!({
                                "class": width,
                                "split_structure_class": split_width,
                                "certificate_width": certificate.claimed_width,
                            })
                        );
                    } else {
                        print!("distance-hereditary, twin-width {width}");
                        match split_width {
                            Some(w) => println!(" (split-tree classification agrees: {w})"),
                            None => println!(),
                        }
                    }
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
        Command::Decompose { input, format } => {
            let g = load_graph(&input, format)?;
            if g.n() == 0 {
                println!("{}", serde_json::json!({ "modular": null }));
                return Ok(ExitCode::SUCCESS);
            }
            let t = modular_decomposition(&g);
            let split = g
                .is_connected()
                .then(|| dh_elimination(&g).and_then(|o| split_tree_dh(&g, &o).ok().map(|t| t.to_json())))
                .flatten();
            println!(
                "{}",
                serde_json::json!({ "modular": t.to_json(), "split_tree": split })
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Diagram { input, format, out, graph_format } => {
            let g = load_graph(&input, graph_format)?;
            let r = match compute_realiser(&g) {
                Some(r) => r,
                None => {
                    println!("not a permutation graph");
                    return Ok(ExitCode::FAILURE);
                }
            };
            let rendered = match format {
                DiagramFormat::Svg => render_svg(&r),
                DiagramFormat::Text => render_text(&r),
            };
            match out {
                Some(path) => fs::write(&path, rendered).map_err(|e| e.to_string())?,
                None => print!("{rendered}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench { generator, sizes, seed, reps, p, core } => {
            println!("generator,n,m,recognize_ms,accepted");
            for &n in &sizes {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
                let (g, label) = match generator {
                    Generator::Caterpillar => (gen::caterpillar(&mut rng, n), "caterpillar"),
                    Generator::RandomTww1 => {
                        (gen::random_tww1(&mut rng, n, core).graph, "random-tww1")
                    }
                    Generator::RandomRealiser => {
                        (gen::random_realiser_graph(&mut rng, n).0, "random-realiser")
                    }
                    Generator::RandomGraph => (gen::random_graph(&mut rng, n, p), "random-graph"),
                };
                let mut times = Vec::with_capacity(reps);
                let mut accepted = false;
                for _ in 0..reps.max(1) {
                    let start = Instant::now();
                    accepted = recognize(&g).is_accept();
                    times.push(start.elapsed().as_secs_f64() * 1000.0);
                }
                times.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let median = times[times.len() / 2];
                println!("{label},{n},{},{median:.3},{accepted}", g.m());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Deterministic SVG: two horizontal rails with one line segment per vertex
/// at integer slots.
fn render_svg(r: &twinwidth::permgraph::Realiser) -> String {
    let n = r.n();
    let slot = 24usize;
    let width = (n + 1) * slot;
    let (y_top, y_bot) = (20, 120);
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"140\" viewBox=\"0 0 {width} 140\">\n"
    ));
    out.push_str(&format!(
        "  <line x1=\"0\" y1=\"{y_top}\" x2=\"{width}\" y2=\"{y_top}\" stroke=\"#999\"/>\n"
    ));
    out.push_str(&format!(
        "  <line x1=\"0\" y1=\"{y_bot}\" x2=\"{width}\" y2=\"{y_bot}\" stroke=\"#999\"/>\n"
    ));
    for seg in diagram_layout(r) {
        let x1 = seg.top * slot;
        let x2 = seg.bottom * slot;
        out.push_str(&format!(
            "  <line x1=\"{x1}\" y1=\"{y_top}\" x2=\"{x2}\" y2=\"{y_bot}\" stroke=\"black\"/>\n"
        ));
        out.push_str(&format!(
            "  <text x=\"{x1}\" y=\"{}\" font-size=\"10\" text-anchor=\"middle\">{}</text>\n",
            y_top - 6,
            seg.vertex
        ));
        out.push_str(&format!(
            "  <text x=\"{x2}\" y=\"{}\" font-size=\"10\" text-anchor=\"middle\">{}</text>\n",
            y_bot + 12,
            seg.vertex
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// Two aligned rows: the vertices in sigma order above tau order.
fn render_text(r: &twinwidth::permgraph::Realiser) -> String {
    let n = r.n();
    let w = n.max(1).to_string().len().max(1) + 1;
    let row = |order: Vec<usize>| -> String {
        order.iter().map(|v| format!("{v:>w$}")).collect::<String>()
    };
    format!("sigma:{}\ntau:  {}\n", row(r.sigma_order()), row(r.tau_order()))
}
