//! `glued`: generate glued grids, compute treewidth, bramble orders and
//! gonality, verify decompositions, and recompute the table of claims.
//!
//! Machine output goes to stdout, diagnostics to stderr. Exit codes: 0 on
//! success, 1 when a verification fails or a claim mismatches, 2 on usage
//! or input errors.

pub mod reproduce;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use glued_grids::bramble::{Bramble, BrambleLabel};
use glued_grids::certificate::{
    gonality_certificate, order_certificate, width_certificate, winning_certificate, Certificate,
};
use glued_grids::chipfire::{exact_gonality, gen_winning_divisor, is_winning_divisor, DivisorStyle, GonalityConfig};
use glued_grids::formats::{read_bramble, read_divisor, read_gr, read_td, write_bramble, write_divisor, write_gr, write_td};
use glued_grids::treewidth::{exact_treewidth, validate_tree_decomposition, MethodChoice, SolverConfig};
use glued_grids::{FamilyKind, Graph};

use reproduce::{reproduce_table, ReproConfig, RowVerdict};

/// Environment variable holding the worker count for gonality search.
pub const THREADS_ENV: &str = "GLUED_THREADS";

#[derive(Parser, Debug)]
#[command(name = "glued", version, about = "Treewidth, brambles and gonality of grids, stacked prisms and toroidal grids")]
pub struct Cli {
    /// Reserved; every algorithm is deterministic, so the seed is ignored.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Add wall-clock milliseconds to certificates (output is then no
    /// longer byte-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a graph in .gr format.
    Gen {
        /// grid, prism (stacked_prism), torus (toroidal_grid), path or cycle
        family: String,
        m: usize,
        /// Ignored for path and cycle.
        #[arg(default_value_t = 1)]
        n: usize,
    },
    /// Compute treewidth and print a certificate.
    Tw {
        graph: PathBuf,
        /// Time limit for branch and bound.
        #[arg(long, default_value_t = 60_000)]
        budget_ms: u64,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Expected treewidth; a mismatch exits with status 1.
        #[arg(long)]
        claim: Option<usize>,
        /// Write the decomposition in .td format.
        #[arg(long)]
        td_out: Option<PathBuf>,
    },
    /// Validate a tree decomposition against a graph.
    VerifyTd { graph: PathBuf, decomposition: PathBuf },
    /// Generate, classify or measure brambles.
    Bramble {
        #[command(subcommand)]
        action: BrambleAction,
    },
    /// Chip-firing and gonality.
    Gon {
        #[command(subcommand)]
        action: GonAction,
    },
    /// Recompute the table of claims.
    Reproduce {
        #[arg(long, default_value_t = 20)]
        max_vertices: usize,
        /// Total time budget.
        #[arg(long, default_value_t = 120_000)]
        budget_ms: u64,
        /// Print rows as JSON lines.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Auto,
    Dp,
    Bb,
}

#[derive(clap::Args, Debug)]
struct BrambleSpec {
    /// grid_b, prism_b1, prism_b2, torus_cde or torus_fg
    #[arg(long)]
    family: String,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
}

#[derive(Subcommand, Debug)]
enum BrambleAction {
    /// Print a generated bramble in bramble-file format.
    Generate(BrambleSpec),
    /// Classify a generated bramble, or a file with `--file` and `--graph`.
    Classify {
        #[command(flatten)]
        spec: OptionalSpec,
    },
    /// Compute the order and print a certificate.
    Order {
        #[command(flatten)]
        spec: OptionalSpec,
        /// Expected order; a mismatch exits with status 1.
        #[arg(long)]
        claim: Option<usize>,
    },
}

#[derive(clap::Args, Debug)]
struct OptionalSpec {
    #[arg(long, required_unless_present = "file")]
    family: Option<String>,
    #[arg(long, required_unless_present = "file")]
    m: Option<usize>,
    #[arg(long, required_unless_present = "file")]
    n: Option<usize>,
    #[arg(long, requires = "graph", conflicts_with = "family")]
    file: Option<PathBuf>,
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum GonAction {
    /// Check whether a divisor wins the gonality game.
    Check { graph: PathBuf, divisor: PathBuf },
    /// Exact gonality by exhaustive enumeration.
    Exact {
        graph: PathBuf,
        #[arg(long)]
        max_degree: Option<usize>,
        /// Cap on the number of placements examined.
        #[arg(long, default_value_t = 10_000_000)]
        cap: u128,
        #[arg(long)]
        claim: Option<usize>,
    },
    /// Print a constructed winning divisor; exits 1 if it does not win.
    Winning {
        /// prism or torus
        #[arg(long)]
        family: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// column_ones, row_twos or column_twos
        #[arg(long)]
        style: String,
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}

fn threads() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&t| t > 0)
        .unwrap_or(1)
}

fn load_graph(path: &Path) -> anyhow::Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    read_gr(&text).with_context(|| format!("parsing {}", path.display()))
}

fn family_kind(name: &str) -> anyhow::Result<FamilyKind> {
    FamilyKind::from_name(name).ok_or_else(|| anyhow!("unknown family `{name}`"))
}

fn bramble_host(label: BrambleLabel, m: usize, n: usize) -> anyhow::Result<Graph> {
    let kind = match label {
        BrambleLabel::GridB => FamilyKind::Grid,
        BrambleLabel::PrismB1 | BrambleLabel::PrismB2 => FamilyKind::StackedPrism,
        BrambleLabel::TorusCde | BrambleLabel::TorusFg => FamilyKind::ToroidalGrid,
        BrambleLabel::Custom => bail!("custom brambles come from --file"),
    };
    Ok(Graph::family(kind, m, n)?)
}

fn generated(spec: &BrambleSpec) -> anyhow::Result<Bramble> {
    let label = BrambleLabel::from_name(&spec.family)
        .ok_or_else(|| anyhow!("unknown bramble family `{}`", spec.family))?;
    let g = bramble_host(label, spec.m, spec.n)?;
    Ok(label.generate(&g)?)
}

/// Elements and host graph without requiring the family to be a bramble.
fn resolve(spec: &OptionalSpec) -> anyhow::Result<(Graph, BrambleLabel, Vec<glued_grids::VertexSet>)> {
    if let Some(file) = &spec.file {
        let graph_path = spec.graph.as_ref().expect("clap enforces --graph");
        let g = load_graph(graph_path)?;
        let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
        let parsed = read_bramble(&text).with_context(|| format!("parsing {}", file.display()))?;
        if parsed.vertex_count != g.vertex_count() {
            bail!(
                "bramble file is over {} vertices, graph has {}",
                parsed.vertex_count,
                g.vertex_count()
            );
        }
        return Ok((g, parsed.label, parsed.elements));
    }
    let b = generated(&BrambleSpec {
        family: spec.family.clone().expect("clap enforces --family"),
        m: spec.m.expect("clap enforces --m"),
        n: spec.n.expect("clap enforces --n"),
    })?;
    Ok((b.graph().clone(), b.label(), b.elements().to_vec()))
}

fn emit(out: &mut dyn Write, cert: Certificate, timing: bool, started: Instant) -> anyhow::Result<bool> {
    let cert = if timing { cert.with_elapsed(started.elapsed()) } else { cert };
    writeln!(out, "{}", cert.to_json())?;
    Ok(cert.passed())
}

fn status(ok: bool) -> i32 {
    if ok {
        0
    } else {
        1
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    let started = Instant::now();
    match &cli.command {
        Command::Gen { family, m, n } => {
            let g = Graph::family(family_kind(family)?, *m, *n)?;
            write!(out, "{}", write_gr(&g))?;
            Ok(0)
        }
        Command::Tw {
            graph,
            budget_ms,
            method,
            claim,
            td_out,
        } => {
            let g = load_graph(graph)?;
            let config = SolverConfig {
                method: match method {
                    Method::Auto => MethodChoice::Auto,
                    Method::Dp => MethodChoice::Dp,
                    Method::Bb => MethodChoice::Bb,
                },
                time_limit: Duration::from_millis(*budget_ms),
                ..SolverConfig::default()
            };
            let res = exact_treewidth(&g, &config)?;
            if let Some(path) = td_out {
                fs::write(path, write_td(&res.decomposition))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            let cert = width_certificate(&g, &res, *claim)?;
            Ok(status(emit(out, cert, cli.timing, started)?))
        }
        Command::VerifyTd { graph, decomposition } => {
            let g = load_graph(graph)?;
            let text = fs::read_to_string(decomposition)
                .with_context(|| format!("reading {}", decomposition.display()))?;
            let td = match read_td(&text) {
                Ok(td) => td,
                Err(e) => {
                    writeln!(out, "{}", serde_json::json!({"verdict": "malformed", "error": e.to_string()}))?;
                    return Ok(1);
                }
            };
            let validation = validate_tree_decomposition(&g, &td)?;
            writeln!(out, "{}", serde_json::to_string(&validation)?)?;
            Ok(status(validation.is_valid()))
        }
        Command::Bramble { action } => match action {
            BrambleAction::Generate(spec) => {
                let b = generated(spec)?;
                write!(out, "{}", write_bramble(b.label(), b.graph().vertex_count(), b.elements()))?;
                Ok(0)
            }
            BrambleAction::Classify { spec } => {
                let (g, label, elements) = resolve(spec)?;
                let class = glued_grids::bramble::classify_family(&g, &elements)?;
                let report = serde_json::json!({
                    "graph": g.label(),
                    "label": label.name(),
                    "elements": elements.len(),
                    "verdict": class.verdict,
                    "counterexample": class.counterexample,
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
                Ok(0)
            }
            BrambleAction::Order { spec, claim } => {
                let (g, label, elements) = resolve(spec)?;
                let b = Bramble::new(g, elements, label)?;
                let cert = order_certificate(&b, *claim)?;
                Ok(status(emit(out, cert, cli.timing, started)?))
            }
        },
        Command::Gon { action } => match action {
            GonAction::Check { graph, divisor } => {
                let g = load_graph(graph)?;
                let text = fs::read_to_string(divisor).with_context(|| format!("reading {}", divisor.display()))?;
                let d = read_divisor(&text)?;
                let check = is_winning_divisor(&g, &d)?;
                let cert = winning_certificate(&g, &d, &check, None);
                Ok(status(emit(out, cert, cli.timing, started)?))
            }
            GonAction::Exact {
                graph,
                max_degree,
                cap,
                claim,
            } => {
                let g = load_graph(graph)?;
                let config = GonalityConfig {
                    max_degree: max_degree.unwrap_or(usize::MAX),
                    candidate_cap: *cap,
                    threads: threads(),
                };
                let res = exact_gonality(&g, &config)?;
                let cert = gonality_certificate(&g, &res, *claim);
                Ok(status(emit(out, cert, cli.timing, started)?))
            }
            GonAction::Winning {
                family,
                m,
                n,
                style,
                index,
            } => {
                let g = Graph::family(family_kind(family)?, *m, *n)?;
                let style = DivisorStyle::from_name(style).ok_or_else(|| anyhow!("unknown style `{style}`"))?;
                let d = gen_winning_divisor(&g, style, *index)?;
                write!(out, "{}", write_divisor(&d))?;
                let check = is_winning_divisor(&g, &d)?;
                if let Some(v) = check.failing_vertex {
                    writeln!(err, "divisor loses when the opponent takes a chip from vertex {}", v + 1)?;
                }
                Ok(status(check.wins))
            }
        },
        Command::Reproduce {
            max_vertices,
            budget_ms,
            json,
        } => {
            let rows = reproduce_table(&ReproConfig {
                max_vertices: *max_vertices,
                budget: Duration::from_millis(*budget_ms),
                threads: threads(),
            });
            for row in &rows {
                if *json {
                    writeln!(out, "{}", serde_json::to_string(row)?)?;
                } else {
                    writeln!(out, "{row}")?;
                }
            }
            let mismatches = rows.iter().filter(|r| r.verdict == RowVerdict::Mismatch).count();
            if mismatches > 0 {
                writeln!(err, "{mismatches} row(s) mismatch")?;
            }
            Ok(status(mismatches == 0))
        }
    }
}
