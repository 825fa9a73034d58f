//! Command-line interface: argument types and the command implementations.
//!
//! Every command returns its rendered output; `main` decides where it goes.
//! JSON output always carries the reproducibility header.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use forestlab_core::bounds::{
    degree_bound_check, free_group_rank, isoperimetric_search, rank_gradient, witness_growth, WitnessBase,
};
use forestlab_core::cayley::{build_exhaustion, BallExhaustion, WiredConductance, DEFAULT_VERTEX_CAP};
use forestlab_core::electrical::{
    beta1_estimate, edge_probability_table, exhaustion_probability_sweep, matrix_tree_count, ust_edge_probability,
    ust_edge_probability_exact, Beta1Mode, BoundaryMode,
};
use forestlab_core::graph::SerreGraph;
use forestlab_core::group::GroupModel;
use forestlab_core::littlewood::{csz_check, obstruction_report};
use forestlab_core::samplers::{ForestModel, PreparedSampler, SamplerConfig};
use forestlab_core::stats::obstruction_ratio;
use forestlab_core::Error as CoreError;
use serde::Serialize;
use serde_json::{json, Value};

use crate::campaign::{run_campaign, CampaignOptions, CampaignOutcome};
use crate::formats::{
    big_ratio_str, graph_to_json, law_to_json, parse_graph, parse_group, ratio_str, read_to_string, rows_to_csv,
    sweep_rows, table_rows, write_all, CertificateDoc, Document, Header,
};
use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "forestlab", version, about = "Random spanning forests on Cayley graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format. JSON is the stable contract; text and csv are conveniences.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads for sampling (0 = all cores). Does not change results.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a Cayley ball (or read a graph file) and print it.
    Graph(GraphArgs),
    /// Exact computations: tree counts, edge probabilities, exhaustion sweeps.
    Exact(ExactArgs),
    /// Sampling campaign: empirical law at the identity and optional dump.
    Sample(SampleArgs),
    /// Littlewood certificate and obstruction report.
    Certificate(CertificateArgs),
    /// Isoperimetric search, degree-bound check, witness growth, rank gradient.
    Bounds {
        #[command(subcommand)]
        command: BoundsCommand,
    },
    /// Everything for one group and model in a single document.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SourceArgs {
    /// Group: free:k, lattice:d, cyclic:n, dihedral:n, symmetric:n, products
    /// with ` x ` and `*`, or a JSON group document.
    #[arg(long, conflicts_with = "graph")]
    pub group: Option<String>,

    /// Graph document (JSON) instead of a group.
    #[arg(long)]
    pub graph: Option<PathBuf>,

    #[arg(long, default_value_t = 3)]
    pub radius: u32,

    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    pub vertex_cap: usize,

    /// Merge edges to the wired boundary with unit conductance.
    #[arg(long)]
    pub wired_unit: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CampaignArgs {
    #[arg(long)]
    pub group: String,

    /// Sampling radius (the host ball).
    #[arg(long, default_value_t = 3)]
    pub radius: u32,

    /// Window radius; defaults to radius − 1 for the windowed free MSF and
    /// to the radius otherwise.
    #[arg(long)]
    pub window: Option<u32>,

    /// ust-free, ust-wired, msf-free, msf-wired, empty, bernoulli:p[:base].
    #[arg(long, default_value = "ust-free")]
    pub model: String,

    #[arg(short = 'N', long = "samples", default_value_t = 1000)]
    pub n: u64,

    #[arg(long, env = "FORESTLAB_SEED", default_value_t = 42)]
    pub seed: u64,

    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    pub vertex_cap: usize,

    #[arg(long)]
    pub wired_unit: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GraphArgs {
    #[command(flatten)]
    pub source: SourceArgs,

    /// Print the wired ball instead of the free one.
    #[arg(long)]
    pub wired: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExactArgs {
    #[command(flatten)]
    pub source: SourceArgs,

    /// Inclusion probability of the edge {U, V}.
    #[arg(long, num_args = 2, value_names = ["U", "V"])]
    pub edge: Option<Vec<usize>>,

    /// Number of spanning trees.
    #[arg(long)]
    pub count: bool,

    /// Probabilities of every edge.
    #[arg(long)]
    pub table: bool,

    /// free or wired (wired needs a group).
    #[arg(long)]
    pub mode: Option<String>,

    /// Also compute exact rational values.
    #[arg(long)]
    pub exact: bool,

    /// Free and wired probabilities of the identity edges across radii.
    #[arg(long)]
    pub sweep: bool,

    #[arg(long)]
    pub max_radius: Option<u32>,

    /// Degree bracket of the free uniform spanning forest and β₁ estimate.
    #[arg(long)]
    pub beta1: bool,

    /// With --beta1: subtract the computed wired sum instead of 2.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SampleArgs {
    #[command(flatten)]
    pub campaign: CampaignArgs,

    /// Write every sample as NDJSON here.
    #[arg(long)]
    pub dump: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CertificateArgs {
    #[command(flatten)]
    pub campaign: CampaignArgs,

    /// Certificate window radius (defaults to the sampling window).
    #[arg(long)]
    pub cert_window: Option<u32>,

    /// Also write the bare certificate document here.
    #[arg(long)]
    pub cert_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReportArgs {
    #[command(flatten)]
    pub campaign: CampaignArgs,

    /// Size limit for the isoperimetric search.
    #[arg(short = 'm', long, default_value_t = 4)]
    pub m: usize,

    #[arg(long)]
    pub heuristic: bool,

    /// Also compute the exact degree bracket on balls up to this radius.
    #[arg(long)]
    pub exact_radius: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum BoundsCommand {
    /// Minimum |∂h|/|h| over connected sets of size ≤ m.
    Iso(IsoArgs),
    /// deg ≤ 2 + i_V check for a sampled law.
    Check(CheckArgs),
    /// Ratios (scaled invariant)²/rank along finite indices.
    Witness(WitnessArgs),
    /// (rank − 1)/index along a chain of subgroups.
    RankGradient(RankGradientArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct IsoArgs {
    #[command(flatten)]
    pub source: SourceArgs,

    #[arg(short = 'm', long, default_value_t = 4)]
    pub m: usize,

    /// Greedy search when the exhaustive one would exceed the guard.
    #[arg(long)]
    pub heuristic: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CheckArgs {
    #[command(flatten)]
    pub campaign: CampaignArgs,

    #[arg(short = 'm', long, default_value_t = 4)]
    pub m: usize,

    #[arg(long)]
    pub heuristic: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WitnessArgs {
    #[arg(long, conflicts_with = "cost", required_unless_present = "cost")]
    pub beta1: Option<f64>,

    #[arg(long)]
    pub cost: Option<f64>,

    #[arg(long)]
    pub rank: u64,

    #[arg(long, value_delimiter = ',', required = true)]
    pub indices: Vec<u64>,

    /// Report the least index from which every ratio exceeds this.
    #[arg(long)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RankGradientArgs {
    /// Free group rank k: subgroup ranks are 1 + index·(k − 1).
    #[arg(long, conflicts_with = "ranks", required_unless_present = "ranks")]
    pub free: Option<u64>,

    #[arg(long, value_delimiter = ',')]
    pub ranks: Option<Vec<u64>>,

    #[arg(long, value_delimiter = ',', required = true)]
    pub indices: Vec<u64>,
}

/// Rendered output of one command.
#[derive(Debug, Clone)]
pub struct Output {
    pub body: String,
}

struct Ctx {
    format: Format,
    threads: usize,
}

pub fn run(cli: &Cli) -> Result<Output> {
    let ctx = Ctx { format: cli.format, threads: cli.threads };
    let body = match &cli.command {
        Command::Graph(a) => cmd_graph(&ctx, a)?,
        Command::Exact(a) => cmd_exact(&ctx, a)?,
        Command::Sample(a) => cmd_sample(&ctx, a)?,
        Command::Certificate(a) => cmd_certificate(&ctx, a)?,
        Command::Bounds { command } => match command {
            BoundsCommand::Iso(a) => cmd_iso(&ctx, a)?,
            BoundsCommand::Check(a) => cmd_check(&ctx, a)?,
            BoundsCommand::Witness(a) => cmd_witness(&ctx, a)?,
            BoundsCommand::RankGradient(a) => cmd_rank_gradient(&ctx, a)?,
        },
        Command::Report(a) => cmd_report(&ctx, a)?,
    };
    Ok(Output { body })
}

fn document(command: &str, args: &impl Serialize, result: Value) -> String {
    let mut config = json!({ "command": command });
    if let (Value::Object(c), Ok(Value::Object(a))) = (&mut config, serde_json::to_value(args)) {
        c.extend(a);
    }
    Document { header: Header::new(config), result }.to_pretty()
}

fn unsupported(format: Format, command: &str) -> CliError {
    CliError::usage(format!("{command} does not support --format {format:?}").to_lowercase())
}

fn conductance(unit: bool) -> WiredConductance {
    if unit {
        WiredConductance::Unit
    } else {
        WiredConductance::Multiplicity
    }
}

fn fmt_f(x: f64) -> String {
    format!("{x:.6}")
}

// ---------------------------------------------------------------- sources

enum Source {
    Group { exh: BallExhaustion, radius: u32 },
    File(SerreGraph),
}

impl Source {
    fn load(a: &SourceArgs, max_radius: u32) -> Result<Self> {
        match (&a.group, &a.graph) {
            (Some(g), None) => {
                let model = parse_group(g)?;
                Ok(Source::Group { exh: build_exhaustion(&model, max_radius, a.vertex_cap)?, radius: a.radius })
            }
            (None, Some(p)) => Ok(Source::File(parse_graph(&read_to_string(p)?)?)),
            _ => Err(CliError::usage("give exactly one of --group and --graph")),
        }
    }

    fn graph(&self) -> &SerreGraph {
        match self {
            Source::Group { exh, radius } => exh.ball(*radius).graph(),
            Source::File(g) => g,
        }
    }

    fn exhaustion(&self, what: &str) -> Result<&BallExhaustion> {
        match self {
            Source::Group { exh, .. } => Ok(exh),
            Source::File(_) => Err(CliError::usage(format!("{what} needs --group"))),
        }
    }
}

fn cmd_graph(ctx: &Ctx, a: &GraphArgs) -> Result<String> {
    let src = Source::load(&a.source, a.source.radius)?;
    let (graph, boundary, whole) = if a.wired {
        let exh = src.exhaustion("--wired")?;
        let w = exh.wired(a.source.radius, conductance(a.source.wired_unit));
        (w.graph, w.boundary, w.whole_group)
    } else {
        let whole = match &src {
            Source::Group { exh, radius } => exh.ball(*radius).is_whole_group(exh.model()),
            Source::File(_) => false,
        };
        (src.graph().clone(), None, whole)
    };
    graph.check_invariants()?;
    match ctx.format {
        Format::Json => {
            let result = json!({
                "graph": graph_to_json(&graph),
                "vertex_count": graph.vertex_count(),
                "edge_count": graph.edge_count(),
                "boundary": boundary,
                "whole_group": whole,
            });
            Ok(document("graph", a, result))
        }
        Format::Text => Ok(format!(
            "{} vertices, {} edges{}{}\n",
            graph.vertex_count(),
            graph.edge_count(),
            boundary.map(|b| format!(", boundary vertex {b}")).unwrap_or_default(),
            if whole { " (whole group)" } else { "" }
        )),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row<'a> {
                u: usize,
                v: usize,
                u_label: &'a str,
                v_label: &'a str,
                conductance: u32,
            }
            let rows: Vec<Row> = graph
                .edges()
                .iter()
                .enumerate()
                .map(|(i, &(u, v))| Row { u, v, u_label: graph.label(u), v_label: graph.label(v), conductance: graph.conductance(i) })
                .collect();
            rows_to_csv(&rows)
        }
    }
}

// ---------------------------------------------------------------- exact

fn parse_mode(mode: Option<&str>) -> Result<Option<BoundaryMode>> {
    match mode {
        None => Ok(None),
        Some("free") => Ok(Some(BoundaryMode::Free)),
        Some("wired") => Ok(Some(BoundaryMode::Wired)),
        Some(m) => Err(CliError::usage(format!("unknown mode '{m}' (free or wired)"))),
    }
}

fn cmd_exact(ctx: &Ctx, a: &ExactArgs) -> Result<String> {
    let actions = [a.edge.is_some(), a.count, a.table, a.sweep, a.beta1].iter().filter(|&&x| x).count();
    if actions != 1 {
        return Err(CliError::usage("exact needs exactly one of --edge, --count, --table, --sweep, --beta1"));
    }
    let mode = parse_mode(a.mode.as_deref())?;
    let wired_c = conductance(a.source.wired_unit);
    let top = a.max_radius.unwrap_or(a.source.radius);
    let src = Source::load(&a.source, if a.sweep || a.beta1 { top } else { a.source.radius })?;
    // The graph the probability is taken on, honouring --mode wired.
    let target = |src: &Source| -> Result<SerreGraph> {
        match mode {
            Some(BoundaryMode::Wired) => Ok(src.exhaustion("--mode wired")?.wired(a.source.radius, wired_c).graph),
            _ => Ok(src.graph().clone()),
        }
    };
    if let Some(e) = &a.edge {
        let g = target(&src)?;
        let (u, v) = (e[0], e[1]);
        let idx = g
            .find_edge(u, v)
            .ok_or_else(|| CoreError::Validation(format!("{{{u}, {v}}} is not an edge of the graph")))?;
        let p = ust_edge_probability(&g, idx)?;
        let exact = a.exact.then(|| ust_edge_probability_exact(&g, idx)).transpose()?;
        return Ok(match ctx.format {
            Format::Json => document(
                "exact",
                a,
                json!({"edge": [u, v], "probability": p, "exact": exact.as_ref().map(big_ratio_str)}),
            ),
            Format::Text => match &exact {
                Some(x) => format!("{p} ({})\n", big_ratio_str(x)),
                None => format!("{p}\n"),
            },
            Format::Csv => format!(
                "u,v,probability,exact\n{u},{v},{p},{}\n",
                exact.as_ref().map(big_ratio_str).unwrap_or_default()
            ),
        });
    }
    if a.count {
        let g = target(&src)?;
        let t = matrix_tree_count(&g)?;
        return Ok(match ctx.format {
            Format::Json => document("exact", a, json!({"spanning_trees": t.count.to_string(), "connected": t.connected})),
            Format::Text => format!("{}\n", t.count),
            Format::Csv => format!("spanning_trees,connected\n{},{}\n", t.count, t.connected),
        });
    }
    if a.table {
        let g = target(&src)?;
        let radius = matches!(src, Source::Group { .. }).then_some(a.source.radius);
        let table = edge_probability_table(&g, mode.unwrap_or(BoundaryMode::Free), radius, a.exact)?;
        let rows = table_rows(&g, &table);
        return match ctx.format {
            Format::Json => Ok(document("exact", a, json!({"mode": table.mode.as_str(), "radius": radius,
                "sum": table.sum(), "rows": rows}))),
            Format::Csv => rows_to_csv(&rows),
            Format::Text => Ok(text_rows(&rows)),
        };
    }
    let exh = src.exhaustion(if a.sweep { "--sweep" } else { "--beta1" })?;
    if a.sweep {
        let ball1 = exh.ball(1);
        let sweeps = ball1
            .identity_neighbours()
            .into_iter()
            .map(|s| exhaustion_probability_sweep(exh, 0, s, wired_c))
            .collect::<forestlab_core::Result<Vec<_>>>()?;
        let rows = sweep_rows(exh.ball(top).graph(), &sweeps, mode.map(BoundaryMode::as_str));
        return match ctx.format {
            Format::Json => Ok(document("exact", a, json!({"max_radius": top, "monotone": true, "rows": rows}))),
            Format::Csv => rows_to_csv(&rows),
            Format::Text => Ok(text_rows(&rows)),
        };
    }
    let mode = if a.strict { Beta1Mode::Strict } else { Beta1Mode::Fast };
    let b = beta1_estimate(exh, wired_c, mode)?;
    let d = &b.degree;
    Ok(match ctx.format {
        Format::Json => document(
            "exact",
            a,
            json!({
                "radius": d.radius,
                "degree": {"lower": d.lower, "upper": d.upper, "wired_sum": d.wired_sum, "free_sum": d.free_sum, "exact": d.exact},
                "beta1": {"lower": b.lower, "upper": b.upper},
            }),
        ),
        Format::Text => format!(
            "radius {}: degree in [{}, {}]{}; beta1 in [{}, {}]\n",
            d.radius,
            fmt_f(d.lower),
            fmt_f(d.upper),
            if d.exact { " (exact)" } else { "" },
            fmt_f(b.lower),
            fmt_f(b.upper)
        ),
        Format::Csv => return Err(unsupported(ctx.format, "exact --beta1")),
    })
}

fn text_rows(rows: &[crate::formats::ProbabilityRow]) -> String {
    let mut s = String::new();
    for r in rows {
        let radius = r.radius.map(|x| x.to_string()).unwrap_or_else(|| "-".into());
        let _ = writeln!(s, "{:<16} {:>3} {:<5} {:.9} {}", r.edge, radius, r.mode, r.probability, r.exact.as_deref().unwrap_or(""));
    }
    s
}

// ---------------------------------------------------------------- campaigns

struct Prepared {
    exh: BallExhaustion,
    config: SamplerConfig,
}

impl Prepared {
    fn new(a: &CampaignArgs) -> Result<Self> {
        let model = ForestModel::parse(&a.model)?;
        let windowed = match &model {
            ForestModel::MsfFree => true,
            ForestModel::Bernoulli { base, .. } => **base == ForestModel::MsfFree,
            _ => false,
        };
        let window = a.window.unwrap_or(if windowed { a.radius.saturating_sub(1).max(1) } else { a.radius });
        let group = parse_group(&a.group)?;
        let exh = build_exhaustion(&group, a.radius, a.vertex_cap)?;
        let mut config = SamplerConfig::new(model, a.radius, window);
        config.conductance = conductance(a.wired_unit);
        Ok(Prepared { exh, config })
    }

    fn sampler(&self) -> Result<PreparedSampler<'_>> {
        Ok(PreparedSampler::new(&self.exh, self.config.clone())?)
    }
}

/// Copy of the arguments with the resolved window, for the header.
fn with_window<T: Clone>(a: &T, window: u32, field: impl FnOnce(&mut T) -> &mut CampaignArgs) -> T {
    let mut out = a.clone();
    field(&mut out).window = Some(window);
    out
}

fn campaign(ctx: &Ctx, a: &CampaignArgs, p: &Prepared, cert: Option<u32>, dump: bool) -> Result<CampaignOutcome> {
    let s = p.sampler()?;
    let opts = CampaignOptions { certificate_window: cert, dump, threads: ctx.threads };
    run_campaign(&s, a.n, a.seed, &opts)
}

fn cmd_sample(ctx: &Ctx, a: &SampleArgs) -> Result<String> {
    let p = Prepared::new(&a.campaign)?;
    let a = &with_window(a, p.config.window, |x| &mut x.campaign);
    let out = campaign(ctx, &a.campaign, &p, None, a.dump.is_some())?;
    if let (Some(path), Some(d)) = (&a.dump, &out.dump) {
        write_all(path, d.as_bytes())?;
    }
    let law = &out.law;
    law.check()?;
    let ratio = obstruction_ratio(law).ok();
    Ok(match ctx.format {
        Format::Json => document("sample", a, law_to_json(law, ratio.as_ref())),
        Format::Text => {
            let mut s = format!(
                "{}\nN = {}  degree = {} ({})  {} CI [{}, {}]  width = {}\n",
                law.model,
                law.n,
                fmt_f(law.degree_mean),
                ratio_str(*law.degree_exact.numer(), *law.degree_exact.denom()),
                law.ci_method.as_str(),
                fmt_f(law.degree_ci.lo),
                fmt_f(law.degree_ci.hi),
                law.width
            );
            for (l, f) in law.labels.iter().zip(&law.f_hat) {
                let _ = writeln!(s, "  f({l}) = {}", fmt_f(*f));
            }
            if let Some(r) = &ratio {
                let _ = writeln!(s, "deg²/width = {}", fmt_f(r.value));
            }
            s
        }
        Format::Csv => {
            #[derive(Serialize)]
            struct Row<'a> {
                generator: &'a str,
                count: u64,
                f_hat: f64,
            }
            let rows: Vec<Row> = law
                .labels
                .iter()
                .zip(&law.counts)
                .zip(&law.f_hat)
                .map(|((l, &c), &f)| Row { generator: l, count: c, f_hat: f })
                .collect();
            rows_to_csv(&rows)?
        }
    })
}

fn cmd_certificate(ctx: &Ctx, a: &CertificateArgs) -> Result<String> {
    let p = Prepared::new(&a.campaign)?;
    let a = &with_window(a, p.config.window, |x| &mut x.campaign);
    let w = a.cert_window.unwrap_or(p.config.window);
    let out = campaign(ctx, &a.campaign, &p, Some(w), false)?;
    let cert = out.certificate.expect("certificate requested");
    let report = obstruction_report(&out.law, &cert)?;
    let csz = csz_check(&out.law);
    let doc = CertificateDoc::from_certificate(&cert);
    if let Some(path) = &a.cert_out {
        let mut s = serde_json::to_string_pretty(&doc).map_err(|e| CliError::json("certificate", e))?;
        s.push('\n');
        write_all(path, s.as_bytes())?;
    }
    Ok(match ctx.format {
        Format::Json => document(
            "certificate",
            a,
            json!({
                "certificate": doc,
                "law": law_to_json(&out.law, obstruction_ratio(&out.law).ok().as_ref()),
                "report": {
                    "bound": doc.bound,
                    "bound_value": report.bound,
                    "l2": report.l2,
                    "degree": report.degree,
                    "width": report.width,
                    "ratio": report.ratio,
                    "k_lower": report.k_lower,
                    "statement": report.statement,
                },
                "cauchy_schwarz": {"rhs": csz.rhs, "slack": csz.slack, "holds": csz.holds, "equality": csz.equality},
            }),
        ),
        Format::Text => format!(
            "bound = {} ({})  row violations = {}/{}\nl2 = {}  deg²/width = {}  K ≥ {}\n{}\n",
            doc.bound,
            fmt_f(report.bound),
            cert.row_violations,
            cert.n,
            fmt_f(report.l2),
            fmt_f(report.ratio),
            fmt_f(report.k_lower),
            report.statement
        ),
        Format::Csv => {
            let mut s = String::from("g,h,plus,minus,n\n");
            for &(g, h) in cert.kernel.keys() {
                let _ = writeln!(s, "{g},{h},{},{},{}", cert.plus_at(g, h), cert.minus_at(g, h), cert.n);
            }
            s
        }
    })
}

// ---------------------------------------------------------------- bounds

fn iso_json(iso: &forestlab_core::bounds::IsoperimetricEstimate) -> Value {
    json!({
        "m": iso.m,
        "ratio": ratio_str(*iso.ratio.numer() as u64, *iso.ratio.denom() as u64),
        "ratio_value": iso.ratio_f64(),
        "boundary": iso.boundary,
        "size": iso.size,
        "witness": iso.witness,
        "witness_labels": iso.witness_labels,
        "exhaustive": iso.exhaustive,
        "exhaustion_mode": iso.exhaustion_mode,
        "examined": iso.examined,
    })
}

fn cmd_iso(ctx: &Ctx, a: &IsoArgs) -> Result<String> {
    let src = Source::load(&a.source, a.source.radius)?;
    let interior = match &src {
        Source::Group { exh, radius } if !exh.ball(*radius).is_whole_group(exh.model()) => Some(exh.ball(*radius).interior()),
        _ => None,
    };
    let iso = isoperimetric_search(src.graph(), a.m, interior.as_deref(), a.heuristic)?;
    Ok(match ctx.format {
        Format::Json => document("bounds iso", a, iso_json(&iso)),
        Format::Text => format!(
            "m = {}: |∂h| = {}, |h| = {}, ratio {} witness [{}]{}\n",
            iso.m,
            iso.boundary,
            iso.size,
            ratio_str(*iso.ratio.numer() as u64, *iso.ratio.denom() as u64),
            iso.witness_labels.join(", "),
            if iso.exhaustive { "" } else { " (heuristic)" }
        ),
        Format::Csv => format!(
            "m,boundary,size,ratio,witness\n{},{},{},{},{}\n",
            iso.m,
            iso.boundary,
            iso.size,
            ratio_str(*iso.ratio.numer() as u64, *iso.ratio.denom() as u64),
            iso.witness_labels.join(" ")
        ),
    })
}

/// Law and degree-bound report; finite groups swallowed by the ball are
/// searched as standalone graphs (and reported as vacuous).
fn degree_bound(
    ctx: &Ctx,
    a: &CampaignArgs,
    p: &Prepared,
    m: usize,
    heuristic: bool,
) -> Result<(CampaignOutcome, forestlab_core::bounds::IsoperimetricEstimate, forestlab_core::bounds::DegreeBoundReport)> {
    let out = campaign(ctx, a, p, None, false)?;
    let ball = p.exh.ball(p.config.radius);
    let interior = (!ball.is_whole_group(p.exh.model())).then(|| ball.interior());
    let iso = isoperimetric_search(ball.graph(), m, interior.as_deref(), heuristic)?;
    let report = degree_bound_check(&out.law, &iso);
    Ok((out, iso, report))
}

fn bound_json(r: &forestlab_core::bounds::DegreeBoundReport) -> Value {
    json!({
        "degree": r.degree,
        "allowance": r.allowance,
        "bound": r.bound,
        "half_degree": r.half_degree,
        "half_form": r.half_form,
        "status": r.status.as_str(),
        "caveat": r.caveat,
    })
}

fn cmd_check(ctx: &Ctx, a: &CheckArgs) -> Result<String> {
    let p = Prepared::new(&a.campaign)?;
    let a = &with_window(a, p.config.window, |x| &mut x.campaign);
    let (out, iso, r) = degree_bound(ctx, &a.campaign, &p, a.m, a.heuristic)?;
    Ok(match ctx.format {
        Format::Json => document(
            "bounds check",
            a,
            json!({"law": law_to_json(&out.law, None), "isoperimetric": iso_json(&iso), "check": bound_json(&r)}),
        ),
        Format::Text => format!(
            "deg = {} ≤ 2 + {} (+{} allowance): {}\n{}",
            fmt_f(r.degree),
            fmt_f(iso.ratio_f64()),
            fmt_f(r.allowance),
            r.status.as_str(),
            r.caveat.as_ref().map(|c| format!("{c}\n")).unwrap_or_default()
        ),
        Format::Csv => format!(
            "degree,allowance,bound,status\n{},{},{},{}\n",
            r.degree,
            r.allowance,
            r.bound,
            r.status.as_str()
        ),
    })
}

fn cmd_witness(ctx: &Ctx, a: &WitnessArgs) -> Result<String> {
    let base = match (a.beta1, a.cost) {
        (Some(b), None) => WitnessBase::Beta1(b),
        (None, Some(c)) => WitnessBase::Cost(c),
        _ => return Err(CliError::usage("give exactly one of --beta1 and --cost")),
    };
    let r = witness_growth(base, a.rank, &a.indices, a.threshold)?;
    #[derive(Serialize)]
    struct Row {
        index: u64,
        scaled: f64,
        rank_bound: u64,
        ratio: f64,
    }
    let rows: Vec<Row> = r
        .rows
        .iter()
        .map(|w| Row { index: w.index, scaled: w.scaled, rank_bound: w.rank_bound, ratio: w.ratio })
        .collect();
    Ok(match ctx.format {
        Format::Json => document(
            "bounds witness",
            a,
            json!({
                "rows": rows,
                "strictly_increasing": r.strictly_increasing,
                "witness": r.witness,
                "message": r.message,
                "index_to_exceed": r.index_to_exceed,
            }),
        ),
        Format::Csv => rows_to_csv(&rows)?,
        Format::Text => {
            let mut s = String::new();
            for w in &rows {
                let _ = writeln!(s, "{:>8} {:>12} {:>10} {}", w.index, w.scaled, w.rank_bound, w.ratio);
            }
            let _ = writeln!(s, "{}", r.message);
            if let Some(m) = r.index_to_exceed {
                let _ = writeln!(s, "exceeds threshold from index {m}");
            }
            s
        }
    })
}

fn cmd_rank_gradient(ctx: &Ctx, a: &RankGradientArgs) -> Result<String> {
    let ranks = match (&a.ranks, a.free) {
        (Some(r), None) => r.clone(),
        (None, Some(k)) => a.indices.iter().map(|&m| free_group_rank(k, m)).collect::<forestlab_core::Result<_>>()?,
        _ => return Err(CliError::usage("give exactly one of --free and --ranks")),
    };
    let g = rank_gradient(&ranks, &a.indices)?;
    let ratios: Vec<String> = g.ratios.iter().map(|r| ratio_str(*r.numer(), *r.denom())).collect();
    Ok(match ctx.format {
        Format::Json => document(
            "bounds rank-gradient",
            a,
            json!({"ranks": ranks, "indices": a.indices, "ratios": ratios,
                "limit_estimate": g.limit_estimate, "constant": g.constant}),
        ),
        Format::Csv => {
            let mut s = String::from("index,rank,ratio\n");
            for ((m, r), q) in a.indices.iter().zip(&ranks).zip(&ratios) {
                let _ = writeln!(s, "{m},{r},{q}");
            }
            s
        }
        Format::Text => format!("(rk − 1)/index: {}  limit ≈ {}\n", ratios.join(", "), g.limit_estimate),
    })
}

// ---------------------------------------------------------------- report

fn cmd_report(ctx: &Ctx, a: &ReportArgs) -> Result<String> {
    let p = Prepared::new(&a.campaign)?;
    let a = &with_window(a, p.config.window, |x| &mut x.campaign);
    let s = p.sampler()?;
    let opts = CampaignOptions { certificate_window: Some(p.config.window), dump: false, threads: ctx.threads };
    let out = run_campaign(&s, a.campaign.n, a.campaign.seed, &opts)?;
    let law = &out.law;
    law.check()?;
    let cert = out.certificate.as_ref().expect("certificate requested");
    let csz = csz_check(law);
    let obstruction = obstruction_report(law, cert).ok();
    let ball = p.exh.ball(p.config.radius);
    let interior = (!ball.is_whole_group(p.exh.model())).then(|| ball.interior());
    let iso = isoperimetric_search(ball.graph(), a.m, interior.as_deref(), a.heuristic)?;
    let check = degree_bound_check(law, &iso);
    let exact = match a.exact_radius {
        Some(r) => {
            let exh = build_exhaustion(p.exh.model(), r, a.campaign.vertex_cap)?;
            let b = beta1_estimate(&exh, p.config.conductance, Beta1Mode::Fast)?;
            Some(json!({"radius": r, "degree": [b.degree.lower, b.degree.upper], "beta1": [b.lower, b.upper],
                "exact": b.degree.exact}))
        }
        None => None,
    };
    let group: &GroupModel = p.exh.model();
    Ok(match ctx.format {
        Format::Json => document(
            "report",
            a,
            json!({
                "group": group.describe(),
                "sampler": s.describe(),
                "law": law_to_json(law, obstruction_ratio(law).ok().as_ref()),
                "cauchy_schwarz": {"rhs": csz.rhs, "slack": csz.slack, "holds": csz.holds, "equality": csz.equality},
                "certificate": {
                    "bound": ratio_str(*cert.bound.numer(), *cert.bound.denom()),
                    "row_violations": cert.row_violations,
                    "invariance_defect": cert.invariance_defect,
                    "width_zero": cert.width_zero,
                },
                "obstruction": obstruction.as_ref().map(|o| json!({
                    "ratio": o.ratio, "l2": o.l2, "bound": o.bound, "k_lower": o.k_lower, "statement": o.statement,
                })),
                "isoperimetric": iso_json(&iso),
                "degree_bound": bound_json(&check),
                "exact": exact,
            }),
        ),
        Format::Text => {
            let mut t = format!("{}\n{}\n", group.describe(), s.describe());
            let _ = writeln!(t, "degree {} CI [{}, {}] width {}", fmt_f(law.degree_mean), fmt_f(law.degree_ci.lo), fmt_f(law.degree_ci.hi), law.width);
            let _ = writeln!(t, "Cauchy–Schwarz: deg ≤ {} ({})", fmt_f(csz.rhs), if csz.holds { "holds" } else { "FAILS" });
            let _ = writeln!(t, "certificate bound {}", ratio_str(*cert.bound.numer(), *cert.bound.denom()));
            if let Some(o) = &obstruction {
                let _ = writeln!(t, "{}", o.statement);
            }
            let _ = writeln!(t, "degree bound: {}", check.status.as_str());
            t
        }
        Format::Csv => return Err(unsupported(ctx.format, "report")),
    })
}
