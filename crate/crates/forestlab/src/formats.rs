//! Interchange formats: graph and group documents, edge-probability tables,
//! law and certificate JSON, NDJSON sample dumps and the reproducibility
//! header carried by every output document.

use std::collections::BTreeMap;
use std::io::Write;

use forestlab_core::electrical::{EdgeProbabilityTable, ExhaustionSweep};
use forestlab_core::graph::SerreGraph;
use forestlab_core::group::{FiniteGroup, GroupModel};
use forestlab_core::littlewood::LittlewoodCertificate;
use forestlab_core::samplers::ForestSample;
use forestlab_core::stats::{EmpiricalForestLaw, ObstructionRatio};
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{CliError, Result};

pub const TOOL: &str = "forestlab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub config: Value,
}

impl Header {
    pub fn new(config: Value) -> Self {
        Header { tool: TOOL.into(), version: VERSION.into(), config }
    }
}

/// Top-level JSON output: header plus the command's result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Document {
    pub header: Header,
    pub result: Value,
}

impl Document {
    pub fn to_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents are plain JSON values");
        s.push('\n');
        s
    }
}

pub fn ratio_str(n: u64, d: u64) -> String {
    let r = Ratio::new(n, d);
    format!("{}/{}", r.numer(), r.denom())
}

pub fn big_ratio_str(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer into a reduced ratio.
pub fn parse_ratio(s: &str) -> Result<Ratio<u64>> {
    let bad = || CliError::parse(format!("'{s}' is not a ratio p/q"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?),
        None => (s.trim().parse().map_err(|_| bad())?, 1),
    };
    if d == 0 {
        return Err(bad());
    }
    Ok(Ratio::new(n, d))
}

pub fn parse_big_ratio(s: &str) -> Result<BigRational> {
    let bad = || CliError::parse(format!("'{s}' is not a ratio p/q"));
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

// ---------------------------------------------------------------- groups

/// Parses a group from a compact string or a JSON document.
///
/// Compact forms: `free:k`, `lattice:d`, `cyclic:n`, `dihedral:n`,
/// `symmetric:n`, combined with ` x ` (direct product, binds tighter) and
/// `*` (free product), e.g. `cyclic:2*cyclic:3` or `lattice:1 x cyclic:4`.
pub fn parse_group(spec: &str) -> Result<GroupModel> {
    let spec = spec.trim();
    let model = if spec.starts_with('{') {
        let v: Value = serde_json::from_str(spec).map_err(|e| CliError::json("group document", e))?;
        group_from_json(&v)?
    } else {
        parse_group_expr(spec)?
    };
    model.validate()?;
    Ok(model)
}

fn parse_group_expr(s: &str) -> Result<GroupModel> {
    let free: Vec<&str> = s.split('*').map(str::trim).collect();
    if free.len() > 1 {
        return Ok(GroupModel::FreeProduct(free.iter().map(|p| parse_group_expr(p)).collect::<Result<_>>()?));
    }
    let direct: Vec<&str> = s.split(" x ").flat_map(|p| p.split('×')).map(str::trim).collect();
    if direct.len() > 1 {
        return Ok(GroupModel::DirectProduct(direct.iter().map(|p| parse_atom(p)).collect::<Result<_>>()?));
    }
    parse_atom(s)
}

fn parse_atom(s: &str) -> Result<GroupModel> {
    let (family, param) =
        s.split_once(':').ok_or_else(|| CliError::parse(format!("group '{s}' should look like family:parameter")))?;
    let n: usize = param.trim().parse().map_err(|_| CliError::parse(format!("bad group parameter '{param}'")))?;
    Ok(match family.trim() {
        "free" => GroupModel::Free { rank: n },
        "lattice" => GroupModel::Lattice { dim: n },
        "cyclic" => GroupModel::Cyclic { order: n as u64 },
        "dihedral" if n >= 2 => GroupModel::Finite(FiniteGroup::dihedral(n)),
        "symmetric" if (2..=7).contains(&n) => GroupModel::Finite(FiniteGroup::symmetric(n)),
        "dihedral" | "symmetric" => return Err(CliError::parse(format!("{family}:{n} is out of range"))),
        other => return Err(CliError::parse(format!("unknown group family '{other}'"))),
    })
}

fn param_usize(params: &Value, key: &str) -> Result<usize> {
    params
        .get(key)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| CliError::parse(format!("group params need a non-negative integer '{key}'")))
}

pub fn group_from_json(v: &Value) -> Result<GroupModel> {
    let family = v.get("family").and_then(Value::as_str).ok_or_else(|| CliError::parse("group document needs 'family'"))?;
    let empty = json!({});
    let params = v.get("params").unwrap_or(&empty);
    let factors = || -> Result<Vec<GroupModel>> {
        params
            .get("factors")
            .and_then(Value::as_array)
            .ok_or_else(|| CliError::parse("product groups need params.factors"))?
            .iter()
            .map(group_from_json)
            .collect()
    };
    Ok(match family {
        "free" => GroupModel::Free { rank: param_usize(params, "rank")? },
        "lattice" => GroupModel::Lattice { dim: param_usize(params, "dim")? },
        "cyclic" => GroupModel::Cyclic { order: param_usize(params, "order")? as u64 },
        "finite" => {
            let table: Vec<Vec<usize>> = serde_json::from_value(
                params.get("table").cloned().ok_or_else(|| CliError::parse("finite group needs params.table"))?,
            )
            .map_err(|e| CliError::json("multiplication table", e))?;
            let generators: Vec<usize> = match params.get("generators") {
                Some(g) => serde_json::from_value(g.clone()).map_err(|e| CliError::json("generators", e))?,
                None => (0..table.len()).collect(),
            };
            let identity = table.iter().position(|row| row.iter().copied().eq(0..row.len()));
            let generators = generators.into_iter().filter(|&g| Some(g) != identity).collect();
            GroupModel::Finite(FiniteGroup::new(table, generators)?)
        }
        "direct_product" => GroupModel::DirectProduct(factors()?),
        "free_product" => GroupModel::FreeProduct(factors()?),
        other => return Err(CliError::parse(format!("unknown group family '{other}'"))),
    })
}

// ---------------------------------------------------------------- graphs

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum VertexSpec {
    Count(usize),
    Labels(Vec<String>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Endpoint {
    Index(usize),
    Label(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GraphDoc {
    vertices: VertexSpec,
    edges: Vec<[Endpoint; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    conductances: Option<Vec<u32>>,
}

/// Reads a graph document. Endpoints may be vertex indices or labels.
pub fn parse_graph(text: &str) -> Result<SerreGraph> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| CliError::json("graph document", e))?;
    let labels = match doc.vertices {
        VertexSpec::Count(n) => (0..n).map(|i| i.to_string()).collect(),
        VertexSpec::Labels(l) => l,
    };
    let mut index = BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(CliError::parse(format!("duplicate vertex label '{l}'")));
        }
    }
    let resolve = |e: &Endpoint| -> Result<usize> {
        match e {
            Endpoint::Index(i) if *i < labels.len() => Ok(*i),
            Endpoint::Index(i) => Err(CliError::parse(format!("edge endpoint {i} out of range ({} vertices)", labels.len()))),
            Endpoint::Label(l) => index.get(l).copied().ok_or_else(|| CliError::parse(format!("unknown vertex '{l}'"))),
        }
    };
    if let Some(c) = &doc.conductances {
        if c.len() != doc.edges.len() {
            return Err(CliError::parse("conductances must list one value per edge"));
        }
    }
    let mut g = SerreGraph::new(labels.clone());
    for (k, [a, b]) in doc.edges.iter().enumerate() {
        let c = doc.conductances.as_ref().map_or(1, |c| c[k]);
        g.add_edge_with_conductance(resolve(a)?, resolve(b)?, c)?;
    }
    Ok(g)
}

pub fn graph_to_json(g: &SerreGraph) -> Value {
    let doc = GraphDoc {
        vertices: VertexSpec::Labels(g.labels().to_vec()),
        edges: g.edges().iter().map(|&(u, v)| [Endpoint::Index(u), Endpoint::Index(v)]).collect(),
        conductances: (!g.has_unit_conductances()).then(|| g.conductances().to_vec()),
    };
    serde_json::to_value(doc).expect("graph documents serialise")
}

// ---------------------------------------------------------------- tables

/// One row of an edge-probability table; `exact` holds `p/q` when computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityRow {
    pub edge: String,
    pub radius: Option<u32>,
    pub mode: String,
    pub probability: f64,
    pub exact: Option<String>,
}

fn edge_name(g: &SerreGraph, u: usize, v: usize) -> String {
    format!("{}-{}", g.label(u), g.label(v))
}

pub fn table_rows(g: &SerreGraph, t: &EdgeProbabilityTable) -> Vec<ProbabilityRow> {
    t.entries
        .iter()
        .map(|e| {
            let (u, v) = g.endpoints(e.edge);
            ProbabilityRow {
                edge: edge_name(g, u, v),
                radius: t.radius,
                mode: t.mode.as_str().into(),
                probability: e.probability,
                exact: e.exact.as_ref().map(big_ratio_str),
            }
        })
        .collect()
}

/// Rows for sweeps over the identity edges, both modes unless one is named.
pub fn sweep_rows(g: &SerreGraph, sweeps: &[ExhaustionSweep], mode: Option<&str>) -> Vec<ProbabilityRow> {
    let mut rows = Vec::new();
    for s in sweeps {
        let (u, v) = s.endpoints;
        for e in &s.entries {
            for (m, p) in [("free", e.free), ("wired", e.wired)] {
                if mode.is_none_or(|x| x == m) {
                    rows.push(ProbabilityRow {
                        edge: edge_name(g, u, v),
                        radius: Some(e.radius),
                        mode: m.into(),
                        probability: p,
                        exact: None,
                    });
                }
            }
        }
    }
    rows
}

pub fn rows_to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::parse(format!("csv: {}", e.error())))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn rows_from_csv<T: for<'de> Deserialize<'de>>(text: &str) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize().map(|x| x.map_err(CliError::from)).collect()
}

// ---------------------------------------------------------------- laws

pub fn law_to_json(law: &EmpiricalForestLaw, ratio: Option<&ObstructionRatio>) -> Value {
    let f_hat: serde_json::Map<String, Value> =
        law.labels.iter().zip(&law.f_hat).map(|(l, f)| (l.clone(), json!(f))).collect();
    let counts: serde_json::Map<String, Value> =
        law.labels.iter().zip(&law.counts).map(|(l, c)| (l.clone(), json!(c))).collect();
    json!({
        "model": law.model,
        "N": law.n,
        "f_hat": f_hat,
        "counts": counts,
        "degree": {
            "mean": law.degree_mean,
            "exact": ratio_str(*law.degree_exact.numer(), *law.degree_exact.denom()),
            "sd": law.degree_sd,
            "ci": [law.degree_ci.lo, law.degree_ci.hi],
            "ci_method": law.ci_method.as_str(),
        },
        "width": law.width,
        "support": law.support,
        "l2": law.l2_norm(),
        "ratio": ratio.map(|r| json!({"value": r.value, "ci": [r.ci.lo, r.ci.hi]})),
        "invariance": law.invariance.as_ref().map(|c| json!({
            "base": c.base,
            "degree_mean": c.degree_mean,
            "defect": c.defect,
            "allowance": c.allowance,
            "consistent": c.consistent,
        })),
    })
}

// ---------------------------------------------------------------- certificates

/// Certificate document: sparse `[g, h, count]` triplets over the common
/// denominator `n`, sups as exact `p/q` strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub labels: Vec<String>,
    pub n: u64,
    pub symmetric: bool,
    pub plus: Vec<[u64; 3]>,
    pub minus: Vec<[u64; 3]>,
    pub kernel: Vec<[u64; 3]>,
    pub row_sup: String,
    pub col_sup: String,
    pub bound: String,
    pub row_violations: u64,
    pub invariance_defect: Option<u64>,
    pub width_zero: bool,
}

fn triplets(m: &BTreeMap<(usize, usize), u64>) -> Vec<[u64; 3]> {
    m.iter().map(|(&(g, h), &c)| [g as u64, h as u64, c]).collect()
}

fn from_triplets(t: &[[u64; 3]]) -> BTreeMap<(usize, usize), u64> {
    t.iter().map(|&[g, h, c]| ((g as usize, h as usize), c)).collect()
}

impl CertificateDoc {
    pub fn from_certificate(c: &LittlewoodCertificate) -> Self {
        let r = |x: &Ratio<u64>| ratio_str(*x.numer(), *x.denom());
        CertificateDoc {
            labels: c.labels.clone(),
            n: c.n,
            symmetric: c.symmetric,
            plus: triplets(&c.plus),
            minus: triplets(&c.minus),
            kernel: triplets(&c.kernel),
            row_sup: r(&c.row_sup),
            col_sup: r(&c.col_sup),
            bound: r(&c.bound),
            row_violations: c.row_violations,
            invariance_defect: c.invariance_defect,
            width_zero: c.width_zero,
        }
    }

    /// Rebuilds the certificate, recomputing kernel and sups from the split
    /// and checking them against the stored values.
    pub fn to_certificate(&self) -> Result<LittlewoodCertificate> {
        let mut c = LittlewoodCertificate::from_split(
            self.labels.clone(),
            self.n,
            from_triplets(&self.plus),
            from_triplets(&self.minus),
        )?;
        c.symmetric = self.symmetric;
        c.row_violations = self.row_violations;
        c.invariance_defect = self.invariance_defect;
        if c.kernel != from_triplets(&self.kernel) {
            return Err(CliError::parse("stored kernel does not equal f⁺ + f⁻"));
        }
        for (name, stored, computed) in
            [("row_sup", &self.row_sup, c.row_sup), ("col_sup", &self.col_sup, c.col_sup), ("bound", &self.bound, c.bound)]
        {
            if parse_ratio(stored)? != computed {
                return Err(CliError::parse(format!("stored {name} {stored} disagrees with the entries")));
            }
        }
        c.verify()?;
        Ok(c)
    }
}

// ---------------------------------------------------------------- dumps

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DumpLine {
    pub seed: u64,
    pub index: u64,
    pub model: String,
    pub radius: Option<u32>,
    pub edges: Vec<[usize; 2]>,
}

impl DumpLine {
    pub fn new(g: &SerreGraph, model: &str, s: &ForestSample) -> Self {
        DumpLine {
            seed: s.provenance.seed,
            index: s.provenance.index,
            model: model.into(),
            radius: s.provenance.radius,
            edges: s.edges.iter().map(|&e| g.endpoints(e).into()).collect(),
        }
    }

    pub fn to_line(&self) -> String {
        let mut s = serde_json::to_string(self).expect("dump lines serialise");
        s.push('\n');
        s
    }
}

pub fn write_all(path: &std::path::Path, bytes: &[u8]) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    f.write_all(bytes).map_err(|e| CliError::io(path, e))
}

pub fn read_to_string(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}
