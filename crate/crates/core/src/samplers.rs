//! Forest samplers: Wilson's algorithm for uniform spanning trees (free and
//! wired), minimal spanning forests by the cycle rule with a Kruskal
//! oracle, finite-window free MSF, and Bernoulli-augmented unions.

use alloc::boxed::Box;
use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cayley::{BallExhaustion, CayleyBall, WiredConductance, WiredGraph};
use crate::error::{Error, Result};
use crate::graph::{is_acyclic, SerreGraph, UnionFind};
use crate::rng::{draw_at, purpose, substream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelTag {
    UstFree,
    UstWired,
    MsfFree,
    MsfWired,
    BernoulliUnion,
    Empty,
}

impl ModelTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelTag::UstFree => "ust-free",
            ModelTag::UstWired => "ust-wired",
            ModelTag::MsfFree => "msf-free",
            ModelTag::MsfWired => "msf-wired",
            ModelTag::BernoulliUnion => "bernoulli-union",
            ModelTag::Empty => "empty",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub model: ModelTag,
    pub seed: u64,
    pub index: u64,
    pub radius: Option<u32>,
    pub p: Option<f64>,
    /// Set when a wired sampler ran on a ball with no boundary and fell back
    /// to the free sampler.
    pub fallback: bool,
}

/// Geometric edges of a graph drawn by one sampler call, sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct ForestSample {
    pub edges: Vec<usize>,
    pub provenance: Provenance,
}

impl ForestSample {
    pub fn contains(&self, edge: usize) -> bool {
        self.edges.binary_search(&edge).is_ok()
    }

    /// Acyclicity and index range. Bernoulli unions are not forests and are
    /// only range-checked.
    pub fn check(&self, graph: &SerreGraph) -> Result<()> {
        if let Some(&e) = self.edges.iter().find(|&&e| e >= graph.edge_count()) {
            return Err(Error::consistency(format!("sample references edge {e} outside the graph")));
        }
        if self.edges.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::consistency("sample edges are not strictly sorted"));
        }
        if self.provenance.model != ModelTag::BernoulliUnion && !is_acyclic(graph, &self.edges) {
            return Err(Error::consistency(format!(
                "{} sample {} contains a cycle",
                self.provenance.model.as_str(),
                self.provenance.index
            )));
        }
        Ok(())
    }

    /// Number of sample edges at vertex `v`.
    pub fn degree(&self, graph: &SerreGraph, v: usize) -> usize {
        graph.neighbours(v).iter().filter(|(_, e)| self.contains(e.geometric())).count()
    }
}

fn provenance(model: ModelTag, seed: u64, index: u64) -> Provenance {
    Provenance { model, seed, index, radius: None, p: None, fallback: false }
}

/// Loop-erased random walk spanning tree rooted at `root`, with transition
/// probabilities proportional to conductance.
pub fn wilson(graph: &SerreGraph, root: usize, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    let n = graph.vertex_count();
    if root >= n {
        return Err(Error::validation(format!("root {root} outside 0..{n}")));
    }
    if !graph.is_connected() {
        return Err(Error::Disconnected { components: graph.components() });
    }
    let unit = graph.has_unit_conductances();
    let totals: Vec<u64> = (0..n)
        .map(|v| graph.neighbours(v).iter().map(|(_, e)| u64::from(graph.conductance(e.geometric()))).sum())
        .collect();
    let mut in_tree = vec![false; n];
    in_tree[root] = true;
    let mut next = vec![(usize::MAX, usize::MAX); n];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for start in 0..n {
        let mut u = start;
        while !in_tree[u] {
            let nb = graph.neighbours(u);
            let k = if unit {
                rng.random_range(0..nb.len() as u64) as usize
            } else {
                let mut t = rng.random_range(0..totals[u]);
                let mut k = 0;
                loop {
                    let c = u64::from(graph.conductance(nb[k].1.geometric()));
                    if t < c {
                        break k;
                    }
                    t -= c;
                    k += 1;
                }
            };
            let (w, e) = nb[k];
            next[u] = (w, e.geometric());
            u = w;
        }
        let mut u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            edges.push(next[u].1);
            u = next[u].0;
        }
    }
    edges.sort_unstable();
    Ok(edges)
}

/// Uniform spanning tree of a connected graph, walk rooted at vertex 0.
pub fn sample_ust(graph: &SerreGraph, seed: u64, index: u64) -> Result<ForestSample> {
    let mut rng = substream(seed, index, purpose::UST_WALK);
    let edges = wilson(graph, 0, &mut rng)?;
    Ok(ForestSample { edges, provenance: provenance(ModelTag::UstFree, seed, index) })
}

/// Uniform spanning tree of the wired graph rooted at ∂, with ∂ deleted.
/// Edge indices refer to the unwired graph. Without a boundary the free
/// sampler is used and the sample is flagged.
pub fn sample_wired_ust(wired: &WiredGraph, seed: u64, index: u64) -> Result<ForestSample> {
    let mut rng = substream(seed, index, purpose::UST_WALK);
    let mut prov = provenance(ModelTag::UstWired, seed, index);
    let edges = match wired.boundary {
        Some(b) => {
            let mut edges = wilson(&wired.graph, b, &mut rng)?;
            edges.retain(|&e| !wired.is_boundary_edge(e));
            edges
        }
        None => {
            prov.fallback = true;
            wilson(&wired.graph, 0, &mut rng)?
        }
    };
    Ok(ForestSample { edges, provenance: prov })
}

/// Unique slot for the unordered vertex pair `{u, v}`; weights drawn at this
/// slot depend on the endpoints only, so nested balls see the same weights.
pub fn pair_slot(u: usize, v: usize) -> u128 {
    let (a, b) = (u.min(v) as u128, u.max(v) as u128);
    b * b.saturating_sub(1) / 2 + a
}

/// Per-edge weights; the effective weight is the pair (value, slot), so all
/// effective weights of a simple graph are distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightAssignment {
    keys: Vec<(u64, u128)>,
}

impl WeightAssignment {
    /// Uniform 64-bit weights from the MSF stream of `(seed, index)`.
    pub fn draw(graph: &SerreGraph, seed: u64, index: u64) -> Self {
        let mut rng = substream(seed, index, purpose::MSF_WEIGHTS);
        let keys = graph
            .edges()
            .iter()
            .map(|&(u, v)| {
                let slot = pair_slot(u, v);
                (draw_at(&mut rng, slot), slot)
            })
            .collect();
        WeightAssignment { keys }
    }

    pub fn from_values(graph: &SerreGraph, values: &[u64]) -> Result<Self> {
        if values.len() != graph.edge_count() {
            return Err(Error::validation(format!(
                "{} weights given for {} edges",
                values.len(),
                graph.edge_count()
            )));
        }
        let keys = graph.edges().iter().zip(values).map(|(&(u, v), &w)| (w, pair_slot(u, v))).collect();
        Ok(WeightAssignment { keys })
    }

    pub fn key(&self, edge: usize) -> (u64, u128) {
        self.keys[edge]
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Edge indices in increasing effective weight.
    pub fn order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.keys.len()).collect();
        idx.sort_unstable_by_key(|&e| self.keys[e]);
        idx
    }

    pub fn all_distinct(&self) -> bool {
        let mut k = self.keys.clone();
        k.sort_unstable();
        k.windows(2).all(|w| w[0] != w[1])
    }
}

/// True if `edge` is the heaviest edge of some cycle, i.e. its endpoints are
/// joined by a path of strictly lighter edges.
fn is_cycle_max(graph: &SerreGraph, weights: &WeightAssignment, edge: usize) -> bool {
    let (s, t) = graph.endpoints(edge);
    let limit = weights.key(edge);
    let mut seen = vec![false; graph.vertex_count()];
    let mut queue = VecDeque::from([s]);
    seen[s] = true;
    while let Some(u) = queue.pop_front() {
        for &(w, e) in graph.neighbours(u) {
            if !seen[w] && weights.key(e.geometric()) < limit {
                if w == t {
                    return true;
                }
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    false
}

/// Cycle rule: keep exactly the edges of `candidates` that are not the
/// maximum of any cycle of `graph`.
pub fn cycle_rule_forest(graph: &SerreGraph, weights: &WeightAssignment, candidates: &[usize]) -> Vec<usize> {
    let mut kept: Vec<usize> = candidates.iter().copied().filter(|&e| !is_cycle_max(graph, weights, e)).collect();
    kept.sort_unstable();
    kept
}

/// Minimum spanning forest by Kruskal's algorithm.
pub fn kruskal(graph: &SerreGraph, weights: &WeightAssignment) -> Vec<usize> {
    let mut uf = UnionFind::new(graph.vertex_count());
    let mut kept: Vec<usize> = weights
        .order()
        .into_iter()
        .filter(|&e| {
            let (u, v) = graph.endpoints(e);
            uf.union(u, v)
        })
        .collect();
    kept.sort_unstable();
    kept
}

/// Free minimal spanning forest of a finite graph via the cycle rule.
pub fn sample_msf(graph: &SerreGraph, seed: u64, index: u64) -> ForestSample {
    let weights = WeightAssignment::draw(graph, seed, index);
    let all: Vec<usize> = (0..graph.edge_count()).collect();
    ForestSample { edges: cycle_rule_forest(graph, &weights, &all), provenance: provenance(ModelTag::MsfFree, seed, index) }
}

/// Kruskal on `ambient` with every vertex outside `0..inside` contracted to
/// a single boundary vertex; returns the kept edges with both ends inside,
/// as ambient edge indices.
fn wired_kruskal(ambient: &SerreGraph, inside: usize, weights: &WeightAssignment) -> Vec<usize> {
    let n = ambient.vertex_count();
    let mut uf = UnionFind::new(n + 1);
    for v in inside..n {
        uf.union(v, n);
    }
    let mut kept: Vec<usize> = weights
        .order()
        .into_iter()
        .filter(|&e| {
            let (u, v) = ambient.endpoints(e);
            uf.union(u, v) && u < inside && v < inside
        })
        .collect();
    kept.sort_unstable();
    kept
}

/// Wired minimal spanning forest of ball `r`: Kruskal on ball `r + 1` with
/// the complement of ball `r` wired to ∂, then ∂ deleted. Edge indices refer
/// to ball `r`.
pub fn sample_wired_msf(exh: &BallExhaustion, r: u32, seed: u64, index: u64) -> ForestSample {
    let ball = exh.ball(r);
    let ambient = exh.ball(r + 1).graph();
    let weights = WeightAssignment::draw(ambient, seed, index);
    let edges = to_inner(ball.graph(), ambient, wired_kruskal(ambient, ball.vertex_count(), &weights));
    let mut prov = provenance(ModelTag::MsfWired, seed, index);
    prov.radius = Some(r);
    prov.fallback = ball.is_whole_group(exh.model());
    ForestSample { edges, provenance: prov }
}

fn to_inner(inner: &SerreGraph, outer: &SerreGraph, edges: Vec<usize>) -> Vec<usize> {
    let mut out: Vec<usize> = edges
        .into_iter()
        .map(|e| {
            let (u, v) = outer.endpoints(e);
            inner.find_edge(u, v).expect("inner graph is an induced prefix")
        })
        .collect();
    out.sort_unstable();
    out
}

/// Finite-window free MSF: weights on ball `big_r`; an edge of ball `r` is
/// deleted iff it is the maximum of a cycle inside ball `big_r`. Edge indices
/// refer to ball `r`.
pub fn sample_fmsf_window(exh: &BallExhaustion, r: u32, big_r: u32, seed: u64, index: u64) -> Result<ForestSample> {
    if big_r <= r {
        return Err(Error::validation(format!("context radius {big_r} must exceed window radius {r}")));
    }
    if big_r > exh.max_radius() + 1 {
        return Err(Error::validation(format!(
            "context radius {big_r} exceeds the exhaustion (max {})",
            exh.max_radius() + 1
        )));
    }
    let host = exh.ball(big_r).graph();
    let window = exh.ball(r);
    let edges = window_msf(host, window, &WeightAssignment::draw(host, seed, index));
    let mut prov = provenance(ModelTag::MsfFree, seed, index);
    prov.radius = Some(r);
    Ok(ForestSample { edges, provenance: prov })
}

fn window_msf(host: &SerreGraph, window: &CayleyBall, weights: &WeightAssignment) -> Vec<usize> {
    let k = window.vertex_count();
    let candidates: Vec<usize> =
        (0..host.edge_count()).filter(|&e| host.endpoints(e).0 < k && host.endpoints(e).1 < k).collect();
    to_inner(window.graph(), host, cycle_rule_forest(host, weights, &candidates))
}

/// Independent Bernoulli(`p`) edge set from the Bernoulli stream.
pub fn bernoulli_edges(graph: &SerreGraph, p: f64, seed: u64, index: u64) -> Result<Vec<usize>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::validation(format!("probability {p} outside [0, 1]")));
    }
    let mut rng = substream(seed, index, purpose::BERNOULLI);
    Ok((0..graph.edge_count())
        .filter(|&e| {
            let (u, v) = graph.endpoints(e);
            let x = (draw_at(&mut rng, pair_slot(u, v)) >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            x < p
        })
        .collect())
}

/// Union of a forest sample and an independent Bernoulli(`p`) edge set.
/// The forest part uses the base sampler's own stream, so `p = 0` returns
/// the base sample's edges unchanged.
pub fn sample_bernoulli_union(base: &ForestSample, graph: &SerreGraph, p: f64) -> Result<ForestSample> {
    let extra = bernoulli_edges(graph, p, base.provenance.seed, base.provenance.index)?;
    let mut edges = base.edges.clone();
    edges.extend(extra);
    edges.sort_unstable();
    edges.dedup();
    let mut prov = base.provenance.clone();
    prov.model = ModelTag::BernoulliUnion;
    prov.p = Some(p);
    Ok(ForestSample { edges, provenance: prov })
}

/// Forest model selectable for sampling campaigns on an exhaustion.
#[derive(Debug, Clone, PartialEq)]
pub enum ForestModel {
    UstFree,
    UstWired,
    MsfFree,
    MsfWired,
    Bernoulli { base: Box<ForestModel>, p: f64 },
    /// The empty forest (width zero).
    Empty,
}

impl ForestModel {
    pub fn tag(&self) -> ModelTag {
        match self {
            ForestModel::UstFree => ModelTag::UstFree,
            ForestModel::UstWired => ModelTag::UstWired,
            ForestModel::MsfFree => ModelTag::MsfFree,
            ForestModel::MsfWired => ModelTag::MsfWired,
            ForestModel::Bernoulli { .. } => ModelTag::BernoulliUnion,
            ForestModel::Empty => ModelTag::Empty,
        }
    }

    /// Parses `ust-free`, `ust-wired`, `msf-free`, `msf-wired`, `empty`,
    /// `bernoulli:p` (MSF-free base) and `bernoulli:p:base`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        Ok(match s {
            "ust-free" => ForestModel::UstFree,
            "ust-wired" => ForestModel::UstWired,
            "msf-free" => ForestModel::MsfFree,
            "msf-wired" => ForestModel::MsfWired,
            "empty" => ForestModel::Empty,
            _ => {
                let rest = s
                    .strip_prefix("bernoulli:")
                    .ok_or_else(|| Error::validation(format!("unknown forest model '{s}'")))?;
                let (p, base) = match rest.split_once(':') {
                    Some((p, base)) => (p, ForestModel::parse(base)?),
                    None => (rest, ForestModel::MsfFree),
                };
                let p: f64 = p.parse().map_err(|_| Error::validation(format!("bad probability '{p}'")))?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::validation(format!("probability {p} outside [0, 1]")));
                }
                if matches!(base, ForestModel::Bernoulli { .. }) {
                    return Err(Error::validation("nested bernoulli models are not supported"));
                }
                ForestModel::Bernoulli { base: Box::new(base), p }
            }
        })
    }

    /// True for models whose samples are forests.
    pub fn is_forest(&self) -> bool {
        !matches!(self, ForestModel::Bernoulli { .. })
    }
}

impl fmt::Display for ForestModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ForestModel::Bernoulli { base, p } if **base == ForestModel::MsfFree => write!(f, "bernoulli:{p}"),
            ForestModel::Bernoulli { base, p } => write!(f, "bernoulli:{p}:{base}"),
            other => f.write_str(other.tag().as_str()),
        }
    }
}

/// Model plus the balls it runs on. Samples are edge sets of the host ball
/// (radius `radius`); only edges inside the window ball (radius `window`)
/// are meaningful for the windowed free MSF, whose cycles are taken in the
/// host ball.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    pub model: ForestModel,
    pub radius: u32,
    pub window: u32,
    pub conductance: WiredConductance,
}

impl SamplerConfig {
    pub fn new(model: ForestModel, radius: u32, window: u32) -> Self {
        SamplerConfig { model, radius, window, conductance: WiredConductance::default() }
    }
}

/// A sampler bound to an exhaustion, with the wired graph prepared once.
#[derive(Debug, Clone)]
pub struct PreparedSampler<'a> {
    exh: &'a BallExhaustion,
    config: SamplerConfig,
    wired: Option<WiredGraph>,
}

impl<'a> PreparedSampler<'a> {
    pub fn new(exh: &'a BallExhaustion, config: SamplerConfig) -> Result<Self> {
        let SamplerConfig { radius, window, .. } = config;
        if window < 1 {
            return Err(Error::validation("window radius must be at least 1"));
        }
        if window > radius {
            return Err(Error::validation(format!("window radius {window} exceeds sampling radius {radius}")));
        }
        if radius > exh.max_radius() {
            return Err(Error::validation(format!(
                "sampling radius {radius} exceeds the exhaustion (max {})",
                exh.max_radius()
            )));
        }
        let needs_wired = match &config.model {
            ForestModel::UstWired => true,
            ForestModel::Bernoulli { base, .. } => **base == ForestModel::UstWired,
            _ => false,
        };
        let needs_margin = match &config.model {
            ForestModel::MsfFree => true,
            ForestModel::Bernoulli { base, .. } => **base == ForestModel::MsfFree,
            _ => false,
        };
        if needs_margin && window == radius && !exh.ball(radius).is_whole_group(exh.model()) {
            return Err(Error::validation(format!(
                "windowed free MSF needs a context radius larger than the window ({window})"
            )));
        }
        let wired = needs_wired.then(|| exh.wired(radius, config.conductance));
        Ok(PreparedSampler { exh, config, wired })
    }

    pub fn config(&self) -> &SamplerConfig {
        &self.config
    }

    pub fn exhaustion(&self) -> &BallExhaustion {
        self.exh
    }

    /// The ball whose edges samples refer to.
    pub fn host(&self) -> &CayleyBall {
        self.exh.ball(self.config.radius)
    }

    pub fn sample(&self, seed: u64, index: u64) -> Result<ForestSample> {
        let mut s = self.sample_model(&self.config.model, seed, index)?;
        s.provenance.radius = Some(self.config.radius);
        Ok(s)
    }

    fn sample_model(&self, model: &ForestModel, seed: u64, index: u64) -> Result<ForestSample> {
        let host = self.host();
        let r = self.config.radius;
        match model {
            ForestModel::UstFree => sample_ust(host.graph(), seed, index),
            ForestModel::UstWired => sample_wired_ust(self.wired.as_ref().expect("prepared"), seed, index),
            ForestModel::MsfWired => Ok(sample_wired_msf(self.exh, r, seed, index)),
            ForestModel::MsfFree => {
                let weights = WeightAssignment::draw(host.graph(), seed, index);
                let window = self.exh.ball(self.config.window);
                let inner = window_msf(host.graph(), window, &weights);
                let edges = to_outer(host.graph(), window.graph(), inner);
                Ok(ForestSample { edges, provenance: provenance(ModelTag::MsfFree, seed, index) })
            }
            ForestModel::Bernoulli { base, p } => {
                let base = self.sample_model(base, seed, index)?;
                let graph = if matches!(base.provenance.model, ModelTag::MsfFree) {
                    self.exh.ball(self.config.window).graph()
                } else {
                    host.graph()
                };
                let extra = bernoulli_edges(graph, *p, seed, index)?;
                let mut edges = base.edges;
                edges.extend(to_outer(host.graph(), graph, extra));
                edges.sort_unstable();
                edges.dedup();
                let mut prov = base.provenance;
                prov.model = ModelTag::BernoulliUnion;
                prov.p = Some(*p);
                Ok(ForestSample { edges, provenance: prov })
            }
            ForestModel::Empty => Ok(ForestSample { edges: Vec::new(), provenance: provenance(ModelTag::Empty, seed, index) }),
        }
    }

    /// Short description for reports.
    pub fn describe(&self) -> String {
        format!(
            "{} on {} radius {} window {}",
            self.config.model,
            self.exh.model().describe(),
            self.config.radius,
            self.config.window
        )
    }
}

fn to_outer(outer: &SerreGraph, inner: &SerreGraph, edges: Vec<usize>) -> Vec<usize> {
    let mut out: Vec<usize> = edges
        .into_iter()
        .map(|e| {
            let (u, v) = inner.endpoints(e);
            outer.find_edge(u, v).expect("inner graph is an induced prefix")
        })
        .collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{build_exhaustion, DEFAULT_VERTEX_CAP};
    use crate::group::GroupModel;

    fn triangle() -> SerreGraph {
        SerreGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn k4() -> SerreGraph {
        SerreGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn frequencies(graph: &SerreGraph, n: u64, f: impl Fn(u64) -> ForestSample) -> Vec<f64> {
        let mut counts = vec![0u64; graph.edge_count()];
        for i in 0..n {
            let s = f(i);
            s.check(graph).unwrap();
            for e in s.edges {
                counts[e] += 1;
            }
        }
        counts.into_iter().map(|c| c as f64 / n as f64).collect()
    }

    #[test]
    fn path_has_one_tree() {
        let g = SerreGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        for i in 0..20 {
            assert_eq!(sample_ust(&g, 9, i).unwrap().edges, vec![0, 1]);
        }
    }

    #[test]
    fn ust_edge_frequencies() {
        let t = triangle();
        for f in frequencies(&t, 30_000, |i| sample_ust(&t, 1, i).unwrap()) {
            assert!((f - 2.0 / 3.0).abs() < 0.01, "{f}");
        }
        let k = k4();
        for f in frequencies(&k, 30_000, |i| sample_ust(&k, 2, i).unwrap()) {
            assert!((f - 0.5).abs() < 0.012, "{f}");
        }
    }

    #[test]
    fn ust_is_spanning_and_deterministic() {
        let k = k4();
        let a = sample_ust(&k, 5, 3).unwrap();
        assert_eq!(a.edges.len(), 3);
        assert_eq!(a, sample_ust(&k, 5, 3).unwrap());
        let disconnected = SerreGraph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(sample_ust(&disconnected, 0, 0), Err(Error::Disconnected { .. })));
    }

    #[test]
    fn wired_line_drops_one_cycle_edge() {
        let exh = build_exhaustion(&GroupModel::Lattice { dim: 1 }, 3, DEFAULT_VERTEX_CAP).unwrap();
        let wired = exh.wired(3, WiredConductance::Multiplicity);
        let n = 40_000u64;
        let inner = exh.ball(3).graph();
        let freq = frequencies(inner, n, |i| sample_wired_ust(&wired, 4, i).unwrap());
        // Each of the 8 cycle edges is absent with probability 1/8.
        for f in freq {
            assert!((f - 7.0 / 8.0).abs() < 3.0 * (7.0f64 / 64.0 / n as f64).sqrt() + 1e-3, "{f}");
        }
    }

    #[test]
    fn wired_fallback_on_whole_group() {
        let exh = build_exhaustion(&GroupModel::Cyclic { order: 3 }, 2, DEFAULT_VERTEX_CAP).unwrap();
        let wired = exh.wired(2, WiredConductance::Multiplicity);
        let s = sample_wired_ust(&wired, 1, 0).unwrap();
        assert!(s.provenance.fallback);
        assert_eq!(s.edges, sample_ust(exh.ball(2).graph(), 1, 0).unwrap().edges);
    }

    #[test]
    fn msf_triangle_drops_heaviest() {
        let t = triangle();
        let w = WeightAssignment::from_values(&t, &[2, 5, 9]).unwrap();
        assert_eq!(cycle_rule_forest(&t, &w, &[0, 1, 2]), vec![0, 1]);
        assert_eq!(kruskal(&t, &w), vec![0, 1]);
    }

    #[test]
    fn msf_on_tree_is_whole_tree() {
        let g = SerreGraph::from_edges(5, &[(0, 1), (0, 2), (2, 3), (2, 4)]).unwrap();
        assert_eq!(sample_msf(&g, 3, 7).edges, vec![0, 1, 2, 3]);
    }

    #[test]
    fn msf_matches_kruskal_on_k4() {
        let k = k4();
        for i in 0..20_000 {
            let w = WeightAssignment::draw(&k, 11, i);
            assert!(w.all_distinct());
            assert_eq!(cycle_rule_forest(&k, &w, &[0, 1, 2, 3, 4, 5]), kruskal(&k, &w));
        }
    }

    #[test]
    fn fmsf_window_examples() {
        let free = build_exhaustion(&GroupModel::Free { rank: 2 }, 3, DEFAULT_VERTEX_CAP).unwrap();
        let s = sample_fmsf_window(&free, 2, 3, 1, 0).unwrap();
        assert_eq!(s.edges.len(), free.ball(2).graph().edge_count());

        let c6 = build_exhaustion(&GroupModel::Cyclic { order: 6 }, 3, DEFAULT_VERTEX_CAP).unwrap();
        let g = c6.ball(3).graph();
        assert_eq!(g.edge_count(), 6);
        for i in 0..50 {
            let s = sample_fmsf_window(&c6, 3, 4, 2, i).unwrap();
            let w = WeightAssignment::draw(c6.ball(4).graph(), 2, i);
            let heaviest = (0..6).max_by_key(|&e| w.key(e)).unwrap();
            assert_eq!(s.edges.len(), 5);
            assert!(!s.contains(heaviest));
        }
        assert!(sample_fmsf_window(&c6, 3, 3, 0, 0).is_err());
    }

    #[test]
    fn fmsf_window_shrinks_with_context() {
        let exh = build_exhaustion(&GroupModel::Lattice { dim: 2 }, 4, DEFAULT_VERTEX_CAP).unwrap();
        for i in 0..300 {
            let a = sample_fmsf_window(&exh, 2, 3, 8, i).unwrap();
            let b = sample_fmsf_window(&exh, 2, 4, 8, i).unwrap();
            assert!(b.edges.iter().all(|e| a.contains(*e)), "sample {i}");
        }
    }

    #[test]
    fn wired_msf_is_forest_touching_boundary() {
        let exh = build_exhaustion(&GroupModel::Lattice { dim: 2 }, 3, DEFAULT_VERTEX_CAP).unwrap();
        let g = exh.ball(3).graph();
        for i in 0..100 {
            let s = sample_wired_msf(&exh, 3, 5, i);
            s.check(g).unwrap();
            assert!(s.edges.len() < g.vertex_count());
        }
    }

    #[test]
    fn bernoulli_extremes() {
        let k = k4();
        let base = sample_ust(&k, 3, 1).unwrap();
        let none = sample_bernoulli_union(&base, &k, 0.0).unwrap();
        assert_eq!(none.edges, base.edges);
        let all = sample_bernoulli_union(&base, &k, 1.0).unwrap();
        assert_eq!(all.edges, vec![0, 1, 2, 3, 4, 5]);
        assert!(sample_bernoulli_union(&base, &k, 1.5).is_err());
    }

    #[test]
    fn model_parsing_round_trips() {
        for s in ["ust-free", "ust-wired", "msf-free", "msf-wired", "empty", "bernoulli:0.1", "bernoulli:0.25:ust-free"] {
            let m = ForestModel::parse(s).unwrap();
            assert_eq!(ForestModel::parse(&format!("{m}")).unwrap(), m);
        }
        assert!(ForestModel::parse("bernoulli:2").is_err());
        assert!(ForestModel::parse("nope").is_err());
    }

    #[test]
    fn prepared_sampler_models() {
        let exh = build_exhaustion(&GroupModel::Free { rank: 2 }, 3, DEFAULT_VERTEX_CAP).unwrap();
        let ust = PreparedSampler::new(&exh, SamplerConfig::new(ForestModel::UstFree, 3, 1)).unwrap();
        let s = ust.sample(1, 0).unwrap();
        assert_eq!(s.degree(ust.host().graph(), 0), 4);
        let msf = PreparedSampler::new(&exh, SamplerConfig::new(ForestModel::MsfFree, 3, 2)).unwrap();
        assert_eq!(msf.sample(1, 0).unwrap().degree(msf.host().graph(), 0), 4);
        assert!(PreparedSampler::new(&exh, SamplerConfig::new(ForestModel::MsfFree, 3, 3)).is_err());
        let p1 = ForestModel::Bernoulli { base: Box::new(ForestModel::UstWired), p: 1.0 };
        let all = PreparedSampler::new(&exh, SamplerConfig::new(p1, 3, 1)).unwrap();
        assert_eq!(all.sample(2, 0).unwrap().edges.len(), exh.ball(3).graph().edge_count());
    }
}
