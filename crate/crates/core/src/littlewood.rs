//! Littlewood certificates for forest laws.
//!
//! Each forest edge is oriented toward the least vertex of its tree, so
//! every vertex has at most one outgoing edge. Averaging the indicator of
//! the oriented edges gives `f⁺`, its transpose gives `f⁻`, and the row sums
//! of `f⁺` are bounded by one; the pair certifies a norm bound of two.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::graph::{is_acyclic, OrientedEdge, SerreGraph};
use crate::group::FiniteGroup;
use crate::samplers::{ForestModel, ForestSample, PreparedSampler};
use crate::stats::EmpiricalForestLaw;

/// Chosen orientation of each edge of a forest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientationAssignment {
    /// One oriented edge per geometric forest edge, in the forest's order.
    pub chosen: Vec<OrientedEdge>,
    /// For each vertex, the head of its outgoing chosen edge.
    pub parent: Vec<Option<usize>>,
    /// Least vertex (in the enumeration) of each vertex's tree.
    pub root: Vec<usize>,
}

impl OrientationAssignment {
    pub fn out_degrees(&self) -> Vec<usize> {
        self.parent.iter().map(|p| usize::from(p.is_some())).collect()
    }
}

/// Orients every forest edge toward the least-enumerated vertex of its
/// tree. `rank[v]` is the position of `v` in the enumeration; `None` means
/// the vertex order itself.
pub fn orient_forest(graph: &SerreGraph, edges: &[usize], rank: Option<&[usize]>) -> Result<OrientationAssignment> {
    let n = graph.vertex_count();
    if let Some(rank) = rank {
        let mut seen = vec![false; n];
        if rank.len() != n || rank.iter().any(|&r| r >= n || core::mem::replace(&mut seen[r], true)) {
            return Err(Error::validation("enumeration is not a permutation of the vertices"));
        }
    }
    if edges.iter().any(|&e| e >= graph.edge_count()) {
        return Err(Error::validation("forest references an edge outside the graph"));
    }
    if !is_acyclic(graph, edges) {
        return Err(Error::consistency("cannot orient a cyclic edge set"));
    }
    let key = |v: usize| rank.map_or(v, |r| r[v]);
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for &e in edges {
        let (u, v) = graph.endpoints(e);
        adjacency[u].push((v, e));
        adjacency[v].push((u, e));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by_key(|&v| key(v));
    let mut parent = vec![None; n];
    let mut root = vec![usize::MAX; n];
    let mut via = vec![usize::MAX; n];
    for &r in &order {
        if root[r] != usize::MAX {
            continue;
        }
        root[r] = r;
        let mut queue = VecDeque::from([r]);
        while let Some(u) = queue.pop_front() {
            for &(w, e) in &adjacency[u] {
                if root[w] == usize::MAX {
                    root[w] = r;
                    parent[w] = Some(u);
                    via[w] = e;
                    queue.push_back(w);
                }
            }
        }
    }
    let chosen = edges
        .iter()
        .map(|&e| {
            let (u, v) = graph.endpoints(e);
            let tail = if parent[u] == Some(v) && via[u] == e { u } else { v };
            graph.find_oriented(tail, if tail == u { v } else { u }).expect("forest edge")
        })
        .collect();
    Ok(OrientationAssignment { chosen, parent, root })
}

/// Certificate `(f⁺, f⁻)` on a finite window. All values are integer counts
/// over the common denominator `n`, so every identity is checked exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct LittlewoodCertificate {
    pub labels: Vec<String>,
    pub n: u64,
    /// Numerators of `f⁺(g, g′)`.
    pub plus: BTreeMap<(usize, usize), u64>,
    /// Numerators of `f⁻(g, g′)`.
    pub minus: BTreeMap<(usize, usize), u64>,
    /// Numerators of the reconstructed kernel `f(g⁻¹g′)` on window pairs.
    pub kernel: BTreeMap<(usize, usize), u64>,
    pub row_sup: Ratio<u64>,
    pub col_sup: Ratio<u64>,
    pub bound: Ratio<u64>,
    /// Set for certificates built from orientations, where
    /// `f⁻(g, g′) = f⁺(g′, g)`.
    pub symmetric: bool,
    /// Samples whose indicator `f⁺` had a row sum above one (always zero
    /// for a correct orientation).
    pub row_violations: u64,
    /// Largest |kernel(g, g′) − f(g⁻¹g′)| against the identity's profile,
    /// as a numerator over `n`; `None` when not computed.
    pub invariance_defect: Option<u64>,
    pub width_zero: bool,
}

fn nonzero(mut m: BTreeMap<(usize, usize), u64>) -> BTreeMap<(usize, usize), u64> {
    m.retain(|_, c| *c > 0);
    m
}

impl LittlewoodCertificate {
    /// Symmetric certificate from `f⁺` numerators: `f⁻` is the transpose.
    pub fn from_plus(labels: Vec<String>, n: u64, plus: BTreeMap<(usize, usize), u64>) -> Result<Self> {
        let plus = nonzero(plus);
        let minus = plus.iter().map(|(&(g, h), &c)| ((h, g), c)).collect();
        let mut cert = Self::from_split(labels, n, plus, minus)?;
        cert.symmetric = true;
        Ok(cert)
    }

    /// Certificate from an arbitrary split; the kernel is `f⁺ + f⁻`.
    pub fn from_split(
        labels: Vec<String>,
        n: u64,
        plus: BTreeMap<(usize, usize), u64>,
        minus: BTreeMap<(usize, usize), u64>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::validation("certificate denominator must be positive"));
        }
        let k = labels.len();
        if plus.keys().chain(minus.keys()).any(|&(g, h)| g >= k || h >= k) {
            return Err(Error::validation("certificate entry outside the window"));
        }
        let (plus, minus) = (nonzero(plus), nonzero(minus));
        let mut kernel = BTreeMap::new();
        for (&key, &c) in plus.iter().chain(&minus) {
            *kernel.entry(key).or_insert(0) += c;
        }
        let mut cert = LittlewoodCertificate {
            width_zero: kernel.is_empty(),
            labels,
            n,
            plus,
            minus,
            kernel,
            row_sup: Ratio::new(0, 1),
            col_sup: Ratio::new(0, 1),
            bound: Ratio::new(0, 1),
            symmetric: false,
            row_violations: 0,
            invariance_defect: None,
        };
        cert.recompute_sups();
        Ok(cert)
    }

    fn sups(&self) -> (Ratio<u64>, Ratio<u64>) {
        let k = self.labels.len();
        let mut rows = vec![0u64; k];
        let mut cols = vec![0u64; k];
        for (&(g, _), &c) in &self.plus {
            rows[g] += c;
        }
        // Column g of f⁻ collects f⁻(g′, g).
        for (&(_, g), &c) in &self.minus {
            cols[g] += c;
        }
        let max = |v: Vec<u64>| Ratio::new(v.into_iter().max().unwrap_or(0), self.n);
        (max(rows), max(cols))
    }

    fn recompute_sups(&mut self) {
        (self.row_sup, self.col_sup) = self.sups();
        self.bound = self.row_sup + self.col_sup;
    }

    pub fn plus_at(&self, g: usize, h: usize) -> u64 {
        self.plus.get(&(g, h)).copied().unwrap_or(0)
    }

    pub fn minus_at(&self, g: usize, h: usize) -> u64 {
        self.minus.get(&(g, h)).copied().unwrap_or(0)
    }

    pub fn kernel_at(&self, g: usize, h: usize) -> u64 {
        self.kernel.get(&(g, h)).copied().unwrap_or(0)
    }

    /// Exact checks: reconstruction `f⁺ + f⁻ = kernel` on every pair,
    /// transpose symmetry when claimed, and the stored sups. Symmetric
    /// certificates must also have row sums at most one.
    pub fn verify(&self) -> Result<()> {
        let pairs: BTreeSet<(usize, usize)> =
            self.kernel.keys().chain(self.plus.keys()).chain(self.minus.keys()).copied().collect();
        for (g, h) in pairs {
            if self.plus_at(g, h) + self.minus_at(g, h) != self.kernel_at(g, h) {
                return Err(Error::consistency(format!(
                    "reconstruction fails at ({}, {})",
                    self.labels[g], self.labels[h]
                )));
            }
            if self.symmetric && self.minus_at(g, h) != self.plus_at(h, g) {
                return Err(Error::consistency(format!(
                    "f⁻ is not the transpose of f⁺ at ({}, {})",
                    self.labels[g], self.labels[h]
                )));
            }
        }
        let (row, col) = self.sups();
        if (row, col, row + col) != (self.row_sup, self.col_sup, self.bound) {
            return Err(Error::consistency("stored row/column sups do not match the entries"));
        }
        if self.symmetric && (self.row_sup > Ratio::new(1, 1) || self.row_violations > 0) {
            return Err(Error::consistency("a row of f⁺ sums to more than one"));
        }
        Ok(())
    }

    pub fn bound_f64(&self) -> f64 {
        *self.bound.numer() as f64 / *self.bound.denom() as f64
    }
}

/// Mergeable counters for building an empirical certificate in batches.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CertificateAccumulator {
    pub n: u64,
    pub plus: BTreeMap<(usize, usize), u64>,
    pub row_violations: u64,
}

impl CertificateAccumulator {
    pub fn merge(&mut self, other: &CertificateAccumulator) {
        self.n += other.n;
        self.row_violations += other.row_violations;
        for (&k, &c) in &other.plus {
            *self.plus.entry(k).or_insert(0) += c;
        }
    }
}

/// Window and enumeration used to turn samples into certificate counts.
#[derive(Debug, Clone)]
pub struct CertificateWindow {
    labels: Vec<String>,
    graph: SerreGraph,
    /// Host edge index → window edge index.
    edge_map: Vec<Option<usize>>,
    rank: Option<Vec<usize>>,
    identity_pairs: Vec<(usize, usize)>,
    pair_offsets: Vec<(usize, usize, usize)>,
}

impl CertificateWindow {
    /// Window of radius `w` inside the sampler's host ball. The windowed free
    /// MSF only determines edges inside its own window, so `w` may not
    /// exceed it.
    pub fn new(sampler: &PreparedSampler<'_>, w: u32, rank: Option<Vec<usize>>) -> Result<Self> {
        let cfg = sampler.config();
        if w < 1 {
            return Err(Error::validation("certificate window radius must be at least 1"));
        }
        if w > cfg.radius {
            return Err(Error::validation(format!(
                "certificate window {w} exceeds sampling radius {}; margin of {} needed",
                cfg.radius,
                w - cfg.radius
            )));
        }
        let windowed = match &cfg.model {
            ForestModel::MsfFree => true,
            ForestModel::Bernoulli { base, .. } => **base == ForestModel::MsfFree,
            _ => false,
        };
        if windowed && w > cfg.window {
            return Err(Error::validation(format!(
                "certificate window {w} exceeds the sampler window {} of the windowed free MSF",
                cfg.window
            )));
        }
        let exh = sampler.exhaustion();
        let host = sampler.host();
        let ball = exh.ball(w);
        let graph = ball.graph().clone();
        let edge_map = host
            .graph()
            .edges()
            .iter()
            .map(|&(u, v)| graph.find_edge(u, v))
            .collect();
        if let Some(r) = &rank {
            if r.len() != graph.vertex_count() {
                return Err(Error::validation(format!(
                    "enumeration has {} entries for a window of {} vertices",
                    r.len(),
                    graph.vertex_count()
                )));
            }
        }
        let labels = ball.elements().iter().map(|x| format!("{x}")).collect();
        // Identity profile: f(s) read at the pair (1, s); compare every window
        // pair (g, g·s) against it.
        let model = exh.model();
        let identity_pairs: Vec<(usize, usize)> = ball.identity_neighbours().into_iter().map(|v| (0, v)).collect();
        let mut pair_offsets = Vec::new();
        for g in 0..ball.vertex_count() {
            for (j, s) in ball.generating_set().iter().enumerate() {
                if let Some(h) = ball.index_of(&model.multiply(ball.element(g), s)) {
                    pair_offsets.push((g, h, j));
                }
            }
        }
        Ok(CertificateWindow { labels, graph, edge_map, rank, identity_pairs, pair_offsets })
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// Adds one sample: the forest is restricted to the window and oriented
    /// there.
    pub fn observe(&self, acc: &mut CertificateAccumulator, sample: &ForestSample) -> Result<()> {
        let edges: Vec<usize> = sample.edges.iter().filter_map(|&e| self.edge_map[e]).collect();
        let orientation = orient_forest(&self.graph, &edges, self.rank.as_deref())?;
        acc.n += 1;
        let mut row = vec![0u64; self.vertex_count()];
        for e in &orientation.chosen {
            let (g, h) = (self.graph.tail(*e), self.graph.head(*e));
            row[g] += 1;
            *acc.plus.entry((g, h)).or_insert(0) += 1;
        }
        if row.iter().any(|&r| r > 1) {
            acc.row_violations += 1;
        }
        Ok(())
    }

    pub fn finish(&self, acc: &CertificateAccumulator) -> Result<LittlewoodCertificate> {
        let mut cert = LittlewoodCertificate::from_plus(self.labels.clone(), acc.n, acc.plus.clone())?;
        cert.row_violations = acc.row_violations;
        let profile: Vec<u64> = self.identity_pairs.iter().map(|&(g, h)| cert.kernel_at(g, h)).collect();
        let defect = self
            .pair_offsets
            .iter()
            .map(|&(g, h, j)| cert.kernel_at(g, h).abs_diff(profile[j]))
            .max()
            .unwrap_or(0);
        cert.invariance_defect = Some(defect);
        cert.verify()?;
        Ok(cert)
    }
}

/// Certificate from samples `0..n` of `seed`, window radius `w`.
pub fn empirical_certificate(
    sampler: &PreparedSampler<'_>,
    n: u64,
    seed: u64,
    w: u32,
    rank: Option<Vec<usize>>,
) -> Result<LittlewoodCertificate> {
    if n == 0 {
        return Err(Error::validation("sample count N must be at least 1"));
    }
    let window = CertificateWindow::new(sampler, w, rank)?;
    let mut acc = CertificateAccumulator::default();
    for i in 0..n {
        window.observe(&mut acc, &sampler.sample(seed, i)?)?;
    }
    window.finish(&acc)
}

pub fn l2_norm(f: &[f64]) -> f64 {
    libm::sqrt(f.iter().map(|x| x * x).sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CszReport {
    pub degree: f64,
    pub width: usize,
    pub l2: f64,
    /// √width · ‖f‖₂.
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
    /// Equality holds exactly (f constant on its support).
    pub equality: bool,
}

/// deg ≤ √width · ‖f‖₂, decided exactly on the integer counts.
pub fn csz_check(law: &EmpiricalForestLaw) -> CszReport {
    let sum: u128 = law.counts.iter().map(|&c| c as u128).sum();
    let sq: u128 = law.counts.iter().map(|&c| (c as u128) * (c as u128)).sum();
    let w = law.width as u128;
    let l2 = law.l2_norm();
    let rhs = libm::sqrt(law.width as f64) * l2;
    CszReport {
        degree: law.degree_mean,
        width: law.width,
        l2,
        rhs,
        slack: rhs - law.degree_mean,
        holds: sum * sum <= w * sq,
        equality: sum * sum == w * sq,
    }
}

/// Extends a certificate on a subgroup `H ≤ G` to `G` through the left
/// cosets `rH`: `f±(rh, rh′) = f±(h, h′)` and zero across cosets.
/// `subgroup[i]` is the element of `G` at window position `i`.
pub fn extend_certificate(
    cert: &LittlewoodCertificate,
    group: &FiniteGroup,
    subgroup: &[usize],
    representatives: &[usize],
) -> Result<LittlewoodCertificate> {
    let order = group.order();
    if subgroup.len() != cert.labels.len() {
        return Err(Error::validation(format!(
            "certificate window has {} points but the subgroup has {} elements",
            cert.labels.len(),
            subgroup.len()
        )));
    }
    if !group.is_subgroup(subgroup) {
        return Err(Error::validation("the given subset is not a subgroup"));
    }
    let mut h_pos = vec![None; order];
    for (i, &h) in subgroup.iter().enumerate() {
        if h_pos[h].replace(i).is_some() {
            return Err(Error::validation(format!("subgroup lists #{h} twice")));
        }
    }
    if !representatives.contains(&group.identity()) {
        return Err(Error::validation("coset representatives must contain the identity"));
    }
    // coset[g] = (representative index, position of r⁻¹g in H).
    let mut coset: Vec<Option<(usize, usize)>> = vec![None; order];
    for (ri, &r) in representatives.iter().enumerate() {
        if r >= order {
            return Err(Error::validation(format!("representative #{r} is not a group element")));
        }
        for (hi, &h) in subgroup.iter().enumerate() {
            let g = group.mul(r, h);
            if let Some((rj, _)) = coset[g] {
                let members: Vec<String> = subgroup.iter().map(|&x| format!("#{}", group.mul(r, x))).collect();
                return Err(Error::validation(format!(
                    "representatives #{} and #{r} give the same coset {{{}}}",
                    representatives[rj],
                    members.join(", ")
                )));
            }
            coset[g] = Some((ri, hi));
        }
    }
    if let Some(g) = coset.iter().position(Option::is_none) {
        let members: Vec<String> = subgroup.iter().map(|&x| format!("#{}", group.mul(g, x))).collect();
        return Err(Error::validation(format!("coset {{{}}} has no representative", members.join(", "))));
    }
    let lift = |m: &BTreeMap<(usize, usize), u64>| {
        let mut out = BTreeMap::new();
        for (&(a, b), &c) in m {
            for &r in representatives {
                out.insert((group.mul(r, subgroup[a]), group.mul(r, subgroup[b])), c);
            }
        }
        out
    };
    let labels = (0..order).map(|g| format!("#{g}")).collect();
    let mut out = LittlewoodCertificate::from_split(labels, cert.n, lift(&cert.plus), lift(&cert.minus))?;
    out.symmetric = cert.symmetric;
    out.row_violations = cert.row_violations;
    out.verify()?;
    Ok(out)
}

/// Pairs of `G` lying in different cosets that carry a nonzero entry.
pub fn cross_coset_entries(
    cert: &LittlewoodCertificate,
    group: &FiniteGroup,
    subgroup: &[usize],
) -> Vec<(usize, usize)> {
    let mut member = vec![false; group.order()];
    subgroup.iter().for_each(|&h| member[h] = true);
    cert.kernel
        .keys()
        .chain(cert.plus.keys())
        .chain(cert.minus.keys())
        .copied()
        .filter(|&(g, h)| !member[group.mul(group.inv(g), h)])
        .collect()
}

/// Exact check that a kernel on a whole finite group is of the form
/// `f(g⁻¹g′)`; the window position of element `g` must be `g`.
pub fn is_invariant_kernel(cert: &LittlewoodCertificate, group: &FiniteGroup) -> bool {
    let id = group.identity();
    (0..group.order()).all(|g| {
        (0..group.order()).all(|h| cert.kernel_at(g, h) == cert.kernel_at(id, group.mul(group.inv(g), h)))
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObstructionReport {
    pub degree: f64,
    pub width: usize,
    pub ratio: f64,
    pub l2: f64,
    pub bound: f64,
    /// deg/(2√width): any unitarising constant K must be at least this.
    pub k_lower: f64,
    pub statement: String,
}

pub fn obstruction_report(law: &EmpiricalForestLaw, cert: &LittlewoodCertificate) -> Result<ObstructionReport> {
    if law.width == 0 || cert.width_zero {
        return Err(Error::WidthZero);
    }
    let w = law.width as f64;
    let sw = libm::sqrt(w);
    let k_lower = law.degree_mean / (2.0 * sw);
    let bound = cert.bound_f64();
    let statement = format!(
        "‖f‖₂ ≥ deg/√width = {:.6} and ‖f‖_T¹ ≤ {bound:.6}; a unitarisable ambient group needs K ≥ {k_lower:.6}",
        law.degree_mean / sw
    );
    Ok(ObstructionReport {
        degree: law.degree_mean,
        width: law.width,
        ratio: law.degree_mean * law.degree_mean / w,
        l2: law.l2_norm(),
        bound,
        k_lower,
        statement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{build_exhaustion, DEFAULT_VERTEX_CAP};
    use crate::group::GroupModel;
    use crate::samplers::SamplerConfig;
    use crate::stats::estimate_law;

    #[test]
    fn orientation_examples() {
        let g = SerreGraph::from_edges(3, &[(0, 1), (0, 2)]).unwrap();
        let single = orient_forest(&g, &[0], None).unwrap();
        assert_eq!(single.chosen, vec![g.find_oriented(1, 0).unwrap()]);
        let path = orient_forest(&g, &[0, 1], None).unwrap();
        assert_eq!(path.out_degrees(), vec![0, 1, 1]);
        let h = SerreGraph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let two = orient_forest(&h, &[0, 1], None).unwrap();
        assert_eq!(two.out_degrees().iter().sum::<usize>(), 2);
        assert_eq!(two.root, vec![0, 0, 2, 2]);
        let reversed = orient_forest(&h, &[0, 1], Some(&[3, 2, 1, 0])).unwrap();
        assert_eq!(reversed.out_degrees(), vec![1, 0, 1, 0]);
    }

    #[test]
    fn cycles_are_rejected() {
        let t = SerreGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(matches!(orient_forest(&t, &[0, 1, 2], None), Err(Error::Consistency(_))));
    }

    #[test]
    fn free_tree_certificate() {
        let exh = build_exhaustion(&GroupModel::Free { rank: 2 }, 3, DEFAULT_VERTEX_CAP).unwrap();
        let s = PreparedSampler::new(&exh, SamplerConfig::new(ForestModel::UstFree, 3, 1)).unwrap();
        let cert = empirical_certificate(&s, 20, 1, 2, None).unwrap();
        assert_eq!(cert.row_sup, Ratio::new(1, 1));
        assert_eq!(cert.bound, Ratio::new(2, 1));
        assert_eq!(cert.invariance_defect, Some(0));
        // Row sums are one except at the identity, the root.
        let mut rows = vec![0u64; cert.labels.len()];
        for (&(g, _), &c) in &cert.plus {
            rows[g] += c;
        }
        assert_eq!(rows[0], 0);
        assert!(rows[1..].iter().all(|&r| r == 20));
        let law = estimate_law(&s, 20, 1).unwrap();
        let csz = csz_check(&law);
        assert!(csz.equality && csz.holds);
        assert_eq!(csz.l2, 2.0);
        let rep = obstruction_report(&law, &cert).unwrap();
        assert_eq!(rep.k_lower, 1.0);
    }

    #[test]
    fn empty_forest_certificate_is_flagged() {
        let exh = build_exhaustion(&GroupModel::Free { rank: 2 }, 2, DEFAULT_VERTEX_CAP).unwrap();
        let s = PreparedSampler::new(&exh, SamplerConfig::new(ForestModel::Empty, 2, 1)).unwrap();
        let cert = empirical_certificate(&s, 5, 1, 2, None).unwrap();
        assert!(cert.width_zero);
        assert_eq!(cert.bound, Ratio::new(0, 1));
        let law = estimate_law(&s, 5, 1).unwrap();
        assert_eq!(obstruction_report(&law, &cert), Err(Error::WidthZero));
    }

    #[test]
    fn wired_lattice_certificate_is_exact() {
        let exh = build_exhaustion(&GroupModel::Lattice { dim: 2 }, 4, DEFAULT_VERTEX_CAP).unwrap();
        let s = PreparedSampler::new(&exh, SamplerConfig::new(ForestModel::UstWired, 4, 1)).unwrap();
        let cert = empirical_certificate(&s, 300, 3, 3, None).unwrap();
        cert.verify().unwrap();
        assert!(cert.bound <= Ratio::new(2, 1));
        assert_eq!(cert.row_violations, 0);
    }

    #[test]
    fn msf_window_margin_is_enforced() {
        let exh = build_exhaustion(&GroupModel::Lattice { dim: 2 }, 3, DEFAULT_VERTEX_CAP).unwrap();
        let s = PreparedSampler::new(&exh, SamplerConfig::new(ForestModel::MsfFree, 3, 2)).unwrap();
        assert!(empirical_certificate(&s, 5, 1, 3, None).is_err());
        assert!(empirical_certificate(&s, 5, 1, 2, None).is_ok());
    }

    #[test]
    fn extension_over_two_cosets() {
        let z4 = FiniteGroup::cyclic(4);
        let h = vec![0, 2];
        // Indicator of {2} on H, split as f⁺ = f, f⁻ = 0: f⁺(h, h′) = 1 iff h⁻¹h′ = 2.
        let plus = BTreeMap::from([((0, 1), 1), ((1, 0), 1)]);
        let cert =
            LittlewoodCertificate::from_split(vec!["0".into(), "2".into()], 1, plus, BTreeMap::new()).unwrap();
        assert_eq!((cert.row_sup, cert.col_sup, cert.bound), (Ratio::new(1, 1), Ratio::new(0, 1), Ratio::new(1, 1)));
        let ext = extend_certificate(&cert, &z4, &h, &[0, 1]).unwrap();
        assert_eq!((ext.row_sup, ext.col_sup, ext.bound), (cert.row_sup, cert.col_sup, cert.bound));
        assert!(cross_coset_entries(&ext, &z4, &h).is_empty());
        assert_eq!(ext.kernel_at(1, 3), 1);
        assert_eq!(ext.kernel_at(0, 1), 0);
        let same = extend_certificate(&cert, &FiniteGroup::cyclic(2), &[0, 1], &[0]).unwrap();
        assert_eq!((same.plus.clone(), same.minus.clone()), (cert.plus.clone(), cert.minus.clone()));
        let err = extend_certificate(&cert, &z4, &h, &[0, 2]).unwrap_err();
        assert!(matches!(err, Error::Validation(ref m) if m.contains("same coset")), "{err}");
        assert!(extend_certificate(&cert, &z4, &h, &[1, 3]).is_err());
    }
}
