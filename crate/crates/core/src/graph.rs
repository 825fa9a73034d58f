//! Finite simple graphs in Serre's convention.
//!
//! Geometric edge `i` is stored as the oriented pair `2i` (tail → head as
//! inserted) and `2i + 1` (its reverse). The involution is `e ^ 1`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Oriented edge index; `e.reverse()` is the opposite orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrientedEdge(pub usize);

impl OrientedEdge {
    pub fn reverse(self) -> Self {
        OrientedEdge(self.0 ^ 1)
    }

    pub fn geometric(self) -> usize {
        self.0 / 2
    }

    /// True for the orientation in which the edge was inserted.
    pub fn is_canonical(self) -> bool {
        self.0 & 1 == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SerreGraph {
    labels: Vec<String>,
    /// (tail, head) of the canonical orientation of each geometric edge.
    ends: Vec<(usize, usize)>,
    /// Positive integer conductance per geometric edge (1 unless wired by multiplicity).
    conductance: Vec<u32>,
    /// Per vertex: (neighbour, oriented edge leaving the vertex).
    adjacency: Vec<Vec<(usize, OrientedEdge)>>,
    lookup: BTreeMap<(usize, usize), usize>,
}

impl SerreGraph {
    pub fn new(labels: Vec<String>) -> Self {
        let n = labels.len();
        SerreGraph { labels, ends: Vec::new(), conductance: Vec::new(), adjacency: vec![Vec::new(); n], lookup: BTreeMap::new() }
    }

    /// Unlabelled graph on `n` vertices (labels are the indices).
    pub fn with_vertices(n: usize) -> Self {
        SerreGraph::new((0..n).map(|i| format!("{i}")).collect())
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = SerreGraph::with_vertices(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, label: String) -> usize {
        self.labels.push(label);
        self.adjacency.push(Vec::new());
        self.labels.len() - 1
    }

    /// Adds geometric edge `{u, v}` with tail `u`, head `v`; rejects loops
    /// and repeated pairs.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<usize> {
        self.add_edge_with_conductance(u, v, 1)
    }

    pub fn add_edge_with_conductance(&mut self, u: usize, v: usize, conductance: u32) -> Result<usize> {
        let n = self.vertex_count();
        if u >= n || v >= n {
            return Err(Error::validation(format!("edge ({u},{v}) references a vertex outside 0..{n}")));
        }
        if u == v {
            return Err(Error::validation(format!("loop edge at vertex {u} ({})", self.labels[u])));
        }
        if conductance == 0 {
            return Err(Error::validation(format!("edge ({u},{v}) has zero conductance")));
        }
        let key = (u.min(v), u.max(v));
        if self.lookup.contains_key(&key) {
            return Err(Error::validation(format!(
                "duplicate edge ({},{})",
                self.labels[key.0], self.labels[key.1]
            )));
        }
        let i = self.ends.len();
        self.ends.push((u, v));
        self.conductance.push(conductance);
        self.adjacency[u].push((v, OrientedEdge(2 * i)));
        self.adjacency[v].push((u, OrientedEdge(2 * i + 1)));
        self.lookup.insert(key, i);
        Ok(i)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// Number of geometric edges.
    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    pub fn oriented_edge_count(&self) -> usize {
        2 * self.ends.len()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Endpoints `(tail, head)` of the canonical orientation.
    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        self.ends[edge]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.ends
    }

    pub fn head(&self, e: OrientedEdge) -> usize {
        let (t, h) = self.ends[e.geometric()];
        if e.is_canonical() {
            h
        } else {
            t
        }
    }

    pub fn tail(&self, e: OrientedEdge) -> usize {
        self.head(e.reverse())
    }

    pub fn conductance(&self, edge: usize) -> u32 {
        self.conductance[edge]
    }

    pub fn conductances(&self) -> &[u32] {
        &self.conductance
    }

    pub fn has_unit_conductances(&self) -> bool {
        self.conductance.iter().all(|&c| c == 1)
    }

    pub fn neighbours(&self, v: usize) -> &[(usize, OrientedEdge)] {
        &self.adjacency[v]
    }

    /// Number of geometric edges incident to `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Geometric edge joining `u` and `v`, if any.
    pub fn find_edge(&self, u: usize, v: usize) -> Option<usize> {
        self.lookup.get(&(u.min(v), u.max(v))).copied()
    }

    /// Oriented edge with tail `u` and head `v`, if any.
    pub fn find_oriented(&self, u: usize, v: usize) -> Option<OrientedEdge> {
        let i = self.find_edge(u, v)?;
        Some(if self.ends[i].0 == u { OrientedEdge(2 * i) } else { OrientedEdge(2 * i + 1) })
    }

    /// Connected components, each sorted, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &(w, _) in &self.adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() <= 1 || self.components().len() == 1
    }

    /// Checks the Serre invariants: fixed-point free involution with
    /// `(ē)₊ = e₋`, no loops, no repeated geometric edges, degree equal to
    /// the number of incident geometric edges.
    pub fn check_invariants(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for e in 0..self.oriented_edge_count() {
            let e = OrientedEdge(e);
            if e.reverse() == e || self.head(e.reverse()) != self.tail(e) {
                return Err(Error::consistency(format!("involution broken at oriented edge {}", e.0)));
            }
            if self.head(e) == self.tail(e) {
                return Err(Error::consistency(format!("loop at oriented edge {}", e.0)));
            }
        }
        for &(u, v) in &self.ends {
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::consistency(format!("repeated geometric edge ({u},{v})")));
            }
        }
        for v in 0..self.vertex_count() {
            let incident = self.ends.iter().filter(|&&(a, b)| a == v || b == v).count();
            if incident != self.degree(v) {
                return Err(Error::consistency(format!("degree mismatch at vertex {v}")));
            }
        }
        Ok(())
    }

    /// Subgraph induced on the vertices `0..k`; edge order is preserved.
    pub fn induced_prefix(&self, k: usize) -> SerreGraph {
        let mut g = SerreGraph::new(self.labels[..k].to_vec());
        for (i, &(u, v)) in self.ends.iter().enumerate() {
            if u < k && v < k {
                g.add_edge_with_conductance(u, v, self.conductance[i]).expect("induced subgraph of a simple graph");
            }
        }
        g
    }

    /// Induced subgraph on the vertices marked in `keep`, reindexed in order.
    /// Returns the graph and the old → new vertex map.
    pub fn induced(&self, keep: &[bool]) -> (SerreGraph, Vec<Option<usize>>) {
        let mut map = vec![None; self.vertex_count()];
        let mut labels = Vec::new();
        for v in 0..self.vertex_count() {
            if keep[v] {
                map[v] = Some(labels.len());
                labels.push(self.labels[v].clone());
            }
        }
        let mut g = SerreGraph::new(labels);
        for (i, &(u, v)) in self.ends.iter().enumerate() {
            if let (Some(a), Some(b)) = (map[u], map[v]) {
                g.add_edge_with_conductance(a, b, self.conductance[i]).expect("induced subgraph of a simple graph");
            }
        }
        (g, map)
    }
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `a` and `b`; false if they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            core::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// True if the given geometric edges of `graph` contain no cycle.
pub fn is_acyclic(graph: &SerreGraph, edges: &[usize]) -> bool {
    let mut uf = UnionFind::new(graph.vertex_count());
    edges.iter().all(|&e| {
        let (u, v) = graph.endpoints(e);
        uf.union(u, v)
    })
}
