//! Word-metric balls in Cayley graphs, nested exhaustions, and wired
//! boundaries.
//!
//! Vertices of a ball are ordered breadth-first by word length with ties
//! broken by generator index, so ball `n` is always a prefix of ball `n + 1`
//! and vertex 0 is the identity. The same order serves as the enumeration
//! for orientation sections.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::SerreGraph;
use crate::group::{Element, GroupModel};

pub const DEFAULT_VERTEX_CAP: usize = 200_000;

/// Label of the extra vertex added by wiring.
pub const BOUNDARY_LABEL: &str = "∂";

#[derive(Debug, Clone)]
pub struct CayleyBall {
    radius: u32,
    elements: Vec<Element>,
    distance: Vec<u32>,
    index: BTreeMap<Element, usize>,
    generating_set: Vec<Element>,
    graph: SerreGraph,
}

impl CayleyBall {
    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn graph(&self) -> &SerreGraph {
        &self.graph
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn element(&self, v: usize) -> &Element {
        &self.elements[v]
    }

    /// Word length of vertex `v`.
    pub fn distance(&self, v: usize) -> u32 {
        self.distance[v]
    }

    pub fn index_of(&self, x: &Element) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.elements.len()
    }

    /// Distinct generator elements S, in canonical order.
    pub fn generating_set(&self) -> &[Element] {
        &self.generating_set
    }

    /// Vertex indices of the neighbours `s ∈ S` of the identity, aligned with
    /// `generating_set()`. Requires radius ≥ 1.
    pub fn identity_neighbours(&self) -> Vec<usize> {
        self.generating_set.iter().map(|s| self.index[s]).collect()
    }

    /// Geometric edges `e_s` joining the identity to each `s ∈ S`.
    pub fn identity_edges(&self) -> Vec<usize> {
        self.identity_neighbours()
            .into_iter()
            .map(|v| self.graph.find_edge(0, v).expect("identity edge inside ball of radius ≥ 1"))
            .collect()
    }

    /// True if every neighbour (in the full Cayley graph) of every ball
    /// vertex lies in the ball, i.e. the ball is the whole finite group.
    pub fn is_whole_group(&self, model: &GroupModel) -> bool {
        self.boundary_multiplicities(model).iter().all(|&m| m == 0)
    }

    /// Number of Cayley-graph edges leaving the ball at each vertex.
    pub fn boundary_multiplicities(&self, model: &GroupModel) -> Vec<u32> {
        self.elements
            .iter()
            .enumerate()
            .map(|(v, x)| {
                if self.distance[v] < self.radius {
                    return 0;
                }
                self.generating_set.iter().filter(|s| !self.index.contains_key(&model.multiply(x, s))).count() as u32
            })
            .collect()
    }

    /// Wired graph: the ball plus a vertex ∂ joined to every vertex with an
    /// edge leaving the ball.
    pub fn wired(&self, model: &GroupModel, conductance: WiredConductance) -> WiredGraph {
        attach_boundary(&self.graph, &self.boundary_multiplicities(model), conductance)
    }

    /// Vertices whose whole neighbourhood lies in the ball (distance < radius).
    pub fn interior(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.distance[v] < self.radius).collect()
    }

    fn prefix(&self, radius: u32) -> CayleyBall {
        let k = self.distance.iter().take_while(|&&d| d <= radius).count();
        let elements = self.elements[..k].to_vec();
        let index = elements.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        CayleyBall {
            radius,
            elements,
            distance: self.distance[..k].to_vec(),
            index,
            generating_set: self.generating_set.clone(),
            graph: self.graph.induced_prefix(k),
        }
    }
}

/// Ball of the given radius around the identity in the Cayley graph of
/// `model`; errors if more than `vertex_cap` vertices would be created.
pub fn build_cayley_ball(model: &GroupModel, radius: u32, vertex_cap: usize) -> Result<CayleyBall> {
    model.validate()?;
    let gens = model.generators();
    let generating_set = model.generating_set();
    let mut elements = vec![model.identity()];
    let mut distance = vec![0u32];
    let mut index = BTreeMap::new();
    index.insert(model.identity(), 0usize);
    let mut head = 0;
    while head < elements.len() {
        let d = distance[head];
        if d >= radius {
            break;
        }
        let x = elements[head].clone();
        for g in &gens {
            let y = model.multiply(&x, &g.element);
            if !index.contains_key(&y) {
                if elements.len() >= vertex_cap {
                    return Err(Error::ResourceLimit {
                        what: format!("ball of radius {radius} in {} exceeds the vertex cap", model.describe()),
                        cap: vertex_cap,
                    });
                }
                index.insert(y.clone(), elements.len());
                elements.push(y);
                distance.push(d + 1);
            }
        }
        head += 1;
    }
    let mut graph = SerreGraph::new(elements.iter().map(|x| x.to_string()).collect());
    for (v, x) in elements.iter().enumerate() {
        for s in &generating_set {
            let y = model.multiply(x, s);
            if let Some(&w) = index.get(&y) {
                if v < w {
                    graph.add_edge(v, w)?;
                }
            }
        }
    }
    Ok(CayleyBall { radius, elements, distance, index, generating_set, graph })
}

/// How parallel edges from a boundary vertex to ∂ are merged into one
/// geometric edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WiredConductance {
    /// Conductance equals the number of merged edges (the exact contraction
    /// of the ambient graph; keeps wired edge probabilities monotone).
    #[default]
    Multiplicity,
    /// Unit conductance regardless of multiplicity.
    Unit,
}

#[derive(Debug, Clone)]
pub struct WiredGraph {
    pub graph: SerreGraph,
    /// Index of ∂ (always the last vertex) or `None` when nothing leaves the ball.
    pub boundary: Option<usize>,
    /// Set when the ball has no ambient boundary and was returned unchanged.
    pub whole_group: bool,
}

impl WiredGraph {
    /// Number of vertices of the original (unwired) graph.
    pub fn inner_vertex_count(&self) -> usize {
        self.graph.vertex_count() - usize::from(self.boundary.is_some())
    }

    /// True for edges incident to ∂.
    pub fn is_boundary_edge(&self, edge: usize) -> bool {
        match self.boundary {
            Some(b) => {
                let (u, v) = self.graph.endpoints(edge);
                u == b || v == b
            }
            None => false,
        }
    }
}

fn attach_boundary(inner: &SerreGraph, multiplicity: &[u32], conductance: WiredConductance) -> WiredGraph {
    let mut graph = inner.clone();
    if multiplicity.iter().all(|&m| m == 0) {
        return WiredGraph { graph, boundary: None, whole_group: true };
    }
    let b = graph.add_vertex(BOUNDARY_LABEL.to_string());
    for (v, &m) in multiplicity.iter().enumerate() {
        if m > 0 {
            let c = match conductance {
                WiredConductance::Multiplicity => m,
                WiredConductance::Unit => 1,
            };
            graph.add_edge_with_conductance(v, b, c).expect("fresh boundary vertex");
        }
    }
    WiredGraph { graph, boundary: Some(b), whole_group: false }
}

/// Wires the subgraph of `ambient` induced on `members`: every ambient edge
/// with exactly one endpoint inside becomes an edge to ∂ (merged per vertex).
/// Inside vertices are reindexed in order; ∂ comes last.
pub fn wire_boundary(ambient: &SerreGraph, members: &[bool], conductance: WiredConductance) -> Result<WiredGraph> {
    if members.len() != ambient.vertex_count() {
        return Err(Error::validation("membership mask does not match the ambient graph"));
    }
    let (inner, map) = ambient.induced(members);
    let mut multiplicity = vec![0u32; inner.vertex_count()];
    for &(u, v) in ambient.edges() {
        match (map[u], map[v]) {
            (Some(a), None) => multiplicity[a] += 1,
            (None, Some(b)) => multiplicity[b] += 1,
            _ => {}
        }
    }
    Ok(attach_boundary(&inner, &multiplicity, conductance))
}

/// Nested balls of radii `1..=max_radius`, plus one extra ball used as the
/// ambient graph when wiring the largest radius.
#[derive(Debug, Clone)]
pub struct BallExhaustion {
    model: GroupModel,
    balls: Vec<CayleyBall>,
}

pub fn build_exhaustion(model: &GroupModel, max_radius: u32, vertex_cap: usize) -> Result<BallExhaustion> {
    if max_radius < 1 {
        return Err(Error::validation("exhaustion needs max_radius ≥ 1"));
    }
    let top = build_cayley_ball(model, max_radius + 1, vertex_cap)?;
    let mut balls: Vec<CayleyBall> = (1..=max_radius).map(|r| top.prefix(r)).collect();
    balls.push(top);
    Ok(BallExhaustion { model: model.clone(), balls })
}

impl BallExhaustion {
    pub fn model(&self) -> &GroupModel {
        &self.model
    }

    pub fn max_radius(&self) -> u32 {
        self.balls.len() as u32 - 1
    }

    pub fn radii(&self) -> impl Iterator<Item = u32> {
        1..=self.max_radius()
    }

    /// Ball of radius `r` (1 ≤ r ≤ max_radius + 1).
    pub fn ball(&self, r: u32) -> &CayleyBall {
        assert!(r >= 1 && (r as usize) <= self.balls.len(), "radius {r} outside the exhaustion");
        &self.balls[r as usize - 1]
    }

    /// Wired version of ball `r`, using ball `r + 1` as ambient graph.
    pub fn wired(&self, r: u32, conductance: WiredConductance) -> WiredGraph {
        let ball = self.ball(r);
        let ambient = self.ball(r + 1).graph();
        let mut members = vec![false; ambient.vertex_count()];
        members[..ball.vertex_count()].iter_mut().for_each(|m| *m = true);
        wire_boundary(ambient, &members, conductance).expect("mask sized to ambient")
    }

    /// Map from geometric edges of ball `r` to those of ball `r + 1`.
    pub fn edge_inclusion(&self, r: u32) -> Vec<usize> {
        let outer = self.ball(r + 1).graph();
        self.ball(r)
            .graph()
            .edges()
            .iter()
            .map(|&(u, v)| outer.find_edge(u, v).expect("balls are nested"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball(model: &GroupModel, r: u32) -> CayleyBall {
        build_cayley_ball(model, r, DEFAULT_VERTEX_CAP).unwrap()
    }

    #[test]
    fn free_group_balls() {
        let m = GroupModel::Free { rank: 2 };
        let b1 = ball(&m, 1);
        assert_eq!((b1.vertex_count(), b1.graph().edge_count()), (5, 4));
        let labels: Vec<&str> = (0..5).map(|v| b1.graph().label(v)).collect();
        assert_eq!(labels, ["1", "a", "A", "b", "B"]);
        let b2 = ball(&m, 2);
        assert_eq!((b2.vertex_count(), b2.graph().edge_count()), (17, 16));
        for r in 0..=6 {
            let b = ball(&m, r);
            assert_eq!(b.graph().edge_count() + 1, b.vertex_count(), "radius {r}");
        }
    }

    #[test]
    fn lattice_ball_radius_one_is_a_star() {
        let b = ball(&GroupModel::Lattice { dim: 2 }, 1);
        assert_eq!((b.vertex_count(), b.graph().edge_count()), (5, 4));
        assert!(b.graph().neighbours(0).len() == 4);
    }

    #[test]
    fn cyclic_balls_stabilise() {
        let m = GroupModel::Cyclic { order: 5 };
        let exh = build_exhaustion(&m, 3, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(exh.ball(2).vertex_count(), 5);
        assert_eq!(exh.ball(2).graph().edge_count(), 5);
        assert_eq!(exh.ball(3).graph(), exh.ball(2).graph());
        assert!(exh.ball(2).is_whole_group(&m));
        assert!(!exh.ball(1).is_whole_group(&m));
    }

    #[test]
    fn lattice_line_exhaustion() {
        let exh = build_exhaustion(&GroupModel::Lattice { dim: 1 }, 3, DEFAULT_VERTEX_CAP).unwrap();
        for r in 1..=3u32 {
            let g = exh.ball(r).graph();
            assert_eq!(g.vertex_count(), 2 * r as usize + 1);
            assert_eq!(g.edge_count(), 2 * r as usize);
        }
    }

    #[test]
    fn balls_are_nested_with_identical_labels() {
        for m in [GroupModel::Free { rank: 2 }, GroupModel::Lattice { dim: 2 }, GroupModel::Cyclic { order: 7 }] {
            let exh = build_exhaustion(&m, 4, DEFAULT_VERTEX_CAP).unwrap();
            for r in 1..4 {
                let (inner, outer) = (exh.ball(r).graph(), exh.ball(r + 1).graph());
                for (e, &f) in exh.edge_inclusion(r).iter().enumerate() {
                    let (u, v) = inner.endpoints(e);
                    let (a, b) = outer.endpoints(f);
                    assert_eq!((inner.label(u), inner.label(v)), (outer.label(a), outer.label(b)));
                }
            }
        }
    }

    #[test]
    fn interior_vertices_see_full_generating_set() {
        let m = GroupModel::FreeProduct(vec![GroupModel::Cyclic { order: 2 }, GroupModel::Cyclic { order: 3 }]);
        let b = ball(&m, 4);
        let s = b.generating_set().len();
        assert_eq!(s, 3);
        for v in b.interior() {
            assert_eq!(b.graph().degree(v), s);
        }
    }

    #[test]
    fn vertex_cap_is_enforced() {
        let err = build_cayley_ball(&GroupModel::Free { rank: 2 }, 10, 1000).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { cap: 1000, .. }));
    }

    #[test]
    fn wiring_the_line_gives_a_cycle() {
        let m = GroupModel::Lattice { dim: 1 };
        let exh = build_exhaustion(&m, 3, DEFAULT_VERTEX_CAP).unwrap();
        for r in 1..=3u32 {
            let w = exh.wired(r, WiredConductance::Multiplicity);
            let n = 2 * r as usize + 2;
            assert_eq!(w.graph.vertex_count(), n);
            assert_eq!(w.graph.edge_count(), n);
            assert!((0..n).all(|v| w.graph.degree(v) == 2));
            assert!(w.graph.has_unit_conductances());
            let direct = exh.ball(r).wired(&m, WiredConductance::Multiplicity);
            assert_eq!(direct.graph, w.graph);
        }
    }

    #[test]
    fn wiring_free_star() {
        let m = GroupModel::Free { rank: 2 };
        let exh = build_exhaustion(&m, 1, DEFAULT_VERTEX_CAP).unwrap();
        let w = exh.wired(1, WiredConductance::Unit);
        let b = w.boundary.unwrap();
        assert_eq!(w.graph.vertex_count(), 6);
        assert_eq!(w.graph.degree(b), 4);
        assert!(w.graph.has_unit_conductances());
        let w = exh.wired(1, WiredConductance::Multiplicity);
        for &(_, e) in w.graph.neighbours(b) {
            assert_eq!(w.graph.conductance(e.geometric()), 3);
        }
    }

    #[test]
    fn wiring_a_whole_group_is_flagged() {
        let m = GroupModel::Cyclic { order: 5 };
        let w = ball(&m, 2).wired(&m, WiredConductance::Multiplicity);
        assert!(w.whole_group);
        assert!(w.boundary.is_none());
        assert_eq!(w.graph.vertex_count(), 5);
    }

    #[test]
    fn deterministic_construction() {
        let m = GroupModel::Lattice { dim: 3 };
        assert_eq!(ball(&m, 3).graph(), ball(&m, 3).graph());
    }
}
