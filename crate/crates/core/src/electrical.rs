//! Electrical networks on finite Serre graphs.
//!
//! Alternating edge functions are stored by their value on the canonical
//! orientation of each geometric edge. The inner product sums over oriented
//! edges weighted by conductance, so `‖χ_e‖² = 2` on unit-conductance graphs.
//! With this convention the star projection of `χ_e` evaluated at `e` is the
//! unit transfer current through `e`, i.e. the probability that `e` lies in a
//! uniform (conductance-weighted) spanning tree.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cayley::{BallExhaustion, WiredConductance};
use crate::error::{Error, Result};
use crate::graph::{OrientedEdge, SerreGraph};
use crate::linalg::{self, GroundedLaplacian, Potentials};

/// Tolerance for projection identities and monotonicity checks.
pub const TOLERANCE: f64 = 1e-9;

/// Upper limit on vertex count for exact tree counting.
pub const MATRIX_TREE_LIMIT: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct AlternatingVector {
    values: Vec<f64>,
}

impl AlternatingVector {
    pub fn zeros(graph: &SerreGraph) -> Self {
        AlternatingVector { values: vec![0.0; graph.edge_count()] }
    }

    /// From values on canonical orientations.
    pub fn from_canonical(graph: &SerreGraph, values: Vec<f64>) -> Result<Self> {
        if values.len() != graph.edge_count() {
            return Err(Error::validation("one value per geometric edge expected"));
        }
        Ok(AlternatingVector { values })
    }

    /// From values on every oriented edge; fails unless `v(ē) = −v(e)` exactly.
    pub fn from_oriented(graph: &SerreGraph, values: &[f64]) -> Result<Self> {
        if values.len() != graph.oriented_edge_count() {
            return Err(Error::validation("one value per oriented edge expected"));
        }
        for i in 0..graph.edge_count() {
            if values[2 * i] != -values[2 * i + 1] {
                return Err(Error::validation(format!("values on edge {i} are not antisymmetric")));
            }
        }
        Ok(AlternatingVector { values: (0..graph.edge_count()).map(|i| values[2 * i]).collect() })
    }

    /// `χ_e = δ_e − δ_ē` for the canonical orientation of geometric edge `e`.
    pub fn chi(graph: &SerreGraph, edge: usize) -> Self {
        let mut v = Self::zeros(graph);
        v.values[edge] = 1.0;
        v
    }

    /// Sum of `χ` along a closed walk given as a vertex cycle `v0 v1 … vk v0`.
    pub fn cycle(graph: &SerreGraph, vertices: &[usize]) -> Result<Self> {
        let mut v = Self::zeros(graph);
        for i in 0..vertices.len() {
            let (a, b) = (vertices[i], vertices[(i + 1) % vertices.len()]);
            let e = graph
                .find_oriented(a, b)
                .ok_or_else(|| Error::validation(format!("({a},{b}) is not an edge")))?;
            let sign = if e.is_canonical() { 1.0 } else { -1.0 };
            v.values[e.geometric()] += sign;
        }
        Ok(v)
    }

    pub fn value(&self, e: OrientedEdge) -> f64 {
        let x = self.values[e.geometric()];
        if e.is_canonical() {
            x
        } else {
            -x
        }
    }

    pub fn canonical_values(&self) -> &[f64] {
        &self.values
    }

    /// Conductance-weighted inner product over oriented edges.
    pub fn inner(&self, graph: &SerreGraph, other: &Self) -> f64 {
        2.0 * self
            .values
            .iter()
            .zip(&other.values)
            .enumerate()
            .map(|(i, (a, b))| graph.conductance(i) as f64 * a * b)
            .sum::<f64>()
    }

    pub fn norm_sq(&self, graph: &SerreGraph) -> f64 {
        self.inner(graph, self)
    }

    pub fn sub(&self, other: &Self) -> Self {
        AlternatingVector { values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        AlternatingVector { values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| libm::fabs(a - b)).fold(0.0, f64::max)
    }
}

/// Coboundary `df(e) = f(e₊) − f(e₋)`.
pub fn derivative(graph: &SerreGraph, f: &[f64]) -> AlternatingVector {
    AlternatingVector { values: graph.edges().iter().map(|&(t, h)| f[h] - f[t]).collect() }
}

/// Weighted divergence `(d*v)(x) = Σ_{e₊ = x} c(e) v(e)`, the adjoint of `d`
/// for the geometric-edge inner product; `d*d` is the Laplacian `D − A`.
pub fn divergence(graph: &SerreGraph, v: &AlternatingVector) -> Vec<f64> {
    let mut out = vec![0.0; graph.vertex_count()];
    for (i, &(t, h)) in graph.edges().iter().enumerate() {
        let flow = graph.conductance(i) as f64 * v.values[i];
        out[h] += flow;
        out[t] -= flow;
    }
    out
}

/// Potentials `φ` with `Lφ = demand`, normalised by `φ(0) = 0`.
pub fn laplacian_solve(graph: &SerreGraph, demand: &[f64]) -> Result<Potentials> {
    GroundedLaplacian::new(graph)?.solve(demand)
}

/// Orthogonal projection onto the star space (closure of `d ℓ²(V)`).
pub fn star_projection(graph: &SerreGraph, v: &AlternatingVector) -> Result<AlternatingVector> {
    let lap = GroundedLaplacian::new(graph)?;
    star_projection_with(graph, &lap, v)
}

fn star_projection_with(graph: &SerreGraph, lap: &GroundedLaplacian, v: &AlternatingVector) -> Result<AlternatingVector> {
    let rhs = divergence(graph, v);
    let phi = lap.solve(&rhs)?;
    let proj = derivative(graph, &phi.values);
    let defect = divergence(graph, &v.sub(&proj));
    let worst = defect.iter().map(|x| libm::fabs(*x)).fold(0.0, f64::max);
    if worst > TOLERANCE * (1.0 + v.norm_sq(graph)) {
        return Err(Error::Numerical { what: "star projection is not orthogonal".into(), residual: worst });
    }
    Ok(proj)
}

/// Orthogonal projection onto the cycle space, `v − π_★(v)`; verifies the
/// Pythagorean identity of the decomposition.
pub fn cycle_projection(graph: &SerreGraph, v: &AlternatingVector) -> Result<AlternatingVector> {
    let star = star_projection(graph, v)?;
    let cyc = v.sub(&star);
    let gap = libm::fabs(star.norm_sq(graph) + cyc.norm_sq(graph) - v.norm_sq(graph));
    if gap > TOLERANCE * (1.0 + v.norm_sq(graph)) {
        return Err(Error::Numerical { what: "star ⊕ cycle decomposition failed".into(), residual: gap });
    }
    Ok(cyc)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeCount {
    /// Number of spanning trees (conductance-weighted when conductances ≠ 1).
    pub count: BigInt,
    pub connected: bool,
}

/// Matrix-tree theorem: determinant of the reduced Laplacian.
pub fn matrix_tree_count(graph: &SerreGraph) -> Result<TreeCount> {
    if graph.vertex_count() > MATRIX_TREE_LIMIT {
        return Err(Error::ResourceLimit { what: "matrix-tree count".into(), cap: MATRIX_TREE_LIMIT });
    }
    if !graph.is_connected() {
        return Ok(TreeCount { count: BigInt::zero(), connected: false });
    }
    let det = linalg::bareiss_determinant(linalg::reduced_laplacian_int(graph));
    Ok(TreeCount { count: det, connected: true })
}

fn check_edge(graph: &SerreGraph, edge: usize) -> Result<()> {
    if edge >= graph.edge_count() {
        return Err(Error::validation(format!("edge {edge} is not in the graph ({} edges)", graph.edge_count())));
    }
    Ok(())
}

/// `P[e ∈ UST] = π_★(χ_e)(e)`, computed from one Laplacian solve.
pub fn ust_edge_probability(graph: &SerreGraph, edge: usize) -> Result<f64> {
    check_edge(graph, edge)?;
    let lap = GroundedLaplacian::new(graph)?;
    transfer_current(graph, &lap, edge)
}

fn transfer_current(graph: &SerreGraph, lap: &GroundedLaplacian, edge: usize) -> Result<f64> {
    let (t, h) = graph.endpoints(edge);
    let c = graph.conductance(edge) as f64;
    Ok(c * lap.effective_resistance(h, t)?)
}

/// Exact rational `P[e ∈ UST]` from an exact Laplacian solve.
pub fn ust_edge_probability_exact(graph: &SerreGraph, edge: usize) -> Result<BigRational> {
    check_edge(graph, edge)?;
    let (t, h) = graph.endpoints(edge);
    let mut demand = vec![BigRational::zero(); graph.vertex_count()];
    demand[h] = BigRational::one();
    demand[t] = -BigRational::one();
    let phi = linalg::solve_exact(graph, &demand)?;
    let c = BigRational::from_integer(BigInt::from(graph.conductance(edge)));
    Ok(c * (&phi[h] - &phi[t]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryMode {
    Free,
    Wired,
}

impl BoundaryMode {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryMode::Free => "free",
            BoundaryMode::Wired => "wired",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeProbability {
    pub edge: usize,
    pub probability: f64,
    /// Exact value when computed in rational mode.
    pub exact: Option<BigRational>,
    /// Residual of the Laplacian solve behind the float value.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeProbabilityTable {
    pub mode: BoundaryMode,
    pub radius: Option<u32>,
    pub vertex_count: usize,
    pub component_count: usize,
    pub entries: Vec<EdgeProbability>,
}

impl EdgeProbabilityTable {
    /// Probabilities lie in [0, 1] and sum to `|V| − #components`.
    pub fn check(&self) -> Result<()> {
        for e in &self.entries {
            if !(-TOLERANCE..=1.0 + TOLERANCE).contains(&e.probability) {
                return Err(Error::consistency(format!("edge {} has probability {}", e.edge, e.probability)));
            }
        }
        let sum: f64 = self.entries.iter().map(|e| e.probability).sum();
        let expected = (self.vertex_count - self.component_count) as f64;
        if libm::fabs(sum - expected) > TOLERANCE * expected.max(1.0) {
            return Err(Error::consistency(format!("probabilities sum to {sum}, expected {expected}")));
        }
        Ok(())
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().map(|e| e.probability).sum()
    }
}

/// Edge-inclusion probabilities for every edge (per component when the
/// graph is disconnected). With `exact`, also computes rational values.
pub fn edge_probability_table(
    graph: &SerreGraph,
    mode: BoundaryMode,
    radius: Option<u32>,
    exact: bool,
) -> Result<EdgeProbabilityTable> {
    let components = graph.components();
    let mut entries: Vec<Option<EdgeProbability>> = vec![None; graph.edge_count()];
    for comp in &components {
        let mut keep = vec![false; graph.vertex_count()];
        comp.iter().for_each(|&v| keep[v] = true);
        let (sub, map) = graph.induced(&keep);
        if sub.edge_count() == 0 {
            continue;
        }
        let lap = GroundedLaplacian::new(&sub)?;
        for (i, &(u, v)) in graph.edges().iter().enumerate() {
            let (Some(a), Some(b)) = (map[u], map[v]) else { continue };
            let j = sub.find_edge(a, b).expect("induced edge");
            let (t, h) = sub.endpoints(j);
            let mut demand = vec![0.0; sub.vertex_count()];
            demand[h] = 1.0;
            demand[t] = -1.0;
            let phi = lap.solve(&demand)?;
            let p = sub.conductance(j) as f64 * (phi.values[h] - phi.values[t]);
            let exact = if exact { Some(ust_edge_probability_exact(&sub, j)?) } else { None };
            entries[i] = Some(EdgeProbability { edge: i, probability: p, exact, residual: phi.residual });
        }
    }
    let table = EdgeProbabilityTable {
        mode,
        radius,
        vertex_count: graph.vertex_count(),
        component_count: components.len(),
        entries: entries.into_iter().map(|e| e.expect("every edge lies in a component")).collect(),
    };
    table.check()?;
    Ok(table)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub radius: u32,
    /// `i_n(e)`: probability on the free ball.
    pub free: f64,
    /// `j_n(e)`: probability on the wired ball.
    pub wired: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExhaustionSweep {
    /// Endpoints of the edge as vertex indices (stable across balls).
    pub endpoints: (usize, usize),
    pub entries: Vec<SweepEntry>,
}

impl ExhaustionSweep {
    /// `[j_N, i_N]` at the largest radius.
    pub fn bracket(&self) -> (f64, f64) {
        let last = self.entries.last().expect("non-empty sweep");
        (last.wired, last.free)
    }

    pub fn values(&self, mode: BoundaryMode) -> Vec<f64> {
        self.entries
            .iter()
            .map(|e| match mode {
                BoundaryMode::Free => e.free,
                BoundaryMode::Wired => e.wired,
            })
            .collect()
    }

    /// `i_n` non-increasing, `j_n` non-decreasing, `j_n ≤ i_n`.
    pub fn check_monotone(&self) -> Result<()> {
        for (k, e) in self.entries.iter().enumerate() {
            if e.wired > e.free + TOLERANCE {
                return Err(Error::consistency(format!("radius {}: wired {} exceeds free {}", e.radius, e.wired, e.free)));
            }
            if k > 0 {
                let p = &self.entries[k - 1];
                if e.free > p.free + TOLERANCE {
                    return Err(Error::consistency(format!(
                        "free probability increased from {} to {} at radius {}",
                        p.free, e.free, e.radius
                    )));
                }
                if e.wired + TOLERANCE < p.wired {
                    return Err(Error::consistency(format!(
                        "wired probability decreased from {} to {} at radius {}",
                        p.wired, e.wired, e.radius
                    )));
                }
            }
        }
        Ok(())
    }
}

fn probability_on(graph: &SerreGraph, u: usize, v: usize) -> Result<f64> {
    let e = graph.find_edge(u, v).ok_or_else(|| Error::validation(format!("({u},{v}) is not an edge")))?;
    ust_edge_probability(graph, e)
}

/// Free and wired edge probabilities of the edge `{u, v}` across the
/// exhaustion, starting at the first radius containing it. Fails with a
/// consistency error if monotonicity is violated beyond tolerance.
pub fn exhaustion_probability_sweep(
    exh: &BallExhaustion,
    u: usize,
    v: usize,
    conductance: WiredConductance,
) -> Result<ExhaustionSweep> {
    let mut entries = Vec::new();
    for r in exh.radii() {
        let ball = exh.ball(r).graph();
        if ball.find_edge(u, v).is_none() {
            if entries.is_empty() {
                continue;
            }
            return Err(Error::consistency("edge vanished from a larger ball"));
        }
        let free = probability_on(ball, u, v)?;
        let wired = probability_on(&exh.wired(r, conductance).graph, u, v)?;
        entries.push(SweepEntry { radius: r, free, wired });
    }
    if entries.is_empty() {
        return Err(Error::validation(format!("({u},{v}) is not an edge of any ball")));
    }
    let sweep = ExhaustionSweep { endpoints: (u, v), entries };
    sweep.check_monotone()?;
    Ok(sweep)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeBracket {
    pub radius: u32,
    /// `Σ_s j_N(e_s)`, or the exact value when the bracket collapses.
    pub lower: f64,
    /// `Σ_s i_N(e_s)`.
    pub upper: f64,
    pub wired_sum: f64,
    pub free_sum: f64,
    /// Set when the limit is known exactly (tree Cayley graph or a ball
    /// that is the whole finite group).
    pub exact: bool,
}

impl DegreeBracket {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower - TOLERANCE <= x && x <= self.upper + TOLERANCE
    }
}

/// Bracket for the expected degree of the free uniform spanning forest:
/// `Σ_s j_N(e_s) ≤ lim ≤ Σ_s i_N(e_s)` with `e_s` the edges at the identity.
pub fn fusf_degree_estimate(exh: &BallExhaustion, conductance: WiredConductance) -> Result<DegreeBracket> {
    let ball1 = exh.ball(1);
    let mut free_sum = 0.0;
    let mut wired_sum = 0.0;
    for s in ball1.identity_neighbours() {
        let sweep = exhaustion_probability_sweep(exh, 0, s, conductance)?;
        let (j, i) = sweep.bracket();
        free_sum += i;
        wired_sum += j;
    }
    let top = exh.max_radius();
    let whole = exh.ball(top).is_whole_group(exh.model());
    let tree = exh.model().cayley_graph_is_tree();
    let exact = whole || tree;
    let (lower, upper) = if tree {
        // no cycles anywhere: every free edge probability is exactly 1
        let s = ball1.generating_set().len() as f64;
        (s, s)
    } else if whole {
        (free_sum, free_sum)
    } else {
        (wired_sum, free_sum)
    };
    Ok(DegreeBracket { radius: top, lower, upper, wired_sum, free_sum, exact })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Beta1Mode {
    /// Subtract the exact wired degree 2.
    #[default]
    Fast,
    /// Subtract the computed wired sum and check it never exceeds 2.
    Strict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Beta1Bracket {
    pub lower: f64,
    pub upper: f64,
    pub degree: DegreeBracket,
    pub mode: Beta1Mode,
}

/// First L²-Betti number from the degree identity `deg(FUSF) = 2β₁ + 2`.
pub fn beta1_estimate(exh: &BallExhaustion, conductance: WiredConductance, mode: Beta1Mode) -> Result<Beta1Bracket> {
    let degree = fusf_degree_estimate(exh, conductance)?;
    let lower = ((degree.lower - 2.0) / 2.0).max(0.0);
    let upper = match mode {
        Beta1Mode::Fast => (degree.upper - 2.0) / 2.0,
        Beta1Mode::Strict => {
            let infinite = exh.model().order().is_none();
            if infinite && degree.wired_sum > 2.0 + TOLERANCE {
                return Err(Error::consistency(format!("wired degree sum {} exceeds 2", degree.wired_sum)));
            }
            if degree.exact {
                (degree.upper - 2.0) / 2.0
            } else {
                (degree.free_sum - degree.wired_sum) / 2.0
            }
        }
    };
    Ok(Beta1Bracket { lower, upper: upper.max(lower), degree, mode })
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

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn triangle_potential_difference() {
        let p = laplacian_solve(&triangle(), &[1.0, -1.0, 0.0]).unwrap();
        assert!(close(p.values[0] - p.values[1], 2.0 / 3.0));
        let z = laplacian_solve(&k4(), &[0.0; 4]).unwrap();
        assert!(z.values.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn chi_has_norm_two() {
        let g = triangle();
        assert_eq!(AlternatingVector::chi(&g, 1).norm_sq(&g), 2.0);
    }

    #[test]
    fn star_projection_examples() {
        let g = triangle();
        let pi = star_projection(&g, &AlternatingVector::chi(&g, 0)).unwrap();
        assert!(close(pi.value(OrientedEdge(0)), 2.0 / 3.0));
        let c = AlternatingVector::cycle(&g, &[0, 1, 2]).unwrap();
        assert!(star_projection(&g, &c).unwrap().canonical_values().iter().all(|x| x.abs() < 1e-12));
        let cyc = cycle_projection(&g, &AlternatingVector::chi(&g, 0)).unwrap();
        assert!(close(cyc.value(OrientedEdge(0)), 1.0 / 3.0));
        let tree = SerreGraph::from_edges(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
        let v = AlternatingVector::from_canonical(&tree, vec![0.3, -1.2, 2.5]).unwrap();
        assert!(star_projection(&tree, &v).unwrap().max_abs_diff(&v) < 1e-12);
        assert!(cycle_projection(&tree, &v).unwrap().canonical_values().iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn oriented_values_must_be_antisymmetric() {
        let g = triangle();
        assert!(AlternatingVector::from_oriented(&g, &[1.0, -1.0, 2.0, -2.0, 0.0, 0.0]).is_ok());
        assert!(AlternatingVector::from_oriented(&g, &[1.0, 1.0, 2.0, -2.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn tree_counts() {
        let path = SerreGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(matrix_tree_count(&path).unwrap().count, BigInt::from(1));
        assert_eq!(matrix_tree_count(&triangle()).unwrap().count, BigInt::from(3));
        assert_eq!(matrix_tree_count(&k4()).unwrap().count, BigInt::from(16));
        let split = SerreGraph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let c = matrix_tree_count(&split).unwrap();
        assert!(!c.connected && c.count.is_zero());
    }

    #[test]
    fn kirchhoff_examples() {
        let path = SerreGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(close(ust_edge_probability(&path, 0).unwrap(), 1.0));
        assert!(close(ust_edge_probability(&triangle(), 2).unwrap(), 2.0 / 3.0));
        assert!(close(ust_edge_probability(&k4(), 3).unwrap(), 0.5));
        assert_eq!(ust_edge_probability_exact(&k4(), 3).unwrap(), BigRational::new(1.into(), 2.into()));
        assert!(matches!(ust_edge_probability(&k4(), 6), Err(Error::Validation(_))));
    }

    #[test]
    fn table_sums_to_spanning_forest_size() {
        let g = SerreGraph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let t = edge_probability_table(&g, BoundaryMode::Free, None, true).unwrap();
        assert!(close(t.sum(), 4.0));
        assert_eq!(t.entries[0].exact, Some(BigRational::new(2.into(), 3.into())));
    }

    #[test]
    fn free_group_sweep_is_identically_one() {
        let exh = build_exhaustion(&GroupModel::Free { rank: 2 }, 3, DEFAULT_VERTEX_CAP).unwrap();
        let s = exhaustion_probability_sweep(&exh, 0, 1, WiredConductance::Multiplicity).unwrap();
        assert!(s.values(BoundaryMode::Free).iter().all(|&x| close(x, 1.0)));
        let b = fusf_degree_estimate(&exh, WiredConductance::Multiplicity).unwrap();
        assert_eq!(b.upper, 4.0);
        assert!(b.lower <= 4.0 && b.exact);
        let beta = beta1_estimate(&exh, WiredConductance::Multiplicity, Beta1Mode::Fast).unwrap();
        assert_eq!((beta.lower, beta.upper), (1.0, 1.0));
    }

    #[test]
    fn line_wired_sweep_matches_cycle_formula() {
        let exh = build_exhaustion(&GroupModel::Lattice { dim: 1 }, 5, DEFAULT_VERTEX_CAP).unwrap();
        let s = exhaustion_probability_sweep(&exh, 0, 1, WiredConductance::Multiplicity).unwrap();
        for e in &s.entries {
            let n = e.radius as f64;
            assert!(close(e.wired, (2.0 * n + 1.0) / (2.0 * n + 2.0)));
            assert!(close(e.free, 1.0));
        }
        let b = fusf_degree_estimate(&exh, WiredConductance::Multiplicity).unwrap();
        assert!(b.contains(2.0));
        let beta = beta1_estimate(&exh, WiredConductance::Multiplicity, Beta1Mode::Strict).unwrap();
        assert_eq!(beta.upper, 0.0);
    }

    #[test]
    fn unit_wiring_breaks_monotonicity_on_the_square_lattice() {
        let exh = build_exhaustion(&GroupModel::Lattice { dim: 2 }, 3, DEFAULT_VERTEX_CAP).unwrap();
        assert!(matches!(
            exhaustion_probability_sweep(&exh, 0, 1, WiredConductance::Unit),
            Err(Error::Consistency(_))
        ));
        exhaustion_probability_sweep(&exh, 0, 1, WiredConductance::Multiplicity).unwrap();
    }
}
