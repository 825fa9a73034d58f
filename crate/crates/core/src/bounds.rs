//! Degree upper bounds from vertex isoperimetry and finite-index scaling
//! laws for β₁, cost and rank.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::graph::SerreGraph;
use crate::stats::{EmpiricalForestLaw, Z};

/// Cap on Σ_{k ≤ m} C(|V|, k) for the exhaustive search.
pub const SEARCH_GUARD: f64 = 1e7;

#[derive(Debug, Clone, PartialEq)]
pub struct IsoperimetricEstimate {
    pub m: usize,
    /// |∂_V h| of the witness.
    pub boundary: usize,
    /// |h| of the witness.
    pub size: usize,
    pub ratio: Ratio<usize>,
    pub witness: Vec<usize>,
    pub witness_labels: Vec<String>,
    /// False when the heuristic search ran instead of the exhaustive one.
    pub exhaustive: bool,
    /// Subsets restricted to vertices whose whole neighbourhood is present
    /// (windows of an infinite graph); otherwise the graph stands alone.
    pub exhaustion_mode: bool,
    pub examined: u64,
}

impl IsoperimetricEstimate {
    pub fn ratio_f64(&self) -> f64 {
        *self.ratio.numer() as f64 / *self.ratio.denom() as f64
    }
}

fn log_binomial_sum(n: usize, m: usize) -> f64 {
    let mut total = 0.0;
    let mut term = 1.0f64;
    for k in 1..=m.min(n) {
        term = term * (n - k + 1) as f64 / k as f64;
        total += term;
    }
    total
}

/// Outer vertex boundary size of `members`.
fn vertex_boundary(graph: &SerreGraph, members: &[usize], inside: &mut [bool], mark: &mut [bool]) -> usize {
    members.iter().for_each(|&v| inside[v] = true);
    let mut count = 0;
    let mut touched = Vec::new();
    for &v in members {
        for &(w, _) in graph.neighbours(v) {
            if !inside[w] && !mark[w] {
                mark[w] = true;
                touched.push(w);
                count += 1;
            }
        }
    }
    members.iter().for_each(|&v| inside[v] = false);
    touched.into_iter().for_each(|w| mark[w] = false);
    count
}

struct Search<'a> {
    graph: &'a SerreGraph,
    allowed: &'a [bool],
    m: usize,
    inside: Vec<bool>,
    mark: Vec<bool>,
    best: Option<(Ratio<usize>, usize, Vec<usize>)>,
    examined: u64,
}

impl Search<'_> {
    fn record(&mut self, sub: &[usize]) {
        self.examined += 1;
        let b = vertex_boundary(self.graph, sub, &mut self.inside, &mut self.mark);
        let ratio = Ratio::new(b, sub.len());
        let mut sorted = sub.to_vec();
        sorted.sort_unstable();
        let better = match &self.best {
            None => true,
            Some((r, _, w)) => (ratio, sorted.len(), &sorted) < (*r, w.len(), w),
        };
        if better {
            self.best = Some((ratio, b, sorted));
        }
    }

    /// ESU enumeration of connected vertex sets containing `root` as their
    /// least vertex.
    fn extend(&mut self, sub: &mut Vec<usize>, ext: Vec<usize>, root: usize) {
        self.record(sub);
        if sub.len() == self.m {
            return;
        }
        let mut ext = ext;
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            for &(u, _) in self.graph.neighbours(w) {
                if u > root
                    && self.allowed[u]
                    && !sub.contains(&u)
                    && !next.contains(&u)
                    && u != w
                    && !sub.iter().any(|&s| self.graph.find_edge(s, u).is_some())
                {
                    next.push(u);
                }
            }
            sub.push(w);
            self.extend(sub, next, root);
            sub.pop();
        }
    }
}

/// Minimum of |∂_V h|/|h| over connected vertex sets h with |h| ≤ m.
///
/// With `interior = Some(vertices)` only sets inside those vertices are
/// searched and boundaries are taken in the full graph, which is the
/// infinite-graph value when the interior's neighbourhoods are complete.
/// Exceeding the search guard is an error unless `heuristic` is set, in
/// which case a greedy growth from every vertex is used and flagged.
pub fn isoperimetric_search(
    graph: &SerreGraph,
    m: usize,
    interior: Option<&[usize]>,
    heuristic: bool,
) -> Result<IsoperimetricEstimate> {
    if m < 1 {
        return Err(Error::validation("search size m must be at least 1"));
    }
    let n = graph.vertex_count();
    let mut allowed = vec![interior.is_none(); n];
    if let Some(vs) = interior {
        for &v in vs {
            if v >= n {
                return Err(Error::validation(format!("interior vertex {v} outside the graph")));
            }
            allowed[v] = true;
        }
    }
    let pool = allowed.iter().filter(|&&a| a).count();
    if pool == 0 {
        return Err(Error::validation("no vertices to search"));
    }
    let exhaustive = log_binomial_sum(pool, m) <= SEARCH_GUARD;
    if !exhaustive && !heuristic {
        return Err(Error::ResourceLimit {
            what: format!("isoperimetric search over {pool} vertices with m = {m} (enable the heuristic mode)"),
            cap: SEARCH_GUARD as usize,
        });
    }
    let mut search = Search {
        graph,
        allowed: &allowed,
        m,
        inside: vec![false; n],
        mark: vec![false; n],
        best: None,
        examined: 0,
    };
    for v in (0..n).filter(|&v| allowed[v]) {
        if exhaustive {
            let ext = graph.neighbours(v).iter().map(|&(u, _)| u).filter(|&u| u > v && allowed[u]).collect();
            search.extend(&mut vec![v], ext, v);
        } else {
            greedy(&mut search, v);
        }
    }
    let (ratio, boundary, witness) = search.best.expect("at least one vertex searched");
    Ok(IsoperimetricEstimate {
        m,
        boundary,
        size: witness.len(),
        ratio,
        witness_labels: witness.iter().map(|&v| String::from(graph.label(v))).collect(),
        witness,
        exhaustive,
        exhaustion_mode: interior.is_some(),
        examined: search.examined,
    })
}

fn greedy(search: &mut Search<'_>, start: usize) {
    let graph = search.graph;
    let mut sub = vec![start];
    search.record(&sub);
    while sub.len() < search.m {
        let mut candidates: Vec<usize> = sub
            .iter()
            .flat_map(|&v| graph.neighbours(v).iter().map(|&(w, _)| w))
            .filter(|&w| search.allowed[w] && !sub.contains(&w))
            .collect();
        candidates.sort_unstable();
        candidates.dedup();
        let mut best: Option<(usize, usize)> = None;
        for w in candidates {
            sub.push(w);
            let b = vertex_boundary(graph, &sub, &mut search.inside, &mut search.mark);
            sub.pop();
            if best.is_none_or(|(bb, bw)| (b, w) < (bb, bw)) {
                best = Some((b, w));
            }
        }
        match best {
            Some((_, w)) => {
                sub.push(w);
                search.record(&sub);
            }
            None => break,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundStatus {
    Pass,
    Fail,
    /// Standalone finite graph: the whole graph has empty boundary, so the
    /// isoperimetric constant is zero and the bound says nothing.
    Vacuous,
}

impl BoundStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundStatus::Pass => "pass",
            BoundStatus::Fail => "fail",
            BoundStatus::Vacuous => "vacuous",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeBoundReport {
    pub degree: f64,
    pub allowance: f64,
    /// 2 + ratio, the bound checked.
    pub bound: f64,
    /// The same inequality counted in edges per vertex: deg/2 ≤ 1 + ratio/2.
    pub half_degree: f64,
    pub half_form: f64,
    pub status: BoundStatus,
    pub caveat: Option<String>,
}

/// Checks deg ≤ 2 + ratio + 3σ. The search ratio over-estimates the
/// infimum, so this is implied by deg ≤ 2 + i_V. Outside exhaustion mode the
/// check is reported as vacuous.
pub fn degree_bound_check(law: &EmpiricalForestLaw, iso: &IsoperimetricEstimate) -> DegreeBoundReport {
    let ratio = iso.ratio_f64();
    let allowance = Z * law.degree_se();
    let half_form = 1.0 + ratio / 2.0;
    let (status, caveat, bound) = if iso.exhaustion_mode {
        let bound = 2.0 + ratio;
        let ok = law.degree_mean <= bound + allowance + 1e-12;
        (if ok { BoundStatus::Pass } else { BoundStatus::Fail }, None, bound)
    } else {
        let caveat = format!(
            "finite-graph caveat: the whole graph has empty vertex boundary, so i_V = 0 and deg ≤ 2 + 0 is {}; \
             the bound is a statement about infinite graphs",
            if law.degree_mean <= 2.0 + allowance { "satisfied but uninformative" } else { "not applicable" }
        );
        (BoundStatus::Vacuous, Some(caveat), 2.0)
    };
    DegreeBoundReport {
        degree: law.degree_mean,
        allowance,
        bound,
        half_degree: law.degree_mean / 2.0,
        half_form,
        status,
        caveat,
    }
}

fn check_index(index: u64) -> Result<()> {
    if index == 0 {
        return Err(Error::validation("index must be at least 1"));
    }
    Ok(())
}

/// β₁ of an index-`index` subgroup.
pub fn beta1_scale(beta1: f64, index: u64) -> Result<f64> {
    check_index(index)?;
    if beta1 < 0.0 {
        return Err(Error::validation("β₁ must be non-negative"));
    }
    Ok(index as f64 * beta1)
}

/// Cost of an index-`index` subgroup: 1 + index·(cost − 1).
pub fn cost_scale(cost: f64, index: u64) -> Result<f64> {
    check_index(index)?;
    if cost < 1.0 {
        return Err(Error::validation("cost must be at least 1"));
    }
    Ok(1.0 + index as f64 * (cost - 1.0))
}

/// Upper bound index·rank for the rank of an index-`index` subgroup.
pub fn rank_bound(rank: u64, index: u64) -> Result<u64> {
    check_index(index)?;
    if rank < 1 {
        return Err(Error::validation("rank must be at least 1"));
    }
    index.checked_mul(rank).ok_or_else(|| Error::validation("rank bound overflows"))
}

/// Exact rank of an index-`index` subgroup of the free group of rank `k`.
pub fn free_group_rank(k: u64, index: u64) -> Result<u64> {
    check_index(index)?;
    if k < 1 {
        return Err(Error::validation("free rank must be at least 1"));
    }
    index.checked_mul(k - 1).and_then(|x| x.checked_add(1)).ok_or_else(|| Error::validation("rank overflows"))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WitnessBase {
    Beta1(f64),
    Cost(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessRow {
    pub index: u64,
    /// Scaled β₁ or cost.
    pub scaled: f64,
    pub rank_bound: u64,
    /// scaled²/rank_bound.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingLawReport {
    pub base: WitnessBase,
    pub rank: u64,
    pub rows: Vec<WitnessRow>,
    pub strictly_increasing: bool,
    pub witness: bool,
    pub message: String,
    /// Least index from which every ratio exceeds the threshold.
    pub index_to_exceed: Option<u64>,
}

/// Ratios (scaled invariant)²/(index·rank) along the given indices.
pub fn witness_growth(base: WitnessBase, rank: u64, indices: &[u64], threshold: Option<f64>) -> Result<ScalingLawReport> {
    if indices.is_empty() {
        return Err(Error::validation("index list is empty"));
    }
    let mut rows = Vec::with_capacity(indices.len());
    for &m in indices {
        let scaled = match base {
            WitnessBase::Beta1(b) => beta1_scale(b, m)?,
            WitnessBase::Cost(c) => cost_scale(c, m)?,
        };
        let rk = rank_bound(rank, m)?;
        let ratio = match base {
            // (m·β₁)²/(m·rk) simplifies to m·β₁²/rk.
            WitnessBase::Beta1(b) => m as f64 * (b * b) / rank as f64,
            WitnessBase::Cost(_) => scaled * scaled / rk as f64,
        };
        rows.push(WitnessRow { index: m, scaled, rank_bound: rk, ratio });
    }
    let strictly_increasing = rows.windows(2).all(|w| w[1].ratio > w[0].ratio);
    let growth = match base {
        WitnessBase::Beta1(b) => b > 0.0,
        WitnessBase::Cost(c) => c > 1.0,
    };
    let index_to_exceed = match (threshold, growth) {
        (Some(t), true) => Some(first_index_beyond(base, rank, t)),
        _ => None,
    };
    let message = if !growth {
        String::from("no witness: ratios constant/decreasing")
    } else if strictly_increasing {
        String::from("ratios strictly increasing along the indices: unbounded")
    } else {
        String::from("ratios unbounded but not monotone over these indices")
    };
    Ok(ScalingLawReport { base, rank, rows, strictly_increasing, witness: growth, message, index_to_exceed })
}

fn first_index_beyond(base: WitnessBase, rank: u64, t: f64) -> u64 {
    let rk = rank as f64;
    let ratio = |m: u64| match base {
        WitnessBase::Beta1(b) => m as f64 * b * b / rk,
        WitnessBase::Cost(c) => {
            let s = 1.0 + m as f64 * (c - 1.0);
            s * s / (m as f64 * rk)
        }
    };
    // Both ratios are convex in m, so past the larger root of ratio = t they
    // stay above t. Start from a closed-form guess and correct locally.
    let guess = match base {
        WitnessBase::Beta1(b) => libm::floor(t * rk / (b * b)) + 1.0,
        WitnessBase::Cost(c) => {
            let a = c - 1.0;
            let p = 2.0 * a - t * rk;
            let disc = p * p - 4.0 * a * a;
            if disc < 0.0 {
                1.0
            } else {
                libm::floor((-p + libm::sqrt(disc)) / (2.0 * a * a)) + 1.0
            }
        }
    };
    let mut m = (guess.max(1.0) as u64).max(1);
    while m > 1 && ratio(m - 1) > t {
        m -= 1;
    }
    while ratio(m) <= t {
        m += 1;
    }
    m
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankGradient {
    /// (rk − 1)/index, exact.
    pub ratios: Vec<Ratio<u64>>,
    pub limit_estimate: f64,
    pub constant: bool,
}

pub fn rank_gradient(ranks: &[u64], indices: &[u64]) -> Result<RankGradient> {
    if ranks.len() != indices.len() || ranks.is_empty() {
        return Err(Error::validation("rank and index sequences must be non-empty and of equal length"));
    }
    if indices.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::validation("indices must be strictly increasing"));
    }
    if let Some(i) = indices.iter().position(|&m| m == 0) {
        return Err(Error::validation(format!("index at position {i} is zero")));
    }
    if let Some(i) = ranks.iter().position(|&r| r == 0) {
        return Err(Error::validation(format!("rank at position {i} is zero")));
    }
    let ratios: Vec<Ratio<u64>> = ranks.iter().zip(indices).map(|(&r, &m)| Ratio::new(r - 1, m)).collect();
    let last = ratios[ratios.len() - 1];
    Ok(RankGradient {
        limit_estimate: *last.numer() as f64 / *last.denom() as f64,
        constant: ratios.windows(2).all(|w| w[0] == w[1]),
        ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{build_cayley_ball, DEFAULT_VERTEX_CAP};
    use crate::group::GroupModel;

    fn cycle(n: usize) -> SerreGraph {
        let e: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        SerreGraph::from_edges(n, &e).unwrap()
    }

    #[test]
    fn isoperimetry_examples() {
        let free = build_cayley_ball(&GroupModel::Free { rank: 2 }, 2, DEFAULT_VERTEX_CAP).unwrap();
        let iso = isoperimetric_search(free.graph(), 1, Some(&free.interior()), false).unwrap();
        assert_eq!(iso.ratio, Ratio::new(4, 1));

        let lat = build_cayley_ball(&GroupModel::Lattice { dim: 2 }, 4, DEFAULT_VERTEX_CAP).unwrap();
        let iso = isoperimetric_search(lat.graph(), 4, Some(&lat.interior()), false).unwrap();
        assert_eq!(iso.ratio, Ratio::new(2, 1));
        assert_eq!((iso.boundary, iso.size), (8, 4));

        let c6 = isoperimetric_search(&cycle(6), 3, None, false).unwrap();
        assert_eq!(c6.ratio, Ratio::new(2, 3));
        assert_eq!(c6.size, 3);
        let whole = isoperimetric_search(&cycle(6), 6, None, false).unwrap();
        assert_eq!(whole.ratio, Ratio::new(0, 1));
    }

    #[test]
    fn isoperimetry_is_monotone_in_m() {
        let lat = build_cayley_ball(&GroupModel::Lattice { dim: 2 }, 5, DEFAULT_VERTEX_CAP).unwrap();
        let interior = lat.interior();
        let mut prev = None;
        for m in 1..=6 {
            let r = isoperimetric_search(lat.graph(), m, Some(&interior), false).unwrap().ratio;
            if let Some(p) = prev {
                assert!(r <= p);
            }
            prev = Some(r);
        }
    }

    #[test]
    fn guard_and_heuristic() {
        let lat = build_cayley_ball(&GroupModel::Lattice { dim: 2 }, 12, DEFAULT_VERTEX_CAP).unwrap();
        let err = isoperimetric_search(lat.graph(), 12, None, false).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { .. }));
        let h = isoperimetric_search(lat.graph(), 12, Some(&lat.interior()), true).unwrap();
        assert!(!h.exhaustive);
        assert!(h.ratio < Ratio::new(2, 1));
    }

    #[test]
    fn scaling_laws() {
        assert_eq!(beta1_scale(1.0, 3).unwrap(), 3.0);
        assert_eq!(beta1_scale(0.0, 7).unwrap(), 0.0);
        assert_eq!(cost_scale(2.0, 3).unwrap(), 4.0);
        assert_eq!(cost_scale(1.0, 9).unwrap(), 1.0);
        assert_eq!(cost_scale(1.5, 4).unwrap(), 3.0);
        assert!(cost_scale(0.5, 2).is_err());
        assert_eq!(rank_bound(2, 3).unwrap(), 6);
        assert_eq!(free_group_rank(2, 1).unwrap(), 2);
        assert_eq!(free_group_rank(2, 3).unwrap(), 4);
    }

    #[test]
    fn witness_examples() {
        let r = witness_growth(WitnessBase::Beta1(1.0), 2, &[1, 10, 100], Some(1000.0)).unwrap();
        assert_eq!(r.rows.iter().map(|w| w.ratio).collect::<Vec<_>>(), vec![0.5, 5.0, 50.0]);
        assert!(r.strictly_increasing && r.witness);
        assert_eq!(r.index_to_exceed, Some(2001));
        let flat = witness_growth(WitnessBase::Beta1(0.0), 2, &[1, 10, 100], Some(1.0)).unwrap();
        assert!(!flat.witness);
        assert_eq!(flat.message, "no witness: ratios constant/decreasing");
        let cost = witness_growth(WitnessBase::Cost(2.0), 2, &[100], None).unwrap();
        assert!((cost.rows[0].ratio - 51.005).abs() < 1e-12);
    }

    #[test]
    fn cost_threshold_index() {
        for (c, t) in [(2.0, 10.0), (1.1, 3.0), (1.01, 0.5), (3.0, 100.0)] {
            let r = witness_growth(WitnessBase::Cost(c), 2, &[1], Some(t)).unwrap();
            let m = r.index_to_exceed.unwrap();
            let f = |m: u64| {
                let s = 1.0 + m as f64 * (c - 1.0);
                s * s / (2.0 * m as f64)
            };
            assert!((m..m + 500).all(|k| f(k) > t), "c={c} t={t} m={m}");
            assert!(m == 1 || f(m - 1) <= t);
        }
    }

    #[test]
    fn rank_gradients() {
        let ranks: Vec<u64> = [2, 4, 8].iter().map(|&m| free_group_rank(2, m).unwrap()).collect();
        let g = rank_gradient(&ranks, &[2, 4, 8]).unwrap();
        assert!(g.constant);
        assert_eq!(g.ratios, vec![Ratio::new(1, 1); 3]);
        let user = rank_gradient(&[5, 9, 17], &[2, 4, 8]).unwrap();
        assert_eq!(user.ratios, vec![Ratio::new(2, 1); 3]);
        assert!(rank_gradient(&[2, 2], &[1, 1]).is_err());
    }
}
