//! Empirical random-forest laws at the identity: neighbour frequencies,
//! expected degree, width and the obstruction ratio.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::samplers::{ForestSample, PreparedSampler};

/// Width of confidence intervals in standard errors (two-sided 99.7%).
pub const Z: f64 = 3.0;
/// Below this sample count the normal approximation is replaced by a
/// distribution-free Hoeffding interval.
pub const NORMAL_MIN_N: u64 = 1000;
/// Miss probability matching a 3σ normal interval.
const ALPHA: f64 = 0.0027;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CiMethod {
    /// Mean ± 3 standard errors.
    Normal,
    /// Hoeffding bound for variables in `[0, range]` at the same level.
    Hoeffding,
}

impl CiMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            CiMethod::Normal => "normal-3sigma",
            CiMethod::Hoeffding => "hoeffding",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Where a law is read off the host ball: the identity's incident edges
/// (aligned with the generating set) and, for the invariance spot-check, the
/// edges at one other base vertex.
#[derive(Debug, Clone)]
pub struct LawProbe {
    labels: Vec<String>,
    identity_edges: Vec<usize>,
    base: Option<(String, Vec<usize>)>,
    model: String,
}

impl LawProbe {
    pub fn new(sampler: &PreparedSampler<'_>) -> Result<Self> {
        let host = sampler.host();
        let window = sampler.config().window;
        if window < 1 {
            return Err(Error::validation("law needs window radius ≥ 1 (the identity's neighbourhood)"));
        }
        let identity_edges = host.identity_edges();
        let labels = host.generating_set().iter().map(|s| s.to_string()).collect();
        // Vertex 1 is a generator; its neighbours lie in the window once the
        // window radius is at least 2.
        let base = (window >= 2 && host.vertex_count() > 1).then(|| {
            let model = sampler.exhaustion().model();
            let b = host.element(1);
            let edges = host
                .generating_set()
                .iter()
                .map(|s| {
                    let w = host.index_of(&model.multiply(b, s)).expect("window radius ≥ 2 contains b·S");
                    host.graph().find_edge(1, w).expect("Cayley edge")
                })
                .collect();
            (b.to_string(), edges)
        });
        Ok(LawProbe { labels, identity_edges, base, model: sampler.describe() })
    }

    pub fn generator_count(&self) -> usize {
        self.labels.len()
    }
}

/// Integer counters for a batch of samples; merging is associative and
/// commutative, so parallel batches reduce to the same totals.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LawAccumulator {
    pub n: u64,
    pub counts: Vec<u64>,
    pub degree_sq_sum: u64,
    pub base_counts: Vec<u64>,
    pub base_degree_sq_sum: u64,
}

impl LawAccumulator {
    pub fn new(probe: &LawProbe) -> Self {
        let k = probe.generator_count();
        LawAccumulator { n: 0, counts: vec![0; k], degree_sq_sum: 0, base_counts: vec![0; k], base_degree_sq_sum: 0 }
    }

    pub fn observe(&mut self, probe: &LawProbe, sample: &ForestSample) {
        self.n += 1;
        let mut deg = 0u64;
        for (c, &e) in self.counts.iter_mut().zip(&probe.identity_edges) {
            if sample.contains(e) {
                *c += 1;
                deg += 1;
            }
        }
        self.degree_sq_sum += deg * deg;
        if let Some((_, edges)) = &probe.base {
            let mut deg = 0u64;
            for (c, &e) in self.base_counts.iter_mut().zip(edges) {
                if sample.contains(e) {
                    *c += 1;
                    deg += 1;
                }
            }
            self.base_degree_sq_sum += deg * deg;
        }
    }

    pub fn merge(&mut self, other: &LawAccumulator) {
        if self.counts.is_empty() {
            *self = other.clone();
            return;
        }
        self.n += other.n;
        self.degree_sq_sum += other.degree_sq_sum;
        self.base_degree_sq_sum += other.base_degree_sq_sum;
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        for (a, b) in self.base_counts.iter_mut().zip(&other.base_counts) {
            *a += b;
        }
    }

    pub fn degree_count(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Law recomputed at another base vertex, compared with the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceCheck {
    pub base: String,
    pub degree_mean: f64,
    /// |deg(identity) − deg(base)|.
    pub defect: f64,
    /// Joint 3σ allowance for the defect.
    pub allowance: f64,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalForestLaw {
    pub model: String,
    pub n: u64,
    /// Generating set labels, aligned with `counts` and `f_hat`.
    pub labels: Vec<String>,
    pub counts: Vec<u64>,
    pub f_hat: Vec<f64>,
    pub degree_mean: f64,
    /// Exact mean degree as a fraction of integer counts.
    pub degree_exact: Ratio<u64>,
    pub degree_sd: f64,
    pub degree_ci: Interval,
    pub ci_method: CiMethod,
    pub width: usize,
    pub support: Vec<String>,
    pub invariance: Option<InvarianceCheck>,
}

fn variance(n: u64, sum: u64, sq_sum: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    // Exact numerator n·Σx² − (Σx)² in integers.
    let num = (n as u128) * (sq_sum as u128) - (sum as u128) * (sum as u128);
    num as f64 / (n as f64 * (n - 1) as f64)
}

fn ci(mean: f64, sd: f64, n: u64, range: f64, method: CiMethod) -> Interval {
    let half = match method {
        CiMethod::Normal => Z * sd / libm::sqrt(n as f64),
        CiMethod::Hoeffding if sd == 0.0 => 0.0,
        CiMethod::Hoeffding => range * libm::sqrt(libm::log(2.0 / ALPHA) / (2.0 * n as f64)),
    };
    Interval { lo: mean - half, hi: mean + half }
}

impl EmpiricalForestLaw {
    pub fn from_accumulator(probe: &LawProbe, acc: &LawAccumulator) -> Result<Self> {
        let n = acc.n;
        if n == 0 {
            return Err(Error::validation("a law needs at least one sample"));
        }
        let f_hat: Vec<f64> = acc.counts.iter().map(|&c| c as f64 / n as f64).collect();
        let degree_mean = f_hat.iter().sum();
        let total = acc.degree_count();
        let degree_sd = libm::sqrt(variance(n, total, acc.degree_sq_sum));
        let ci_method = if n >= NORMAL_MIN_N { CiMethod::Normal } else { CiMethod::Hoeffding };
        let range = probe.generator_count() as f64;
        let degree_ci = ci(degree_mean, degree_sd, n, range, ci_method);
        let support: Vec<String> =
            probe.labels.iter().zip(&acc.counts).filter(|(_, &c)| c > 0).map(|(l, _)| l.clone()).collect();
        let invariance = probe.base.as_ref().map(|(label, _)| {
            let base_total: u64 = acc.base_counts.iter().sum();
            let base_mean = base_total as f64 / n as f64;
            let base_sd = libm::sqrt(variance(n, base_total, acc.base_degree_sq_sum));
            let defect = libm::fabs(degree_mean - base_mean);
            let allowance = match ci_method {
                CiMethod::Normal => Z * libm::sqrt((degree_sd * degree_sd + base_sd * base_sd) / n as f64),
                CiMethod::Hoeffding => {
                    (degree_ci.hi - degree_ci.lo) / 2.0 + (ci(base_mean, base_sd, n, range, ci_method).hi - base_mean)
                }
            };
            InvarianceCheck {
                base: label.clone(),
                degree_mean: base_mean,
                defect,
                allowance,
                consistent: defect <= allowance + 1e-12,
            }
        });
        Ok(EmpiricalForestLaw {
            model: probe.model.clone(),
            n,
            labels: probe.labels.clone(),
            counts: acc.counts.clone(),
            f_hat,
            degree_mean,
            degree_exact: Ratio::new(total, n),
            degree_sd,
            degree_ci,
            ci_method,
            width: support.len(),
            support,
            invariance,
        })
    }

    /// Standard error of the degree mean.
    pub fn degree_se(&self) -> f64 {
        self.degree_sd / libm::sqrt(self.n as f64)
    }

    /// ℓ² norm of the frequency profile.
    pub fn l2_norm(&self) -> f64 {
        libm::sqrt(self.f_hat.iter().map(|f| f * f).sum())
    }

    /// Checks the law's internal invariants; Cauchy–Schwarz is checked
    /// exactly on the integer counts, (Σc)² ≤ width·Σc².
    pub fn check(&self) -> Result<()> {
        if self.f_hat.iter().any(|f| !(0.0..=1.0).contains(f)) {
            return Err(Error::consistency("frequency outside [0, 1]"));
        }
        if self.width > self.labels.len() {
            return Err(Error::consistency("width exceeds |S|"));
        }
        let sum: u128 = self.counts.iter().map(|&c| c as u128).sum();
        let sq: u128 = self.counts.iter().map(|&c| (c as u128) * (c as u128)).sum();
        if sum * sum > self.width as u128 * sq {
            return Err(Error::consistency("degree exceeds √width · ‖f‖₂"));
        }
        if self.degree_mean > self.width as f64 + 1e-12 {
            return Err(Error::consistency("degree exceeds width"));
        }
        Ok(())
    }
}

/// Samples `0..n` of `(seed)` in order and returns the law at the identity.
pub fn estimate_law(sampler: &PreparedSampler<'_>, n: u64, seed: u64) -> Result<EmpiricalForestLaw> {
    if n == 0 {
        return Err(Error::validation("sample count N must be at least 1"));
    }
    let probe = LawProbe::new(sampler)?;
    let mut acc = LawAccumulator::new(&probe);
    for i in 0..n {
        acc.observe(&probe, &sampler.sample(seed, i)?);
    }
    EmpiricalForestLaw::from_accumulator(&probe, &acc)
}

pub fn degree_of(law: &EmpiricalForestLaw) -> f64 {
    law.degree_mean
}

pub fn width_of(law: &EmpiricalForestLaw) -> usize {
    law.width
}

/// deg²/width with the interval obtained by squaring the degree interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObstructionRatio {
    pub value: f64,
    pub ci: Interval,
}

/// The empirical width can only under-count the true support, so this ratio
/// errs upward.
pub fn obstruction_ratio(law: &EmpiricalForestLaw) -> Result<ObstructionRatio> {
    if law.width == 0 {
        return Err(Error::WidthZero);
    }
    let w = law.width as f64;
    let lo = law.degree_ci.lo.max(0.0);
    Ok(ObstructionRatio {
        value: law.degree_mean * law.degree_mean / w,
        ci: Interval { lo: lo * lo / w, hi: law.degree_ci.hi * law.degree_ci.hi / w },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ordering {
    Greater,
    Less,
    Indistinguishable,
}

impl Ordering {
    pub fn as_str(self) -> &'static str {
        match self {
            Ordering::Greater => "greater",
            Ordering::Less => "less",
            Ordering::Indistinguishable => "indistinguishable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeComparison {
    pub difference: f64,
    pub standard_error: f64,
    /// Difference in standard errors; infinite when both laws are
    /// deterministic and differ.
    pub z: f64,
    pub ordering: Ordering,
}

/// Welch comparison of two degree means at 3σ.
pub fn compare_degrees(a: &EmpiricalForestLaw, b: &EmpiricalForestLaw) -> DegreeComparison {
    let difference = a.degree_mean - b.degree_mean;
    let se = libm::sqrt(a.degree_se() * a.degree_se() + b.degree_se() * b.degree_se());
    let z = if se > 0.0 {
        difference / se
    } else if difference == 0.0 {
        0.0
    } else {
        difference.signum() * f64::INFINITY
    };
    let ordering = if z > Z {
        Ordering::Greater
    } else if z < -Z {
        Ordering::Less
    } else {
        Ordering::Indistinguishable
    };
    DegreeComparison { difference, standard_error: se, z, ordering }
}

/// Mean vertex degree of a sample, 2|F|/|V|.
pub fn average_degree(vertex_count: usize, sample: &ForestSample) -> f64 {
    2.0 * sample.edges.len() as f64 / vertex_count as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{build_exhaustion, BallExhaustion, DEFAULT_VERTEX_CAP};
    use crate::group::GroupModel;
    use crate::samplers::{sample_ust, ForestModel, SamplerConfig};

    fn law(exh: &BallExhaustion, model: ForestModel, r: u32, w: u32, n: u64) -> EmpiricalForestLaw {
        let s = PreparedSampler::new(exh, SamplerConfig::new(model, r, w)).unwrap();
        let law = estimate_law(&s, n, 42).unwrap();
        law.check().unwrap();
        law
    }

    #[test]
    fn free_group_tree_is_deterministic() {
        let exh = build_exhaustion(&GroupModel::Free { rank: 2 }, 3, DEFAULT_VERTEX_CAP).unwrap();
        let l = law(&exh, ForestModel::UstFree, 3, 2, 50);
        assert_eq!(l.f_hat, vec![1.0; 4]);
        assert_eq!(l.degree_mean, 4.0);
        assert_eq!(l.width, 4);
        assert_eq!(l.degree_sd, 0.0);
        assert_eq!(l.degree_ci, Interval { lo: 4.0, hi: 4.0 });
        assert_eq!(obstruction_ratio(&l).unwrap().value, 4.0);
        assert_eq!(l.l2_norm(), 2.0);
        assert!(l.invariance.unwrap().consistent);
    }

    #[test]
    fn six_cycle_degree() {
        let exh = build_exhaustion(&GroupModel::Cyclic { order: 6 }, 3, DEFAULT_VERTEX_CAP).unwrap();
        let l = law(&exh, ForestModel::UstFree, 3, 1, 20_000);
        assert_eq!(l.ci_method, CiMethod::Normal);
        assert!(l.degree_ci.contains(5.0 / 3.0), "{:?}", l.degree_ci);
    }

    #[test]
    fn empty_forest_has_width_zero() {
        let exh = build_exhaustion(&GroupModel::Free { rank: 2 }, 2, DEFAULT_VERTEX_CAP).unwrap();
        let l = law(&exh, ForestModel::Empty, 2, 1, 10);
        assert_eq!(l.width, 0);
        assert_eq!(obstruction_ratio(&l), Err(Error::WidthZero));
    }

    #[test]
    fn accumulators_merge_in_any_order() {
        let exh = build_exhaustion(&GroupModel::Lattice { dim: 2 }, 3, DEFAULT_VERTEX_CAP).unwrap();
        let s = PreparedSampler::new(&exh, SamplerConfig::new(ForestModel::UstWired, 3, 2)).unwrap();
        let probe = LawProbe::new(&s).unwrap();
        let batch = |range: core::ops::Range<u64>| {
            let mut a = LawAccumulator::new(&probe);
            for i in range {
                a.observe(&probe, &s.sample(7, i).unwrap());
            }
            a
        };
        let whole = batch(0..60);
        let mut ab = batch(0..25);
        ab.merge(&batch(25..60));
        let mut ba = batch(25..60);
        ba.merge(&batch(0..25));
        assert_eq!(whole, ab);
        assert_eq!(whole, ba);
    }

    #[test]
    fn comparisons() {
        let exh = build_exhaustion(&GroupModel::Free { rank: 2 }, 2, DEFAULT_VERTEX_CAP).unwrap();
        let a = law(&exh, ForestModel::UstFree, 2, 1, 10);
        assert_eq!(compare_degrees(&a, &a).ordering, Ordering::Indistinguishable);
        let b = law(&exh, ForestModel::Empty, 2, 1, 10);
        assert_eq!(compare_degrees(&a, &b).ordering, Ordering::Greater);
        assert_eq!(compare_degrees(&b, &a).ordering, Ordering::Less);
    }

    #[test]
    fn small_samples_use_hoeffding() {
        let exh = build_exhaustion(&GroupModel::Lattice { dim: 2 }, 2, DEFAULT_VERTEX_CAP).unwrap();
        let l = law(&exh, ForestModel::UstFree, 2, 1, 100);
        assert_eq!(l.ci_method, CiMethod::Hoeffding);
        assert!(l.degree_ci.hi - l.degree_ci.lo > 1.0);
    }

    #[test]
    fn handshake_identity() {
        let g = crate::graph::SerreGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]).unwrap();
        for i in 0..10 {
            let s = sample_ust(&g, 1, i).unwrap();
            assert!((average_degree(5, &s) - 2.0 * 4.0 / 5.0).abs() < 1e-12);
        }
    }
}
