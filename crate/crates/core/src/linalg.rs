//! Grounded graph Laplacians: dense Cholesky, preconditioned conjugate
//! gradients for large graphs, and exact rational / integer elimination.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::SerreGraph;

/// Above this many vertices the solver switches from dense Cholesky to CG.
pub const DENSE_LIMIT: usize = 3000;

/// Condition estimate above which solutions carry a warning.
pub const CONDITION_WARNING: f64 = 1e12;

const CG_TOLERANCE: f64 = 1e-13;

#[derive(Debug, Clone)]
enum Factor {
    /// Row-major lower-triangular Cholesky factor of the reduced Laplacian.
    Dense { l: Vec<f64>, m: usize },
    /// Reduced Laplacian in adjacency form for CG.
    Sparse { diag: Vec<f64>, off: Vec<Vec<(usize, f64)>> },
}

/// Weighted Laplacian `L = D − A` grounded at vertex 0 (potential 0 there).
#[derive(Debug, Clone)]
pub struct GroundedLaplacian {
    n: usize,
    factor: Factor,
    condition: f64,
    adjacency: Vec<Vec<(usize, f64)>>,
}

#[derive(Debug, Clone)]
pub struct Potentials {
    pub values: Vec<f64>,
    /// ‖Lφ − demand‖₂.
    pub residual: f64,
    /// Set when the condition estimate exceeds [`CONDITION_WARNING`].
    pub ill_conditioned: bool,
}

impl GroundedLaplacian {
    pub fn new(graph: &SerreGraph) -> Result<Self> {
        let n = graph.vertex_count();
        if n == 0 {
            return Err(Error::validation("empty graph"));
        }
        let components = graph.components();
        if components.len() > 1 {
            return Err(Error::Disconnected { components });
        }
        let mut adjacency = vec![Vec::new(); n];
        for (i, &(u, v)) in graph.edges().iter().enumerate() {
            let c = graph.conductance(i) as f64;
            adjacency[u].push((v, c));
            adjacency[v].push((u, c));
        }
        let m = n - 1;
        let diag: Vec<f64> = (1..n).map(|v| adjacency[v].iter().map(|&(_, c)| c).sum()).collect();
        let (factor, condition) = if m <= DENSE_LIMIT {
            let mut a = vec![0.0; m * m];
            for v in 1..n {
                a[(v - 1) * m + (v - 1)] = diag[v - 1];
                for &(w, c) in &adjacency[v] {
                    if w > 0 {
                        a[(v - 1) * m + (w - 1)] -= c;
                    }
                }
            }
            let l = cholesky(a, m)?;
            let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
            for i in 0..m {
                let d = l[i * m + i];
                lo = lo.min(d);
                hi = hi.max(d);
            }
            let cond = if m == 0 { 1.0 } else { (hi / lo) * (hi / lo) };
            (Factor::Dense { l, m }, cond)
        } else {
            let off = (1..n)
                .map(|v| adjacency[v].iter().filter(|&&(w, _)| w > 0).map(|&(w, c)| (w - 1, c)).collect())
                .collect();
            let (lo, hi) = diag.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &d| (lo.min(d), hi.max(d)));
            // crude lower bound for a grounded Laplacian: smallest eigenvalue ≳ 1/(n · diameter-ish)
            (Factor::Sparse { diag, off }, (hi / lo) * (n as f64) * (n as f64))
        };
        Ok(GroundedLaplacian { n, factor, condition, adjacency })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn condition_estimate(&self) -> f64 {
        self.condition
    }

    /// Solves `Lφ = demand` with `φ(0) = 0`. The demand must sum to zero.
    pub fn solve(&self, demand: &[f64]) -> Result<Potentials> {
        if demand.len() != self.n {
            return Err(Error::validation("demand length does not match the vertex count"));
        }
        let total: f64 = demand.iter().sum();
        let scale: f64 = demand.iter().map(|x| libm::fabs(*x)).sum::<f64>().max(1.0);
        if libm::fabs(total) > 1e-12 * scale {
            return Err(Error::validation(alloc::format!("demand is not balanced (sum {total:e})")));
        }
        let rhs = &demand[1..];
        let reduced = match &self.factor {
            Factor::Dense { l, m } => cholesky_solve(l, *m, rhs),
            Factor::Sparse { diag, off } => conjugate_gradient(diag, off, rhs)?,
        };
        let mut values = Vec::with_capacity(self.n);
        values.push(0.0);
        values.extend(reduced);
        let residual = self.residual(&values, demand);
        let norm = libm::sqrt(demand.iter().map(|x| x * x).sum::<f64>());
        if residual > 1e-9 * norm.max(1e-300) && norm > 0.0 {
            return Err(Error::Numerical { what: "Laplacian solve residual above tolerance".into(), residual });
        }
        Ok(Potentials { values, residual, ill_conditioned: self.condition > CONDITION_WARNING })
    }

    /// ‖Lφ − b‖₂ using the full (ungrounded) Laplacian.
    pub fn residual(&self, phi: &[f64], b: &[f64]) -> f64 {
        let mut acc = 0.0;
        for v in 0..self.n {
            let mut lv = 0.0;
            for &(w, c) in &self.adjacency[v] {
                lv += c * (phi[v] - phi[w]);
            }
            let r = lv - b[v];
            acc += r * r;
        }
        libm::sqrt(acc)
    }

    /// Effective resistance between `u` and `v`.
    pub fn effective_resistance(&self, u: usize, v: usize) -> Result<f64> {
        if u == v {
            return Ok(0.0);
        }
        let mut b = vec![0.0; self.n];
        b[u] = 1.0;
        b[v] = -1.0;
        let p = self.solve(&b)?;
        Ok(p.values[u] - p.values[v])
    }
}

fn cholesky(mut a: Vec<f64>, m: usize) -> Result<Vec<f64>> {
    for j in 0..m {
        let mut d = a[j * m + j];
        for k in 0..j {
            d -= a[j * m + k] * a[j * m + k];
        }
        if d <= 0.0 {
            return Err(Error::Numerical { what: "reduced Laplacian is not positive definite".into(), residual: d });
        }
        let d = libm::sqrt(d);
        a[j * m + j] = d;
        for i in j + 1..m {
            let mut s = a[i * m + j];
            let (ri, rj) = (i * m, j * m);
            for k in 0..j {
                s -= a[ri + k] * a[rj + k];
            }
            a[ri + j] = s / d;
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            a[i * m + j] = 0.0;
        }
    }
    Ok(a)
}

fn cholesky_solve(l: &[f64], m: usize, b: &[f64]) -> Vec<f64> {
    let mut y = b.to_vec();
    for i in 0..m {
        let mut s = y[i];
        for k in 0..i {
            s -= l[i * m + k] * y[k];
        }
        y[i] = s / l[i * m + i];
    }
    for i in (0..m).rev() {
        let mut s = y[i];
        for k in i + 1..m {
            s -= l[k * m + i] * y[k];
        }
        y[i] = s / l[i * m + i];
    }
    y
}

fn conjugate_gradient(diag: &[f64], off: &[Vec<(usize, f64)>], b: &[f64]) -> Result<Vec<f64>> {
    let m = diag.len();
    let apply = |x: &[f64], out: &mut [f64]| {
        for i in 0..m {
            let mut s = diag[i] * x[i];
            for &(j, c) in &off[i] {
                s -= c * x[j];
            }
            out[i] = s;
        }
    };
    let bnorm = libm::sqrt(b.iter().map(|x| x * x).sum::<f64>());
    let mut x = vec![0.0; m];
    if bnorm == 0.0 {
        return Ok(x);
    }
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(diag).map(|(r, d)| r / d).collect();
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let mut ap = vec![0.0; m];
    for _ in 0..(20 * m).max(1000) {
        apply(&p, &mut ap);
        let alpha = rz / p.iter().zip(&ap).map(|(a, b)| a * b).sum::<f64>();
        for i in 0..m {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rnorm = libm::sqrt(r.iter().map(|x| x * x).sum::<f64>());
        if rnorm <= CG_TOLERANCE * bnorm {
            return Ok(x);
        }
        for i in 0..m {
            z[i] = r[i] / diag[i];
        }
        let rz_next: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..m {
            p[i] = z[i] + beta * p[i];
        }
    }
    let residual = libm::sqrt(r.iter().map(|x| x * x).sum::<f64>());
    Err(Error::Numerical { what: "conjugate gradients did not converge".into(), residual })
}

/// Integer reduced Laplacian (row/column 0 removed).
pub fn reduced_laplacian_int(graph: &SerreGraph) -> Vec<Vec<BigInt>> {
    let n = graph.vertex_count();
    let m = n.saturating_sub(1);
    let mut a = vec![vec![BigInt::zero(); m]; m];
    for (i, &(u, v)) in graph.edges().iter().enumerate() {
        let c = BigInt::from(graph.conductance(i));
        for (x, y) in [(u, v), (v, u)] {
            if x > 0 {
                a[x - 1][x - 1] += &c;
                if y > 0 {
                    a[x - 1][y - 1] -= &c;
                }
            }
        }
    }
    a
}

/// Determinant by Bareiss fraction-free elimination.
pub fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let m = a.len();
    if m == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..m - 1 {
        if a[k][k].is_zero() {
            match (k + 1..m).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..m {
            for j in k + 1..m {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[m - 1][m - 1].clone()
}

/// Exact solve of `Lφ = demand` with `φ(0) = 0` by rational Gaussian elimination.
pub fn solve_exact(graph: &SerreGraph, demand: &[BigRational]) -> Result<Vec<BigRational>> {
    let n = graph.vertex_count();
    if demand.len() != n {
        return Err(Error::validation("demand length does not match the vertex count"));
    }
    let total = demand.iter().fold(BigRational::zero(), |acc, x| acc + x);
    if !total.is_zero() {
        return Err(Error::validation("demand is not balanced"));
    }
    let components = graph.components();
    if components.len() > 1 {
        return Err(Error::Disconnected { components });
    }
    let m = n - 1;
    let int = reduced_laplacian_int(graph);
    let mut a: Vec<Vec<BigRational>> =
        int.into_iter().map(|row| row.into_iter().map(BigRational::from_integer).collect()).collect();
    let mut b: Vec<BigRational> = demand[1..].to_vec();
    for k in 0..m {
        let p = (k..m).find(|&i| !a[i][k].is_zero()).ok_or_else(|| Error::consistency("singular reduced Laplacian"))?;
        a.swap(p, k);
        b.swap(p, k);
        for i in k + 1..m {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &a[k][k];
            for j in k..m {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
            let t = &f * &b[k];
            b[i] -= t;
        }
    }
    let mut x = vec![BigRational::zero(); m];
    for i in (0..m).rev() {
        let mut s = b[i].clone();
        for j in i + 1..m {
            s -= &a[i][j] * &x[j];
        }
        x[i] = s / &a[i][i];
    }
    let mut out = Vec::with_capacity(n);
    out.push(BigRational::zero());
    out.extend(x);
    Ok(out)
}
