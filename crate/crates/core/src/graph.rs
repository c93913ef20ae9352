//! The graph on `F_q^2` with `(a,b) ~ (x,y)` iff `F(a,x) + b + y = 0`, its
//! spectrum, the identity between cube entries and curve point counts, and
//! the expander mixing inequality.

use std::sync::Arc;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::curves::{build_curve, count_points, CurveParams};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::linalg::symmetric_eigenvalues;
use crate::poly::{KernelTable, SymmetricKernel};

/// Largest `q` for which the adjacency lists are built.
pub const DEFAULT_GRAPH_MAX_Q: u32 = 128;
/// Largest `q` for which the dense `q^2 x q^2` eigensolver runs.
pub const DEFAULT_DENSE_MAX_Q: u32 = 64;
pub const DEFAULT_POWER_TOL: f64 = 1e-8;
pub const DEFAULT_POWER_MAX_ITER: usize = 100_000;

#[derive(Clone, Debug)]
pub struct IncidenceGraph {
    kernel: SymmetricKernel,
    table: KernelTable,
    q: usize,
    /// `neighbors[v*q .. (v+1)*q]`, ascending.
    neighbors: Vec<u32>,
}

impl IncidenceGraph {
    pub fn build(kernel: &SymmetricKernel) -> Result<Self> {
        Self::build_capped(kernel, DEFAULT_GRAPH_MAX_Q)
    }

    pub fn build_capped(kernel: &SymmetricKernel, max_q: u32) -> Result<Self> {
        let ctx = kernel.ctx().clone();
        if ctx.q() > max_q {
            return Err(Error::SizeCapExceeded { what: "graph q", value: ctx.q() as u128, cap: max_q as u128 });
        }
        let q = ctx.q() as usize;
        let table = kernel.table();
        let mut neighbors = Vec::with_capacity(q * q * q);
        for a in ctx.enumerate() {
            for b in ctx.enumerate() {
                for x in ctx.enumerate() {
                    let y = ctx.sub(ctx.neg(table.get(a, x)), b);
                    neighbors.push((x.index() as usize * q + y.index() as usize) as u32);
                }
            }
        }
        let g = IncidenceGraph { kernel: kernel.clone(), table, q, neighbors };
        g.validate()?;
        Ok(g)
    }

    /// Checks regularity (distinct neighbors, `q` per vertex) and symmetry.
    pub fn validate(&self) -> Result<()> {
        let q = self.q;
        for v in 0..self.num_vertices() {
            let nb = self.neighbors(v);
            if nb.len() != q || nb.windows(2).any(|w| w[0] >= w[1]) {
                let distinct = {
                    let mut s = nb.to_vec();
                    s.sort_unstable();
                    s.dedup();
                    s.len()
                };
                return Err(Error::RegularityViolation { vertex: v, degree: distinct, expected: q });
            }
            for &w in nb {
                if !self.neighbors(w as usize).binary_search(&(v as u32)).is_ok() {
                    return Err(Error::SymmetryViolation(v, w as usize));
                }
            }
        }
        Ok(())
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.kernel.ctx()
    }

    pub fn kernel(&self) -> &SymmetricKernel {
        &self.kernel
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn num_vertices(&self) -> usize {
        self.q * self.q
    }

    pub fn vertex(&self, a: FieldElement, b: FieldElement) -> usize {
        a.index() as usize * self.q + b.index() as usize
    }

    pub fn coords(&self, v: usize) -> (FieldElement, FieldElement) {
        let ctx = self.ctx();
        (ctx.element((v / self.q) as u32).unwrap(), ctx.element((v % self.q) as u32).unwrap())
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neighbors[v * self.q..(v + 1) * self.q]
    }

    /// Adjacency by the defining equation, independent of the stored lists.
    pub fn adjacent(&self, v: usize, w: usize) -> bool {
        let ctx = self.ctx();
        let (a, b) = self.coords(v);
        let (x, y) = self.coords(w);
        ctx.add(ctx.add(self.table.get(a, x), b), y).is_zero()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).len()
    }

    pub fn num_loops(&self) -> usize {
        (0..self.num_vertices()).filter(|&v| self.neighbors(v).binary_search(&(v as u32)).is_ok()).count()
    }

    /// `(A^3)_{v,w}`: walks of length three, the last step tested by the
    /// defining equation.
    pub fn cube_entry(&self, v: usize, w: usize) -> u64 {
        let mut n = 0u64;
        for &u1 in self.neighbors(v) {
            for &u2 in self.neighbors(u1 as usize) {
                n += self.adjacent(u2 as usize, w) as u64;
            }
        }
        n
    }

    /// `A x`.
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (v, o) in out.iter_mut().enumerate() {
            *o = self.neighbors(v).iter().map(|&w| x[w as usize]).sum();
        }
    }

    /// `A u` for the all-ones vector, in exact integer arithmetic.
    pub fn row_sums(&self) -> Vec<u64> {
        (0..self.num_vertices()).map(|v| self.neighbors(v).len() as u64).collect()
    }

    pub fn dense_adjacency(&self) -> Vec<f64> {
        let n = self.num_vertices();
        let mut a = vec![0.0; n * n];
        for v in 0..n {
            for &w in self.neighbors(v) {
                a[v * n + w as usize] = 1.0;
            }
        }
        a
    }

    /// Corrupts one adjacency entry without revalidating, to exercise the
    /// downstream audits.
    #[doc(hidden)]
    pub fn inject_fault(&mut self) {
        let q = self.q as u32;
        let n = self.num_vertices() as u32;
        self.neighbors[0] = (self.neighbors[0] + q) % n;
    }
}

pub fn build_graph(kernel: &SymmetricKernel) -> Result<IncidenceGraph> {
    IncidenceGraph::build(kernel)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "lowercase")]
pub enum SpectralMethod {
    Exact,
    Iterative,
}

impl std::str::FromStr for SpectralMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(SpectralMethod::Exact),
            "iter" | "iterative" => Ok(SpectralMethod::Iterative),
            other => Err(Error::InvalidArgument(format!("unknown spectral method `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralOptions {
    pub dense_max_q: u32,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions {
            dense_max_q: DEFAULT_DENSE_MAX_Q,
            tol: DEFAULT_POWER_TOL,
            max_iter: DEFAULT_POWER_MAX_ITER,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct SpectralReport {
    pub q: u64,
    pub kernel: String,
    pub lambda1: f64,
    pub lambda2_abs: f64,
    /// `|lambda2| / q^(5/6)`.
    pub ratio_q56: f64,
    pub method: SpectralMethod,
    pub residual: Option<f64>,
    pub iterations: Option<usize>,
}

/// Every eigenvalue of the adjacency matrix, ascending.
pub fn exact_eigenvalues(g: &IncidenceGraph, dense_max_q: u32) -> Result<Vec<f64>> {
    if g.q as u32 > dense_max_q {
        return Err(Error::SizeCapExceeded { what: "dense spectrum q", value: g.q as u128, cap: dense_max_q as u128 });
    }
    symmetric_eigenvalues(g.dense_adjacency(), g.num_vertices())
}

pub fn spectrum(g: &IncidenceGraph, method: SpectralMethod, opts: &SpectralOptions) -> Result<SpectralReport> {
    let q = g.q as u64;
    let base = |lambda1: f64, lambda2_abs: f64| SpectralReport {
        q,
        kernel: g.kernel.poly().to_string(),
        lambda1,
        lambda2_abs,
        ratio_q56: lambda2_abs / (q as f64).powf(5.0 / 6.0),
        method,
        residual: None,
        iterations: None,
    };
    match method {
        SpectralMethod::Exact => {
            let ev = exact_eigenvalues(g, opts.dense_max_q)?;
            let (&lambda1, rest) = ev.split_last().expect("nonempty spectrum");
            let lambda2_abs = rest.iter().map(|x| x.abs()).fold(0.0, f64::max);
            Ok(base(lambda1, lambda2_abs))
        }
        SpectralMethod::Iterative => {
            let n = g.num_vertices();
            let ones = vec![1.0; n];
            let mut au = vec![0.0; n];
            g.apply(&ones, &mut au);
            let lambda1 = au.iter().sum::<f64>() / n as f64;
            let it = second_eigenvalue_power(g, opts)?;
            let mut r = base(lambda1, it.lambda2_abs);
            r.residual = Some(it.residual);
            r.iterations = Some(it.iterations);
            Ok(r)
        }
    }
}

struct PowerResult {
    lambda2_abs: f64,
    residual: f64,
    iterations: usize,
}

fn deflate_and_normalize(x: &mut [f64]) -> f64 {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|v| *v -= mean);
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
    norm
}

/// Power iteration with `A^2` on the complement of the all-ones vector.
/// The dominant eigenvalue there is `lambda2^2`, whichever sign `lambda2`
/// has.
fn second_eigenvalue_power(g: &IncidenceGraph, opts: &SpectralOptions) -> Result<PowerResult> {
    let n = g.num_vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    deflate_and_normalize(&mut x);
    let mut ax = vec![0.0; n];
    let mut aax = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for iter in 1..=opts.max_iter {
        g.apply(&x, &mut ax);
        g.apply(&ax, &mut aax);
        let mean = aax.iter().sum::<f64>() / n as f64;
        aax.iter_mut().for_each(|v| *v -= mean);
        let rho: f64 = ax.iter().map(|v| v * v).sum::<f64>();
        if rho == 0.0 {
            return Ok(PowerResult { lambda2_abs: 0.0, residual: 0.0, iterations: iter });
        }
        residual = aax.iter().zip(&x).map(|(b, a)| (b - rho * a).powi(2)).sum::<f64>().sqrt() / rho;
        if residual <= opts.tol {
            return Ok(PowerResult { lambda2_abs: rho.sqrt(), residual, iterations: iter });
        }
        std::mem::swap(&mut x, &mut aax);
        deflate_and_normalize(&mut x);
    }
    Err(Error::ConvergenceFailure { residual, iterations: opts.max_iter })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct CubeMismatch {
    pub params: [u32; 4],
    pub paths: u64,
    pub points: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct CubeAuditReport {
    pub q: u64,
    pub kernel: String,
    pub exhaustive: bool,
    pub checked: u64,
    pub mismatches: u64,
    /// The first few mismatching parameter tuples.
    pub examples: Vec<CubeMismatch>,
}

/// Compares `(A^3)_{(a,b),(c,d)}` with the number of points on `C_{(a,b,c,d)}`
/// for every parameter tuple, or for `sample` distinct tuples drawn with
/// `seed`.
pub fn cube_identity_audit(g: &IncidenceGraph, sample_size: Option<u64>, seed: u64) -> Result<CubeAuditReport> {
    let ctx = g.ctx().clone();
    let q = g.q as u64;
    let space = q.pow(4);
    let indices: Vec<u64> = match sample_size {
        None => (0..space).collect(),
        Some(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut v: Vec<u64> =
                sample(&mut rng, space as usize, k.min(space) as usize).into_iter().map(|i| i as u64).collect();
            v.sort_unstable();
            v
        }
    };
    let results = indices
        .par_iter()
        .map(|&k| {
            let p = CurveParams::from_linear_index(&ctx, k);
            let v = g.vertex(p.a, p.b);
            let w = g.vertex(p.c, p.d);
            let paths = g.cube_entry(v, w);
            let points = count_points(&build_curve(&g.kernel, &p)?, 1)?;
            Ok((p.indices(), paths, points))
        })
        .collect::<Result<Vec<_>>>()?;
    let bad: Vec<CubeMismatch> = results
        .iter()
        .filter(|(_, a, b)| a != b)
        .map(|&(params, paths, points)| CubeMismatch { params, paths, points })
        .collect();
    Ok(CubeAuditReport {
        q,
        kernel: g.kernel.poly().to_string(),
        exhaustive: sample_size.is_none(),
        checked: results.len() as u64,
        mismatches: bad.len() as u64,
        examples: bad.into_iter().take(10).collect(),
    })
}

/// Ordered adjacent pairs `(u, v)` in `S x T`; a loop at `v` counts once when
/// `v` lies in both sets.
pub fn edge_count(g: &IncidenceGraph, s: &[usize], t: &[usize]) -> u64 {
    let mut in_t = vec![false; g.num_vertices()];
    for &v in t {
        in_t[v] = true;
    }
    s.iter().map(|&u| g.neighbors(u).iter().filter(|&&w| in_t[w as usize]).count() as u64).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct MixingViolation {
    pub trial: u64,
    pub s_size: usize,
    pub t_size: usize,
    pub edges: u64,
    pub deviation: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct MixingReport {
    pub q: u64,
    pub lambda2_abs: f64,
    pub trials: u64,
    pub violations: u64,
    /// Largest `deviation / bound` over trials with a positive bound.
    pub max_ratio: f64,
    pub examples: Vec<MixingViolation>,
}

pub const MIXING_SLACK: f64 = 1e-6;

/// Checks `|e(S,T) - |S||T|/q| <= lambda2 sqrt(|S||T|) + 1e-6` on random
/// vertex sets of varied sizes. Trial `k` draws from its own seeded stream.
pub fn mixing_check(g: &IncidenceGraph, lambda2_abs: f64, trials: u64, seed: u64) -> MixingReport {
    let n = g.num_vertices();
    let q = g.q as f64;
    let outcomes: Vec<(f64, f64, MixingViolation)> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ k.wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let ss = rng.gen_range(0..=n);
            let ts = rng.gen_range(0..=n);
            let s = sample(&mut rng, n, ss).into_vec();
            let t = sample(&mut rng, n, ts).into_vec();
            let edges = edge_count(g, &s, &t);
            let deviation = (edges as f64 - ss as f64 * ts as f64 / q).abs();
            let bound = lambda2_abs * ((ss * ts) as f64).sqrt();
            (deviation, bound, MixingViolation { trial: k, s_size: ss, t_size: ts, edges, deviation, bound })
        })
        .collect();
    let violations: Vec<MixingViolation> = outcomes
        .iter()
        .filter(|(d, b, _)| *d > *b + MIXING_SLACK)
        .map(|(_, _, v)| v.clone())
        .collect();
    let max_ratio = outcomes.iter().filter(|(_, b, _)| *b > 0.0).map(|(d, b, _)| d / b).fold(0.0, f64::max);
    MixingReport {
        q: g.q as u64,
        lambda2_abs,
        trials,
        violations: violations.len() as u64,
        max_ratio,
        examples: violations.into_iter().take(10).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct TraceReport {
    pub loops: u64,
    pub sum_eigenvalues: f64,
    pub sum_squares: f64,
    /// `q^3`: the trace of `A^2` for a `q`-regular 0/1 matrix.
    pub expected_sum_squares: u64,
}

impl TraceReport {
    pub fn holds(&self, tol: f64) -> bool {
        (self.sum_eigenvalues - self.loops as f64).abs() <= tol
            && (self.sum_squares - self.expected_sum_squares as f64).abs() <= tol
    }
}

/// Trace identities for the exact spectrum: the eigenvalue sum equals the
/// number of loops and the sum of squares equals `q^3`.
pub fn trace_identities(g: &IncidenceGraph, eigenvalues: &[f64]) -> TraceReport {
    let ctx = g.ctx();
    let two = ctx.from_int(2);
    let mut loops = 0u64;
    for a in ctx.enumerate() {
        for b in ctx.enumerate() {
            loops += ctx.add(g.table.get(a, a), ctx.mul(two, b)).is_zero() as u64;
        }
    }
    TraceReport {
        loops,
        sum_eigenvalues: eigenvalues.iter().sum(),
        sum_squares: eigenvalues.iter().map(|x| x * x).sum(),
        expected_sum_squares: (g.q as u64).pow(3),
    }
}
