//! The plane curves `F(a,x1) + F(x2,c) - F(x1,x2) + b + d = 0`, their point
//! counts, absolute irreducibility, and the reducibility locus in parameter
//! space.

mod bivariate;

use std::sync::{Arc, OnceLock};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{extend, FieldCtx, FieldElement};
use crate::poly::{MultiPoly, SymmetricKernel};

pub use bivariate::{
    factor_bivariate, factor_bivariate_capped, is_absolutely_irreducible, is_absolutely_irreducible_capped,
    is_irreducible_bivariate, Factorization, DEFAULT_DEGREE_CAP,
};

/// Largest `q` swept exhaustively; above it the sweep must be sampled.
pub const EXHAUSTIVE_SWEEP_MAX_Q: u32 = 13;

pub const CURVE_VARS: [&str; 2] = ["x1", "x2"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveParams {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub d: FieldElement,
}

impl CurveParams {
    pub fn new(a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement) -> Self {
        CurveParams { a, b, c, d }
    }

    /// Parameters from canonical indices; `None` if any is out of range.
    pub fn from_indices(ctx: &FieldCtx, idx: [u32; 4]) -> Option<Self> {
        Some(CurveParams {
            a: ctx.element(idx[0])?,
            b: ctx.element(idx[1])?,
            c: ctx.element(idx[2])?,
            d: ctx.element(idx[3])?,
        })
    }

    /// Decodes `((a*q + b)*q + c)*q + d`.
    pub fn from_linear_index(ctx: &FieldCtx, mut k: u64) -> Self {
        let q = ctx.q() as u64;
        let mut digits = [0u32; 4];
        for slot in digits.iter_mut().rev() {
            *slot = (k % q) as u32;
            k /= q;
        }
        Self::from_indices(ctx, digits).expect("digits below q")
    }

    pub fn indices(&self) -> [u32; 4] {
        [self.a.index(), self.b.index(), self.c.index(), self.d.index()]
    }

    /// `(a, b, c, d) -> (c, d, a, b)`.
    pub fn swapped(&self) -> Self {
        CurveParams { a: self.c, b: self.d, c: self.a, d: self.b }
    }
}

#[derive(Clone, Debug)]
pub struct PlaneCurve {
    eq: MultiPoly,
    count: OnceLock<u64>,
}

impl PartialEq for PlaneCurve {
    fn eq(&self, other: &Self) -> bool {
        self.eq == other.eq
    }
}

impl PlaneCurve {
    /// Wraps an arbitrary nonzero polynomial in `x1, x2`.
    pub fn from_poly(eq: MultiPoly) -> Result<Self> {
        if eq.vars().len() != 2 {
            return Err(Error::NotBivariate(eq.vars().to_vec()));
        }
        if eq.is_zero() {
            return Err(Error::DegenerateCurve);
        }
        Ok(PlaneCurve { eq, count: OnceLock::new() })
    }

    pub fn equation(&self) -> &MultiPoly {
        &self.eq
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.eq.ctx()
    }

    pub fn degree(&self) -> i64 {
        self.eq.total_degree()
    }
}

/// `F(a, x1) + F(x2, c) - F(x1, x2) + b + d`.
pub fn build_curve(kernel: &SymmetricKernel, params: &CurveParams) -> Result<PlaneCurve> {
    let ctx = kernel.ctx();
    let f = ctx.as_ref();
    for v in [params.a, params.b, params.c, params.d] {
        if v.index() >= f.q() {
            return Err(Error::MixedFields);
        }
    }
    let mut terms = Vec::new();
    for (e, &coef) in kernel.poly().terms() {
        let (i, j) = (e[0], e[1]);
        terms.push((vec![j, 0], f.mul(coef, f.pow(params.a, i as u64))));
        terms.push((vec![0, i], f.mul(coef, f.pow(params.c, j as u64))));
        terms.push((vec![i, j], f.neg(coef)));
    }
    terms.push((vec![0, 0], f.add(params.b, params.d)));
    let eq = MultiPoly::from_terms(ctx, &CURVE_VARS, terms)?;
    PlaneCurve::from_poly(eq)
}

/// Number of points of the curve over `F_{q^m}`.
pub fn count_points(curve: &PlaneCurve, m: u32) -> Result<u64> {
    if m == 1 {
        if let Some(&n) = curve.count.get() {
            return Ok(n);
        }
        let n = bivariate::count_zeros(&curve.eq)?;
        let _ = curve.count.set(n);
        return Ok(n);
    }
    let ext = extend(curve.ctx(), m)?;
    bivariate::count_zeros(&curve.eq.lift(&ext.embedding)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct WeilReport {
    pub points: u64,
    pub q: u64,
    pub degree: i64,
    /// `(D-1)(D-2) sqrt(q) + D + 1`.
    pub bound: f64,
    pub deviation: f64,
    pub within_interval: bool,
}

pub fn weil_bound(q: u64, d: i64) -> f64 {
    ((d - 1) * (d - 2)) as f64 * (q as f64).sqrt() + d as f64 + 1.0
}

fn weil_report(points: u64, q: u64, d: i64) -> WeilReport {
    let bound = weil_bound(q, d);
    let deviation = (points as f64 - q as f64).abs();
    WeilReport { points, q, degree: d, bound, deviation, within_interval: deviation <= bound }
}

/// Compares the point count of an absolutely irreducible curve with the
/// explicit Weil interval.
pub fn weil_check(curve: &PlaneCurve) -> Result<WeilReport> {
    if !is_absolutely_irreducible(&curve.eq)? {
        return Err(Error::NotAbsolutelyIrreducible);
    }
    Ok(weil_report(count_points(curve, 1)?, curve.ctx().q() as u64, curve.degree()))
}

/// One row of a locus sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct CurveRecord {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
    pub points: u64,
    pub degree: i64,
    pub abs_irred: bool,
    /// Whether the count lies in the Weil interval; only for absolutely
    /// irreducible curves.
    pub weil_ok: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct LocusReport {
    pub field: String,
    pub kernel: String,
    pub q: u64,
    pub exhaustive: bool,
    pub seed: Option<u64>,
    pub total: u64,
    pub reducible_count: u64,
    pub fraction: f64,
    pub q_times_fraction: f64,
    pub weil_checked: u64,
    pub weil_violations: u64,
    /// Largest `|N - q| / bound` over absolutely irreducible curves.
    pub max_weil_ratio: f64,
    #[serde(skip)]
    pub records: Vec<CurveRecord>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct SweepOptions {
    /// Number of uniformly drawn distinct parameter tuples; `None` sweeps
    /// all `q^4`.
    pub sample: Option<u64>,
    pub seed: u64,
    /// Overrides [`EXHAUSTIVE_SWEEP_MAX_Q`].
    pub exhaustive_max_q: Option<u32>,
}

fn classify(kernel: &SymmetricKernel, params: CurveParams) -> Result<CurveRecord> {
    let curve = build_curve(kernel, &params)?;
    let points = count_points(&curve, 1)?;
    let degree = curve.degree();
    let abs_irred = is_absolutely_irreducible(curve.equation())?;
    let weil_ok = abs_irred.then(|| weil_report(points, curve.ctx().q() as u64, degree).within_interval);
    let [a, b, c, d] = params.indices();
    Ok(CurveRecord { a, b, c, d, points, degree, abs_irred, weil_ok })
}

/// Classifies `C_a` over all (or a seeded sample of) parameter tuples.
/// Records are returned in canonical parameter order regardless of the
/// thread schedule.
pub fn reducibility_locus_sweep(kernel: &SymmetricKernel, opts: SweepOptions) -> Result<LocusReport> {
    let ctx = kernel.ctx().clone();
    let q = ctx.q() as u64;
    let space = q.pow(4);
    let indices: Vec<u64> = match opts.sample {
        None => {
            let cap = opts.exhaustive_max_q.unwrap_or(EXHAUSTIVE_SWEEP_MAX_Q);
            if ctx.q() > cap {
                return Err(Error::SizeCapExceeded {
                    what: "exhaustive sweep q",
                    value: q as u128,
                    cap: cap as u128,
                });
            }
            (0..space).collect()
        }
        Some(n) => {
            let n = n.min(space);
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let mut v: Vec<u64> = sample(&mut rng, space as usize, n as usize).into_iter().map(|i| i as u64).collect();
            v.sort_unstable();
            v
        }
    };
    let records = indices
        .par_iter()
        .map(|&k| classify(kernel, CurveParams::from_linear_index(&ctx, k)))
        .collect::<Result<Vec<_>>>()?;

    let total = records.len() as u64;
    let reducible_count = records.iter().filter(|r| !r.abs_irred).count() as u64;
    let fraction = if total == 0 { 0.0 } else { reducible_count as f64 / total as f64 };
    let weil_checked = records.iter().filter(|r| r.weil_ok.is_some()).count() as u64;
    let weil_violations = records.iter().filter(|r| r.weil_ok == Some(false)).count() as u64;
    let max_weil_ratio = records
        .iter()
        .filter(|r| r.abs_irred)
        .map(|r| (r.points as f64 - q as f64).abs() / weil_bound(q, r.degree))
        .fold(0.0, f64::max);
    Ok(LocusReport {
        field: ctx.spec().to_string(),
        kernel: kernel.poly().to_string(),
        q,
        exhaustive: opts.sample.is_none(),
        seed: opts.sample.map(|_| opts.seed),
        total,
        reducible_count,
        fraction,
        q_times_fraction: q as f64 * fraction,
        weil_checked,
        weil_violations,
        max_weil_ratio,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn kernel(p: u64, n: u32, s: &str) -> SymmetricKernel {
        let ctx = make_field(p, n).unwrap();
        MultiPoly::parse_with_vars(&ctx, s, &["a", "x"]).unwrap().validate_kernel().unwrap()
    }

    fn params(ctx: &FieldCtx, v: [u32; 4]) -> CurveParams {
        CurveParams::from_indices(ctx, v).unwrap()
    }

    #[test]
    fn curve_equations() {
        let k = kernel(3, 1, "(a+x)^2");
        let ctx = k.ctx().clone();
        let c0 = build_curve(&k, &params(&ctx, [0, 0, 0, 0])).unwrap();
        assert_eq!(c0.equation(), &MultiPoly::parse_with_vars(&ctx, "x1*x2", &CURVE_VARS).unwrap());
        let c1 = build_curve(&k, &params(&ctx, [0, 1, 0, 0])).unwrap();
        assert_eq!(c1.equation(), &MultiPoly::parse_with_vars(&ctx, "x1*x2 + 1", &CURVE_VARS).unwrap());
        assert_eq!(count_points(&c0, 1).unwrap(), 5);
        assert_eq!(count_points(&c1, 1).unwrap(), 2);
        let w = weil_check(&c1).unwrap();
        assert_eq!((w.points, w.q, w.degree), (2, 3, 2));
        assert!(w.within_interval);
        assert_eq!(weil_check(&c0).unwrap_err(), Error::NotAbsolutelyIrreducible);
    }

    #[test]
    fn swap_symmetry() {
        let k = kernel(7, 1, "a*x + a^2*x^2 + 3*a*x^2 + 3*a^2*x");
        let ctx = k.ctx().clone();
        for v in [[1, 2, 3, 4], [0, 6, 5, 1], [6, 6, 6, 6]] {
            let p = params(&ctx, v);
            let c = build_curve(&k, &p).unwrap();
            let s = build_curve(&k, &p.swapped()).unwrap();
            assert_eq!(s.equation(), &c.equation().transpose().unwrap());
        }
    }

    #[test]
    fn extension_count_matches_lifted_curve() {
        let k = kernel(3, 1, "(a+x)^2");
        let ctx = k.ctx().clone();
        let c = build_curve(&k, &params(&ctx, [0, 1, 0, 0])).unwrap();
        // x1*x2 = -1 has one point per nonzero x1.
        assert_eq!(count_points(&c, 2).unwrap(), 8);
    }

    #[test]
    fn small_sweep_is_deterministic_and_proper() {
        let k = kernel(3, 1, "(a+x)^2");
        let r = reducibility_locus_sweep(&k, SweepOptions::default()).unwrap();
        assert_eq!(r.total, 81);
        assert!(r.reducible_count > 0 && r.reducible_count < 81);
        assert!(!r.records[0].abs_irred);
        let again = reducibility_locus_sweep(&k, SweepOptions::default()).unwrap();
        assert_eq!(r, again);
        let s1 = reducibility_locus_sweep(&k, SweepOptions { sample: Some(20), seed: 5, ..Default::default() }).unwrap();
        let s2 = reducibility_locus_sweep(&k, SweepOptions { sample: Some(20), seed: 5, ..Default::default() }).unwrap();
        assert_eq!(s1.records, s2.records);
        assert_eq!(s1.total, 20);
    }

    #[test]
    fn oversize_exhaustive_sweep_rejected() {
        let k = kernel(17, 1, "(a+x)^2");
        assert!(matches!(
            reducibility_locus_sweep(&k, SweepOptions::default()),
            Err(Error::SizeCapExceeded { .. })
        ));
        let k = kernel(5, 1, "(a+x)^2");
        let opts = SweepOptions { exhaustive_max_q: Some(3), ..Default::default() };
        assert!(matches!(reducibility_locus_sweep(&k, opts), Err(Error::SizeCapExceeded { .. })));
    }
}
