//! Incidences between point sets in `F_q^2` and families of curves that are
//! graphs of functions `y = g(x)`: lines, polynomial graphs of bounded degree
//! and kernel curves `F(a,x) + b + y = 0`.

use std::collections::HashSet;
use std::sync::Arc;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{make_field_from_spec, FieldCtx, FieldElement, FieldSpec};
use crate::graph::{build_graph, spectrum, SpectralMethod, SpectralOptions, MIXING_SLACK};
use crate::poly::SymmetricKernel;
use crate::seed::cell_seed;

pub type Point = (FieldElement, FieldElement);

fn el(ctx: &FieldCtx, i: usize) -> FieldElement {
    ctx.element(i as u32).expect("index below q")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    ctx: Arc<FieldCtx>,
    points: Vec<Point>,
}

impl PointSet {
    /// Sorts and deduplicates.
    pub fn new(ctx: &Arc<FieldCtx>, points: impl IntoIterator<Item = Point>) -> PointSet {
        let mut points: Vec<Point> = points.into_iter().collect();
        points.sort_unstable();
        points.dedup();
        PointSet { ctx: ctx.clone(), points }
    }

    pub fn all(ctx: &Arc<FieldCtx>) -> PointSet {
        Self::new(ctx, ctx.enumerate().flat_map(|x| ctx.enumerate().map(move |y| (x, y))))
    }

    /// Points with row-major indices `q*idx(x) + idx(y)`.
    pub fn from_indices(ctx: &Arc<FieldCtx>, indices: impl IntoIterator<Item = usize>) -> PointSet {
        let q = ctx.q() as usize;
        Self::new(ctx, indices.into_iter().map(|i| (el(ctx, i / q), el(ctx, i % q))))
    }

    pub fn random(ctx: &Arc<FieldCtx>, size: usize, rng: &mut ChaCha8Rng) -> PointSet {
        let q = ctx.q() as usize;
        Self::from_indices(ctx, sample(rng, q * q, size.min(q * q)).into_iter())
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }
    pub fn points(&self) -> &[Point] {
        &self.points
    }
    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
    pub fn contains(&self, p: &Point) -> bool {
        self.points.binary_search(p).is_ok()
    }

    fn mask(&self) -> Vec<bool> {
        let q = self.ctx.q() as usize;
        let mut m = vec![false; q * q];
        for (x, y) in &self.points {
            m[x.index() as usize * q + y.index() as usize] = true;
        }
        m
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveFamilySpec {
    /// `y = slope*x + intercept`.
    Line { slope: FieldElement, intercept: FieldElement },
    /// `y = a_n x^n + ... + a_0`, coefficients from `a_n` down to `a_0`.
    PolyGraph { coeffs: Vec<FieldElement> },
    /// `F(a,x) + b + y = 0`.
    KernelCurve { kernel: Arc<SymmetricKernel>, a: FieldElement, b: FieldElement },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Line,
    PolyGraph,
    KernelCurve,
}

impl CurveFamilySpec {
    pub fn kind(&self) -> FamilyKind {
        match self {
            CurveFamilySpec::Line { .. } => FamilyKind::Line,
            CurveFamilySpec::PolyGraph { .. } => FamilyKind::PolyGraph,
            CurveFamilySpec::KernelCurve { .. } => FamilyKind::KernelCurve,
        }
    }

    /// The unique `y` on the curve above `x`.
    pub fn y_at(&self, ctx: &FieldCtx, x: FieldElement) -> FieldElement {
        match self {
            CurveFamilySpec::Line { slope, intercept } => ctx.add(ctx.mul(*slope, x), *intercept),
            CurveFamilySpec::PolyGraph { coeffs } => {
                coeffs.iter().fold(FieldElement::ZERO, |acc, &c| ctx.add(ctx.mul(acc, x), c))
            }
            CurveFamilySpec::KernelCurve { kernel, a, b } => ctx.sub(ctx.neg(kernel.eval(*a, x)), *b),
        }
    }
}

/// Whether `point` lies on `curve`.
pub fn member(ctx: &FieldCtx, curve: &CurveFamilySpec, point: Point) -> bool {
    let (x, y) = point;
    match curve {
        CurveFamilySpec::KernelCurve { kernel, a, b } => ctx.add(ctx.add(kernel.eval(*a, x), *b), y).is_zero(),
        _ => curve.y_at(ctx, x) == y,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSet {
    ctx: Arc<FieldCtx>,
    members: Vec<CurveFamilySpec>,
}

impl CurveSet {
    /// Members must share one variant; polynomial graphs share one degree
    /// bound `n < q`, kernel curves share one kernel over `ctx`.
    pub fn new(ctx: &Arc<FieldCtx>, members: Vec<CurveFamilySpec>) -> Result<CurveSet> {
        if let Some(first) = members.first() {
            for m in &members {
                if m.kind() != first.kind() {
                    return Err(Error::InvalidArgument("curve set mixes families".into()));
                }
                match (m, first) {
                    (CurveFamilySpec::PolyGraph { coeffs }, CurveFamilySpec::PolyGraph { coeffs: c0 }) => {
                        if coeffs.len() != c0.len() || coeffs.is_empty() {
                            return Err(Error::InvalidArgument("polynomial graphs of different degree bounds".into()));
                        }
                        if coeffs.len() - 1 >= ctx.q() as usize {
                            return Err(Error::InvalidArgument(format!(
                                "polynomial graphs of degree {} need q > {0}",
                                coeffs.len() - 1
                            )));
                        }
                    }
                    (CurveFamilySpec::KernelCurve { kernel, .. }, CurveFamilySpec::KernelCurve { kernel: k0, .. }) => {
                        if kernel.ctx().as_ref() != ctx.as_ref() {
                            return Err(Error::MixedFields);
                        }
                        if kernel != k0 {
                            return Err(Error::InvalidArgument("kernel curves from different kernels".into()));
                        }
                    }
                    _ => {}
                }
            }
        }
        Ok(CurveSet { ctx: ctx.clone(), members })
    }

    pub fn all_lines(ctx: &Arc<FieldCtx>) -> CurveSet {
        let members = ctx
            .enumerate()
            .flat_map(|s| ctx.enumerate().map(move |t| CurveFamilySpec::Line { slope: s, intercept: t }))
            .collect();
        CurveSet { ctx: ctx.clone(), members }
    }

    pub fn all_kernel_curves(kernel: &Arc<SymmetricKernel>) -> CurveSet {
        let ctx = kernel.ctx().clone();
        let members = ctx
            .enumerate()
            .flat_map(|a| {
                ctx.enumerate().map(move |b| CurveFamilySpec::KernelCurve { kernel: kernel.clone(), a, b })
            })
            .collect();
        CurveSet { ctx, members }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }
    pub fn members(&self) -> &[CurveFamilySpec] {
        &self.members
    }
    pub fn len(&self) -> usize {
        self.members.len()
    }
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn kind(&self) -> Option<FamilyKind> {
        self.members.first().map(CurveFamilySpec::kind)
    }

    /// The `(a, b)` parameters of kernel curves as graph vertices.
    pub fn kernel_vertices(&self) -> Vec<usize> {
        let q = self.ctx.q() as usize;
        self.members
            .iter()
            .filter_map(|m| match m {
                CurveFamilySpec::KernelCurve { a, b, .. } => Some(a.index() as usize * q + b.index() as usize),
                _ => None,
            })
            .collect()
    }

    fn point_sets(&self) -> Vec<Vec<u32>> {
        let ctx = &self.ctx;
        let table = match self.members.first() {
            Some(CurveFamilySpec::KernelCurve { kernel, .. }) => Some(kernel.table()),
            _ => None,
        };
        self.members
            .iter()
            .map(|m| {
                ctx.enumerate()
                    .map(|x| match (m, &table) {
                        (CurveFamilySpec::KernelCurve { a, b, .. }, Some(t)) => ctx.sub(ctx.neg(t.get(*a, x)), *b),
                        _ => m.y_at(ctx, x),
                    })
                    .map(|y| y.index())
                    .collect()
            })
            .collect()
    }

    /// `q^e` with `e` the exponent in the error term for this family.
    pub fn error_exponent(&self) -> f64 {
        match self.members.first() {
            Some(CurveFamilySpec::Line { .. }) | None => 0.5,
            Some(CurveFamilySpec::PolyGraph { coeffs }) => (coeffs.len() - 1) as f64 / 2.0,
            Some(CurveFamilySpec::KernelCurve { .. }) => 5.0 / 6.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct IncidenceReport {
    pub q: u64,
    pub family: Option<FamilyKind>,
    pub points: usize,
    pub curves: usize,
    pub incidences: u64,
    /// `|P||Q| / q` as numerator over `q`.
    pub main_numerator: u128,
    pub main: f64,
    pub deviation: f64,
    pub error_scale: f64,
    pub ratio: f64,
    /// Curves whose point set repeats an earlier member's.
    pub point_set_collisions: usize,
}

pub fn incidences(p: &PointSet, curves: &CurveSet) -> Result<IncidenceReport> {
    if p.ctx.as_ref() != curves.ctx.as_ref() {
        return Err(Error::MixedFields);
    }
    let q = p.ctx.q() as usize;
    let mask = p.mask();
    let sets = curves.point_sets();
    let incidences: u64 = sets
        .iter()
        .map(|ys| ys.iter().enumerate().filter(|&(x, &y)| mask[x * q + y as usize]).count() as u64)
        .sum();
    let mut seen = HashSet::new();
    let point_set_collisions = sets.iter().filter(|ys| !seen.insert(ys.as_slice())).count();

    let main_numerator = p.len() as u128 * curves.len() as u128;
    let main = main_numerator as f64 / q as f64;
    let deviation = if main_numerator % q as u128 == 0 {
        (incidences as i128 - (main_numerator / q as u128) as i128).unsigned_abs() as f64
    } else {
        (incidences as f64 - main).abs()
    };
    let error_scale = (q as f64).powf(curves.error_exponent()) * (main_numerator as f64).sqrt();
    let ratio = if error_scale > 0.0 { deviation / error_scale } else { 0.0 };
    Ok(IncidenceReport {
        q: q as u64,
        family: curves.kind(),
        points: p.len(),
        curves: curves.len(),
        incidences,
        main_numerator,
        main,
        deviation,
        error_scale,
        ratio,
        point_set_collisions,
    })
}

/// The family swept by [`theorem_sweep`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum SweepFamily {
    Lines,
    PolyGraphs { n: u32 },
    Kernel { expr: String },
}

impl SweepFamily {
    /// Whether the bound is a theorem with constant exactly 1.
    pub fn has_unit_constant(&self) -> bool {
        !matches!(self, SweepFamily::Kernel { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct IncidenceRow {
    pub field: String,
    pub trial: u64,
    pub seed: u64,
    #[serde(flatten)]
    pub report: IncidenceReport,
    /// `lambda2 sqrt(|P||Q|)` for kernel curves.
    pub mixing_bound: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct IncidenceSummary {
    pub field: String,
    pub q: u64,
    pub instances: u64,
    pub max_ratio: f64,
    pub lambda2_abs: Option<f64>,
    /// Instances with ratio above `1 + 1e-9` when the constant is known to be 1.
    pub bound_violations: u64,
    pub mixing_violations: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct SkippedField {
    pub field: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct IncidenceSweep {
    pub family: SweepFamily,
    pub seed: u64,
    pub rows: Vec<IncidenceRow>,
    pub summary: Vec<IncidenceSummary>,
    pub skipped: Vec<SkippedField>,
}

pub const UNIT_CONSTANT_SLACK: f64 = 1e-9;

/// `{q, q^(3/2), q^2/4}`, clamped to `[1, q^2]` and deduplicated.
pub fn default_sizes(q: u64) -> Vec<usize> {
    let mut v: Vec<usize> = [q as f64, (q as f64).powf(1.5).round(), (q * q / 4) as f64]
        .iter()
        .map(|&s| (s as usize).clamp(1, (q * q) as usize))
        .collect();
    v.dedup();
    v
}

fn random_curves(ctx: &Arc<FieldCtx>, family: &Family, size: usize, rng: &mut ChaCha8Rng) -> Result<CurveSet> {
    let q = ctx.q() as usize;
    let e = |i: usize| el(ctx, i);
    let members = match family {
        Family::Lines => sample(rng, q * q, size.min(q * q))
            .into_iter()
            .map(|i| CurveFamilySpec::Line { slope: e(i / q), intercept: e(i % q) })
            .collect(),
        Family::Poly(n) => {
            let space = (q as u64).checked_pow(n + 1).filter(|&s| s <= u32::MAX as u64).ok_or(
                Error::SizeCapExceeded { what: "polynomial graph family", value: (q as u128).pow(n + 1), cap: u32::MAX as u128 },
            )? as usize;
            sample(rng, space, size.min(space))
                .into_iter()
                .map(|mut i| {
                    let mut coeffs = vec![FieldElement::ZERO; *n as usize + 1];
                    for c in coeffs.iter_mut().rev() {
                        *c = e(i % q);
                        i /= q;
                    }
                    CurveFamilySpec::PolyGraph { coeffs }
                })
                .collect()
        }
        Family::Kernel(k) => sample(rng, q * q, size.min(q * q))
            .into_iter()
            .map(|i| CurveFamilySpec::KernelCurve { kernel: k.clone(), a: e(i / q), b: e(i % q) })
            .collect(),
    };
    CurveSet::new(ctx, members)
}

enum Family {
    Lines,
    Poly(u32),
    Kernel(Arc<SymmetricKernel>),
}

struct FieldPlan {
    ctx: Arc<FieldCtx>,
    family: Family,
    lambda2: Option<f64>,
}

fn plan(spec: FieldSpec, family: &SweepFamily) -> Result<FieldPlan> {
    let ctx = make_field_from_spec(spec)?;
    let (family, lambda2) = match family {
        SweepFamily::Lines => (Family::Lines, None),
        SweepFamily::PolyGraphs { n } => {
            if *n as u64 >= ctx.q() as u64 {
                return Err(Error::InvalidArgument(format!("polynomial graphs of degree {n} need q > {n}")));
            }
            (Family::Poly(*n), None)
        }
        SweepFamily::Kernel { expr } => {
            let k = SymmetricKernel::parse(&ctx, expr)?;
            let g = build_graph(&k)?;
            let l2 = spectrum(&g, SpectralMethod::Iterative, &SpectralOptions::default())?.lambda2_abs;
            (Family::Kernel(Arc::new(k)), Some(l2))
        }
    };
    Ok(FieldPlan { ctx, family, lambda2 })
}

/// Random incidence instances: for each field, each trial and each pair of
/// sizes `(|P|, |Q|)`, one instance drawn from the cell seed of `(q, trial)`.
/// Fields where the family is undefined are skipped and listed.
pub fn theorem_sweep(
    family: &SweepFamily,
    fields: &[FieldSpec],
    trials: u64,
    sizes: Option<&[usize]>,
    seed: u64,
) -> IncidenceSweep {
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    let mut skipped = Vec::new();
    for &spec in fields {
        let plan = match plan(spec, family) {
            Ok(p) => p,
            Err(e) => {
                skipped.push(SkippedField { field: spec.to_string(), reason: e.to_string() });
                continue;
            }
        };
        let q = plan.ctx.q() as u64;
        let sizes: Vec<usize> = sizes.map(<[usize]>::to_vec).unwrap_or_else(|| default_sizes(q));
        let cell_rows: Result<Vec<Vec<IncidenceRow>>> = (0..trials)
            .into_par_iter()
            .map(|trial| {
                let s = cell_seed(seed, q, trial);
                let mut rng = ChaCha8Rng::seed_from_u64(s);
                let mut out = Vec::new();
                for &np in &sizes {
                    for &nq in &sizes {
                        let pts = PointSet::random(&plan.ctx, np, &mut rng);
                        let cs = random_curves(&plan.ctx, &plan.family, nq, &mut rng)?;
                        let report = incidences(&pts, &cs)?;
                        let mixing_bound = plan.lambda2.map(|l| l * ((pts.len() * cs.len()) as f64).sqrt());
                        out.push(IncidenceRow { field: spec.to_string(), trial, seed: s, report, mixing_bound });
                    }
                }
                Ok(out)
            })
            .collect();
        let cell_rows = match cell_rows {
            Ok(r) => r.into_iter().flatten().collect::<Vec<_>>(),
            Err(e) => {
                skipped.push(SkippedField { field: spec.to_string(), reason: e.to_string() });
                continue;
            }
        };
        let max_ratio = cell_rows.iter().map(|r| r.report.ratio).fold(0.0, f64::max);
        let bound_violations = if family.has_unit_constant() {
            cell_rows.iter().filter(|r| r.report.ratio > 1.0 + UNIT_CONSTANT_SLACK).count() as u64
        } else {
            0
        };
        let mixing_violations = cell_rows
            .iter()
            .filter(|r| r.mixing_bound.is_some_and(|b| r.report.deviation > b + MIXING_SLACK))
            .count() as u64;
        summary.push(IncidenceSummary {
            field: spec.to_string(),
            q,
            instances: cell_rows.len() as u64,
            max_ratio,
            lambda2_abs: plan.lambda2,
            bound_violations,
            mixing_violations,
        });
        rows.extend(cell_rows);
    }
    IncidenceSweep { family: family.clone(), seed, rows, summary, skipped }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn membership_example() {
        let ctx = make_field(7, 1).unwrap();
        let k = Arc::new(SymmetricKernel::parse(&ctx, "(a+x)^2").unwrap());
        let c = CurveFamilySpec::KernelCurve { kernel: k, a: ctx.zero(), b: ctx.zero() };
        assert!(member(&ctx, &c, (ctx.one(), ctx.from_int(-1))));
        let on: usize = ctx.enumerate().flat_map(|x| ctx.enumerate().map(move |y| (x, y))).filter(|&p| member(&ctx, &c, p)).count();
        assert_eq!(on, 7);
    }

    #[test]
    fn full_configurations_have_zero_deviation() {
        let ctx = make_field(5, 1).unwrap();
        let all = PointSet::all(&ctx);
        let r = incidences(&all, &CurveSet::all_lines(&ctx)).unwrap();
        assert_eq!((r.incidences, r.deviation), (125, 0.0));
        let k = Arc::new(SymmetricKernel::parse(&ctx, "a*x + a^2*x^2").unwrap());
        let r = incidences(&all, &CurveSet::all_kernel_curves(&k)).unwrap();
        assert_eq!((r.incidences, r.deviation, r.point_set_collisions), (125, 0.0, 0));
    }

    #[test]
    fn empty_sets() {
        let ctx = make_field(3, 1).unwrap();
        let r = incidences(&PointSet::new(&ctx, []), &CurveSet::all_lines(&ctx)).unwrap();
        assert_eq!((r.incidences, r.ratio), (0, 0.0));
        let r = incidences(&PointSet::all(&ctx), &CurveSet::new(&ctx, vec![]).unwrap()).unwrap();
        assert_eq!(r.incidences, 0);
    }

    #[test]
    fn mixed_inputs_rejected() {
        let f3 = make_field(3, 1).unwrap();
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(incidences(&PointSet::all(&f3), &CurveSet::all_lines(&f5)).unwrap_err(), Error::MixedFields);
        let mixed = vec![
            CurveFamilySpec::Line { slope: f3.one(), intercept: f3.zero() },
            CurveFamilySpec::PolyGraph { coeffs: vec![f3.one(), f3.zero()] },
        ];
        assert!(CurveSet::new(&f3, mixed).is_err());
        let too_big = vec![CurveFamilySpec::PolyGraph { coeffs: vec![f3.one(); 4] }];
        assert!(CurveSet::new(&f3, too_big).is_err());
    }

    #[test]
    fn sweep_skips_invalid_fields() {
        let fields = [FieldSpec { p: 3, n: 1 }, FieldSpec { p: 7, n: 1 }];
        let s = theorem_sweep(&SweepFamily::PolyGraphs { n: 3 }, &fields, 2, None, 1);
        assert_eq!(s.skipped.len(), 1);
        assert_eq!(s.summary.len(), 1);
        assert_eq!(s.summary[0].bound_violations, 0);
    }
}
