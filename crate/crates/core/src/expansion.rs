//! Value sets of `P(x,y,z) = F(x, G(y,z)) + H(y,z) + J(x)` over product sets,
//! and the incidence argument that bounds the number of missed values.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{make_field_from_spec, FieldCtx, FieldElement, FieldSpec};
use crate::graph::{build_graph, spectrum, SpectralMethod, SpectralOptions};
use crate::incidence::{incidences, CurveFamilySpec, CurveSet, PointSet, SkippedField};
use crate::poly::{KernelTable, MultiPoly, SymmetricKernel};
use crate::seed::cell_seed;

pub const TERNARY_VARS: [&str; 3] = ["x", "y", "z"];
pub const DEFAULT_TERNARY_DEGREE_CAP: i64 = 64;
/// Largest `|X||Y||Z|` accepted by [`image_size`].
pub const DEFAULT_EVAL_CAP: u128 = 100_000_000;

#[derive(Debug)]
pub struct TernaryPolySpec {
    kernel: SymmetricKernel,
    table: KernelTable,
    g: MultiPoly,
    h: MultiPoly,
    j: MultiPoly,
    assembled: MultiPoly,
    lambda2: OnceLock<Result<f64>>,
}

impl TernaryPolySpec {
    pub fn kernel(&self) -> &SymmetricKernel {
        &self.kernel
    }
    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.kernel.ctx()
    }
    pub fn g(&self) -> &MultiPoly {
        &self.g
    }
    pub fn h(&self) -> &MultiPoly {
        &self.h
    }
    pub fn j(&self) -> &MultiPoly {
        &self.j
    }
    /// `P` over `(x, y, z)`.
    pub fn assembled(&self) -> &MultiPoly {
        &self.assembled
    }

    /// `F(x, G) + H + J(x)` evaluated through its parts.
    pub fn eval(&self, x: FieldElement, y: FieldElement, z: FieldElement) -> FieldElement {
        let ctx = self.ctx();
        let g = self.g.eval_at(&[y, z]);
        let h = self.h.eval_at(&[y, z]);
        ctx.add(ctx.add(self.table.get(x, g), h), self.j.eval_at(&[x]))
    }

    /// `|lambda2|` of the kernel's graph, computed once.
    fn lambda2(&self) -> Result<f64> {
        self.lambda2
            .get_or_init(|| {
                let g = build_graph(&self.kernel)?;
                Ok(spectrum(&g, SpectralMethod::Iterative, &SpectralOptions::default())?.lambda2_abs)
            })
            .clone()
    }
}

/// Assembles `P = F(x, G(y,z)) + H(y,z) + J(x)`. `G` and `H` may use the
/// variables `y`, `z`; `J` may use `x`.
pub fn build_ternary(kernel: &SymmetricKernel, g: &MultiPoly, h: &MultiPoly, j: &MultiPoly) -> Result<TernaryPolySpec> {
    build_ternary_capped(kernel, g, h, j, DEFAULT_TERNARY_DEGREE_CAP)
}

pub fn build_ternary_capped(
    kernel: &SymmetricKernel,
    g: &MultiPoly,
    h: &MultiPoly,
    j: &MultiPoly,
    degree_cap: i64,
) -> Result<TernaryPolySpec> {
    let ctx = kernel.ctx();
    for p in [g, h, j] {
        if !p.ctx().is_same(ctx) {
            return Err(Error::MixedFields);
        }
    }
    let g = g.with_vars(&["y", "z"])?;
    let h = h.with_vars(&["y", "z"])?;
    let j = j.with_vars(&["x"])?;
    let lift = |p: &MultiPoly| p.with_vars(&TERNARY_VARS);
    let x = MultiPoly::var(ctx, &TERNARY_VARS, "x")?;
    let f_xg = kernel.poly().compose(&TERNARY_VARS, &[x, lift(&g)?])?;
    let assembled = f_xg.add(&lift(&h)?)?.add(&lift(&j)?)?;
    if assembled.total_degree() > degree_cap {
        return Err(Error::DegreeCapExceeded { deg: assembled.total_degree(), cap: degree_cap });
    }
    if !algebraically_independent(&g, &h, None)?.independent {
        return Err(Error::DependentGH);
    }
    Ok(TernaryPolySpec { kernel: kernel.clone(), table: kernel.table(), g, h, j, assembled, lambda2: OnceLock::new() })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct IndependenceReport {
    pub independent: bool,
    /// Bound on `i deg G + j deg H` over the monomials `G^i H^j` tried.
    pub cap: i64,
    /// False when the cap is below `deg G * deg H`, where a relation could
    /// have been missed.
    pub complete: bool,
    /// A relation `R(X, Y)` with `R(G, H) = 0`, when one was found.
    #[serde(skip)]
    pub relation: Option<MultiPoly>,
}

/// Decides whether `R(G, H) = 0` forces `R = 0` by exact linear algebra on
/// the products `G^i H^j` with weighted degree `i deg G + j deg H <= cap`.
/// The default cap `deg G * deg H` covers every minimal relation.
pub fn algebraically_independent(g: &MultiPoly, h: &MultiPoly, degree_cap: Option<i64>) -> Result<IndependenceReport> {
    let ctx = g.ctx().clone();
    if !h.ctx().is_same(&ctx) {
        return Err(Error::MixedFields);
    }
    let vars = union_vars(g, h);
    let g = g.with_vars(&vars)?;
    let h = h.with_vars(&vars)?;
    let rel_vars = ["X", "Y"];
    let (dg, dh) = (g.total_degree(), h.total_degree());
    let full = dg.max(0) * dh.max(0);
    let cap = degree_cap.unwrap_or(full);
    let complete = cap >= full;

    // A constant (or zero) member satisfies a degree-one relation.
    for (k, (p, d)) in [(&g, dg), (&h, dh)].into_iter().enumerate() {
        if d <= 0 {
            let mut e = vec![0, 0];
            e[k] = 1;
            let c = ctx.neg(p.constant_term());
            let rel = MultiPoly::from_terms(&ctx, &rel_vars, [(e, ctx.one()), (vec![0, 0], c)])?;
            return Ok(IndependenceReport { independent: false, cap, complete, relation: Some(rel) });
        }
    }

    let mut exps = Vec::new();
    for i in 0..=(cap / dg) {
        for j in 0..=((cap - i * dg) / dh) {
            exps.push((i as u32, j as u32));
        }
    }
    let gp = powers(&g, exps.iter().map(|e| e.0).max().unwrap_or(0));
    let hp = powers(&h, exps.iter().map(|e| e.1).max().unwrap_or(0));
    let mut cols: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    let mut rows = Vec::with_capacity(exps.len());
    for &(i, j) in &exps {
        let prod = gp[i as usize].mul(&hp[j as usize])?;
        let mut row = Vec::new();
        for (e, &c) in prod.terms() {
            let n = cols.len();
            row.push((*cols.entry(e.clone()).or_insert(n), c));
        }
        rows.push(row);
    }
    let width = cols.len();
    let dense: Vec<Vec<FieldElement>> = rows
        .into_iter()
        .map(|r| {
            let mut v = vec![FieldElement::ZERO; width];
            for (k, c) in r {
                v[k] = c;
            }
            v
        })
        .collect();
    let relation = left_kernel_vector(&ctx, dense).map(|coef| {
        let terms = exps.iter().zip(coef).map(|(&(i, j), c)| (vec![i, j], c));
        MultiPoly::from_terms(&ctx, &rel_vars, terms).expect("relation over X, Y")
    });
    Ok(IndependenceReport { independent: relation.is_none(), cap, complete, relation })
}

fn union_vars(g: &MultiPoly, h: &MultiPoly) -> Vec<String> {
    let mut v: Vec<String> = g.vars().to_vec();
    for w in h.vars() {
        if !v.contains(w) {
            v.push(w.clone());
        }
    }
    v
}

fn powers(p: &MultiPoly, k: u32) -> Vec<MultiPoly> {
    let mut out = vec![p.pow(0)];
    for _ in 0..k {
        out.push(out.last().unwrap().mul(p).expect("same ring"));
    }
    out
}

/// A nonzero `c` with `sum c_i rows_i = 0`, if the rows are dependent.
fn left_kernel_vector(ctx: &FieldCtx, rows: Vec<Vec<FieldElement>>) -> Option<Vec<FieldElement>> {
    let m = rows.len();
    // Augment each row with its coordinate vector.
    let mut a: Vec<(Vec<FieldElement>, Vec<FieldElement>)> = rows
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            let mut e = vec![FieldElement::ZERO; m];
            e[i] = ctx.one();
            (r, e)
        })
        .collect();
    let width = a.first().map_or(0, |r| r.0.len());
    let mut rank = 0;
    for col in 0..width {
        let Some(piv) = (rank..m).find(|&r| !a[r].0[col].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = ctx.inv(a[rank].0[col]).expect("pivot is nonzero");
        let (head, tail) = a.split_at_mut(rank + 1);
        let pivot = &head[rank];
        for row in tail.iter_mut() {
            let f = ctx.mul(row.0[col], inv);
            if f.is_zero() {
                continue;
            }
            for (x, &y) in row.0.iter_mut().zip(&pivot.0) {
                *x = ctx.sub(*x, ctx.mul(f, y));
            }
            for (x, &y) in row.1.iter_mut().zip(&pivot.1) {
                *x = ctx.sub(*x, ctx.mul(f, y));
            }
        }
        rank += 1;
    }
    (rank < m).then(|| a.swap_remove(rank).1)
}

fn dedup(set: &[FieldElement]) -> Vec<FieldElement> {
    let mut v = set.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct PhiImageStats {
    pub pairs: u64,
    pub size: u64,
    /// `size / (|Y| |Z|)`.
    pub ratio: f64,
}

fn phi_pairs(g: &MultiPoly, h: &MultiPoly, y: &[FieldElement], z: &[FieldElement]) -> Vec<(FieldElement, FieldElement)> {
    let mut out: Vec<_> =
        y.iter().flat_map(|&a| z.iter().map(move |&b| (g.eval_at(&[a, b]), h.eval_at(&[a, b])))).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Size of `{(G(y,z), H(y,z)) : y in Y, z in Z}`.
pub fn phi_image_stats(g: &MultiPoly, h: &MultiPoly, y: &[FieldElement], z: &[FieldElement]) -> Result<PhiImageStats> {
    let g = g.with_vars(&["y", "z"])?;
    let h = h.with_vars(&["y", "z"])?;
    let (y, z) = (dedup(y), dedup(z));
    let pairs = (y.len() * z.len()) as u64;
    let size = phi_pairs(&g, &h, &y, &z).len() as u64;
    Ok(PhiImageStats { pairs, size, ratio: if pairs == 0 { 0.0 } else { size as f64 / pairs as f64 } })
}

/// Membership mask of `P(X, Y, Z)` in canonical index order.
fn value_mask(p: &TernaryPolySpec, x: &[FieldElement], phi: &[(FieldElement, FieldElement)]) -> Vec<bool> {
    let ctx = p.ctx();
    let q = ctx.q() as usize;
    let mut hit = vec![false; q];
    let mut found = 0;
    'outer: for &a in x {
        let ja = p.j.eval_at(&[a]);
        for &(g, h) in phi {
            let v = ctx.add(ctx.add(p.table.get(a, g), h), ja).index() as usize;
            if !hit[v] {
                hit[v] = true;
                found += 1;
                if found == q {
                    break 'outer;
                }
            }
        }
    }
    hit
}

fn check_eval_cap(x: usize, y: usize, z: usize) -> Result<()> {
    let n = x as u128 * y as u128 * z as u128;
    if n > DEFAULT_EVAL_CAP {
        return Err(Error::SizeCapExceeded { what: "|X||Y||Z|", value: n, cap: DEFAULT_EVAL_CAP });
    }
    Ok(())
}

/// `|P(X, Y, Z)|`.
pub fn image_size(p: &TernaryPolySpec, x: &[FieldElement], y: &[FieldElement], z: &[FieldElement]) -> Result<u64> {
    let (x, y, z) = (dedup(x), dedup(y), dedup(z));
    check_eval_cap(x.len(), y.len(), z.len())?;
    let phi = phi_pairs(&p.g, &p.h, &y, &z);
    Ok(value_mask(p, &x, &phi).iter().filter(|&&b| b).count() as u64)
}

/// The incidence configuration built from the missed values `W`: points
/// `(x, J(x) - w)` and curves `F(a,x) + b + y = 0` at `(a, b) = phi(y, z)`.
/// No point lies on any curve, so the mixing inequality forces
/// `|points| |curves| <= lambda2^2 q^2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ZeroIncidenceCheck {
    pub points: u64,
    pub curves: u64,
    pub incidences: u64,
    pub lambda2_abs: f64,
    pub product: u128,
    /// `lambda2^2 q^2`.
    pub product_bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ExpansionReport {
    pub q: u64,
    pub x_size: u64,
    pub y_size: u64,
    pub z_size: u64,
    pub image_size: u64,
    pub missing: u64,
    /// `q^(11/3) / (|X||Y||Z|)`.
    pub predicted_missing_scale: f64,
    pub ratio: f64,
    pub phi_image: u64,
    pub phi_ratio: f64,
    pub crosscheck: Option<ZeroIncidenceCheck>,
}

pub fn expansion_report(
    p: &TernaryPolySpec,
    x: &[FieldElement],
    y: &[FieldElement],
    z: &[FieldElement],
    with_graph_crosscheck: bool,
) -> Result<ExpansionReport> {
    let ctx = p.ctx().clone();
    let q = ctx.q() as u64;
    let (x, y, z) = (dedup(x), dedup(y), dedup(z));
    check_eval_cap(x.len(), y.len(), z.len())?;
    let phi = phi_pairs(&p.g, &p.h, &y, &z);
    let mask = value_mask(p, &x, &phi);
    let image = mask.iter().filter(|&&b| b).count() as u64;
    let missing = q - image;
    let xyz = (x.len() * y.len() * z.len()) as f64;
    let predicted = if xyz > 0.0 { (q as f64).powf(11.0 / 3.0) / xyz } else { f64::INFINITY };
    let pairs = (y.len() * z.len()) as f64;

    let crosscheck = if with_graph_crosscheck {
        let w: Vec<FieldElement> = ctx.enumerate().filter(|v| !mask[v.index() as usize]).collect();
        let pts = PointSet::new(
            &ctx,
            x.iter().flat_map(|&a| {
                let ja = p.j.eval_at(&[a]);
                let ctx = &ctx;
                w.iter().map(move |&wv| (a, ctx.sub(ja, wv)))
            }),
        );
        let kernel = Arc::new(p.kernel.clone());
        let curves = CurveSet::new(
            &ctx,
            phi.iter().map(|&(a, b)| CurveFamilySpec::KernelCurve { kernel: kernel.clone(), a, b }).collect(),
        )?;
        let inc = incidences(&pts, &curves)?;
        let lambda2 = p.lambda2()?;
        let product = pts.len() as u128 * curves.len() as u128;
        let product_bound = lambda2 * lambda2 * (q * q) as f64;
        Some(ZeroIncidenceCheck {
            points: pts.len() as u64,
            curves: curves.len() as u64,
            incidences: inc.incidences,
            lambda2_abs: lambda2,
            product,
            product_bound,
            holds: inc.incidences == 0 && product as f64 <= product_bound * (1.0 + 1e-9) + 1e-6,
        })
    } else {
        None
    };

    Ok(ExpansionReport {
        q,
        x_size: x.len() as u64,
        y_size: y.len() as u64,
        z_size: z.len() as u64,
        image_size: image,
        missing,
        predicted_missing_scale: predicted,
        ratio: missing as f64 / predicted,
        phi_image: phi.len() as u64,
        phi_ratio: if pairs > 0.0 { phi.len() as f64 / pairs } else { 0.0 },
        crosscheck,
    })
}

/// `P = (x - y)^k + z` as `F(u,v) = (u+v)^k`, `G = -y`, `H = z`, `J = 0`.
pub fn erdos_polynomial(ctx: &Arc<FieldCtx>, k: u32) -> Result<TernaryPolySpec> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("exponent k = {k} must be at least 2")));
    }
    if ctx.characteristic() <= k {
        return Err(Error::CharTooSmall { char: ctx.characteristic() as u64, k });
    }
    let kernel = SymmetricKernel::parse(ctx, &format!("(u+v)^{k}"))?;
    let g = MultiPoly::parse_with_vars(ctx, "-y", &["y", "z"])?;
    let h = MultiPoly::parse_with_vars(ctx, "z", &["y", "z"])?;
    let j = MultiPoly::zero(ctx, &["x"]);
    build_ternary(&kernel, &g, &h, &j)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum SetSizes {
    Sizes([usize; 3]),
    /// Fractions of `q`, rounded up and clamped to `[1, q]`.
    Densities([f64; 3]),
}

impl SetSizes {
    pub fn resolve(&self, q: u64) -> [usize; 3] {
        match *self {
            SetSizes::Sizes(s) => s.map(|v| v.min(q as usize)),
            SetSizes::Densities(d) => d.map(|f| ((f * q as f64).ceil() as usize).clamp(1, q as usize)),
        }
    }
}

pub fn random_subset(ctx: &FieldCtx, size: usize, rng: &mut ChaCha8Rng) -> Vec<FieldElement> {
    let q = ctx.q() as usize;
    let mut v: Vec<FieldElement> =
        sample(rng, q, size.min(q)).into_iter().map(|i| ctx.element(i as u32).unwrap()).collect();
    v.sort_unstable();
    v
}

/// One run of the `(x - y)^k + z` pipeline on random sets drawn from `seed`.
pub fn erdos_preset(k: u32, field: FieldSpec, sizes: SetSizes, seed: u64) -> Result<ExpansionReport> {
    let ctx = make_field_from_spec(field)?;
    let p = erdos_polynomial(&ctx, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let [nx, ny, nz] = sizes.resolve(ctx.q() as u64);
    let x = random_subset(&ctx, nx, &mut rng);
    let y = random_subset(&ctx, ny, &mut rng);
    let z = random_subset(&ctx, nz, &mut rng);
    expansion_report(&p, &x, &y, &z, true)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ExpansionRow {
    pub field: String,
    pub setting: usize,
    pub trial: u64,
    pub seed: u64,
    #[serde(flatten)]
    pub report: ExpansionReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct SettingSummary {
    pub field: String,
    pub q: u64,
    pub setting: usize,
    pub sizes: [usize; 3],
    pub trials: u64,
    pub mean_missing: f64,
    pub max_missing: u64,
    pub mean_ratio: f64,
    pub zero_incidence_failures: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct TrendSummary {
    pub field: String,
    pub q: u64,
    /// Mean missing count never increases as `|X||Y||Z|` grows.
    pub monotone_in_density: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ExpansionSweep {
    pub polynomial: String,
    pub settings: Vec<SetSizes>,
    pub seed: u64,
    pub rows: Vec<ExpansionRow>,
    pub summary: Vec<SettingSummary>,
    pub trends: Vec<TrendSummary>,
    pub skipped: Vec<SkippedField>,
}

impl ExpansionSweep {
    pub fn zero_incidence_failures(&self) -> u64 {
        self.summary.iter().map(|s| s.zero_incidence_failures).sum()
    }
}

/// Runs the pipeline on random sets for every field and size setting. Trial
/// `t` at field `q` draws from `cell_seed(seed, q, t)`, shared across
/// settings. Fields where `build` fails are skipped and listed.
pub fn expansion_sweep<B>(
    label: &str,
    build: B,
    fields: &[FieldSpec],
    settings: &[SetSizes],
    trials: u64,
    seed: u64,
) -> ExpansionSweep
where
    B: Fn(&Arc<FieldCtx>) -> Result<TernaryPolySpec>,
{
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    let mut trends = Vec::new();
    let mut skipped = Vec::new();
    for &spec in fields {
        let skip = |e: Error| SkippedField { field: spec.to_string(), reason: e.to_string() };
        let prepared = make_field_from_spec(spec).and_then(|ctx| {
            let p = build(&ctx)?;
            p.lambda2()?;
            Ok((ctx, p))
        });
        let (ctx, p) = match prepared {
            Ok(v) => v,
            Err(e) => {
                skipped.push(skip(e));
                continue;
            }
        };
        let q = ctx.q() as u64;
        let per_setting: Result<Vec<Vec<ExpansionRow>>> = settings
            .iter()
            .enumerate()
            .map(|(si, sizes)| {
                (0..trials)
                    .into_par_iter()
                    .map(|t| {
                        let s = cell_seed(seed, q, t);
                        let mut rng = ChaCha8Rng::seed_from_u64(s);
                        let [nx, ny, nz] = sizes.resolve(q);
                        let x = random_subset(&ctx, nx, &mut rng);
                        let y = random_subset(&ctx, ny, &mut rng);
                        let z = random_subset(&ctx, nz, &mut rng);
                        let report = expansion_report(&p, &x, &y, &z, true)?;
                        Ok(ExpansionRow { field: spec.to_string(), setting: si, trial: t, seed: s, report })
                    })
                    .collect()
            })
            .collect();
        let per_setting = match per_setting {
            Ok(v) => v,
            Err(e) => {
                skipped.push(skip(e));
                continue;
            }
        };
        let mut keyed = Vec::new();
        for (si, r) in per_setting.into_iter().enumerate() {
            let n = r.len().max(1) as f64;
            let sizes = settings[si].resolve(q);
            let mean_missing = r.iter().map(|x| x.report.missing as f64).sum::<f64>() / n;
            keyed.push((sizes.iter().product::<usize>(), mean_missing));
            summary.push(SettingSummary {
                field: spec.to_string(),
                q,
                setting: si,
                sizes,
                trials: r.len() as u64,
                mean_missing,
                max_missing: r.iter().map(|x| x.report.missing).max().unwrap_or(0),
                mean_ratio: r.iter().map(|x| x.report.ratio).sum::<f64>() / n,
                zero_incidence_failures: r
                    .iter()
                    .filter(|x| x.report.crosscheck.as_ref().is_some_and(|c| !c.holds))
                    .count() as u64,
            });
            rows.extend(r);
        }
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        let monotone = keyed.windows(2).all(|w| w[0].0 == w[1].0 || w[1].1 <= w[0].1);
        trends.push(TrendSummary { field: spec.to_string(), q, monotone_in_density: monotone });
    }
    ExpansionSweep { polynomial: label.to_string(), settings: settings.to_vec(), seed, rows, summary, trends, skipped }
}

/// [`expansion_sweep`] for `(x - y)^k + z` with equal densities for the
/// three sets.
pub fn erdos_sweep(k: u32, fields: &[FieldSpec], densities: &[f64], trials: u64, seed: u64) -> ExpansionSweep {
    let settings: Vec<SetSizes> = densities.iter().map(|&d| SetSizes::Densities([d; 3])).collect();
    let label = format!("(x-y)^{k} + z");
    expansion_sweep(&label, |ctx| erdos_polynomial(ctx, k), fields, &settings, trials, seed)
}
