use std::fmt;
use std::sync::Arc;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use ffexpand::composition::{
    additive_equivalence, constructed_trials, exhaustive_scan, AdditiveEquivalenceReport, LemmaHarnessReport,
};
use ffexpand::curves::{reducibility_locus_sweep, LocusReport, SweepOptions};
use ffexpand::expansion::{build_ternary, erdos_polynomial, expansion_sweep, ExpansionSweep, SetSizes};
use ffexpand::field::make_field_from_spec;
use ffexpand::graph::{
    cube_identity_audit, spectrum, CubeAuditReport, IncidenceGraph, SpectralMethod, SpectralOptions, SpectralReport,
};
use ffexpand::incidence::{theorem_sweep, IncidenceSweep, SkippedField, SweepFamily};
use ffexpand::{Error, FieldCtx, FieldSpec, MultiPoly, SymmetricKernel};

use crate::config::{
    parse_fields, Caps, CompositionArgs, CubeAuditArgs, CurveSweepArgs, ExpandArgs, Experiment, IncidenceArgs,
    SpectrumArgs,
};
use crate::output::Metric;
use crate::verify::run_verify;

#[derive(Debug)]
pub enum RunError {
    Core(Error),
    Io(std::io::Error),
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Core(e)
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Core(e) => write!(f, "{e}"),
            RunError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

/// What an experiment produced.
pub struct Outcome {
    pub payload: Value,
    /// Per-instance rows, for CSV output.
    pub rows: Option<Vec<Value>>,
    pub metrics: Vec<Metric>,
    /// Theorem-backed invariants that failed.
    pub violations: Vec<String>,
    /// Every field of a sweep failed.
    pub all_failed: bool,
}

impl Outcome {
    pub fn new<T: Serialize>(payload: &T) -> Self {
        Outcome {
            payload: serde_json::to_value(payload).expect("payload serializes"),
            rows: None,
            metrics: Vec::new(),
            violations: Vec::new(),
            all_failed: false,
        }
    }
}

pub fn run(exp: &Experiment, caps: &Caps) -> Result<Outcome, RunError> {
    match exp {
        Experiment::Spectrum(a) => run_spectrum(a, caps),
        Experiment::CubeAudit(a) => run_cube_audit(a, caps),
        Experiment::CurveSweep(a) => run_curve_sweep(a, caps),
        Experiment::Incidence(a) => run_incidence(a),
        Experiment::Expand(a) => run_expand(a),
        Experiment::Verify(a) => run_verify(a, caps),
        Experiment::Composition(a) => run_composition(a),
    }
}

pub fn kernel_over(spec: FieldSpec, expr: &str) -> Result<SymmetricKernel, Error> {
    let ctx = make_field_from_spec(spec)?;
    SymmetricKernel::parse(&ctx, expr)
}

fn failure(spec: FieldSpec, e: impl fmt::Display) -> SkippedField {
    SkippedField { field: spec.to_string(), reason: e.to_string() }
}

/// Largest value over the three smallest `q`, and whether every value is
/// within twice that.
fn bounded_trend(points: &[(u64, f64)]) -> (Option<f64>, Option<bool>) {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut qs: Vec<u64> = sorted.iter().map(|p| p.0).collect();
    qs.dedup();
    let small: Vec<u64> = qs.into_iter().take(3).collect();
    let base = sorted.iter().filter(|p| small.contains(&p.0)).map(|p| p.1).fold(None, |m: Option<f64>, v| {
        Some(m.map_or(v, |m| m.max(v)))
    });
    let ok = base.map(|b| sorted.iter().all(|p| p.1 <= 2.0 * b));
    (base, ok)
}

#[derive(Serialize, Deserialize, JsonSchema, Debug, Clone, PartialEq)]
pub struct SpectrumSummary {
    pub max_ratio: f64,
    /// Largest ratio over the three smallest fields.
    pub baseline_max: Option<f64>,
    /// Every ratio is at most twice the baseline.
    pub trend_ok: Option<bool>,
    pub lambda1_violations: u64,
}

#[derive(Serialize, Deserialize, JsonSchema, Debug, Clone, PartialEq)]
pub struct SpectrumPayload {
    pub kernel: String,
    pub method: SpectralMethod,
    pub reports: Vec<SpectralReport>,
    pub failures: Vec<SkippedField>,
    pub summary: SpectrumSummary,
}

fn run_spectrum(a: &SpectrumArgs, caps: &Caps) -> Result<Outcome, RunError> {
    let fields = parse_fields(&a.field)?;
    let method: SpectralMethod = a.method.parse()?;
    let opts = SpectralOptions { dense_max_q: caps.dense_q, seed: a.seed, ..Default::default() };
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for &spec in &fields {
        let r = kernel_over(spec, &a.kernel)
            .and_then(|k| IncidenceGraph::build_capped(&k, caps.graph_q))
            .and_then(|g| spectrum(&g, method, &opts));
        match r {
            Ok(r) => reports.push(r),
            Err(e) => failures.push(failure(spec, e)),
        }
    }
    let lambda1_bad: Vec<&SpectralReport> =
        reports.iter().filter(|r| (r.lambda1 - r.q as f64).abs() > 1e-6 * r.q as f64).collect();
    let pts: Vec<(u64, f64)> = reports.iter().map(|r| (r.q, r.ratio_q56)).collect();
    let (baseline_max, trend_ok) = bounded_trend(&pts);
    let summary = SpectrumSummary {
        max_ratio: pts.iter().map(|p| p.1).fold(0.0, f64::max),
        baseline_max,
        trend_ok,
        lambda1_violations: lambda1_bad.len() as u64,
    };
    let mut out = Outcome::new(&SpectrumPayload {
        kernel: a.kernel.clone(),
        method,
        reports: reports.clone(),
        failures: failures.clone(),
        summary: summary.clone(),
    });
    for r in &lambda1_bad {
        out.violations.push(format!("q={}: principal eigenvalue {} differs from q", r.q, r.lambda1));
    }
    for r in &reports {
        out.metrics.push(Metric::new(r.q, &a.kernel, "lambda1", r.lambda1));
        out.metrics.push(Metric::new(r.q, &a.kernel, "lambda2_abs", r.lambda2_abs));
        out.metrics.push(Metric::new(r.q, &a.kernel, "ratio_q56", r.ratio_q56));
        if let (Some(res), Some(it)) = (r.residual, r.iterations) {
            out.metrics.push(Metric::new(r.q, &a.kernel, "residual", res));
            out.metrics.push(Metric::new(r.q, &a.kernel, "iterations", it as f64));
        }
    }
    out.rows = Some(reports.iter().map(|r| serde_json::to_value(r).unwrap()).collect());
    out.all_failed = reports.is_empty();
    Ok(out)
}

#[derive(Serialize, Deserialize, JsonSchema, Debug, Clone, PartialEq)]
pub struct CubeAuditPayload {
    pub field: String,
    pub fault_injected: bool,
    pub report: CubeAuditReport,
}

fn run_cube_audit(a: &CubeAuditArgs, caps: &Caps) -> Result<Outcome, RunError> {
    let spec: FieldSpec = a.field.parse()?;
    let k = kernel_over(spec, &a.kernel)?;
    let mut g = IncidenceGraph::build_capped(&k, caps.graph_q)?;
    if a.inject_fault {
        g.inject_fault();
    }
    if a.sample.is_none() && g.q() as u32 > caps.sweep_q {
        return Err(Error::SizeCapExceeded {
            what: "exhaustive cube audit q",
            value: g.q() as u128,
            cap: caps.sweep_q as u128,
        }
        .into());
    }
    let report = cube_identity_audit(&g, a.sample, a.seed)?;
    let mut out =
        Outcome::new(&CubeAuditPayload { field: spec.to_string(), fault_injected: a.inject_fault, report: report.clone() });
    let q = report.q;
    out.metrics.push(Metric::new(q, &a.kernel, "checked", report.checked as f64));
    out.metrics.push(Metric::new(q, &a.kernel, "mismatches", report.mismatches as f64));
    if report.mismatches > 0 {
        out.violations.push(format!(
            "cube identity: {} of {} parameter tuples have path count != point count",
            report.mismatches, report.checked
        ));
    }
    Ok(out)
}

#[derive(Serialize, Deserialize, JsonSchema, Debug, Clone, PartialEq)]
pub struct LocusSummary {
    pub weil_violations: u64,
    /// Some curve is reducible at every field.
    pub nonempty: bool,
    /// Some curve is absolutely irreducible at every field.
    pub proper: bool,
    /// `q * fraction` at the smallest field.
    pub baseline: Option<f64>,
    pub max_q_times_fraction: f64,
    /// Every `q * fraction` is at most twice the baseline.
    pub trend_ok: Option<bool>,
}

#[derive(Serialize, Deserialize, JsonSchema, Debug, Clone, PartialEq)]
pub struct CurveSweepPayload {
    pub kernel: String,
    pub reports: Vec<LocusReport>,
    pub failures: Vec<SkippedField>,
    pub summary: LocusSummary,
}

fn run_curve_sweep(a: &CurveSweepArgs, caps: &Caps) -> Result<Outcome, RunError> {
    let fields = parse_fields(&a.field)?;
    let opts = SweepOptions { sample: a.sample, seed: a.seed, exhaustive_max_q: Some(caps.sweep_q) };
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for &spec in &fields {
        match kernel_over(spec, &a.kernel).and_then(|k| reducibility_locus_sweep(&k, opts)) {
            Ok(r) => reports.push(r),
            Err(e) => failures.push(failure(spec, e)),
        }
    }
    let smallest = reports.iter().min_by_key(|r| r.q);
    let baseline = smallest.map(|r| r.q_times_fraction);
    let summary = LocusSummary {
        weil_violations: reports.iter().map(|r| r.weil_violations).sum(),
        nonempty: reports.iter().all(|r| r.reducible_count > 0),
        proper: reports.iter().all(|r| r.reducible_count < r.total),
        baseline,
        max_q_times_fraction: reports.iter().map(|r| r.q_times_fraction).fold(0.0, f64::max),
        trend_ok: baseline.map(|b| reports.iter().all(|r| r.q_times_fraction <= 2.0 * b)),
    };
    let mut out = Outcome::new(&CurveSweepPayload {
        kernel: a.kernel.clone(),
        reports: reports.clone(),
        failures,
        summary: summary.clone(),
    });
    for r in &reports {
        out.metrics.push(Metric::new(r.q, &a.kernel, "total", r.total as f64));
        out.metrics.push(Metric::new(r.q, &a.kernel, "reducible_count", r.reducible_count as f64));
        out.metrics.push(Metric::new(r.q, &a.kernel, "fraction", r.fraction));
        out.metrics.push(Metric::new(r.q, &a.kernel, "q_times_fraction", r.q_times_fraction));
        out.metrics.push(Metric::new(r.q, &a.kernel, "weil_violations", r.weil_violations as f64));
        out.metrics.push(Metric::new(r.q, &a.kernel, "max_weil_ratio", r.max_weil_ratio));
        if r.weil_violations > 0 {
            out.violations.push(format!(
                "q={}: {} absolutely irreducible curves outside the Weil interval",
                r.q, r.weil_violations
            ));
        }
        if r.reducible_count == r.total && r.total > 0 {
            out.violations.push(format!("q={}: every sampled curve is reducible", r.q));
        }
    }
    out.rows = Some(reports.iter().map(|r| serde_json::to_value(r).unwrap()).collect());
    out.all_failed = reports.is_empty();
    Ok(out)
}

fn run_incidence(a: &IncidenceArgs) -> Result<Outcome, RunError> {
    let fields = parse_fields(&a.field)?;
    let (family, label) = match a.theorem {
        1 => (SweepFamily::Lines, "lines".to_string()),
        2 => (SweepFamily::PolyGraphs { n: a.degree }, format!("poly-graphs:n={}", a.degree)),
        3 => (SweepFamily::Kernel { expr: a.kernel.clone() }, a.kernel.clone()),
        t => return Err(Error::InvalidArgument(format!("--theorem must be 1, 2 or 3, got {t}")).into()),
    };
    if a.trials == 0 {
        return Err(Error::InvalidArgument("--trials must be positive".into()).into());
    }
    let sizes = (!a.sizes.is_empty()).then_some(a.sizes.as_slice());
    let sweep: IncidenceSweep = theorem_sweep(&family, &fields, a.trials, sizes, a.seed);
    let mut out = Outcome::new(&sweep);
    for s in &sweep.summary {
        out.metrics.push(Metric::new(s.q, &label, "instances", s.instances as f64));
        out.metrics.push(Metric::new(s.q, &label, "max_ratio", s.max_ratio));
        if let Some(l) = s.lambda2_abs {
            out.metrics.push(Metric::new(s.q, &label, "lambda2_abs", l));
        }
        out.metrics.push(Metric::new(s.q, &label, "bound_violations", s.bound_violations as f64));
        out.metrics.push(Metric::new(s.q, &label, "mixing_violations", s.mixing_violations as f64));
        if s.bound_violations > 0 {
            out.violations.push(format!("{}: {} instances exceed the incidence bound", s.field, s.bound_violations));
        }
        if s.mixing_violations > 0 {
            out.violations.push(format!("{}: {} instances exceed the mixing bound", s.field, s.mixing_violations));
        }
    }
    out.rows = Some(sweep.rows.iter().map(|r| serde_json::to_value(r).unwrap()).collect());
    out.all_failed = sweep.summary.is_empty();
    Ok(out)
}

fn parse_preset(s: &str) -> Result<u32, Error> {
    let bad = || Error::Parse(format!("unknown preset `{s}` (expected erdos:k=K)"));
    let k = s.strip_prefix("erdos:k=").ok_or_else(bad)?;
    k.trim().parse().map_err(|_| bad())
}

fn run_expand(a: &ExpandArgs) -> Result<Outcome, RunError> {
    let fields = parse_fields(&a.field)?;
    let settings: Vec<SetSizes> = if !a.sizes.is_empty() {
        let s: [usize; 3] = a
            .sizes
            .as_slice()
            .try_into()
            .map_err(|_| Error::InvalidArgument("--sizes takes exactly three values".into()))?;
        vec![SetSizes::Sizes(s)]
    } else {
        if a.densities.is_empty() || a.densities.iter().any(|d| !(*d > 0.0 && *d <= 1.0)) {
            return Err(Error::InvalidArgument("densities must lie in (0, 1]".into()).into());
        }
        a.densities.iter().map(|&d| SetSizes::Densities([d; 3])).collect()
    };
    let custom = [&a.f, &a.g, &a.h, &a.j];
    let sweep: ExpansionSweep = match (&a.preset, custom.iter().any(|p| p.is_some())) {
        (Some(_), true) => {
            return Err(Error::InvalidArgument("use either --preset or --F/--G/--H/--J".into()).into());
        }
        (Some(p), false) => {
            let k = parse_preset(p)?;
            expansion_sweep(&format!("(x-y)^{k} + z"), |ctx| erdos_polynomial(ctx, k), &fields, &settings, a.trials, a.seed)
        }
        (None, _) => {
            let [f, g, h, j] = custom.map(|p| p.clone());
            let f = f.ok_or_else(|| Error::InvalidArgument("--F is required without --preset".into()))?;
            let g = g.ok_or_else(|| Error::InvalidArgument("--G is required without --preset".into()))?;
            let h = h.ok_or_else(|| Error::InvalidArgument("--H is required without --preset".into()))?;
            let j = j.unwrap_or_else(|| "0".into());
            let label = format!("F={f}; G={g}; H={h}; J={j}");
            // Parse once over the first field so malformed input fails fast.
            build_custom(&make_field_from_spec(fields[0])?, &f, &g, &h, &j)?;
            expansion_sweep(&label, |ctx| build_custom(ctx, &f, &g, &h, &j), &fields, &settings, a.trials, a.seed)
        }
    };
    let mut out = Outcome::new(&sweep);
    for s in &sweep.summary {
        let tag = format!("{}x{}x{}", s.sizes[0], s.sizes[1], s.sizes[2]);
        out.metrics.push(Metric::new(s.q, &sweep.polynomial, format!("mean_missing[{tag}]"), s.mean_missing));
        out.metrics.push(Metric::new(s.q, &sweep.polynomial, format!("max_missing[{tag}]"), s.max_missing as f64));
        out.metrics.push(Metric::new(s.q, &sweep.polynomial, format!("mean_ratio[{tag}]"), s.mean_ratio));
        if s.zero_incidence_failures > 0 {
            out.violations.push(format!(
                "{} sizes {tag}: {} trials break the zero-incidence identity",
                s.field, s.zero_incidence_failures
            ));
        }
    }
    for t in &sweep.trends {
        out.metrics.push(Metric::new(t.q, &sweep.polynomial, "monotone_in_density", t.monotone_in_density as u8 as f64));
    }
    out.rows = Some(sweep.rows.iter().map(|r| serde_json::to_value(r).unwrap()).collect());
    out.all_failed = sweep.summary.is_empty();
    Ok(out)
}

fn build_custom(
    ctx: &Arc<FieldCtx>,
    f: &str,
    g: &str,
    h: &str,
    j: &str,
) -> Result<ffexpand::expansion::TernaryPolySpec, Error> {
    let k = SymmetricKernel::parse(ctx, f)?;
    let g = MultiPoly::parse_with_vars(ctx, g, &["y", "z"])?;
    let h = MultiPoly::parse_with_vars(ctx, h, &["y", "z"])?;
    let j = MultiPoly::parse_with_vars(ctx, j, &["x"])?;
    build_ternary(&k, &g, &h, &j)
}

#[derive(Serialize, Deserialize, JsonSchema, Debug, Clone, PartialEq)]
pub struct CompositionFieldReport {
    pub field: String,
    pub constructed: LemmaHarnessReport,
    pub exhaustive: Option<LemmaHarnessReport>,
    pub additive: Option<AdditiveEquivalenceReport>,
}

#[derive(Serialize, Deserialize, JsonSchema, Debug, Clone, PartialEq)]
pub struct CompositionPayload {
    pub fields: Vec<CompositionFieldReport>,
    pub failures: Vec<SkippedField>,
}

/// Polynomial counts above this are not enumerated by default.
const ENUMERATION_LIMIT: u128 = 1_000_000;

fn run_composition(a: &CompositionArgs) -> Result<Outcome, RunError> {
    let fields = parse_fields(&a.field)?;
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for &spec in &fields {
        let ctx = match make_field_from_spec(spec) {
            Ok(c) => c,
            Err(e) => {
                failures.push(failure(spec, e));
                continue;
            }
        };
        let q = ctx.q() as u128;
        let constructed = constructed_trials(&ctx, a.trials, a.seed);
        let exhaustive = (a.exhaustive && q.pow(a.max_deg as u32 + 1) <= 10_000).then(|| exhaustive_scan(&ctx, a.max_deg));
        if a.exhaustive && exhaustive.is_none() {
            failures.push(failure(spec, "exhaustive scan skipped: too many polynomials"));
        }
        let additive_deg = a.additive_max_deg.or_else(|| (ctx.n() == 1).then(|| (ctx.p() * ctx.p()) as usize));
        let additive = additive_deg.and_then(|d| {
            let count = q.checked_pow(d as u32 + 1).unwrap_or(u128::MAX);
            (count <= ENUMERATION_LIMIT || a.additive_max_deg.is_some()).then(|| additive_equivalence(&ctx, d))
        });
        reports.push(CompositionFieldReport { field: spec.to_string(), constructed, exhaustive, additive });
    }
    let mut out = Outcome::new(&CompositionPayload { fields: reports.clone(), failures });
    for r in &reports {
        let q = make_field_from_spec(r.field.parse()?)?.q() as u64;
        let label = "composition";
        out.metrics.push(Metric::new(q, label, "constructed_instances", r.constructed.instances as f64));
        out.metrics.push(Metric::new(q, label, "constructed_counterexamples", r.constructed.counterexamples as f64));
        let mut bad = r.constructed.counterexamples + (r.constructed.conclusion_true < r.constructed.instances) as u64;
        if let Some(e) = &r.exhaustive {
            out.metrics.push(Metric::new(q, label, "exhaustive_instances", e.instances as f64));
            out.metrics.push(Metric::new(q, label, "exhaustive_counterexamples", e.counterexamples as f64));
            bad += e.counterexamples;
        }
        if let Some(ad) = &r.additive {
            out.metrics.push(Metric::new(q, label, "additive_polynomials", ad.polynomials as f64));
            out.metrics.push(Metric::new(q, label, "additive_disagreements", ad.disagreements as f64));
            bad += ad.disagreements;
        }
        if bad > 0 {
            out.violations.push(format!("{}: composition or additivity check failed", r.field));
        }
    }
    out.all_failed = reports.is_empty();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trend_uses_three_smallest_fields() {
        let (b, ok) = bounded_trend(&[(49, 0.5), (7, 0.9), (9, 0.4), (11, 0.8), (13, 0.95)]);
        assert_eq!(b, Some(0.9));
        assert_eq!(ok, Some(true));
        let (_, ok) = bounded_trend(&[(7, 0.1), (9, 0.1), (11, 0.1), (13, 0.3)]);
        assert_eq!(ok, Some(false));
        assert_eq!(bounded_trend(&[]), (None, None));
    }

    #[test]
    fn preset_syntax() {
        assert_eq!(parse_preset("erdos:k=3").unwrap(), 3);
        assert!(parse_preset("erdos").is_err());
        assert!(parse_preset("other:k=2").is_err());
    }
}
