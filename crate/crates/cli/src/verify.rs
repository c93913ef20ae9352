use std::sync::Arc;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use ffexpand::composition::{additive_equivalence, constructed_trials};
use ffexpand::curves::{reducibility_locus_sweep, SweepOptions};
use ffexpand::expansion::{erdos_preset, SetSizes};
use ffexpand::field::make_field_from_spec;
use ffexpand::graph::{
    cube_identity_audit, exact_eigenvalues, mixing_check, spectrum, trace_identities, IncidenceGraph, SpectralMethod,
    SpectralOptions,
};
use ffexpand::incidence::{incidences, CurveSet, PointSet};
use ffexpand::{FieldSpec, SymmetricKernel};

use crate::config::{Caps, VerifyArgs};
use crate::output::{fmt12, Metric};
use crate::run::{Outcome, RunError};

#[derive(Serialize, Deserialize, JsonSchema, Debug, Clone, PartialEq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Serialize, Deserialize, JsonSchema, Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Serialize, Deserialize, JsonSchema, Debug, Clone, PartialEq)]
pub struct VerifyPayload {
    pub field: String,
    pub kernel: String,
    pub q: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// Cube audit samples this many tuples above the exhaustive cap.
const CUBE_SAMPLE: u64 = 1000;
/// Budget for the additive enumeration.
const ADDITIVE_BUDGET: u128 = 200_000;

fn method_name(m: SpectralMethod) -> &'static str {
    match m {
        SpectralMethod::Exact => "exact",
        SpectralMethod::Iterative => "iterative",
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: &str, ok: bool, detail: String) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.0.push(Check { name: name.into(), status, detail });
    }
    fn skip(&mut self, name: &str, detail: impl Into<String>) {
        self.0.push(Check { name: name.into(), status: Status::Skipped, detail: detail.into() });
    }
}

pub fn run_verify(a: &VerifyArgs, caps: &Caps) -> Result<Outcome, RunError> {
    let spec: FieldSpec = a.field.parse()?;
    let ctx = make_field_from_spec(spec)?;
    let kernel = Arc::new(SymmetricKernel::parse(&ctx, &a.kernel)?);
    let g = IncidenceGraph::build_capped(&kernel, caps.graph_q)?;
    let q = ctx.q() as u64;
    let qf = q as f64;
    let mut c = Checks(Vec::new());

    let regular = g.validate();
    c.push("regularity", regular.is_ok(), match &regular {
        Ok(()) => format!("{} vertices, every row sum is {q}, adjacency symmetric", g.num_vertices()),
        Err(e) => e.to_string(),
    });

    let opts = SpectralOptions { dense_max_q: caps.dense_q, seed: a.seed, ..Default::default() };
    let iter = spectrum(&g, SpectralMethod::Iterative, &opts)?;
    let exact = if q <= caps.dense_q as u64 { Some(exact_eigenvalues(&g, caps.dense_q)?) } else { None };
    let exact_report = match exact {
        Some(_) => Some(spectrum(&g, SpectralMethod::Exact, &opts)?),
        None => None,
    };
    let best = exact_report.as_ref().unwrap_or(&iter);
    c.push(
        "principal-eigenvalue",
        (best.lambda1 - qf).abs() <= 1e-6 * qf,
        format!("lambda1 = {} ({})", fmt12(best.lambda1), method_name(best.method)),
    );
    match &exact_report {
        Some(e) => {
            let diff = (e.lambda2_abs - iter.lambda2_abs).abs();
            c.push(
                "method-agreement",
                diff <= 1e-6 * e.lambda2_abs.max(1.0),
                format!("|lambda2| exact {} iterative {}", fmt12(e.lambda2_abs), fmt12(iter.lambda2_abs)),
            );
        }
        None => c.skip("method-agreement", format!("q above dense cap {}", caps.dense_q)),
    }
    match &exact {
        Some(ev) => {
            let t = trace_identities(&g, ev);
            c.push(
                "trace",
                t.holds(1e-4),
                format!(
                    "loops {} trace {} sum of squares {} (expected {})",
                    t.loops,
                    fmt12(t.sum_eigenvalues),
                    fmt12(t.sum_squares),
                    t.expected_sum_squares
                ),
            );
        }
        None => c.skip("trace", "needs the full spectrum"),
    }

    let sample = (q > caps.sweep_q as u64).then_some(CUBE_SAMPLE);
    let cube = cube_identity_audit(&g, sample, a.seed)?;
    c.push(
        "cube-identity",
        cube.mismatches == 0,
        format!("{} of {} tuples mismatched", cube.mismatches, cube.checked),
    );

    let lambda2 = best.lambda2_abs;
    let mix = mixing_check(&g, lambda2, a.trials, a.seed);
    c.push(
        "mixing",
        mix.violations == 0,
        format!("{} of {} pairs exceed the bound, max ratio {}", mix.violations, mix.trials, fmt12(mix.max_ratio)),
    );

    let locus = reducibility_locus_sweep(
        &kernel,
        SweepOptions {
            sample: (q > caps.sweep_q as u64).then_some(a.trials),
            seed: a.seed,
            exhaustive_max_q: Some(caps.sweep_q),
        },
    )?;
    c.push(
        "weil",
        locus.weil_violations == 0,
        format!("{} of {} irreducible curves outside the interval", locus.weil_violations, locus.weil_checked),
    );
    c.push(
        "locus-proper",
        locus.reducible_count < locus.total,
        format!("{} of {} curves reducible", locus.reducible_count, locus.total),
    );

    let full = incidences(&PointSet::all(&ctx), &CurveSet::all_kernel_curves(&kernel))?;
    c.push(
        "incidence-full",
        full.incidences == q * q * q,
        format!("{} incidences between all points and all curves", full.incidences),
    );

    let lemma = constructed_trials(&ctx, a.trials, a.seed);
    c.push(
        "composition",
        lemma.counterexamples == 0 && lemma.conclusion_true == lemma.instances,
        format!("{} constructed instances, {} counterexamples", lemma.instances, lemma.counterexamples),
    );

    if ctx.n() == 1 {
        let p = ctx.p() as usize;
        let mut deg = p * p;
        while deg > 1 && (q as u128).checked_pow(deg as u32 + 1).is_none_or(|c| c > ADDITIVE_BUDGET) {
            deg -= 1;
        }
        let ad = additive_equivalence(&ctx, deg);
        c.push(
            "additive",
            ad.disagreements == 0,
            format!("degree <= {deg}: {} polynomials, {} disagreements", ad.polynomials, ad.disagreements),
        );
    } else {
        c.skip("additive", "prime fields only");
    }

    match erdos_preset(2, spec, SetSizes::Densities([0.5; 3]), a.seed) {
        Ok(r) => {
            let holds = r.crosscheck.as_ref().is_none_or(|x| x.holds);
            c.push("expansion", holds, format!("{} values missing from the image", r.missing));
        }
        Err(e) => c.skip("expansion", e.to_string()),
    }

    let checks = c.0;
    let passed = checks.iter().all(|x| x.status != Status::Fail);
    let payload = VerifyPayload { field: spec.to_string(), kernel: a.kernel.clone(), q, passed, checks: checks.clone() };
    let mut out = Outcome::new(&payload);
    for x in &checks {
        if x.status != Status::Skipped {
            out.metrics.push(Metric::new(q, &a.kernel, x.name.clone(), (x.status == Status::Pass) as u8 as f64));
        }
        if x.status == Status::Fail {
            out.violations.push(format!("{}: {}", x.name, x.detail));
        }
    }
    out.rows = Some(checks.iter().map(|x| serde_json::to_value(x).unwrap()).collect());
    Ok(out)
}
