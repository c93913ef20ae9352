//! Shipped JSON schemas must match the types; `UPDATE_SCHEMAS=1` rewrites them.

use std::path::PathBuf;

use schemars::schema::RootSchema;
use schemars::schema_for;
use serde_json::Value;

use ffexpand::expansion::ExpansionSweep;
use ffexpand::incidence::IncidenceSweep;

use crate::config::{Caps, CubeAuditArgs, Experiment, SpectrumArgs, VerifyArgs};
use crate::output::{round_floats, ResultRecord};
use crate::run::{run, CompositionPayload, CubeAuditPayload, CurveSweepPayload, SpectrumPayload};
use crate::verify::VerifyPayload;

fn schemas() -> Vec<(&'static str, RootSchema)> {
    vec![
        ("config", schema_for!(Experiment)),
        ("record", schema_for!(ResultRecord)),
        ("spectrum", schema_for!(SpectrumPayload)),
        ("cube-audit", schema_for!(CubeAuditPayload)),
        ("curve-sweep", schema_for!(CurveSweepPayload)),
        ("incidence", schema_for!(IncidenceSweep)),
        ("expand", schema_for!(ExpansionSweep)),
        ("verify", schema_for!(VerifyPayload)),
        ("composition", schema_for!(CompositionPayload)),
    ]
}

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas")
}

fn load(name: &str) -> Value {
    let text = std::fs::read_to_string(dir().join(format!("{name}.schema.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn assert_valid(name: &str, instance: &Value) {
    let schema = load(name);
    let compiled = jsonschema::JSONSchema::compile(&schema).unwrap();
    if let Err(errors) = compiled.validate(instance) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{name} payload does not match its schema: {msgs:?}");
    };
}

#[test]
fn shipped_schemas_are_current() {
    let update = std::env::var_os("UPDATE_SCHEMAS").is_some();
    if update {
        std::fs::create_dir_all(dir()).unwrap();
    }
    for (name, schema) in schemas() {
        let generated = serde_json::to_string_pretty(&schema).unwrap() + "\n";
        let path = dir().join(format!("{name}.schema.json"));
        if update {
            std::fs::write(&path, &generated).unwrap();
        }
        let shipped = std::fs::read_to_string(&path).unwrap_or_default();
        assert_eq!(shipped, generated, "{} is stale; rerun with UPDATE_SCHEMAS=1", path.display());
    }
}

#[test]
fn payloads_validate() {
    let caps = Caps::default();
    let cases = [
        Experiment::Spectrum(SpectrumArgs {
            field: vec!["5".into(), "7".into()],
            kernel: "(a+x)^2".into(),
            method: "iter".into(),
            seed: 1,
        }),
        Experiment::CubeAudit(CubeAuditArgs {
            field: "5".into(),
            kernel: "(a+x)^2".into(),
            sample: Some(50),
            seed: 0,
            inject_fault: false,
        }),
        Experiment::Verify(VerifyArgs { field: "5".into(), kernel: "(a+x)^2".into(), trials: 20, seed: 2 }),
    ];
    for exp in cases {
        let config = serde_json::to_value(&exp).unwrap();
        assert_valid("config", &config);
        let mut out = run(&exp, &caps).unwrap();
        round_floats(&mut out.payload);
        assert_valid(exp.name(), &out.payload);
        let record = ResultRecord::new(exp.hash(), exp.name(), config, out.payload);
        assert_valid("record", &serde_json::to_value(&record).unwrap());
    }
}
