// SPDX-License-Identifier: Apache-2.0

use serde_json::{json, Value};
use stitchsim_core::analog::{propagate, quantize, GateModelSet};
use stitchsim_core::netlist::{verify_truth_table, ActiveCircuit, Netlist, VerifyResult, INPUTS};

use crate::error::{CliError, CliResult};
use crate::output::{bit, print_json, volts, Table};
use crate::{load, TruthtableArgs};

/// Selected config ids, in declaration order.
pub fn config_ids(netlist: &Netlist, only: Option<&String>) -> CliResult<Vec<String>> {
    match only {
        Some(id) => {
            netlist.config(id).map_err(CliError::usage)?;
            Ok(vec![id.clone()])
        }
        None => Ok(netlist.config_order.clone()),
    }
}

/// Bench output volts for each ideal input row.
pub fn analog_rows(c: &ActiveCircuit<'_>, models: &GateModelSet) -> CliResult<Vec<f64>> {
    let level = |b: bool| if b { models.v_cc } else { 0.0 };
    INPUTS
        .iter()
        .map(|&(a, b)| Ok(propagate(c, models, (level(a), level(b)), &[]).map_err(CliError::domain)?.output_volts))
        .collect()
}

pub fn mismatch_json(v: &VerifyResult) -> Value {
    match v {
        VerifyResult::Pass => json!([]),
        VerifyResult::Mismatch(rows) => rows
            .iter()
            .map(
                |r| json!({"a": r.a as u8, "b": r.b as u8, "declared": r.declared as u8, "computed": r.computed as u8}),
            )
            .collect(),
    }
}

pub fn run(args: &TruthtableArgs) -> CliResult {
    let netlist = load::netlist(&args.circuit)?;
    let defaults = load::defaults()?;
    let threshold = load::threshold(args.threshold, &defaults)?;
    let models = load::models(args.calibration.as_ref(), &netlist, &defaults)?;

    let mut failed = Vec::new();
    let mut configs = Vec::new();
    let mut text = String::new();
    for id in config_ids(&netlist, args.config.as_ref())? {
        let c = netlist.activate_config(&id).map_err(CliError::domain)?;
        let computed = c.enumerate_truth_table();
        let declared = &c.config().declared;
        let verdict = verify_truth_table(&computed, declared);
        let analog = analog_rows(&c, &models)?;
        if !verdict.passed() {
            failed.push(id.clone());
        }

        let clusters: Vec<u8> = c.config().clusters.iter().copied().collect();
        let mut t = Table::new(&["A", "B", "declared", "computed", "volts", "analog"]);
        let mut rows = Vec::new();
        for (k, (a, b, out)) in computed.rows().enumerate() {
            let v = analog[k];
            t.row(vec![bit(a), bit(b), bit(declared.get(a, b)), bit(out), volts(v), bit(quantize(v, threshold))]);
            rows.push(json!({ "a": a as u8, "b": b as u8, "out": out as u8, "volts": v, "analog_bit": quantize(v, threshold) as u8 }));
        }
        let cl: Vec<String> = clusters.iter().map(u8::to_string).collect();
        text.push_str(&format!("config {id} (clusters {})\n", cl.join(",")));
        text.push_str(&t.render());
        text.push_str(if verdict.passed() { "verify: pass\n\n" } else { "verify: MISMATCH\n\n" });
        configs.push(json!({
            "config": id,
            "clusters": clusters,
            "declared": declared.bits(),
            "computed": computed.bits(),
            "pass": verdict.passed(),
            "mismatches": mismatch_json(&verdict),
            "rows": rows,
        }));
    }

    if args.out.json {
        print_json(&json!({ "circuit": netlist.name, "threshold": threshold, "configs": configs }));
    } else {
        print!("{}", text.trim_end_matches('\n').to_string() + "\n");
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Domain(format!("truth table mismatch in {}", failed.join(", "))))
    }
}
