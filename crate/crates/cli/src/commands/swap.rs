// SPDX-License-Identifier: Apache-2.0

use serde_json::json;
use stitchsim_core::dsl::GateKind;
use stitchsim_core::netlist::verify_truth_table;

use super::truthtable::{config_ids, mismatch_json};
use crate::error::{CliError, CliResult};
use crate::output::{bit, print_json, Table};
use crate::{load, SwapArgs};

pub fn run(args: &SwapArgs) -> CliResult {
    let netlist = load::netlist(&args.circuit)?;
    let kind = GateKind::from_keyword(&args.kind.to_ascii_uppercase())
        .ok_or_else(|| CliError::Usage(format!("--kind {}: expected NOT, AND or OR", args.kind)))?;
    let old = netlist
        .gates
        .get(&args.patch)
        .ok_or_else(|| CliError::Usage(format!("--patch {}: no such patch", args.patch)))?
        .kind;
    let swapped = netlist.swap_patch(&args.patch, kind).map_err(CliError::domain)?;

    let mut failed = Vec::new();
    let mut configs = Vec::new();
    let mut text = format!("swap {}: {old} -> {kind}\n", args.patch);
    for id in config_ids(&swapped, args.config.as_ref())? {
        let c = swapped.activate_config(&id).map_err(CliError::domain)?;
        let computed = c.enumerate_truth_table();
        let declared = &c.config().declared;
        let verdict = verify_truth_table(&computed, declared);
        if !verdict.passed() {
            failed.push(id.clone());
        }
        let mut t = Table::new(&["A", "B", "declared", "computed"]);
        for (a, b, out) in computed.rows() {
            let mark = if out != declared.get(a, b) { "  <-" } else { "" };
            t.row(vec![bit(a), bit(b), bit(declared.get(a, b)), format!("{}{mark}", bit(out))]);
        }
        text.push_str(&format!(
            "\nconfig {id}{}\n",
            if c.contains_gate(&args.patch) { "" } else { " (patch not active)" }
        ));
        text.push_str(&t.render());
        text.push_str(if verdict.passed() { "verify: pass\n" } else { "verify: MISMATCH\n" });
        configs.push(json!({
            "config": id,
            "patch_active": c.contains_gate(&args.patch),
            "declared": declared.bits(),
            "computed": computed.bits(),
            "pass": verdict.passed(),
            "mismatches": mismatch_json(&verdict),
        }));
    }

    if args.out.json {
        print_json(&json!({
            "circuit": swapped.name,
            "patch": args.patch,
            "from": old.keyword(),
            "to": kind.keyword(),
            "configs": configs,
        }));
    } else {
        print!("{text}");
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Domain(format!("truth table mismatch after swap in {}", failed.join(", "))))
    }
}
