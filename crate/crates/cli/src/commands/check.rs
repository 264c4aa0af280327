// SPDX-License-Identifier: Apache-2.0

use serde_json::json;
use stitchsim_core::dsl::{parse_circuit, validate, Severity};
use stitchsim_core::netlist::{elaborate, run_drc};

use crate::error::{CliError, CliResult};
use crate::output::{print_json, Table};
use crate::{load, CheckArgs};

pub fn run(args: &CheckArgs) -> CliResult {
    let src = load::source(&args.circuit)?;
    let ast = match parse_circuit(&src) {
        Ok(ast) => ast,
        Err(diags) => {
            if args.out.json {
                print_json(&json!({ "circuit": src.origin, "ok": false, "diagnostics": diags.0, "drc": [] }));
            } else {
                eprintln!("{diags}");
            }
            return Err(CliError::Domain(format!("{}: {} error(s)", src.origin, diags.errors().count())));
        }
    };
    let warnings = validate(&ast, &src.origin);
    let netlist = elaborate(&ast).map_err(|e| CliError::Domain(format!("{}: {e}", src.origin)))?;
    let drc = run_drc(&netlist);
    let ok = !drc.has_errors();

    if args.out.json {
        print_json(&json!({
            "circuit": netlist.name,
            "ok": ok,
            "diagnostics": warnings,
            "drc": drc.findings,
            "summary": {
                "buses": netlist.buses.len(),
                "sensors": netlist.sensors.len(),
                "patches": netlist.gates.len(),
                "nets": netlist.nets.len(),
                "configs": netlist.config_order,
            },
        }));
    } else {
        for w in &warnings {
            eprintln!("{w}");
        }
        println!(
            "circuit \"{}\": {} buses, {} sensors, {} patches, {} nets, configs {}",
            netlist.name,
            netlist.buses.len(),
            netlist.sensors.len(),
            netlist.gates.len(),
            netlist.nets.len(),
            netlist.config_order.join(", ")
        );
        if drc.findings.is_empty() {
            println!("design rules: clean");
        } else {
            let mut t = Table::new(&["severity", "rule", "subject", "message"]);
            for f in &drc.findings {
                t.row(vec![f.severity.to_string(), f.rule.to_string(), f.subject.clone(), f.message.clone()]);
            }
            print!("{}", t.render());
        }
    }
    if ok {
        Ok(())
    } else {
        let n = drc.findings.iter().filter(|f| f.severity == Severity::Error).count();
        Err(CliError::Domain(format!("{n} design-rule error(s)")))
    }
}
