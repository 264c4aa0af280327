// SPDX-License-Identifier: Apache-2.0

use serde_json::json;
use stitchsim_core::analog::{default_fault_universe, fault_signatures, faulty_truth_table, localize_fault, propagate};
use stitchsim_core::netlist::{TruthTable, INPUTS};

use crate::error::{CliError, CliResult};
use crate::output::{bit, print_json, volts, Table};
use crate::{load, FaultArgs};

pub fn run(args: &FaultArgs) -> CliResult {
    let netlist = load::netlist(&args.circuit)?;
    let defaults = load::defaults()?;
    let models = load::models(args.calibration.as_ref(), &netlist, &defaults)?;
    let circuit = netlist.activate_config(&args.config).map_err(CliError::usage)?;
    let faults = load::faults(&args.inject)?;
    if let Some(f) = faults.iter().find(|f| !f.applies_to(&circuit)) {
        return Err(CliError::Usage(format!("--inject {f}: subject is not active in config {}", args.config)));
    }

    let nominal = circuit.enumerate_truth_table();
    let faulted = faulty_truth_table(&circuit, &models, &faults);
    let level = |b: bool| if b { models.v_cc } else { 0.0 };
    let mut rows = Vec::new();
    let mut t = Table::new(&["A", "B", "nominal", "faulted", "volts"]);
    for (a, b) in INPUTS {
        let v = propagate(&circuit, &models, (level(a), level(b)), &faults).map_err(CliError::domain)?.output_volts;
        t.row(vec![bit(a), bit(b), bit(nominal.get(a, b)), bit(faulted.get(a, b)), volts(v)]);
        rows.push(json!({ "a": a as u8, "b": b as u8, "nominal": nominal.get(a, b) as u8, "faulted": faulted.get(a, b) as u8, "volts": v }));
    }

    let observed = match &args.observed {
        Some(bits) => TruthTable::from_bits(bits)
            .ok_or_else(|| CliError::Usage(format!("--observed {bits}: expected four 0/1 characters")))?,
        None => faulted,
    };
    let candidates = if args.diagnose {
        let universe = default_fault_universe(&circuit);
        let sigs = fault_signatures(&circuit, &models, &universe);
        Some(localize_fault(&observed, &sigs))
    } else {
        None
    };

    let injected: Vec<String> = faults.iter().map(ToString::to_string).collect();
    if args.out.json {
        print_json(&json!({
            "circuit": netlist.name,
            "config": args.config,
            "injected": injected,
            "nominal": nominal.bits(),
            "faulted": faulted.bits(),
            "observed": observed.bits(),
            "rows": rows,
            "candidates": candidates,
        }));
    } else {
        println!(
            "config {}, injected: {}",
            args.config,
            if injected.is_empty() { "none".to_string() } else { injected.join(", ") }
        );
        print!("{}", t.render());
        if let Some(c) = &candidates {
            println!("\nobserved {} matches {} single fault(s):", observed.bits(), c.len());
            for f in c {
                println!("  {f}");
            }
        }
    }
    match candidates {
        Some(c) if c.is_empty() => Err(CliError::Domain(format!("no single fault explains {}", observed.bits()))),
        _ => Ok(()),
    }
}
