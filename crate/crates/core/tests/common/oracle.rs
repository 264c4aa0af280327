// SPDX-License-Identifier: Apache-2.0

//! Truth tables by direct substitution over the raw net list.

use stitchsim_core::dsl::GateKind;
use stitchsim_core::netlist::{ConfigSpec, Netlist, OutputRef, Sink, Source, TruthTable};

/// Expands the config's output by substitution over the raw net list.
fn substitute(n: &Netlist, cfg: &ConfigSpec, sink: &Sink, a: bool, b: bool) -> bool {
    let mut drivers = n.nets.values().filter(|net| cfg.is_active(net) && net.sinks.contains(sink));
    let net = drivers.next().unwrap_or_else(|| panic!("{sink} undriven in {}", cfg.id));
    assert!(drivers.next().is_none(), "{sink} has two drivers");
    match &net.driver {
        Source::Bus(bus) => n.buses[bus] > 0.0,
        Source::Sensor(s) => match s.as_str() {
            "A" => a,
            "B" => b,
            _ => false,
        },
        Source::Gate(g) => gate_value(n, cfg, g, a, b),
    }
}

fn gate_value(n: &Netlist, cfg: &ConfigSpec, g: &str, a: bool, b: bool) -> bool {
    let kind = n.gates[g].kind;
    let ins: Vec<bool> =
        kind.input_pins().iter().map(|p| substitute(n, cfg, &Sink::Pin(g.to_string(), *p), a, b)).collect();
    match kind {
        GateKind::Not => !ins[0],
        GateKind::And => ins[0] && ins[1],
        GateKind::Or => ins[0] || ins[1],
    }
}

pub fn oracle_table(n: &Netlist, cfg: &ConfigSpec) -> TruthTable {
    TruthTable::from_fn(|a, b| match &cfg.output {
        OutputRef::Terminal(t) => substitute(n, cfg, &Sink::Output(t.clone()), a, b),
        OutputRef::Gate(g) => gate_value(n, cfg, g, a, b),
    })
}
