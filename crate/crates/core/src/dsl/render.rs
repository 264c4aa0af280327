// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write;

use super::ast::*;

/// Renders a tree back to canonical `.scx` text. Items are grouped by
/// category (buses, sensors, patches, nets, configs) and keep their
/// declaration order within each group.
pub fn render_circuit(ast: &CircuitAst) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "circuit {} {{", quote(&ast.name));

    for bus in &ast.buses {
        match bus.volts {
            Some(v) => writeln!(out, "  bus {} {} V;", bus.name, v),
            None => writeln!(out, "  bus {};", bus.name),
        }
        .unwrap();
    }
    for s in &ast.sensors {
        writeln!(out, "  sensor {} role = {};", s.id, s.role.keyword()).unwrap();
    }
    for p in &ast.patches {
        writeln!(out, "  patch {} kind = {};", p.id, p.kind).unwrap();
    }
    for n in &ast.nets {
        let sinks: Vec<String> = n.sinks.iter().map(ToString::to_string).collect();
        match &n.cluster {
            Some(c) => write!(out, "  net {} cluster {} : ", n.id, c.node),
            None => write!(out, "  net {} : ", n.id),
        }
        .unwrap();
        writeln!(out, "{} -> {};", n.driver, sinks.join(", ")).unwrap();
    }
    for c in &ast.configs {
        let clusters: Vec<String> = c.clusters.iter().map(|c| c.node.to_string()).collect();
        writeln!(out, "  config {} {{", c.id).unwrap();
        writeln!(out, "    clusters = [{}];", clusters.join(", ")).unwrap();
        writeln!(out, "    output = {};", c.output).unwrap();
        writeln!(out, "    truth {{").unwrap();
        for r in &c.truth {
            writeln!(out, "      {} {} -> {};", r.a as u8, r.b as u8, r.out as u8).unwrap();
        }
        writeln!(out, "    }}").unwrap();
        writeln!(out, "  }}").unwrap();
    }
    out.push_str("}\n");
    out
}

fn quote(s: &str) -> String {
    let mut q = String::with_capacity(s.len() + 2);
    q.push('"');
    for c in s.chars() {
        match c {
            '"' => q.push_str("\\\""),
            '\\' => q.push_str("\\\\"),
            '\n' => q.push_str("\\n"),
            c => q.push(c),
        }
    }
    q.push('"');
    q
}
