// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::dsl::{Pin, Severity};

use super::{Netlist, NetlistError, Sink, Source};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DrcRule {
    CombinationalCycle,
    ConflictingDrivers,
    FloatingGateInput,
    OutputUnreachable,
    UnusedPatch,
    VccGndShort,
}

impl DrcRule {
    pub fn id(self) -> &'static str {
        match self {
            DrcRule::CombinationalCycle => "combinational-cycle",
            DrcRule::ConflictingDrivers => "conflicting-drivers",
            DrcRule::FloatingGateInput => "floating-gate-input",
            DrcRule::OutputUnreachable => "output-unreachable",
            DrcRule::UnusedPatch => "unused-patch",
            DrcRule::VccGndShort => "vcc-gnd-short",
        }
    }

    pub fn severity(self) -> Severity {
        match self {
            DrcRule::CombinationalCycle | DrcRule::UnusedPatch => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

impl fmt::Display for DrcRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct DrcFinding {
    pub rule: DrcRule,
    pub severity: Severity,
    pub subject: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DrcReport {
    pub findings: Vec<DrcFinding>,
}

impl DrcReport {
    pub fn passes(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn has_errors(&self) -> bool {
        self.findings.iter().any(|f| f.severity == Severity::Error)
    }
}

/// Runs every design rule. Findings are sorted by rule id then subject.
pub fn run_drc(n: &Netlist) -> DrcReport {
    let mut found: BTreeSet<DrcFinding> = BTreeSet::new();
    let mut add = |rule: DrcRule, subject: String, message: String| {
        found.insert(DrcFinding { rule, severity: rule.severity(), subject, message });
    };

    // Pins that no net reaches in any config.
    for gate in n.gates.values() {
        let pins = gate.kind.input_pins().iter().chain(&[Pin::Vcc, Pin::Gnd]);
        for pin in pins {
            let sink = Sink::Pin(gate.id.clone(), *pin);
            if n.nets_into(&sink).next().is_none() {
                add(DrcRule::FloatingGateInput, sink.to_string(), format!("{sink} is not connected"));
            }
        }
    }

    for net in n.nets.values() {
        let Source::Bus(bus) = &net.driver else { continue };
        let volts = n.buses[bus];
        for sink in &net.sinks {
            let short = match sink {
                Sink::Bus(other) => n.buses[other] != volts,
                Sink::Pin(_, Pin::Vcc) => volts <= 0.0,
                Sink::Pin(_, Pin::Gnd) => volts > 0.0,
                _ => false,
            };
            if short {
                add(DrcRule::VccGndShort, net.id.clone(), format!("net '{}' ties {bus} ({volts} V) to {sink}", net.id));
            }
        }
    }

    if let Some(gate) = n.find_cycle(|_| true) {
        add(
            DrcRule::CombinationalCycle,
            gate.clone(),
            format!("gate '{gate}' lies on a cycle when all clusters are enabled"),
        );
    }

    let mut used = BTreeSet::new();
    for cfg in n.configs_in_order() {
        let active = match n.activate_config(&cfg.id) {
            Ok(a) => a,
            Err(NetlistError::OutputUnreachable(c)) => {
                add(DrcRule::OutputUnreachable, c.clone(), format!("config '{c}' output has no active driver"));
                continue;
            }
            Err(NetlistError::ConflictingDrivers { config, sink }) => {
                add(
                    DrcRule::ConflictingDrivers,
                    sink.clone(),
                    format!("{sink} has several drivers in config '{config}'"),
                );
                continue;
            }
            Err(NetlistError::Cycle { gate, .. }) => {
                add(
                    DrcRule::CombinationalCycle,
                    gate.clone(),
                    format!("gate '{gate}' lies on a cycle in config '{}'", cfg.id),
                );
                continue;
            }
            Err(e) => {
                add(DrcRule::OutputUnreachable, cfg.id.clone(), e.to_string());
                continue;
            }
        };
        if active.output_gate().is_none() && matches!(active.output_source(), None | Some(Source::Bus(_))) {
            add(
                DrcRule::OutputUnreachable,
                cfg.id.clone(),
                format!("config '{}' output is not driven by logic", cfg.id),
            );
        }
        for gate in active.gate_order() {
            used.insert(gate.clone());
            let kind = active.gate_kind(gate);
            for pin in kind.input_pins().iter().chain(&[Pin::Vcc, Pin::Gnd]) {
                if active.pin_driver(gate, *pin).is_none() {
                    let subject = format!("{gate}.{pin}");
                    add(
                        DrcRule::FloatingGateInput,
                        subject.clone(),
                        format!("{subject} has no driver in config '{}'", cfg.id),
                    );
                }
            }
        }
    }

    for gate in n.gates.keys().filter(|g| !used.contains(*g)) {
        add(DrcRule::UnusedPatch, gate.clone(), format!("patch '{gate}' feeds no config output"));
    }

    // One finding per (rule, subject); the first message wins.
    let mut findings: Vec<DrcFinding> = Vec::new();
    for f in found {
        if findings.last().is_some_and(|l| l.rule == f.rule && l.subject == f.subject) {
            continue;
        }
        findings.push(f);
    }
    findings.sort_by(|a, b| (a.rule.id(), &a.subject).cmp(&(b.rule.id(), &b.subject)));
    DrcReport { findings }
}
