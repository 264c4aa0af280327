// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, BTreeSet};

use crate::dsl::{GateKind, Pin};

use super::{ConfigSpec, Net, Netlist, NetlistError, OutputRef, Sink, Source, TruthTable, INPUTS};

/// Where an active config reads its result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutputDriver {
    /// An output terminal fed by the named net.
    Net(String),
    /// A gate output named directly by the config.
    Gate(String),
}

/// One config of a netlist with its cluster set applied.
///
/// Nets outside the enabled clusters are disconnected. Gates are the fan-in
/// cone of the config output, held in topological order.
#[derive(Debug, Clone)]
pub struct ActiveCircuit<'n> {
    netlist: &'n Netlist,
    config: &'n ConfigSpec,
    active_nets: BTreeSet<&'n str>,
    pin_drivers: BTreeMap<(&'n str, Pin), &'n Net>,
    output: OutputDriver,
    order: Vec<String>,
}

impl<'n> ActiveCircuit<'n> {
    pub(crate) fn new(netlist: &'n Netlist, config_id: &str) -> Result<Self, NetlistError> {
        let config = netlist.config(config_id)?;
        let active: Vec<&Net> = netlist.nets.values().filter(|n| config.is_active(n)).collect();

        let mut pin_drivers = BTreeMap::new();
        let mut output_net = None;
        for net in &active {
            for sink in &net.sinks {
                let conflict = match sink {
                    Sink::Pin(g, p) => pin_drivers.insert((g.as_str(), *p), *net).is_some(),
                    Sink::Output(o) if matches!(&config.output, OutputRef::Terminal(t) if t == o) => {
                        output_net.replace(net.id.clone()).is_some()
                    }
                    _ => false,
                };
                if conflict {
                    return Err(NetlistError::ConflictingDrivers { config: config.id.clone(), sink: sink.to_string() });
                }
            }
        }

        let output = match &config.output {
            OutputRef::Terminal(_) => {
                OutputDriver::Net(output_net.ok_or_else(|| NetlistError::OutputUnreachable(config.id.clone()))?)
            }
            OutputRef::Gate(g) => OutputDriver::Gate(g.clone()),
        };

        let mut circuit = ActiveCircuit {
            netlist,
            config,
            active_nets: active.iter().map(|n| n.id.as_str()).collect(),
            pin_drivers,
            output,
            order: Vec::new(),
        };
        circuit.order = circuit.cone_order()?;
        Ok(circuit)
    }

    /// Post-order walk from the output back through gate-driven pins.
    fn cone_order(&self) -> Result<Vec<String>, NetlistError> {
        let mut order = Vec::new();
        let mut done = BTreeSet::new();
        let mut open = BTreeSet::new();
        let Some(root) = self.output_gate().map(str::to_string) else {
            return Ok(order);
        };
        // Explicit stack of (gate, expanded) to keep deep chains off the call stack.
        let mut stack = vec![(root, false)];
        while let Some((gate, expanded)) = stack.pop() {
            if expanded {
                open.remove(&gate);
                if done.insert(gate.clone()) {
                    order.push(gate);
                }
                continue;
            }
            if done.contains(&gate) {
                continue;
            }
            if !open.insert(gate.clone()) {
                return Err(NetlistError::Cycle { config: Some(self.config.id.clone()), gate });
            }
            stack.push((gate.clone(), true));
            let kind = self.netlist.gates[&gate].kind;
            for pin in kind.input_pins().iter().rev() {
                if let Some(Source::Gate(src)) = self.pin_driver(&gate, *pin).map(|n| &n.driver) {
                    if open.contains(src) {
                        return Err(NetlistError::Cycle { config: Some(self.config.id.clone()), gate: src.clone() });
                    }
                    stack.push((src.clone(), false));
                }
            }
        }
        Ok(order)
    }

    pub fn netlist(&self) -> &'n Netlist {
        self.netlist
    }

    pub fn config(&self) -> &'n ConfigSpec {
        self.config
    }

    pub fn config_id(&self) -> &str {
        &self.config.id
    }

    /// Gates feeding the output, each after all of its drivers.
    pub fn gate_order(&self) -> &[String] {
        &self.order
    }

    pub fn contains_gate(&self, gate: &str) -> bool {
        self.order.iter().any(|g| g == gate)
    }

    pub fn gate_kind(&self, gate: &str) -> GateKind {
        self.netlist.gates[gate].kind
    }

    pub fn is_active_net(&self, net: &str) -> bool {
        self.active_nets.contains(net)
    }

    pub fn active_nets(&self) -> impl Iterator<Item = &'n Net> + '_ {
        self.active_nets.iter().map(|id| &self.netlist.nets[*id])
    }

    /// The active net feeding a gate pin, if any.
    pub fn pin_driver(&self, gate: &str, pin: Pin) -> Option<&'n Net> {
        self.pin_drivers.get(&(gate, pin)).copied()
    }

    pub fn output(&self) -> &OutputDriver {
        &self.output
    }

    /// The net driver behind an output terminal; `None` for a gate output.
    pub fn output_source(&self) -> Option<&'n Source> {
        match &self.output {
            OutputDriver::Net(n) => Some(&self.netlist.nets[n].driver),
            OutputDriver::Gate(_) => None,
        }
    }

    /// Gate whose output reaches the config output, if any.
    pub fn output_gate(&self) -> Option<&str> {
        match (&self.output, self.output_source()) {
            (OutputDriver::Gate(g), _) => Some(g),
            (_, Some(Source::Gate(g))) => Some(g),
            _ => None,
        }
    }

    fn read_bool(&self, src: &Source, values: &BTreeMap<&str, bool>, a: bool, b: bool) -> bool {
        match src {
            Source::Bus(bus) => self.netlist.buses.get(bus).is_some_and(|v| *v > 0.0),
            Source::Sensor(s) => (s == "A" && a) || (s == "B" && b),
            Source::Gate(g) => values.get(g.as_str()).copied().unwrap_or(false),
        }
    }

    /// Boolean level of every cone gate output for one input pair.
    pub fn gate_levels(&self, a: bool, b: bool) -> BTreeMap<&str, bool> {
        let mut values: BTreeMap<&str, bool> = BTreeMap::new();
        for gate in &self.order {
            let kind = self.gate_kind(gate);
            let inputs: Vec<bool> = kind
                .input_pins()
                .iter()
                .map(|p| self.pin_driver(gate, *p).is_some_and(|n| self.read_bool(&n.driver, &values, a, b)))
                .collect();
            values.insert(gate.as_str(), kind.eval(&inputs));
        }
        values
    }

    /// Pure boolean evaluation. Unconnected and disabled inputs read 0.
    pub fn boolean_eval(&self, a: bool, b: bool) -> bool {
        let values = self.gate_levels(a, b);
        match &self.output {
            OutputDriver::Net(n) => self.read_bool(&self.netlist.nets[n].driver, &values, a, b),
            OutputDriver::Gate(g) => values.get(g.as_str()).copied().unwrap_or(false),
        }
    }

    pub fn enumerate_truth_table(&self) -> TruthTable {
        let mut t = TruthTable::default();
        for (a, b) in INPUTS {
            t.set(a, b, self.boolean_eval(a, b));
        }
        t
    }
}
