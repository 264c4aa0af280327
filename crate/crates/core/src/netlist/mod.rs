// SPDX-License-Identifier: Apache-2.0

//! Elaborated gate graph, field-programmable reconfiguration and boolean
//! evaluation.
//!
//! A [`Netlist`] is built once from a parsed circuit and never mutated.
//! Reconfiguration produces new values: [`Netlist::activate_config`] selects
//! the nets enabled by one cluster set, and [`Netlist::swap_patch`] returns a
//! copy with one gate patch replaced.

mod active;
mod alias;
mod drc;
mod truth;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::dsl::{CircuitAst, Endpoint, GateKind, Pin, SensorRole};

pub use active::{ActiveCircuit, OutputDriver};
pub use alias::AliasMap;
pub use drc::{run_drc, DrcFinding, DrcReport, DrcRule};
pub use truth::{verify_truth_table, RowMismatch, TruthTable, VerifyResult, INPUTS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetlistError {
    #[error("combinational cycle through gate '{gate}'{}", config_suffix(.config))]
    Cycle { config: Option<String>, gate: String },
    #[error("endpoint '{0}' does not resolve to a patch pin, bus, sensor or output")]
    Unresolved(String),
    #[error("unknown config '{0}'")]
    UnknownConfig(String),
    #[error("unknown patch '{0}'")]
    UnknownPatch(String),
    #[error("cannot swap patch '{patch}' from {from} to {to}: pin arity differs")]
    PinArity { patch: String, from: GateKind, to: GateKind },
    #[error("output of config '{0}' has no active driver")]
    OutputUnreachable(String),
    #[error("'{sink}' has more than one active driver in config '{config}'")]
    ConflictingDrivers { config: String, sink: String },
}

fn config_suffix(config: &Option<String>) -> String {
    match config {
        Some(c) => format!(" in config '{c}'"),
        None => String::new(),
    }
}

/// What drives a net.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Source {
    Bus(String),
    Sensor(String),
    Gate(String),
}

/// Where a net delivers its signal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sink {
    Pin(String, Pin),
    Bus(String),
    Output(String),
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Bus(n) | Source::Sensor(n) => f.write_str(n),
            Source::Gate(g) => write!(f, "{g}.out"),
        }
    }
}

impl fmt::Display for Sink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sink::Pin(g, p) => write!(f, "{g}.{p}"),
            Sink::Bus(n) | Sink::Output(n) => f.write_str(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Net {
    pub id: String,
    pub cluster: Option<u8>,
    pub driver: Source,
    pub sinks: Vec<Sink>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub id: String,
    pub kind: GateKind,
}

/// Node a config reads its result from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutputRef {
    Terminal(String),
    Gate(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigSpec {
    pub id: String,
    pub clusters: BTreeSet<u8>,
    pub output: OutputRef,
    pub declared: TruthTable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Netlist {
    pub name: String,
    pub buses: BTreeMap<String, f64>,
    pub sensors: BTreeMap<String, SensorRole>,
    pub gates: BTreeMap<String, Gate>,
    pub nets: BTreeMap<String, Net>,
    pub outputs: BTreeSet<String>,
    pub cluster_index: BTreeMap<u8, BTreeSet<String>>,
    pub configs: BTreeMap<String, ConfigSpec>,
    /// Config ids in declaration order.
    pub config_order: Vec<String>,
}

/// Builds the gate graph for a validated circuit.
pub fn elaborate(ast: &CircuitAst) -> Result<Netlist, NetlistError> {
    let buses: BTreeMap<String, f64> =
        ast.buses.iter().map(|b| (b.name.node.clone(), b.volts.unwrap_or(0.0))).collect();
    let sensors: BTreeMap<String, SensorRole> = ast.sensors.iter().map(|s| (s.id.node.clone(), s.role)).collect();
    let gates: BTreeMap<String, Gate> =
        ast.patches.iter().map(|p| (p.id.node.clone(), Gate { id: p.id.node.clone(), kind: p.kind })).collect();
    let outputs: BTreeSet<String> = ast
        .configs
        .iter()
        .filter_map(|c| match &c.output {
            Endpoint::Name(n) => Some(n.node.clone()),
            Endpoint::Pin { .. } => None,
        })
        .collect();

    let resolve_pin = |patch: &str, pin: &str| -> Result<(String, Pin), NetlistError> {
        let unresolved = || NetlistError::Unresolved(format!("{patch}.{pin}"));
        let gate = gates.get(patch).ok_or_else(unresolved)?;
        let pin = Pin::from_name(pin).filter(|p| gate.kind.has_pin(*p)).ok_or_else(unresolved)?;
        Ok((patch.to_string(), pin))
    };

    let mut nets = BTreeMap::new();
    let mut cluster_index: BTreeMap<u8, BTreeSet<String>> = BTreeMap::new();
    for n in &ast.nets {
        let driver = match &n.driver {
            Endpoint::Pin { patch, pin } => {
                let (g, p) = resolve_pin(&patch.node, &pin.node)?;
                if p != Pin::Out {
                    return Err(NetlistError::Unresolved(format!("{g}.{p}")));
                }
                Source::Gate(g)
            }
            Endpoint::Name(name) if buses.contains_key(&name.node) => Source::Bus(name.node.clone()),
            Endpoint::Name(name) if sensors.contains_key(&name.node) => Source::Sensor(name.node.clone()),
            Endpoint::Name(name) => return Err(NetlistError::Unresolved(name.node.clone())),
        };
        let sinks = n
            .sinks
            .iter()
            .map(|s| match s {
                Endpoint::Pin { patch, pin } => {
                    let (g, p) = resolve_pin(&patch.node, &pin.node)?;
                    Ok(Sink::Pin(g, p))
                }
                Endpoint::Name(name) if buses.contains_key(&name.node) => Ok(Sink::Bus(name.node.clone())),
                Endpoint::Name(name) if outputs.contains(&name.node) => Ok(Sink::Output(name.node.clone())),
                Endpoint::Name(name) => Err(NetlistError::Unresolved(name.node.clone())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let cluster = n.cluster.as_ref().map(|c| c.node);
        if let Some(c) = cluster {
            cluster_index.entry(c).or_default().insert(n.id.node.clone());
        }
        nets.insert(n.id.node.clone(), Net { id: n.id.node.clone(), cluster, driver, sinks });
    }

    let mut configs = BTreeMap::new();
    let mut config_order = Vec::new();
    for c in &ast.configs {
        let output = match &c.output {
            Endpoint::Name(n) => OutputRef::Terminal(n.node.clone()),
            Endpoint::Pin { patch, pin } => {
                let (g, _) = resolve_pin(&patch.node, &pin.node)?;
                OutputRef::Gate(g)
            }
        };
        let mut declared = TruthTable::default();
        for r in &c.truth {
            declared.set(r.a, r.b, r.out);
        }
        config_order.push(c.id.node.clone());
        configs.insert(
            c.id.node.clone(),
            ConfigSpec {
                id: c.id.node.clone(),
                clusters: c.clusters.iter().map(|c| c.node).collect(),
                output,
                declared,
            },
        );
    }

    let netlist =
        Netlist { name: ast.name.clone(), buses, sensors, gates, nets, outputs, cluster_index, configs, config_order };

    if let Some(gate) = netlist.find_cycle(|n| n.cluster.is_none()) {
        return Err(NetlistError::Cycle { config: None, gate });
    }
    for cfg in netlist.configs.values() {
        if let Some(gate) = netlist.find_cycle(|n| cfg.is_active(n)) {
            return Err(NetlistError::Cycle { config: Some(cfg.id.clone()), gate });
        }
    }
    Ok(netlist)
}

impl ConfigSpec {
    pub fn is_active(&self, net: &Net) -> bool {
        net.cluster.is_none_or(|c| self.clusters.contains(&c))
    }
}

impl Netlist {
    /// Gate ids whose output feeds `gate` through nets accepted by `filter`.
    pub(crate) fn fanin<'a>(
        &'a self,
        gate: &'a str,
        filter: impl Fn(&Net) -> bool + 'a,
    ) -> impl Iterator<Item = &'a str> + 'a {
        self.nets.values().filter(move |n| filter(n)).filter_map(move |n| match &n.driver {
            Source::Gate(src) if n.sinks.iter().any(|s| matches!(s, Sink::Pin(g, _) if g == gate)) => {
                Some(src.as_str())
            }
            _ => None,
        })
    }

    /// Returns a gate on a cycle of the graph restricted to nets accepted by
    /// `filter`, or `None` when that graph is acyclic.
    pub(crate) fn find_cycle(&self, filter: impl Fn(&Net) -> bool + Copy) -> Option<String> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Open,
            Done,
        }
        fn visit(
            nl: &Netlist,
            g: &str,
            marks: &mut BTreeMap<String, Mark>,
            filter: impl Fn(&Net) -> bool + Copy,
        ) -> Option<String> {
            match marks.get(g) {
                Some(Mark::Done) => return None,
                Some(Mark::Open) => return Some(g.to_string()),
                None => {}
            }
            marks.insert(g.to_string(), Mark::Open);
            let preds: BTreeSet<&str> = nl.fanin(g, filter).collect();
            for p in preds {
                if let Some(c) = visit(nl, p, marks, filter) {
                    return Some(c);
                }
            }
            marks.insert(g.to_string(), Mark::Done);
            None
        }
        let mut marks = BTreeMap::new();
        self.gates.keys().find_map(|g| visit(self, g, &mut marks, filter))
    }

    pub fn config(&self, id: &str) -> Result<&ConfigSpec, NetlistError> {
        self.configs.get(id).ok_or_else(|| NetlistError::UnknownConfig(id.to_string()))
    }

    /// Configs in declaration order.
    pub fn configs_in_order(&self) -> impl Iterator<Item = &ConfigSpec> {
        self.config_order.iter().map(|id| &self.configs[id])
    }

    /// Nets whose sinks include the given pin, in id order.
    pub fn nets_into(&self, sink: &Sink) -> impl Iterator<Item = &Net> {
        let sink = sink.clone();
        self.nets.values().filter(move |n| n.sinks.contains(&sink))
    }

    /// Replaces one patch with another gate kind of the same pin arity.
    pub fn swap_patch(&self, patch: &str, new_kind: GateKind) -> Result<Netlist, NetlistError> {
        let gate = self.gates.get(patch).ok_or_else(|| NetlistError::UnknownPatch(patch.to_string()))?;
        if gate.kind.arity() != new_kind.arity() {
            return Err(NetlistError::PinArity { patch: patch.to_string(), from: gate.kind, to: new_kind });
        }
        let mut out = self.clone();
        out.gates.get_mut(patch).expect("checked above").kind = new_kind;
        Ok(out)
    }

    pub fn activate_config(&self, config: &str) -> Result<ActiveCircuit<'_>, NetlistError> {
        ActiveCircuit::new(self, config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse_circuit, SourceText};
    use crate::reference;

    fn build(src: &str) -> Result<Netlist, NetlistError> {
        elaborate(&parse_circuit(&SourceText::inline(src)).unwrap())
    }

    #[test]
    fn reference_gate_sets_per_config() {
        let nl = reference::netlist();
        assert_eq!(nl.gates.len(), 8);
        let c1 = nl.activate_config("circuit1").unwrap();
        let c2 = nl.activate_config("circuit2").unwrap();
        let set = |c: &ActiveCircuit| c.gate_order().iter().cloned().collect::<BTreeSet<_>>();
        let want1: BTreeSet<String> = ["NOT1", "NOT2", "AND1", "AND2", "OR1"].iter().map(|s| s.to_string()).collect();
        let want2: BTreeSet<String> = ["NOT3", "AND3", "OR2"].iter().map(|s| s.to_string()).collect();
        assert_eq!(set(&c1), want1);
        assert_eq!(set(&c2), want2);
        assert_eq!(nl.cluster_index.keys().copied().collect::<Vec<_>>(), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn single_not_gate_netlist() {
        let nl = build(
            "circuit \"n\" { sensor A role = exercise; patch N kind = NOT;
             net i cluster 1 : A -> N.in; net o : N.out -> LED;
             config c { clusters = [1]; output = LED; truth { 0 0 -> 1; 0 1 -> 1; 1 0 -> 0; 1 1 -> 0; } } }",
        )
        .unwrap();
        assert_eq!(nl.gates.len(), 1);
        let c = nl.activate_config("c").unwrap();
        assert_eq!(c.enumerate_truth_table().bits(), "1100");
    }

    #[test]
    fn self_loop_is_a_cycle() {
        let err = build(
            "circuit \"loop\" { sensor A role = exercise; patch AND1 kind = AND;
             net i : A -> AND1.b; net l : AND1.out -> AND1.a; }",
        )
        .unwrap_err();
        assert_eq!(err, NetlistError::Cycle { config: None, gate: "AND1".into() });
    }

    #[test]
    fn cycle_inside_one_config() {
        let err = build(
            "circuit \"loop\" { sensor A role = exercise; patch X kind = OR; patch Y kind = OR;
             net i : A -> X.a, Y.a; net xy cluster 1 : X.out -> Y.b; net yx cluster 1 : Y.out -> X.b;
             net o cluster 2 : Y.out -> LED;
             config c { clusters = [1, 2]; output = LED; truth { 0 0 -> 0; 0 1 -> 0; 1 0 -> 1; 1 1 -> 1; } } }",
        )
        .unwrap_err();
        assert!(matches!(err, NetlistError::Cycle { config: Some(ref c), .. } if c == "c"));
    }

    #[test]
    fn swap_changes_only_one_gate() {
        let nl = reference::netlist();
        let swapped = nl.swap_patch("OR2", GateKind::And).unwrap();
        assert_eq!(swapped.gates["OR2"].kind, GateKind::And);
        assert_eq!(nl.gates["OR2"].kind, GateKind::Or);
        let diff: Vec<_> = nl.gates.keys().filter(|g| nl.gates[*g] != swapped.gates[*g]).collect();
        assert_eq!(diff, vec!["OR2"]);
        assert_eq!(swapped.nets, nl.nets);
    }

    #[test]
    fn swap_same_kind_is_identity() {
        let nl = reference::netlist();
        assert_eq!(nl.swap_patch("AND1", GateKind::And).unwrap(), nl);
    }

    #[test]
    fn swap_rejects_arity_change() {
        let nl = reference::netlist();
        assert_eq!(
            nl.swap_patch("NOT1", GateKind::Or).unwrap_err(),
            NetlistError::PinArity { patch: "NOT1".into(), from: GateKind::Not, to: GateKind::Or }
        );
        assert_eq!(nl.swap_patch("XOR9", GateKind::Or).unwrap_err(), NetlistError::UnknownPatch("XOR9".into()));
    }

    #[test]
    fn swapped_or2_becomes_and() {
        // (A and not B) and B is never true
        let swapped = reference::netlist().swap_patch("OR2", GateKind::And).unwrap();
        let c2 = swapped.activate_config("circuit2").unwrap();
        let t = c2.enumerate_truth_table();
        assert_eq!(t.bits(), "0000");
        let VerifyResult::Mismatch(rows) = verify_truth_table(&t, &swapped.configs["circuit2"].declared) else {
            panic!("expected mismatch");
        };
        let at: Vec<_> = rows.iter().map(|r| (r.a as u8, r.b as u8)).collect();
        assert_eq!(at, vec![(0, 1), (1, 0), (1, 1)]);
    }
}
