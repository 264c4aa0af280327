// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dsl::{GateKind, Pin};
use crate::netlist::{ActiveCircuit, Net, OutputDriver, Source};

use super::{quantize, AnalogError, Fault, FaultEffect, FaultSubject, GateModelSet, DEFAULT_THRESHOLD};

/// Steady-state voltages of an active circuit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VoltageState {
    /// Active net ids and `GATE.out` nodes.
    pub nodes: BTreeMap<String, f64>,
    pub output_volts: f64,
    pub output_bit: bool,
}

struct Eval<'a, 'n> {
    circuit: &'a ActiveCircuit<'n>,
    models: &'a GateModelSet,
    inputs: (f64, f64),
    net_faults: BTreeMap<&'a str, Vec<FaultEffect>>,
    gate_faults: BTreeMap<&'a str, Vec<FaultEffect>>,
    gate_out: BTreeMap<&'n str, f64>,
}

impl<'a, 'n> Eval<'a, 'n> {
    fn faulted(&self, volts: f64, effects: Option<&Vec<FaultEffect>>) -> f64 {
        effects.into_iter().flatten().fold(volts, |v, e| e.apply(v, self.models.v_cc))
    }

    fn net_volts(&self, net: &Net) -> f64 {
        let raw = match &net.driver {
            Source::Bus(b) => self.circuit.netlist().buses[b],
            Source::Sensor(s) if s == "A" => self.inputs.0,
            Source::Sensor(s) if s == "B" => self.inputs.1,
            Source::Sensor(_) => 0.0,
            Source::Gate(g) => self.gate_out.get(g.as_str()).copied().unwrap_or(0.0),
        };
        self.faulted(raw, self.net_faults.get(net.id.as_str()))
    }

    fn pin_volts(&self, gate: &str, pin: Pin) -> f64 {
        self.circuit.pin_driver(gate, pin).map_or(0.0, |n| self.net_volts(n))
    }

    fn gate_volts(&self, gate: &str) -> f64 {
        let v_in_hi = self.models.v_in_hi;
        let vcc = self.pin_volts(gate, Pin::Vcc);
        let gnd = self.pin_volts(gate, Pin::Gnd);
        if vcc < v_in_hi || gnd >= v_in_hi {
            return 0.0;
        }
        let kind = self.circuit.gate_kind(gate);
        let inputs: Vec<f64> = kind.input_pins().iter().map(|p| self.pin_volts(gate, *p)).collect();
        let levels: Vec<bool> = inputs.iter().map(|v| *v >= v_in_hi).collect();
        let model = self.models.model(kind);
        if !kind.eval(&levels) {
            return model.v_low.min(vcc);
        }
        let high = inputs.iter().copied().filter(|v| *v >= v_in_hi);
        let drive = match kind {
            GateKind::And => high.fold(f64::INFINITY, f64::min),
            GateKind::Or => high.fold(f64::NEG_INFINITY, f64::max),
            GateKind::Not => vcc,
        };
        model.high(drive).clamp(0.0, vcc)
    }
}

/// Evaluates gate voltages in topological order. `inputs` are the voltages on
/// sensors `A` and `B`. Faults are applied where their subject node is read.
pub fn propagate(
    circuit: &ActiveCircuit<'_>,
    models: &GateModelSet,
    inputs: (f64, f64),
    faults: &[Fault],
) -> Result<VoltageState, AnalogError> {
    let mut net_faults: BTreeMap<&str, Vec<FaultEffect>> = BTreeMap::new();
    let mut gate_faults: BTreeMap<&str, Vec<FaultEffect>> = BTreeMap::new();
    for f in faults {
        match &f.subject {
            FaultSubject::Net(n) if circuit.is_active_net(n) => net_faults.entry(n).or_default().push(f.effect),
            FaultSubject::GateOutput(g) if circuit.contains_gate(g) => gate_faults.entry(g).or_default().push(f.effect),
            other => return Err(AnalogError::InactiveFaultSubject(other.to_string())),
        }
    }

    let mut eval = Eval { circuit, models, inputs, net_faults, gate_faults, gate_out: BTreeMap::new() };
    for gate in circuit.gate_order() {
        let v = eval.gate_volts(gate);
        let v = eval.faulted(v, eval.gate_faults.get(gate.as_str()));
        eval.gate_out.insert(gate.as_str(), v);
    }

    let mut nodes: BTreeMap<String, f64> = eval.gate_out.iter().map(|(g, v)| (format!("{g}.out"), *v)).collect();
    for net in circuit.active_nets() {
        nodes.insert(net.id.clone(), eval.net_volts(net));
    }
    let output_volts = match circuit.output() {
        OutputDriver::Net(n) => nodes[n.as_str()],
        OutputDriver::Gate(g) => eval.gate_out[g.as_str()],
    };
    Ok(VoltageState { nodes, output_volts, output_bit: quantize(output_volts, DEFAULT_THRESHOLD) })
}

impl VoltageState {
    /// Output bit under a non-default threshold.
    pub fn bit_at(&self, threshold: f64) -> bool {
        quantize(self.output_volts, threshold)
    }

    pub fn gate(&self, gate: &str) -> Option<f64> {
        self.nodes.get(&format!("{gate}.out")).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;

    fn run(config: &str, a: f64, b: f64, faults: &[Fault]) -> VoltageState {
        let nl = reference::netlist();
        let c = nl.activate_config(config).unwrap();
        propagate(&c, &GateModelSet::reference(), (a, b), faults).unwrap()
    }

    #[test]
    fn circuit1_zero_one() {
        let s = run("circuit1", 0.0, 5.0, &[]);
        assert!((s.gate("OR1").unwrap() - 3.23).abs() < 0.01, "{s:?}");
        assert!(s.output_bit);
    }

    #[test]
    fn circuit2_one_zero() {
        let s = run("circuit2", 5.0, 0.0, &[]);
        assert!((s.gate("NOT3").unwrap() - 4.89).abs() < 0.01);
        assert!((s.gate("AND3").unwrap() - 4.02).abs() < 0.01);
        assert!((s.gate("OR2").unwrap() - 3.23).abs() < 0.01);
    }

    #[test]
    fn zero_state_reads_low() {
        let s = run("circuit1", 0.0, 0.0, &[]);
        assert!(s.output_volts < 2.0 && !s.output_bit);
    }

    #[test]
    fn open_rail_unpowers_everything() {
        let s = run("circuit2", 5.0, 5.0, &[Fault::open("vcc_rail")]);
        assert_eq!(s.output_volts, 0.0);
    }

    #[test]
    fn inactive_subject_is_rejected() {
        let nl = reference::netlist();
        let c = nl.activate_config("circuit1").unwrap();
        let err = propagate(&c, &GateModelSet::reference(), (0.0, 0.0), &[Fault::open("net_B_c2")]).unwrap_err();
        assert_eq!(err, AnalogError::InactiveFaultSubject("net_B_c2".into()));
    }

    #[test]
    fn gate_output_fault() {
        let f: Fault = "short_to_gnd:OR2.out".parse().unwrap();
        let s = run("circuit2", 5.0, 5.0, &[f]);
        assert_eq!(s.output_volts, 0.0);
    }
}
