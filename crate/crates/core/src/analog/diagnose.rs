// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use crate::netlist::{ActiveCircuit, TruthTable, INPUTS};

use super::{propagate, Fault, FaultEffect, FaultSubject, GateModelSet};

/// Droop factors tried for degraded connections.
pub const DROOP_GRID: [f64; 3] = [0.9, 0.79, 0.5];

/// Every single fault on every active net of the circuit.
pub fn default_fault_universe(circuit: &ActiveCircuit<'_>) -> Vec<Fault> {
    let effects = [FaultEffect::Open, FaultEffect::ShortToGnd, FaultEffect::ShortToVcc]
        .into_iter()
        .chain(DROOP_GRID.map(FaultEffect::Degraded));
    let effects: Vec<FaultEffect> = effects.collect();
    let mut out: Vec<Fault> = circuit
        .active_nets()
        .flat_map(|n| effects.iter().map(move |e| Fault::new(*e, FaultSubject::Net(n.id.clone()))))
        .collect();
    out.sort();
    out
}

/// Quantized truth table under `faults`, with ideal inputs (0 V or supply).
/// Faults on inactive subjects are ignored.
pub fn faulty_truth_table(circuit: &ActiveCircuit<'_>, models: &GateModelSet, faults: &[Fault]) -> TruthTable {
    let active: Vec<Fault> = faults.iter().filter(|f| f.applies_to(circuit)).cloned().collect();
    let level = |bit: bool| if bit { models.v_cc } else { 0.0 };
    let mut t = TruthTable::default();
    for (a, b) in INPUTS {
        let s = propagate(circuit, models, (level(a), level(b)), &active).expect("faults filtered to active subjects");
        t.set(a, b, s.output_bit);
    }
    t
}

/// Quantized truth table of the circuit under each single fault.
pub fn fault_signatures(
    circuit: &ActiveCircuit<'_>,
    models: &GateModelSet,
    universe: &[Fault],
) -> BTreeMap<Fault, TruthTable> {
    universe.iter().map(|f| (f.clone(), faulty_truth_table(circuit, models, std::slice::from_ref(f)))).collect()
}

/// Faults whose signature equals the observed table, in canonical order.
///
/// A fault-free observation also matches every fault the circuit masks.
pub fn localize_fault(observed: &TruthTable, signatures: &BTreeMap<Fault, TruthTable>) -> Vec<Fault> {
    signatures.iter().filter(|(_, t)| *t == observed).map(|(f, _)| f.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;

    #[test]
    fn historical_fault_signatures() {
        let nl = reference::netlist();
        let c1 = nl.activate_config("circuit1").unwrap();
        let m = GateModelSet::reference();
        let and1 = Fault::open("net_L2_AND1a");
        let and2 = Fault::open("net_L2_AND2b");
        let sigs = fault_signatures(&c1, &m, &[and1.clone(), and2.clone()]);
        assert_eq!(sigs[&and1].bits(), "0010");
        assert_eq!(sigs[&and2].bits(), "0100");
        assert!(localize_fault(&sigs[&and1], &sigs).contains(&and1));
    }

    #[test]
    fn inactive_fault_leaves_table_alone() {
        let nl = reference::netlist();
        let c1 = nl.activate_config("circuit1").unwrap();
        let m = GateModelSet::reference();
        let f = Fault::open("net_B_c2");
        let sigs = fault_signatures(&c1, &m, std::slice::from_ref(&f));
        assert_eq!(sigs[&f], c1.enumerate_truth_table());
    }

    #[test]
    fn universe_covers_active_nets() {
        let nl = reference::netlist();
        let c2 = nl.activate_config("circuit2").unwrap();
        let u = default_fault_universe(&c2);
        assert_eq!(u.len(), c2.active_nets().count() * 6);
        let mut sorted = u.clone();
        sorted.sort();
        assert_eq!(u, sorted);
    }

    #[test]
    fn unexplained_observation() {
        let nl = reference::netlist();
        let c2 = nl.activate_config("circuit2").unwrap();
        let m = GateModelSet::reference();
        let sigs = fault_signatures(&c2, &m, &default_fault_universe(&c2));
        // 00 -> 1 needs a stuck-high output, which also forces 11 -> 1; 1001 cannot arise
        assert!(localize_fault(&TruthTable::from_bits("1001").unwrap(), &sigs).is_empty());
    }
}
