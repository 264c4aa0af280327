// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use std::path::PathBuf;

pub mod gen;
pub mod oracle;

use stitchsim_core::dsl::GateKind;
use stitchsim_core::netlist::Netlist;
use stitchsim_core::reference;

/// Reference netlist with each two-input patch set to AND (false) or OR (true).
pub fn variant(choice: &[bool]) -> Netlist {
    let base = reference::netlist();
    let ids: Vec<String> = base.gates.values().filter(|g| g.kind != GateKind::Not).map(|g| g.id.clone()).collect();
    let mut n = base;
    for (id, or) in ids.iter().zip(choice) {
        n = n.swap_patch(id, if *or { GateKind::Or } else { GateKind::And }).unwrap();
    }
    n
}

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}
