// SPDX-License-Identifier: Apache-2.0

//! The shipped exosuit reference circuit.

use crate::dsl::{parse_circuit, CircuitAst, SourceText};
use crate::netlist::{elaborate, Netlist};

pub const FILE_NAME: &str = "exosuit_v1.scx";
pub const SOURCE: &str = include_str!("../assets/exosuit_v1.scx");

pub fn source() -> SourceText {
    SourceText::new(SOURCE, FILE_NAME)
}

pub fn ast() -> CircuitAst {
    parse_circuit(&source()).expect("reference circuit parses")
}

pub fn netlist() -> Netlist {
    elaborate(&ast()).expect("reference circuit elaborates")
}
