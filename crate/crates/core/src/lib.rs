// SPDX-License-Identifier: Apache-2.0

//! Compiler and simulator for layered textile logic circuits.

pub mod analog;
pub mod defaults;
pub mod dsl;
pub mod kinematics;
pub mod netlist;
pub mod pipeline;
pub mod reference;
pub mod session;
pub mod trace;
