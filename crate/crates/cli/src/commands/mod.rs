// SPDX-License-Identifier: Apache-2.0

pub mod accel;
pub mod check;
pub mod fault;
pub mod score;
pub mod simulate;
pub mod swap;
pub mod truthtable;
