// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

/// Total two-input truth table, rows ordered 00, 01, 10, 11 over (A, B).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TruthTable {
    rows: [bool; 4],
}

/// The four input combinations in row order.
pub const INPUTS: [(bool, bool); 4] = [(false, false), (false, true), (true, false), (true, true)];

fn index(a: bool, b: bool) -> usize {
    (a as usize) << 1 | b as usize
}

impl TruthTable {
    pub fn from_rows(rows: [bool; 4]) -> Self {
        Self { rows }
    }

    pub fn from_fn(mut f: impl FnMut(bool, bool) -> bool) -> Self {
        let mut rows = [false; 4];
        for (a, b) in INPUTS {
            rows[index(a, b)] = f(a, b);
        }
        Self { rows }
    }

    /// Parses a 4-character bit string such as `"0110"` (rows 00, 01, 10, 11).
    pub fn from_bits(s: &str) -> Option<Self> {
        let bits: Vec<bool> = s
            .chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<_>>()?;
        let rows: [bool; 4] = bits.try_into().ok()?;
        Some(Self { rows })
    }

    pub fn get(&self, a: bool, b: bool) -> bool {
        self.rows[index(a, b)]
    }

    pub fn set(&mut self, a: bool, b: bool, out: bool) {
        self.rows[index(a, b)] = out;
    }

    pub fn rows(&self) -> impl Iterator<Item = (bool, bool, bool)> + '_ {
        INPUTS.iter().map(move |&(a, b)| (a, b, self.get(a, b)))
    }

    pub fn bits(&self) -> String {
        self.rows.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.rows().map(|(a, b, o)| format!("{}{}->{}", a as u8, b as u8, o as u8)).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Serialize, Deserialize)]
struct Row {
    a: u8,
    b: u8,
    out: u8,
}

impl Serialize for TruthTable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(4))?;
        for (a, b, out) in self.rows() {
            seq.serialize_element(&Row { a: a as u8, b: b as u8, out: out as u8 })?;
        }
        seq.end()
    }
}

/// A row where the computed table disagrees with the declared one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RowMismatch {
    pub a: bool,
    pub b: bool,
    pub declared: bool,
    pub computed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyResult {
    Pass,
    Mismatch(Vec<RowMismatch>),
}

impl VerifyResult {
    pub fn passed(&self) -> bool {
        matches!(self, VerifyResult::Pass)
    }
}

pub fn verify_truth_table(computed: &TruthTable, declared: &TruthTable) -> VerifyResult {
    let bad: Vec<RowMismatch> = INPUTS
        .iter()
        .filter(|&&(a, b)| computed.get(a, b) != declared.get(a, b))
        .map(|&(a, b)| RowMismatch { a, b, declared: declared.get(a, b), computed: computed.get(a, b) })
        .collect();
    if bad.is_empty() {
        VerifyResult::Pass
    } else {
        VerifyResult::Mismatch(bad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bits_round_trip() {
        let t = TruthTable::from_bits("0110").unwrap();
        assert!(!t.get(false, false) && t.get(false, true) && t.get(true, false) && !t.get(true, true));
        assert_eq!(t.bits(), "0110");
        assert_eq!(t.to_string(), "{00->0, 01->1, 10->1, 11->0}");
        assert!(TruthTable::from_bits("011").is_none());
        assert!(TruthTable::from_bits("01x0").is_none());
    }

    #[test]
    fn table_verifies_against_itself() {
        let t = TruthTable::from_fn(|a, b| a ^ b);
        assert!(verify_truth_table(&t, &t).passed());
    }

    #[test]
    fn mismatches_are_listed_in_row_order() {
        let and = TruthTable::from_fn(|a, b| a & b);
        let or = TruthTable::from_fn(|a, b| a | b);
        let VerifyResult::Mismatch(rows) = verify_truth_table(&and, &or) else { panic!() };
        let at: Vec<(bool, bool)> = rows.iter().map(|r| (r.a, r.b)).collect();
        assert_eq!(at, vec![(false, true), (true, false)]);
    }
}
