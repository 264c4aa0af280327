// SPDX-License-Identifier: Apache-2.0

use std::io::Write;

use serde::Serialize;
use stitchsim_core::trace::round_numbers;

/// Pretty JSON with sorted keys and floats rounded to 4 places.
pub fn json_bytes(value: &impl Serialize) -> Vec<u8> {
    let mut v = serde_json::to_value(value).expect("output types serialize");
    round_numbers(&mut v, 4);
    let mut out = serde_json::to_vec_pretty(&v).expect("a JSON value always serializes");
    out.push(b'\n');
    out
}

pub fn print_json(value: &impl Serialize) {
    print_bytes(&json_bytes(value));
}

pub fn print_bytes(bytes: &[u8]) {
    let mut out = std::io::stdout().lock();
    // A closed pipe is not worth a panic.
    let _ = out.write_all(bytes).and_then(|_| out.flush());
}

/// Left-aligned text table, columns separated by two spaces.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
        for r in &self.rows {
            for (i, c) in r.iter().enumerate() {
                if i < widths.len() {
                    widths[i] = widths[i].max(c.len());
                }
            }
        }
        let line = |cells: &[String]| {
            let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            parts.join("  ").trim_end().to_string() + "\n"
        };
        let mut s = line(&self.header);
        for r in &self.rows {
            s.push_str(&line(r));
        }
        s
    }
}

pub fn volts(v: f64) -> String {
    format!("{v:.4}")
}

pub fn bit(b: bool) -> String {
    (b as u8).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_aligns_columns() {
        let mut t = Table::new(&["a", "bb"]);
        t.row(vec!["long".into(), "x".into()]);
        assert_eq!(t.render(), "a     bb\nlong  x\n");
    }
}
