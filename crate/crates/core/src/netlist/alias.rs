// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Display names for gates, per config.
///
/// The reference circuit gives every patch a unique id, while reports use the
/// shorter per-circuit names (`NOT1`, `AND1`, `OR`). Gates without an entry
/// are shown under their own id.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AliasMap {
    by_config: BTreeMap<String, BTreeMap<String, String>>,
}

impl AliasMap {
    pub fn new(by_config: BTreeMap<String, BTreeMap<String, String>>) -> Self {
        Self { by_config }
    }

    /// Aliases for the shipped reference circuit.
    pub fn reference() -> Self {
        let table: [(&str, &[(&str, &str)]); 2] = [
            ("circuit1", &[("NOT1", "NOT1"), ("NOT2", "NOT2"), ("AND1", "AND1"), ("AND2", "AND2"), ("OR1", "OR")]),
            ("circuit2", &[("NOT3", "NOT1"), ("AND3", "AND1"), ("OR2", "OR")]),
        ];
        let by_config = table
            .iter()
            .map(|(cfg, pairs)| (cfg.to_string(), pairs.iter().map(|(g, a)| (g.to_string(), a.to_string())).collect()))
            .collect();
        Self { by_config }
    }

    pub fn display_name<'a>(&'a self, config: &str, gate: &'a str) -> &'a str {
        self.by_config.get(config).and_then(|m| m.get(gate)).map(String::as_str).unwrap_or(gate)
    }

    /// Inverse lookup: the gate id shown as `alias` in `config`.
    pub fn resolve<'a>(&'a self, config: &str, alias: &'a str) -> &'a str {
        self.by_config
            .get(config)
            .and_then(|m| m.iter().find(|(_, a)| a.as_str() == alias))
            .map(|(g, _)| g.as_str())
            .unwrap_or(alias)
    }

    pub fn config(&self, config: &str) -> Option<&BTreeMap<String, String>> {
        self.by_config.get(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_names_round_trip() {
        let m = AliasMap::reference();
        assert_eq!(m.display_name("circuit2", "OR2"), "OR");
        assert_eq!(m.resolve("circuit2", "OR"), "OR2");
        assert_eq!(m.resolve("circuit1", "OR"), "OR1");
        assert_eq!(m.display_name("circuit1", "NOT2"), "NOT2");
        assert_eq!(m.display_name("circuit9", "X"), "X");
    }
}
