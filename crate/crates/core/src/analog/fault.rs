// SPDX-License-Identifier: Apache-2.0

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::netlist::ActiveCircuit;

/// Node a fault is attached to.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FaultSubject {
    Net(String),
    /// Output of the named gate patch, written `PATCH.out`.
    GateOutput(String),
}

impl fmt::Display for FaultSubject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaultSubject::Net(n) => f.write_str(n),
            FaultSubject::GateOutput(g) => write!(f, "{g}.out"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum FaultEffect {
    /// Broken connection; the node reads 0 V.
    Open,
    ShortToGnd,
    ShortToVcc,
    /// Partial connection scaling the node voltage by a factor in (0, 1].
    Degraded(f64),
}

impl FaultEffect {
    pub fn keyword(self) -> &'static str {
        match self {
            FaultEffect::Open => "open_net",
            FaultEffect::ShortToGnd => "short_to_gnd",
            FaultEffect::ShortToVcc => "short_to_vcc",
            FaultEffect::Degraded(_) => "degraded",
        }
    }

    fn rank(self) -> u8 {
        match self {
            FaultEffect::Open => 0,
            FaultEffect::ShortToGnd => 1,
            FaultEffect::ShortToVcc => 2,
            FaultEffect::Degraded(_) => 3,
        }
    }

    pub fn apply(self, volts: f64, v_cc: f64) -> f64 {
        match self {
            FaultEffect::Open | FaultEffect::ShortToGnd => 0.0,
            FaultEffect::ShortToVcc => v_cc,
            FaultEffect::Degraded(droop) => volts * droop,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Fault {
    pub subject: FaultSubject,
    pub effect: FaultEffect,
}

impl Fault {
    pub fn new(effect: FaultEffect, subject: FaultSubject) -> Self {
        Self { subject, effect }
    }

    /// Whether the subject is part of the active circuit.
    pub fn applies_to(&self, circuit: &ActiveCircuit<'_>) -> bool {
        match &self.subject {
            FaultSubject::Net(n) => circuit.is_active_net(n),
            FaultSubject::GateOutput(g) => circuit.contains_gate(g),
        }
    }

    pub fn open(net: &str) -> Self {
        Self::new(FaultEffect::Open, FaultSubject::Net(net.to_string()))
    }

    pub fn degraded(net: &str, droop: f64) -> Self {
        Self::new(FaultEffect::Degraded(droop), FaultSubject::Net(net.to_string()))
    }
}

impl Ord for Fault {
    fn cmp(&self, other: &Self) -> Ordering {
        self.subject.cmp(&other.subject).then(self.effect.rank().cmp(&other.effect.rank())).then_with(|| {
            match (self.effect, other.effect) {
                (FaultEffect::Degraded(x), FaultEffect::Degraded(y)) => x.total_cmp(&y),
                _ => Ordering::Equal,
            }
        })
    }
}

impl PartialOrd for Fault {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Fault {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Fault {}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.effect.keyword(), self.subject)?;
        if let FaultEffect::Degraded(d) = self.effect {
            write!(f, ":{d}")?;
        }
        Ok(())
    }
}

impl Serialize for Fault {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FaultParseError {
    #[error("fault spec '{0}' must look like kind:subject[:droop]")]
    Shape(String),
    #[error("unknown fault kind '{0}' (expected open, short_to_gnd, short_to_vcc or degraded)")]
    Kind(String),
    #[error("degraded fault needs a droop factor in (0, 1], got '{0}'")]
    Droop(String),
    #[error("only degraded faults take a droop factor")]
    UnexpectedDroop,
}

impl FromStr for Fault {
    type Err = FaultParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let (kind, subject, droop) = match parts.as_slice() {
            [k, subj] => (*k, *subj, None),
            [k, subj, d] => (*k, *subj, Some(*d)),
            _ => return Err(FaultParseError::Shape(s.to_string())),
        };
        if subject.is_empty() {
            return Err(FaultParseError::Shape(s.to_string()));
        }
        let subject = match subject.strip_suffix(".out") {
            Some(g) if !g.is_empty() => FaultSubject::GateOutput(g.to_string()),
            _ => FaultSubject::Net(subject.to_string()),
        };
        let effect = match (kind, droop) {
            ("degraded", Some(d)) => {
                let v: f64 = d.parse().map_err(|_| FaultParseError::Droop(d.to_string()))?;
                if !(v > 0.0 && v <= 1.0) {
                    return Err(FaultParseError::Droop(d.to_string()));
                }
                FaultEffect::Degraded(v)
            }
            ("degraded", None) => return Err(FaultParseError::Droop(String::new())),
            (_, Some(_)) if matches!(kind, "open" | "open_net" | "short_to_gnd" | "short_to_vcc") => {
                return Err(FaultParseError::UnexpectedDroop)
            }
            ("open" | "open_net", None) => FaultEffect::Open,
            ("short_to_gnd", None) => FaultEffect::ShortToGnd,
            ("short_to_vcc", None) => FaultEffect::ShortToVcc,
            _ => return Err(FaultParseError::Kind(kind.to_string())),
        };
        Ok(Fault { subject, effect })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_cli_specs() {
        assert_eq!("open:net_L2_AND1a".parse::<Fault>().unwrap(), Fault::open("net_L2_AND1a"));
        assert_eq!("degraded:net_B_c2:0.79".parse::<Fault>().unwrap(), Fault::degraded("net_B_c2", 0.79));
        let g: Fault = "short_to_vcc:AND1.out".parse().unwrap();
        assert_eq!(g.subject, FaultSubject::GateOutput("AND1".into()));
        assert_eq!(g.to_string(), "short_to_vcc:AND1.out");
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in ["open", "melt:x", "degraded:x", "degraded:x:0", "degraded:x:1.5", "open:x:0.5", "open:", "a:b:c:d"]
        {
            assert!(bad.parse::<Fault>().is_err(), "{bad}");
        }
    }

    #[test]
    fn display_round_trips() {
        for spec in ["open_net:n1", "short_to_gnd:n2", "degraded:n3:0.5", "open_net:G.out"] {
            let f: Fault = spec.parse().unwrap();
            assert_eq!(f.to_string(), spec);
        }
    }

    #[test]
    fn ordering_is_total() {
        let mut v = [Fault::degraded("a", 0.9), Fault::open("b"), Fault::degraded("a", 0.5), Fault::open("a")];
        v.sort();
        let s: Vec<String> = v.iter().map(|f| f.to_string()).collect();
        assert_eq!(s, ["open_net:a", "degraded:a:0.5", "degraded:a:0.9", "open_net:b"]);
    }
}
