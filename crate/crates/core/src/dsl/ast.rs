// SPDX-License-Identifier: Apache-2.0

//! Syntax tree for `.scx` circuit descriptions.
//!
//! Every identifier carries the [`Span`] it was parsed from so that later
//! stages can point diagnostics at the offending token. Spans never take part
//! in equality: two trees that differ only in source positions compare equal,
//! which is what the render/parse round trip relies on.

use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

/// 1-based source position of a token.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Span {
    pub line: u32,
    pub column: u32,
    /// Length of the token in characters (zero for end of input).
    pub len: u32,
}

impl Span {
    pub fn new(line: u32, column: u32, len: u32) -> Self {
        Self { line, column, len }
    }
}

/// A value paired with its source span. Equality and hashing ignore the span.
#[derive(Debug, Clone)]
pub struct Spanned<T> {
    pub node: T,
    pub span: Span,
}

impl<T> Spanned<T> {
    pub fn new(node: T, span: Span) -> Self {
        Self { node, span }
    }

    /// Wraps a value that did not come from source text.
    pub fn synthetic(node: T) -> Self {
        Self { node, span: Span::default() }
    }
}

impl<T: PartialEq> PartialEq for Spanned<T> {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node
    }
}

impl<T: Eq> Eq for Spanned<T> {}

impl<T: Hash> Hash for Spanned<T> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.node.hash(state)
    }
}

impl<T: fmt::Display> fmt::Display for Spanned<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.node.fmt(f)
    }
}

pub type Ident = Spanned<String>;

/// Logic function of a gate patch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateKind {
    And,
    Or,
    Not,
}

impl GateKind {
    pub const ALL: [GateKind; 3] = [GateKind::And, GateKind::Or, GateKind::Not];

    pub fn keyword(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Or => "OR",
            GateKind::Not => "NOT",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "AND" => Some(GateKind::And),
            "OR" => Some(GateKind::Or),
            "NOT" => Some(GateKind::Not),
            _ => None,
        }
    }

    /// Number of logic inputs. Supply pins are not counted.
    pub fn arity(self) -> usize {
        match self {
            GateKind::Not => 1,
            GateKind::And | GateKind::Or => 2,
        }
    }

    /// Logic input pins, in evaluation order.
    pub fn input_pins(self) -> &'static [Pin] {
        match self {
            GateKind::Not => &[Pin::In],
            GateKind::And | GateKind::Or => &[Pin::A, Pin::B],
        }
    }

    pub fn has_pin(self, pin: Pin) -> bool {
        matches!(pin, Pin::Out | Pin::Vcc | Pin::Gnd) || self.input_pins().contains(&pin)
    }

    pub fn eval(self, inputs: &[bool]) -> bool {
        match self {
            GateKind::And => inputs.iter().all(|&b| b),
            GateKind::Or => inputs.iter().any(|&b| b),
            GateKind::Not => !inputs[0],
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Snap-fastener pin on a gate patch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pin {
    In,
    A,
    B,
    Out,
    Vcc,
    Gnd,
}

impl Pin {
    pub fn name(self) -> &'static str {
        match self {
            Pin::In => "in",
            Pin::A => "a",
            Pin::B => "b",
            Pin::Out => "out",
            Pin::Vcc => "vcc",
            Pin::Gnd => "gnd",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "in" => Pin::In,
            "a" => Pin::A,
            "b" => Pin::B,
            "out" => Pin::Out,
            "vcc" => Pin::Vcc,
            "gnd" => Pin::Gnd,
            _ => return None,
        })
    }

    pub fn is_supply(self) -> bool {
        matches!(self, Pin::Vcc | Pin::Gnd)
    }
}

impl fmt::Display for Pin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SensorRole {
    Control,
    Exercise,
    Contact,
}

impl SensorRole {
    pub fn keyword(self) -> &'static str {
        match self {
            SensorRole::Control => "control",
            SensorRole::Exercise => "exercise",
            SensorRole::Contact => "contact",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "control" => Some(SensorRole::Control),
            "exercise" => Some(SensorRole::Exercise),
            "contact" => Some(SensorRole::Contact),
            _ => None,
        }
    }
}

/// Net endpoint as written in source: `patch.pin` or a bare name.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Pin { patch: Ident, pin: Spanned<String> },
    Name(Ident),
}

impl Endpoint {
    pub fn span(&self) -> Span {
        match self {
            Endpoint::Pin { patch, .. } => patch.span,
            Endpoint::Name(n) => n.span,
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Pin { patch, pin } => write!(f, "{}.{}", patch, pin),
            Endpoint::Name(n) => write!(f, "{}", n),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BusDecl {
    pub name: Ident,
    pub volts: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatchDecl {
    pub id: Ident,
    pub kind: GateKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SensorDecl {
    pub id: Ident,
    pub role: SensorRole,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetDecl {
    pub id: Ident,
    pub cluster: Option<Spanned<u8>>,
    /// First endpoint drives the net.
    pub driver: Endpoint,
    pub sinks: Vec<Endpoint>,
}

/// One declared truth-table row `A B -> Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RowDecl {
    pub a: bool,
    pub b: bool,
    pub out: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigDecl {
    pub id: Ident,
    pub clusters: Vec<Spanned<u8>>,
    pub output: Endpoint,
    pub truth: Vec<RowDecl>,
}

/// Top-level `circuit` item list, kept in declaration order per category.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CircuitAst {
    pub name: String,
    pub buses: Vec<BusDecl>,
    pub patches: Vec<PatchDecl>,
    pub sensors: Vec<SensorDecl>,
    pub nets: Vec<NetDecl>,
    pub configs: Vec<ConfigDecl>,
}

impl CircuitAst {
    pub fn patch(&self, id: &str) -> Option<&PatchDecl> {
        self.patches.iter().find(|p| p.id.node == id)
    }

    /// Returns a copy with one patch's gate kind replaced. Pin compatibility is
    /// not checked here; see `Netlist::swap_patch`.
    pub fn with_patch_kind(&self, id: &str, kind: GateKind) -> Option<CircuitAst> {
        let mut out = self.clone();
        out.patches.iter_mut().find(|p| p.id.node == id)?.kind = kind;
        Some(out)
    }
}
