// SPDX-License-Identifier: Apache-2.0

//! The `.scx` circuit description language.
//!
//! ```text
//! circuit    := "circuit" STRING "{" item* "}"
//! item       := bus | patch | net | sensor | config
//! bus        := "bus" IDENT [NUMBER "V"] ";"
//! patch      := "patch" IDENT "kind" "=" ("AND"|"OR"|"NOT") ";"
//! sensor     := "sensor" IDENT "role" "=" ("control"|"exercise"|"contact") ";"
//! net        := "net" IDENT ["cluster" INT] ":" endpoint "->" endpoint ("," endpoint)* ";"
//! endpoint   := IDENT "." IDENT | IDENT
//! config     := "config" IDENT "{" "clusters" "=" "[" INT ("," INT)* "]" ";"
//!               "output" "=" endpoint ";" "truth" "{" row row row row "}" "}"
//! row        := BIT BIT "->" BIT ";"
//! ```
//!
//! Patch pins are `in`/`out` for NOT, `a`/`b`/`out` for AND and OR, plus the
//! supply snaps `vcc` and `gnd` on every patch. Logic inputs come from the
//! sensors named `A` and `B`. A bare name that is neither a bus nor a sensor
//! is an output terminal and must be named by some config's `output`.

mod ast;
mod diag;
mod lexer;
mod parser;
mod render;

pub use ast::*;
pub use diag::{Diagnostic, Diagnostics, Location, Severity};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::{parse_circuit, validate, KEYWORDS, MAX_CLUSTER};
pub use render::render_circuit;

/// Source text plus the name used in diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceText {
    pub content: String,
    pub origin: String,
}

impl SourceText {
    pub fn new(content: impl Into<String>, origin: impl Into<String>) -> Self {
        Self { content: content.into(), origin: origin.into() }
    }

    pub fn inline(content: impl Into<String>) -> Self {
        Self::new(content, "<inline>")
    }

    pub fn from_file(path: &std::path::Path) -> std::io::Result<Self> {
        Ok(Self::new(std::fs::read_to_string(path)?, path.display().to_string()))
    }
}
