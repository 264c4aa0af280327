// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use proptest::prelude::*;
use stitchsim_core::dsl::*;
use stitchsim_core::reference;

fn reparse(text: &str) -> CircuitAst {
    parse_circuit(&SourceText::inline(text)).unwrap_or_else(|d| panic!("{d}\n---\n{text}"))
}

#[test]
fn generator_yields_valid_circuits() {
    for seed in 0..200 {
        let ast = random_circuit(seed);
        assert!(validate(&ast, "gen").is_empty(), "seed {seed}: {:?}", validate(&ast, "gen"));
    }
}

#[test]
fn reference_round_trips() {
    let ast = reference::ast();
    let text = render_circuit(&ast);
    assert_eq!(reparse(&text), ast);
    assert_eq!(render_circuit(&reparse(&text)), text);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn render_then_parse_is_identity(seed in any::<u64>()) {
        let ast = random_circuit(seed);
        let text = render_circuit(&ast);
        let back = reparse(&text);
        prop_assert_eq!(&back, &ast);
        prop_assert_eq!(render_circuit(&back), text);
    }
}

mod common;
use common::gen::random_circuit;

fn malformed_dir() -> PathBuf {
    common::fixtures_dir().join("malformed")
}

/// Each diagnostic must point at a token: a non-blank character, or the
/// position just past the last character for end-of-input errors.
#[test]
fn malformed_corpus_has_located_diagnostics() {
    let mut files: Vec<PathBuf> = std::fs::read_dir(malformed_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "scx"))
        .collect();
    files.sort();
    assert_eq!(files.len(), 20);
    for path in files {
        let src = SourceText::from_file(&path).unwrap();
        let diags = parse_circuit(&src).expect_err(&path.display().to_string());
        assert!(diags.errors().count() > 0);
        let lines: Vec<&str> = src.content.split('\n').collect();
        for d in &diags.0 {
            let (line, col) = (d.location.line as usize, d.location.column as usize);
            assert!(line >= 1 && col >= 1, "{d}");
            assert_eq!(d.location.origin, src.origin);
            let text = lines.get(line - 1).unwrap_or_else(|| panic!("{d}: line past end"));
            let at_end = line == lines.len() || (line == lines.len() - 1 && lines[line].is_empty());
            match text.chars().nth(col - 1) {
                Some(c) => assert!(!c.is_whitespace(), "{d}: points at whitespace"),
                None => assert!(at_end && col == text.chars().count() + 1, "{d}: column past line end"),
            }
        }
        // Same bytes, same diagnostics.
        assert_eq!(parse_circuit(&src).unwrap_err(), diags);
    }
}
