// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeSet, HashMap, HashSet};

use super::ast::*;
use super::diag::{Diagnostic, Diagnostics};
use super::lexer::{tokenize, Token, TokenKind};
use super::SourceText;

/// Words that cannot be used as identifiers.
pub const KEYWORDS: &[&str] = &[
    "circuit", "bus", "patch", "kind", "sensor", "role", "net", "cluster", "config", "clusters", "output", "truth",
    "AND", "OR", "NOT",
];

pub const MAX_CLUSTER: u8 = 5;

/// Parses and validates a circuit description.
pub fn parse_circuit(src: &SourceText) -> Result<CircuitAst, Diagnostics> {
    let origin = src.origin.as_str();
    let tokens = tokenize(&src.content, origin).map_err(|d| Diagnostics(vec![d]))?;
    let mut parser = Parser { tokens, pos: 0, origin };
    let ast = parser.circuit().map_err(|d| Diagnostics(vec![d]))?;
    let diags = validate(&ast, origin);
    if diags.iter().any(Diagnostic::is_error) {
        return Err(Diagnostics(diags));
    }
    Ok(ast)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    origin: &'a str,
}

type PResult<T> = Result<T, Diagnostic>;

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if !matches!(t.kind, TokenKind::Eof) {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> Diagnostic {
        let tok = self.peek();
        Diagnostic::error(format!("expected {expected}, found {}", tok.kind.describe()), self.origin, tok.span)
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().kind, TokenKind::Ident(s) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> PResult<Span> {
        if self.at_keyword(kw) {
            Ok(self.next().span)
        } else {
            Err(self.unexpected(&format!("'{kw}'")))
        }
    }

    fn punct(&mut self, kind: TokenKind) -> PResult<Span> {
        if self.peek().kind == kind {
            Ok(self.next().span)
        } else {
            Err(self.unexpected(&kind.describe()))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<Ident> {
        match &self.peek().kind {
            TokenKind::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                let span = self.next().span;
                Ok(Spanned::new(s, span))
            }
            TokenKind::Ident(s) => {
                let tok = self.peek();
                Err(Diagnostic::error(format!("expected {what}, found reserved word '{s}'"), self.origin, tok.span))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn circuit(&mut self) -> PResult<CircuitAst> {
        self.keyword("circuit")?;
        let name = match &self.peek().kind {
            TokenKind::Str(s) => {
                let s = s.clone();
                self.next();
                s
            }
            _ => return Err(self.unexpected("circuit name string")),
        };
        self.punct(TokenKind::LBrace)?;
        let mut ast = CircuitAst { name, ..Default::default() };
        loop {
            let tok = self.peek().clone();
            match &tok.kind {
                TokenKind::RBrace => {
                    self.next();
                    break;
                }
                TokenKind::Ident(kw) => match kw.as_str() {
                    "bus" => ast.buses.push(self.bus()?),
                    "patch" => ast.patches.push(self.patch()?),
                    "sensor" => ast.sensors.push(self.sensor()?),
                    "net" => ast.nets.push(self.net()?),
                    "config" => ast.configs.push(self.config()?),
                    _ => return Err(self.unexpected("'bus', 'patch', 'sensor', 'net', 'config' or '}'")),
                },
                _ => return Err(self.unexpected("'bus', 'patch', 'sensor', 'net', 'config' or '}'")),
            }
        }
        if !matches!(self.peek().kind, TokenKind::Eof) {
            return Err(self.unexpected("end of input"));
        }
        Ok(ast)
    }

    fn bus(&mut self) -> PResult<BusDecl> {
        self.keyword("bus")?;
        let name = self.ident("bus name")?;
        let volts = match self.peek().kind {
            TokenKind::Int(n) => Some(n as f64),
            TokenKind::Number(v) => Some(v),
            _ => None,
        };
        if volts.is_some() {
            self.next();
            self.keyword("V")?;
        }
        self.punct(TokenKind::Semi)?;
        Ok(BusDecl { name, volts })
    }

    fn patch(&mut self) -> PResult<PatchDecl> {
        self.keyword("patch")?;
        let id = self.ident("patch id")?;
        self.keyword("kind")?;
        self.punct(TokenKind::Eq)?;
        let kind = match &self.peek().kind {
            TokenKind::Ident(s) => GateKind::from_keyword(s),
            _ => None,
        }
        .ok_or_else(|| self.unexpected("gate kind 'AND', 'OR' or 'NOT'"))?;
        self.next();
        self.punct(TokenKind::Semi)?;
        Ok(PatchDecl { id, kind })
    }

    fn sensor(&mut self) -> PResult<SensorDecl> {
        self.keyword("sensor")?;
        let id = self.ident("sensor id")?;
        self.keyword("role")?;
        self.punct(TokenKind::Eq)?;
        let role = match &self.peek().kind {
            TokenKind::Ident(s) => SensorRole::from_keyword(s),
            _ => None,
        }
        .ok_or_else(|| self.unexpected("sensor role 'control', 'exercise' or 'contact'"))?;
        self.next();
        self.punct(TokenKind::Semi)?;
        Ok(SensorDecl { id, role })
    }

    fn small_int(&mut self, what: &str) -> PResult<Spanned<u8>> {
        match self.peek().kind {
            TokenKind::Int(n) => {
                let span = self.next().span;
                let v = u8::try_from(n)
                    .map_err(|_| Diagnostic::error(format!("{what} {n} is out of range"), self.origin, span))?;
                Ok(Spanned::new(v, span))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn endpoint(&mut self) -> PResult<Endpoint> {
        let first = self.ident("endpoint")?;
        if self.peek().kind == TokenKind::Dot {
            self.next();
            let pin = match &self.peek().kind {
                // Pin names may collide with nothing else, so reserved words are fine here.
                TokenKind::Ident(s) => {
                    let s = s.clone();
                    Spanned::new(s, self.next().span)
                }
                _ => return Err(self.unexpected("pin name")),
            };
            Ok(Endpoint::Pin { patch: first, pin })
        } else {
            Ok(Endpoint::Name(first))
        }
    }

    fn net(&mut self) -> PResult<NetDecl> {
        self.keyword("net")?;
        let id = self.ident("net id")?;
        let cluster = if self.at_keyword("cluster") {
            self.next();
            Some(self.small_int("cluster tag")?)
        } else {
            None
        };
        self.punct(TokenKind::Colon)?;
        let driver = self.endpoint()?;
        self.punct(TokenKind::Arrow)?;
        let mut sinks = vec![self.endpoint()?];
        while self.peek().kind == TokenKind::Comma {
            self.next();
            sinks.push(self.endpoint()?);
        }
        self.punct(TokenKind::Semi)?;
        Ok(NetDecl { id, cluster, driver, sinks })
    }

    fn bit(&mut self) -> PResult<bool> {
        match self.peek().kind {
            TokenKind::Int(0) => {
                self.next();
                Ok(false)
            }
            TokenKind::Int(1) => {
                self.next();
                Ok(true)
            }
            _ => Err(self.unexpected("bit '0' or '1'")),
        }
    }

    fn config(&mut self) -> PResult<ConfigDecl> {
        self.keyword("config")?;
        let id = self.ident("config id")?;
        self.punct(TokenKind::LBrace)?;
        self.keyword("clusters")?;
        self.punct(TokenKind::Eq)?;
        self.punct(TokenKind::LBracket)?;
        let mut clusters = vec![self.small_int("cluster tag")?];
        while self.peek().kind == TokenKind::Comma {
            self.next();
            clusters.push(self.small_int("cluster tag")?);
        }
        self.punct(TokenKind::RBracket)?;
        self.punct(TokenKind::Semi)?;
        self.keyword("output")?;
        self.punct(TokenKind::Eq)?;
        let output = self.endpoint()?;
        self.punct(TokenKind::Semi)?;
        self.keyword("truth")?;
        self.punct(TokenKind::LBrace)?;
        let mut truth = Vec::new();
        while self.peek().kind != TokenKind::RBrace {
            let a = self.bit()?;
            let b = self.bit()?;
            self.punct(TokenKind::Arrow)?;
            let out = self.bit()?;
            self.punct(TokenKind::Semi)?;
            truth.push(RowDecl { a, b, out });
        }
        self.punct(TokenKind::RBrace)?;
        self.punct(TokenKind::RBrace)?;
        Ok(ConfigDecl { id, clusters, output, truth })
    }
}

/// Semantic checks over a syntactically valid tree. Diagnostics come out in
/// source order.
pub fn validate(ast: &CircuitAst, origin: &str) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let mut err = |msg: String, span: Span| diags.push(Diagnostic::error(msg, origin, span));

    fn dupes<'x>(ids: impl Iterator<Item = &'x Ident>, what: &str, err: &mut dyn FnMut(String, Span)) {
        let mut seen = HashSet::new();
        for id in ids {
            if !seen.insert(id.node.as_str()) {
                err(format!("duplicate {what} '{}'", id.node), id.span);
            }
        }
    }
    dupes(ast.buses.iter().map(|b| &b.name), "bus", &mut err);
    dupes(ast.patches.iter().map(|p| &p.id), "patch", &mut err);
    dupes(ast.sensors.iter().map(|s| &s.id), "sensor", &mut err);
    dupes(ast.nets.iter().map(|n| &n.id), "net", &mut err);
    dupes(ast.configs.iter().map(|c| &c.id), "config", &mut err);

    let buses: HashSet<&str> = ast.buses.iter().map(|b| b.name.node.as_str()).collect();
    let sensors: HashMap<&str, SensorRole> = ast.sensors.iter().map(|s| (s.id.node.as_str(), s.role)).collect();
    let patches: HashMap<&str, GateKind> = ast.patches.iter().map(|p| (p.id.node.as_str(), p.kind)).collect();

    for s in &ast.sensors {
        if buses.contains(s.id.node.as_str()) {
            err(format!("sensor '{}' has the same name as a bus", s.id.node), s.id.span);
        }
    }

    // Output terminals are introduced by `output = NAME` in a config.
    let mut outputs: HashSet<&str> = HashSet::new();
    for cfg in &ast.configs {
        match &cfg.output {
            Endpoint::Name(n) => {
                if buses.contains(n.node.as_str()) || sensors.contains_key(n.node.as_str()) {
                    err(format!("config output '{}' must not be a bus or sensor", n.node), n.span);
                } else {
                    outputs.insert(n.node.as_str());
                }
            }
            Endpoint::Pin { patch, pin } => {
                check_pin(&patches, patch, pin, &mut err);
                if pin.node != "out" && patches.contains_key(patch.node.as_str()) {
                    err(format!("config output must be a gate output, not '{}.{}'", patch, pin), pin.span);
                }
            }
        }
    }

    let mut tags = BTreeSet::new();
    for net in &ast.nets {
        if let Some(c) = &net.cluster {
            if c.node == 0 || c.node > MAX_CLUSTER {
                err(format!("cluster tag {} out of range 1..{MAX_CLUSTER}", c.node), c.span);
            } else {
                tags.insert(c.node);
            }
        }
        match &net.driver {
            Endpoint::Pin { patch, pin } => {
                if check_pin(&patches, patch, pin, &mut err) && pin.node != "out" {
                    err(format!("net '{}' must be driven by a gate output, not '{}.{}'", net.id, patch, pin), pin.span);
                }
            }
            Endpoint::Name(n) => {
                let name = n.node.as_str();
                if let Some(role) = sensors.get(name) {
                    if *role == SensorRole::Control {
                        err(format!("control sensor '{name}' cannot drive logic"), n.span);
                    } else if name != "A" && name != "B" {
                        err(format!("sensor '{name}' is not a logic input channel (A or B)"), n.span);
                    }
                } else if outputs.contains(name) {
                    err(format!("output '{name}' cannot drive a net"), n.span);
                } else if !buses.contains(name) {
                    err(format!("undeclared identifier '{name}'"), n.span);
                }
            }
        }
        for sink in &net.sinks {
            match sink {
                Endpoint::Pin { patch, pin } => {
                    if check_pin(&patches, patch, pin, &mut err) && pin.node == "out" {
                        err(format!("gate output '{}.out' cannot be driven by net '{}'", patch, net.id), pin.span);
                    }
                }
                Endpoint::Name(n) => {
                    let name = n.node.as_str();
                    if sensors.contains_key(name) {
                        err(format!("sensor '{name}' cannot be a net sink"), n.span);
                    } else if !buses.contains(name) && !outputs.contains(name) {
                        err(format!("undeclared identifier '{name}'"), n.span);
                    }
                }
            }
        }
    }

    for cfg in &ast.configs {
        let mut seen = HashSet::new();
        for c in &cfg.clusters {
            if !tags.contains(&c.node) {
                err(format!("undeclared cluster {}", c.node), c.span);
            } else if !seen.insert(c.node) {
                err(format!("duplicate cluster {} in config '{}'", c.node, cfg.id), c.span);
            }
        }
        let mut rows = HashSet::new();
        for r in &cfg.truth {
            if !rows.insert((r.a, r.b)) {
                err(
                    format!("duplicate truth table row {} {} in config '{}'", r.a as u8, r.b as u8, cfg.id),
                    cfg.id.span,
                );
            }
        }
        if cfg.truth.len() != 4 {
            err(format!("truth table must have exactly 4 rows, found {}", cfg.truth.len()), cfg.id.span);
        }
    }

    diags.sort_by_key(|d| (d.location.line, d.location.column));
    diags
}

/// Reports an undeclared patch or unknown pin. Returns true when the
/// reference is valid.
fn check_pin(
    patches: &HashMap<&str, GateKind>,
    patch: &Ident,
    pin: &Spanned<String>,
    err: &mut dyn FnMut(String, Span),
) -> bool {
    let Some(kind) = patches.get(patch.node.as_str()) else {
        err(format!("undeclared patch '{}'", patch.node), patch.span);
        return false;
    };
    match Pin::from_name(&pin.node) {
        Some(p) if kind.has_pin(p) => true,
        _ => {
            err(format!("patch '{}' ({}) has no pin '{}'", patch.node, kind, pin.node), pin.span);
            false
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<CircuitAst, Diagnostics> {
        parse_circuit(&SourceText::inline(s))
    }

    fn first_err(s: &str) -> Diagnostic {
        parse(s).unwrap_err().errors().next().unwrap().clone()
    }

    const MINIMAL: &str = r#"
circuit "one_not" {
  sensor A role = exercise;
  patch N kind = NOT;
  net w : A -> N.in;
  net o : N.out -> LED;
  config only { clusters = [1]; output = LED; truth { 0 0 -> 1; 0 1 -> 1; 1 0 -> 0; 1 1 -> 0; } }
}
"#;

    #[test]
    fn empty_input_expects_circuit() {
        let d = first_err("");
        assert_eq!(d.message, "expected 'circuit', found end of input");
        assert_eq!((d.location.line, d.location.column), (1, 1));
    }

    #[test]
    fn minimal_parses() {
        // config references cluster 1 but no net carries it
        let d = first_err(MINIMAL);
        assert_eq!(d.message, "undeclared cluster 1");
        let fixed = MINIMAL.replace("net w :", "net w cluster 1 :");
        let ast = parse(&fixed).unwrap();
        assert_eq!(ast.patches.len(), 1);
        assert_eq!(ast.nets.len(), 2);
    }

    #[test]
    fn undeclared_cluster_seven() {
        let src = MINIMAL.replace("net w :", "net w cluster 1 :").replace("clusters = [1]", "clusters = [1, 7]");
        let d = first_err(&src);
        assert_eq!(d.message, "undeclared cluster 7");
        assert_eq!(d.location.line, 7);
    }

    #[test]
    fn cluster_tag_out_of_range_on_net() {
        let src = MINIMAL.replace("net w :", "net w cluster 6 :");
        let errs = parse(&src).unwrap_err();
        assert!(errs.0.iter().any(|d| d.message == "cluster tag 6 out of range 1..5"));
    }

    #[test]
    fn semantic_errors() {
        let base = MINIMAL.replace("net w :", "net w cluster 1 :");
        let cases = [
            (base.replace("patch N kind = NOT;", "patch N kind = NOT; patch N kind = AND;"), "duplicate patch 'N'"),
            (base.replace("A -> N.in", "A -> M.in"), "undeclared patch 'M'"),
            (base.replace("A -> N.in", "A -> N.b"), "patch 'N' (NOT) has no pin 'b'"),
            (base.replace("N.out -> LED", "N.out -> LAMP"), "undeclared identifier 'LAMP'"),
            (base.replace("A -> N.in", "N.in -> N.in"), "net 'w' must be driven by a gate output, not 'N.in'"),
            (base.replace("1 1 -> 0;", ""), "truth table must have exactly 4 rows, found 3"),
            (base.replace("1 1 -> 0;", "1 0 -> 0;"), "duplicate truth table row 1 0 in config 'only'"),
        ];
        for (src, msg) in cases {
            let errs = parse(&src).unwrap_err();
            assert!(errs.0.iter().any(|d| d.message == msg), "{msg}: got {errs}");
        }
    }

    #[test]
    fn control_sensor_cannot_drive() {
        let src = MINIMAL
            .replace("net w :", "net w cluster 1 :")
            .replace("sensor A role = exercise;", "sensor A role = control;");
        assert_eq!(first_err(&src).message, "control sensor 'A' cannot drive logic");
    }

    #[test]
    fn reserved_words_rejected_as_ids() {
        let d = first_err("circuit \"x\" { patch net kind = AND; }");
        assert!(d.message.contains("reserved word 'net'"), "{}", d.message);
        assert_eq!(d.location.column, 21);
    }

    #[test]
    fn trailing_tokens_rejected() {
        let d = first_err("circuit \"x\" { } extra");
        assert_eq!(d.message, "expected end of input, found 'extra'");
    }
}
