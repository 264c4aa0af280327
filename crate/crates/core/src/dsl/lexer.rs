// SPDX-License-Identifier: Apache-2.0

use super::ast::Span;
use super::diag::Diagnostic;

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Ident(String),
    Int(u64),
    Number(f64),
    Str(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Semi,
    Colon,
    Comma,
    Dot,
    Eq,
    Arrow,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("'{s}'"),
            TokenKind::Int(n) => format!("'{n}'"),
            TokenKind::Number(n) => format!("'{n}'"),
            TokenKind::Str(_) => "string literal".to_string(),
            TokenKind::LBrace => "'{'".into(),
            TokenKind::RBrace => "'}'".into(),
            TokenKind::LBracket => "'['".into(),
            TokenKind::RBracket => "']'".into(),
            TokenKind::Semi => "';'".into(),
            TokenKind::Colon => "':'".into(),
            TokenKind::Comma => "','".into(),
            TokenKind::Dot => "'.'".into(),
            TokenKind::Eq => "'='".into(),
            TokenKind::Arrow => "'->'".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    column: u32,
}

impl<'a> Cursor<'a> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }
}

/// Splits source text into tokens. Stops at the first lexical error.
pub fn tokenize(text: &str, origin: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut cur = Cursor { chars: text.chars().peekable(), line: 1, column: 1 };
    let mut out = Vec::new();

    while let Some(c) = cur.peek() {
        let (line, column) = (cur.line, cur.column);
        let start = |len: u32| Span::new(line, column, len);

        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '#' {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(c) = cur.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(c);
                    cur.bump();
                } else {
                    break;
                }
            }
            let len = s.len() as u32;
            out.push(Token { kind: TokenKind::Ident(s), span: start(len) });
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            let mut seen_dot = false;
            while let Some(c) = cur.peek() {
                if c.is_ascii_digit() {
                    s.push(c);
                    cur.bump();
                } else if c == '.' && !seen_dot {
                    // A dot only continues the number when a digit follows,
                    // so `1.` is still rejected below.
                    seen_dot = true;
                    s.push(c);
                    cur.bump();
                } else {
                    break;
                }
            }
            let span = start(s.chars().count() as u32);
            if s.ends_with('.') {
                return Err(Diagnostic::error(format!("malformed number '{s}'"), origin, span));
            }
            let kind = if seen_dot {
                TokenKind::Number(s.parse().expect("digits with one dot"))
            } else {
                match s.parse::<u64>() {
                    Ok(n) => TokenKind::Int(n),
                    Err(_) => return Err(Diagnostic::error(format!("integer '{s}' is too large"), origin, span)),
                }
            };
            out.push(Token { kind, span });
            continue;
        }
        if c == '"' {
            cur.bump();
            let mut s = String::new();
            let mut len = 1;
            loop {
                match cur.bump() {
                    None | Some('\n') => {
                        return Err(Diagnostic::error("unterminated string literal", origin, start(1)))
                    }
                    Some('"') => {
                        len += 1;
                        break;
                    }
                    Some('\\') => {
                        len += 2;
                        match cur.bump() {
                            Some('"') => s.push('"'),
                            Some('\\') => s.push('\\'),
                            Some('n') => s.push('\n'),
                            _ => return Err(Diagnostic::error("invalid escape in string literal", origin, start(1))),
                        }
                    }
                    Some(c) => {
                        len += 1;
                        s.push(c);
                    }
                }
            }
            out.push(Token { kind: TokenKind::Str(s), span: start(len) });
            continue;
        }

        let kind = match c {
            '{' => TokenKind::LBrace,
            '}' => TokenKind::RBrace,
            '[' => TokenKind::LBracket,
            ']' => TokenKind::RBracket,
            ';' => TokenKind::Semi,
            ':' => TokenKind::Colon,
            ',' => TokenKind::Comma,
            '.' => TokenKind::Dot,
            '=' => TokenKind::Eq,
            '-' => {
                cur.bump();
                if cur.peek() == Some('>') {
                    cur.bump();
                    out.push(Token { kind: TokenKind::Arrow, span: start(2) });
                    continue;
                }
                return Err(Diagnostic::error("unexpected character '-'", origin, start(1)));
            }
            other => {
                return Err(Diagnostic::error(
                    format!("unexpected character '{}'", other.escape_default()),
                    origin,
                    start(1),
                ))
            }
        };
        cur.bump();
        out.push(Token { kind, span: start(1) });
    }

    out.push(Token { kind: TokenKind::Eof, span: Span::new(cur.line, cur.column, 0) });
    Ok(out)
}
