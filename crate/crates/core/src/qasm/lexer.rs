// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

use super::{ParseError, ParseErrorKind, SourceSpan};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Int(u64),
    Real(f64),
    Str(String),
    Semi,
    Comma,
    LBracket,
    RBracket,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Arrow,
    EqEq,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Real(x) => format!("`{x}`"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Semi => "`;`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::EqEq => "`==`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
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

    fn span(&self) -> SourceSpan {
        SourceSpan {
            line: self.line,
            column: self.column,
        }
    }
}

fn lex_error(span: SourceSpan, message: String) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Lex,
        span,
        message,
    }
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut cur = Cursor {
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut out = Vec::new();
    while let Some(c) = cur.peek() {
        let span = cur.span();
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        let tok = match c {
            '/' => {
                cur.bump();
                if cur.peek() == Some('/') {
                    while cur.peek().is_some_and(|c| c != '\n') {
                        cur.bump();
                    }
                    continue;
                }
                Tok::Slash
            }
            ';' | ',' | '[' | ']' | '(' | ')' | '{' | '}' | '+' | '*' | '^' => {
                cur.bump();
                match c {
                    ';' => Tok::Semi,
                    ',' => Tok::Comma,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '+' => Tok::Plus,
                    '*' => Tok::Star,
                    _ => Tok::Caret,
                }
            }
            '-' => {
                cur.bump();
                if cur.peek() == Some('>') {
                    cur.bump();
                    Tok::Arrow
                } else {
                    Tok::Minus
                }
            }
            '=' => {
                cur.bump();
                if cur.peek() != Some('=') {
                    return Err(lex_error(span, "expected `==`".into()));
                }
                cur.bump();
                Tok::EqEq
            }
            '"' => {
                cur.bump();
                let mut s = String::new();
                loop {
                    match cur.bump() {
                        Some('"') => break,
                        Some('\n') | None => {
                            return Err(lex_error(span, "unterminated string".into()))
                        }
                        Some(ch) => s.push(ch),
                    }
                }
                Tok::Str(s)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(ch) = cur.peek().filter(|ch| ch.is_ascii_alphanumeric() || *ch == '_') {
                    s.push(ch);
                    cur.bump();
                }
                Tok::Ident(s)
            }
            c if c.is_ascii_digit() || c == '.' => lex_number(&mut cur, span)?,
            other => return Err(lex_error(span, format!("unexpected character `{other}`"))),
        };
        out.push(Token { tok, span });
    }
    Ok(out)
}

fn lex_number(cur: &mut Cursor<'_>, span: SourceSpan) -> Result<Tok, ParseError> {
    let mut s = String::new();
    let mut real = false;
    let digits = |cur: &mut Cursor<'_>, s: &mut String| {
        let mut any = false;
        while let Some(d) = cur.peek().filter(char::is_ascii_digit) {
            s.push(d);
            cur.bump();
            any = true;
        }
        any
    };
    let mut any = digits(cur, &mut s);
    if cur.peek() == Some('.') {
        real = true;
        s.push('.');
        cur.bump();
        any |= digits(cur, &mut s);
    }
    if !any {
        return Err(lex_error(span, format!("malformed number `{s}`")));
    }
    if matches!(cur.peek(), Some('e' | 'E')) {
        real = true;
        s.push('e');
        cur.bump();
        if let Some(sign) = cur.peek().filter(|c| *c == '+' || *c == '-') {
            s.push(sign);
            cur.bump();
        }
        if !digits(cur, &mut s) {
            return Err(lex_error(span, format!("malformed exponent in `{s}`")));
        }
    }
    if real {
        s.parse::<f64>()
            .map(Tok::Real)
            .map_err(|_| lex_error(span, format!("malformed number `{s}`")))
    } else {
        s.parse::<u64>()
            .map(Tok::Int)
            .map_err(|_| lex_error(span, format!("integer `{s}` is too large")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn numbers() {
        assert_eq!(toks("3 2.5 1e-3 .5"), vec![Tok::Int(3), Tok::Real(2.5), Tok::Real(1e-3), Tok::Real(0.5)]);
    }

    #[test]
    fn arrow_and_comment() {
        assert_eq!(
            toks("q -> c; // tail\n=="),
            vec![Tok::Ident("q".into()), Tok::Arrow, Tok::Ident("c".into()), Tok::Semi, Tok::EqEq]
        );
    }

    #[test]
    fn spans_are_one_based() {
        let t = tokenize("h\n  x").unwrap();
        assert_eq!(t[1].span, SourceSpan { line: 2, column: 3 });
    }

    #[test]
    fn bad_character() {
        let e = tokenize("h q[0]; @").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Lex);
        assert_eq!(e.span, SourceSpan { line: 1, column: 9 });
    }
}
