// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;
use std::f64::consts::PI;

use super::lexer::{tokenize, Tok, Token};
use super::{ParseError, ParseErrorKind, SourceSpan};
use crate::circuit::{Circuit, GateKind, GateName, Instruction};

/// Largest register accepted.
pub const MAX_REGISTER_SIZE: u64 = 1 << 20;
const MAX_EXPR_DEPTH: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RegKind {
    Quantum,
    Classical,
}

#[derive(Debug, Clone, Copy)]
struct Register {
    kind: RegKind,
    offset: usize,
    size: usize,
}

/// `name` or `name[i]`.
struct Arg {
    name: String,
    index: Option<u64>,
    span: SourceSpan,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: SourceSpan,
    registers: HashMap<String, Register>,
    circuit: Circuit,
}

fn err(kind: ParseErrorKind, span: SourceSpan, message: impl Into<String>) -> ParseError {
    ParseError {
        kind,
        span,
        message: message.into(),
    }
}

fn end_span(text: &str) -> SourceSpan {
    let mut line = 1;
    let mut column = 1;
    for c in text.chars() {
        if c == '\n' {
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
    }
    SourceSpan { line, column }
}

pub fn parse_qasm(text: &str) -> Result<Circuit, ParseError> {
    let mut p = Parser {
        tokens: tokenize(text)?,
        pos: 0,
        end: end_span(text),
        registers: HashMap::new(),
        circuit: Circuit::new(0, 0),
    };
    p.program()?;
    Ok(p.circuit)
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn span(&self) -> SourceSpan {
        self.tokens.get(self.pos).map_or(self.end, |t| t.span)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += usize::from(t.is_some());
        t
    }

    fn syntax(&self, expected: &str) -> ParseError {
        let found = self
            .peek()
            .map_or_else(|| "end of input".to_string(), Tok::describe);
        err(ParseErrorKind::Syntax, self.span(), format!("expected {expected}, found {found}"))
    }

    fn expect(&mut self, tok: Tok) -> Result<SourceSpan, ParseError> {
        if self.peek() == Some(&tok) {
            Ok(self.next().map(|t| t.span).unwrap_or(self.end))
        } else {
            Err(self.syntax(&tok.describe()))
        }
    }

    fn ident(&mut self) -> Result<(String, SourceSpan), ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => match self.next() {
                Some(Token { tok: Tok::Ident(s), span }) => Ok((s, span)),
                _ => Err(self.syntax("identifier")),
            },
            _ => Err(self.syntax("identifier")),
        }
    }

    fn int(&mut self) -> Result<(u64, SourceSpan), ParseError> {
        match self.peek() {
            Some(&Tok::Int(n)) => {
                let span = self.span();
                self.pos += 1;
                Ok((n, span))
            }
            _ => Err(self.syntax("integer")),
        }
    }

    fn program(&mut self) -> Result<(), ParseError> {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == "OPENQASM") {
            self.pos += 1;
            let span = self.span();
            match self.next().map(|t| t.tok) {
                Some(Tok::Real(2.0)) => {}
                Some(Tok::Int(2)) => {}
                _ => return Err(err(ParseErrorKind::Syntax, span, "expected version 2.0")),
            }
            self.expect(Tok::Semi)?;
        }
        while self.peek().is_some() {
            self.statement()?;
        }
        Ok(())
    }

    fn statement(&mut self) -> Result<(), ParseError> {
        let (word, span) = self.ident()?;
        match word.as_str() {
            "include" => {
                match self.next().map(|t| t.tok) {
                    Some(Tok::Str(_)) => {}
                    _ => return Err(err(ParseErrorKind::Syntax, span, "expected file name after `include`")),
                }
                self.expect(Tok::Semi)?;
            }
            "qreg" => self.declare(RegKind::Quantum)?,
            "creg" => self.declare(RegKind::Classical)?,
            "gate" | "opaque" => {
                return Err(err(
                    ParseErrorKind::Semantic,
                    span,
                    format!("custom gate definitions (`{word}`) are not supported"),
                ))
            }
            "if" => {
                self.expect(Tok::LParen)?;
                let (reg, reg_span) = self.ident()?;
                let index = if self.peek() == Some(&Tok::LBracket) {
                    self.pos += 1;
                    let (i, _) = self.int()?;
                    self.expect(Tok::RBracket)?;
                    Some(i)
                } else {
                    None
                };
                self.expect(Tok::EqEq)?;
                let (value, value_span) = self.int()?;
                self.expect(Tok::RParen)?;
                let clbit = self.condition_bit(&reg, index, reg_span)?;
                if value > 1 {
                    return Err(err(
                        ParseErrorKind::Semantic,
                        value_span,
                        format!("condition value {value} on single bit `{reg}`"),
                    ));
                }
                let (gate, gate_span) = self.ident()?;
                if matches!(gate.as_str(), "measure" | "reset" | "barrier") {
                    return Err(err(
                        ParseErrorKind::Semantic,
                        gate_span,
                        format!("`{gate}` cannot be conditioned"),
                    ));
                }
                let mut instrs = self.gate_statement(&gate, gate_span)?;
                for i in &mut instrs {
                    i.condition = Some(crate::circuit::Condition { clbit, value: value == 1 });
                }
                self.push_all(instrs, gate_span)?;
            }
            _ => {
                let instrs = self.gate_statement(&word, span)?;
                self.push_all(instrs, span)?;
            }
        }
        Ok(())
    }

    fn push_all(&mut self, instrs: Vec<Instruction>, span: SourceSpan) -> Result<(), ParseError> {
        for i in instrs {
            self.circuit
                .try_push(i)
                .map_err(|e| err(ParseErrorKind::Semantic, span, e.to_string()))?;
        }
        Ok(())
    }

    fn declare(&mut self, kind: RegKind) -> Result<(), ParseError> {
        let (name, span) = self.ident()?;
        self.expect(Tok::LBracket)?;
        let (size, size_span) = self.int()?;
        self.expect(Tok::RBracket)?;
        self.expect(Tok::Semi)?;
        if self.registers.contains_key(&name) {
            return Err(err(ParseErrorKind::Semantic, span, format!("duplicate register `{name}`")));
        }
        let (offset, total) = match kind {
            RegKind::Quantum => (self.circuit.num_qubits(), self.circuit.num_qubits() as u64 + size),
            RegKind::Classical => (self.circuit.num_clbits(), self.circuit.num_clbits() as u64 + size),
        };
        if size > MAX_REGISTER_SIZE || total > MAX_REGISTER_SIZE {
            return Err(err(
                ParseErrorKind::Semantic,
                size_span,
                format!("register `{name}` of size {size} exceeds the limit of {MAX_REGISTER_SIZE}"),
            ));
        }
        let size = size as usize;
        match kind {
            RegKind::Quantum => self.circuit.grow_qubits(offset + size),
            RegKind::Classical => self.circuit.grow_clbits(offset + size),
        }
        self.registers.insert(name, Register { kind, offset, size });
        Ok(())
    }

    fn register(&self, name: &str, kind: RegKind, span: SourceSpan) -> Result<Register, ParseError> {
        match self.registers.get(name) {
            Some(r) if r.kind == kind => Ok(*r),
            Some(_) => Err(err(
                ParseErrorKind::Semantic,
                span,
                format!(
                    "`{name}` is not a {} register",
                    if kind == RegKind::Quantum { "quantum" } else { "classical" }
                ),
            )),
            None => Err(err(ParseErrorKind::Semantic, span, format!("undeclared register `{name}`"))),
        }
    }

    fn condition_bit(&self, name: &str, index: Option<u64>, span: SourceSpan) -> Result<usize, ParseError> {
        let reg = self.register(name, RegKind::Classical, span)?;
        match index {
            Some(i) => self.resolve_index(name, reg, i, span),
            None if reg.size == 1 => Ok(reg.offset),
            None => Err(err(
                ParseErrorKind::Semantic,
                span,
                format!("condition register `{name}` must have exactly one bit"),
            )),
        }
    }

    fn resolve_index(&self, name: &str, reg: Register, i: u64, span: SourceSpan) -> Result<usize, ParseError> {
        if i >= reg.size as u64 {
            return Err(err(
                ParseErrorKind::Semantic,
                span,
                format!("index {i} out of range for `{name}[{}]`", reg.size),
            ));
        }
        Ok(reg.offset + i as usize)
    }

    /// Expands an argument into flat indices (one per broadcast element).
    fn expand(&self, arg: &Arg, kind: RegKind) -> Result<Vec<usize>, ParseError> {
        let reg = self.register(&arg.name, kind, arg.span)?;
        match arg.index {
            Some(i) => Ok(vec![self.resolve_index(&arg.name, reg, i, arg.span)?]),
            None => Ok((reg.offset..reg.offset + reg.size).collect()),
        }
    }

    fn arg(&mut self) -> Result<Arg, ParseError> {
        let (name, span) = self.ident()?;
        let index = if self.peek() == Some(&Tok::LBracket) {
            self.pos += 1;
            let (i, _) = self.int()?;
            self.expect(Tok::RBracket)?;
            Some(i)
        } else {
            None
        };
        Ok(Arg { name, index, span })
    }

    fn arg_list(&mut self) -> Result<Vec<Arg>, ParseError> {
        let mut args = vec![self.arg()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            args.push(self.arg()?);
        }
        Ok(args)
    }

    /// Broadcast rule: single-index arguments repeat, whole registers must
    /// all have the same size.
    fn broadcast(&self, lists: &[Vec<usize>], span: SourceSpan) -> Result<Vec<Vec<usize>>, ParseError> {
        let mut width = None;
        for l in lists.iter().filter(|l| l.len() != 1) {
            match width {
                None => width = Some(l.len()),
                Some(w) if w != l.len() => {
                    return Err(err(ParseErrorKind::Semantic, span, "register sizes differ in broadcast"))
                }
                _ => {}
            }
        }
        let n = width.unwrap_or(1);
        Ok((0..n)
            .map(|k| lists.iter().map(|l| if l.len() == 1 { l[0] } else { l[k] }).collect())
            .collect())
    }

    fn gate_statement(&mut self, word: &str, span: SourceSpan) -> Result<Vec<Instruction>, ParseError> {
        match word {
            "measure" => {
                let q = self.arg()?;
                self.expect(Tok::Arrow)?;
                let c = self.arg()?;
                self.expect(Tok::Semi)?;
                let qs = self.expand(&q, RegKind::Quantum)?;
                let cs = self.expand(&c, RegKind::Classical)?;
                if qs.len() != cs.len() {
                    return Err(err(ParseErrorKind::Semantic, span, "measure operands differ in size"));
                }
                return Ok(qs.into_iter().zip(cs).map(|(q, c)| Instruction::measure(q, c)).collect());
            }
            "barrier" => {
                let args = self.arg_list()?;
                self.expect(Tok::Semi)?;
                let mut qubits = Vec::new();
                for a in &args {
                    qubits.extend(self.expand(a, RegKind::Quantum)?);
                }
                return Ok(vec![Instruction::new(GateKind::Barrier, qubits)]);
            }
            _ => {}
        }
        let name: GateName = match word.parse() {
            Ok(n) if n != GateName::RemotePlaceholder && n != GateName::Barrier => n,
            _ => return Err(err(ParseErrorKind::Semantic, span, format!("unknown gate `{word}`"))),
        };
        let angle = if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            let a = self.expr(0)?;
            self.expect(Tok::RParen)?;
            Some(a)
        } else {
            None
        };
        if name.is_parameterized() != angle.is_some() {
            let msg = if angle.is_some() {
                format!("gate `{word}` takes no parameters")
            } else {
                format!("gate `{word}` needs an angle")
            };
            return Err(err(ParseErrorKind::Semantic, span, msg));
        }
        if let Some(a) = angle.filter(|a| !a.is_finite()) {
            return Err(err(ParseErrorKind::Semantic, span, format!("angle of `{word}` is not finite ({a})")));
        }
        let args = self.arg_list()?;
        self.expect(Tok::Semi)?;
        let arity = name.num_qubits().unwrap_or(1);
        if args.len() != arity {
            return Err(err(
                ParseErrorKind::Semantic,
                span,
                format!("gate `{word}` expects {arity} qubit argument(s), got {}", args.len()),
            ));
        }
        let lists = args
            .iter()
            .map(|a| self.expand(a, RegKind::Quantum))
            .collect::<Result<Vec<_>, _>>()?;
        let kind = match (name, angle) {
            (GateName::Rx, Some(a)) => GateKind::Rx(a),
            (GateName::Ry, Some(a)) => GateKind::Ry(a),
            (GateName::Rz, Some(a)) => GateKind::Rz(a),
            (GateName::H, _) => GateKind::H,
            (GateName::X, _) => GateKind::X,
            (GateName::Y, _) => GateKind::Y,
            (GateName::Z, _) => GateKind::Z,
            (GateName::S, _) => GateKind::S,
            (GateName::Sdg, _) => GateKind::Sdg,
            (GateName::T, _) => GateKind::T,
            (GateName::Tdg, _) => GateKind::Tdg,
            (GateName::Sx, _) => GateKind::Sx,
            (GateName::Cx, _) => GateKind::Cx,
            (GateName::Cz, _) => GateKind::Cz,
            (GateName::Swap, _) => GateKind::Swap,
            (GateName::Ccx, _) => GateKind::Ccx,
            (GateName::Reset, _) => GateKind::Reset,
            _ => return Err(err(ParseErrorKind::Semantic, span, format!("unknown gate `{word}`"))),
        };
        Ok(self
            .broadcast(&lists, span)?
            .into_iter()
            .map(|qs| Instruction::new(kind, qs))
            .collect())
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self, depth: usize) -> Result<f64, ParseError> {
        if depth > MAX_EXPR_DEPTH {
            return Err(err(ParseErrorKind::Syntax, self.span(), "expression nested too deeply"));
        }
        let mut v = self.term(depth)?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    v += self.term(depth)?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    v -= self.term(depth)?;
                }
                _ => return Ok(v),
            }
        }
    }

    fn term(&mut self, depth: usize) -> Result<f64, ParseError> {
        let mut v = self.unary(depth)?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    v *= self.unary(depth)?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    v /= self.unary(depth)?;
                }
                _ => return Ok(v),
            }
        }
    }

    fn unary(&mut self, depth: usize) -> Result<f64, ParseError> {
        if depth > MAX_EXPR_DEPTH {
            return Err(err(ParseErrorKind::Syntax, self.span(), "expression nested too deeply"));
        }
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.unary(depth + 1)?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary(depth + 1)
            }
            _ => self.power(depth),
        }
    }

    fn power(&mut self, depth: usize) -> Result<f64, ParseError> {
        let base = self.primary(depth)?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let exp = self.unary(depth + 1)?;
            return Ok(base.powf(exp));
        }
        Ok(base)
    }

    fn primary(&mut self, depth: usize) -> Result<f64, ParseError> {
        let span = self.span();
        if !matches!(
            self.peek(),
            Some(Tok::Int(_) | Tok::Real(_) | Tok::LParen | Tok::Ident(_))
        ) {
            return Err(self.syntax("expression"));
        }
        match self.next().map(|t| t.tok) {
            Some(Tok::Int(n)) => Ok(n as f64),
            Some(Tok::Real(x)) => Ok(x),
            Some(Tok::LParen) => {
                let v = self.expr(depth + 1)?;
                self.expect(Tok::RParen)?;
                Ok(v)
            }
            Some(Tok::Ident(name)) => {
                if name == "pi" {
                    return Ok(PI);
                }
                let f: fn(f64) -> f64 = match name.as_str() {
                    "sin" => f64::sin,
                    "cos" => f64::cos,
                    "tan" => f64::tan,
                    "exp" => f64::exp,
                    "ln" => f64::ln,
                    "sqrt" => f64::sqrt,
                    _ => {
                        return Err(err(
                            ParseErrorKind::Semantic,
                            span,
                            format!("unknown identifier `{name}` in expression"),
                        ))
                    }
                };
                self.expect(Tok::LParen)?;
                let v = self.expr(depth + 1)?;
                self.expect(Tok::RParen)?;
                Ok(f(v))
            }
            _ => Err(err(ParseErrorKind::Syntax, span, "expected expression")),
        }
    }
}
