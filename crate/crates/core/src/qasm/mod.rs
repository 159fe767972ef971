// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

//! QASM 2.0 subset: parsing and serialization.
//!
//! Accepted statements are register declarations, the built-in gate
//! alphabet, `measure`, `reset`, `barrier` and `if (c==k)` on one-bit
//! registers. Registers are flattened into one index space in declaration
//! order. `include` lines are ignored; `gate` and `opaque` definitions are
//! rejected.

mod emit;
mod layout;
mod lexer;
mod parser;

use std::fmt;

use thiserror::Error;

use crate::circuit::RemoteId;

pub use emit::{emit_qasm, format_angle};
pub use layout::emit_layout;
pub use parser::{parse_qasm, MAX_REGISTER_SIZE};

/// 1-based position in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lex,
    Syntax,
    Semantic,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParseErrorKind::Lex => "lex",
            ParseErrorKind::Syntax => "syntax",
            ParseErrorKind::Semantic => "semantic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{span}: {kind} error: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmitError {
    #[error("circuit still contains remote placeholder {0}")]
    Placeholder(RemoteId),
}
