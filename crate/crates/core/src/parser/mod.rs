//! Tokenizer, recursive-descent parser and canonical printer.
//!
//! The concrete grammar is documented in `GRAMMAR.md` at the repository root.

pub mod ast;
mod lexer;
mod parse;
mod print;

use std::fmt;

pub use ast::*;
pub use lexer::{is_keyword, tokenize, Token, TokenKind, KEYWORDS};
pub use parse::{parse_script, parse_script_spanned, parse_statement, parse_value, Spanned};
pub use print::{print_attribution, print_filter, print_query, print_scheme, print_statement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lex(String),
    Syntax { expected: Vec<String>, found: String },
    Invalid(String),
}

/// A lexing or parsing failure at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub(crate) fn lex(line: usize, column: usize, msg: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            kind: ParseErrorKind::Lex(msg.into()),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: ", self.line, self.column)?;
        match &self.kind {
            ParseErrorKind::Lex(m) | ParseErrorKind::Invalid(m) => f.write_str(m),
            ParseErrorKind::Syntax { expected, found } => {
                write!(f, "expected {}, found {found}", expected.join(" or "))
            }
        }
    }
}
