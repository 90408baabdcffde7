//! Concrete syntax: lexing, parsing, name resolution and printing.

pub mod lexer;
pub mod parser;
pub mod print;
pub mod resolve;

use std::fmt;

pub use lexer::{tokenize, Tok, Token};
pub use parser::{parse_module, DeclKind, SDecl, SType, STerm, SourceModule};
pub use resolve::{resolve, Item, ResolvedDecl};

/// A half-open region of source text. `line` and `column` are 1-based;
/// `column` counts characters, `offset` and `length` count bytes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Span {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub span: Span,
}

impl Diagnostic {
    pub fn error(message: impl Into<String>, span: Span) -> Self {
        Diagnostic {
            severity: Severity::Error,
            message: message.into(),
            span,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(
            f,
            "{}:{}: {sev}: {}",
            self.span.line, self.span.column, self.message
        )
    }
}

/// Tokenizes and parses a module. A lexical error yields a single diagnostic
/// and an empty module.
pub fn parse_source(text: &str) -> (SourceModule, Vec<Diagnostic>) {
    match tokenize(text) {
        Ok(toks) => parse_module(&toks, text.len()),
        Err(d) => (SourceModule::default(), vec![d]),
    }
}
