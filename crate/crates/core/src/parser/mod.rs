//! Concrete syntax for `.sitc` files.
//!
//! ```text
//! program     ::= decl* stmt*
//! decl        ::= "var" IDENT ":" type ("|" type)* ";"
//!               | ("rel" | "fun") IDENT "(" type ("," type)* ")" ";"
//! stmt        ::= "stmt" IDENT ":" expr ("=" expr)? ";"
//! expr        ::= disj ("=>" expr)?             (right-assoc)
//! disj        ::= conj ("\/" conj)*             (left-assoc)
//! conj        ::= unary ("/\" unary)*           (left-assoc)
//! unary       ::= "~" unary | quant expr | primary
//! quant       ::= "(" ("forall" | "exists") IDENT ":" type ("|" type)* ")"
//! primary     ::= IDENT "(" expr ("," expr)* ")"
//!               | ("do" | "poss") "(" expr "," expr ")"
//!               | IDENT | "true" | "false" | "unit"
//!               | "(" expr ")" | "(" expr "," (expr ("," expr)*)? ")"
//! type        ::= "Unit" | "Bool" | "Situation" | "Action" | "Object"
//! ```
//!
//! Applications are resolved against the program's declarations: a name
//! declared `rel` with at least two arguments becomes a relational fluent
//! whose last argument is the situation; everything else is a functional
//! fluent. The identifier `s0` denotes the initial situation.

mod grammar;
mod lexer;
mod printer;

use thiserror::Error;

use crate::ast::Span;

pub use grammar::{parse_formula, parse_program};
pub use lexer::{tokenize, Token, TokenKind};
pub use printer::{
    print_behavioral, print_declaration, print_formula, print_node, print_program, print_statement,
    print_term, print_value,
};

/// Lexing or parsing failure (diagnostic code E101).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message}")]
pub struct ParseError {
    pub message: String,
    pub span: Span,
    /// Token descriptions that would have been accepted here.
    pub expected: Vec<String>,
}

impl ParseError {
    pub fn code(&self) -> &'static str {
        "E101"
    }

    pub(crate) fn lex(c: char, span: Span) -> Self {
        ParseError {
            message: format!("unexpected character `{c}`"),
            span,
            expected: Vec::new(),
        }
    }

    pub(crate) fn new(message: impl Into<String>, span: Span) -> Self {
        ParseError {
            message: message.into(),
            span,
            expected: Vec::new(),
        }
    }
}
