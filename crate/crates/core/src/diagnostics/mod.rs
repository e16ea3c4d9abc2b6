//! Coded, spanned diagnostics and the two rewrite templates that repair
//! common sort confusions.

mod fixes;

use std::fmt;

use serde::Serialize;

use crate::ast::{SourceProgram, Span};
use crate::context::{ContextError, TypingContext};
use crate::eval::SatError;
use crate::parser::ParseError;
use crate::typecheck::{typecheck_formula, Judgment, TypeError};

pub use fixes::{apply_fix, suggest_fixes, Fix, FixError, FixKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Code {
    E001,
    E002,
    E003,
    E004,
    E005,
    E006,
    E007,
    E008,
    E009,
    E010,
    E101,
}

impl Code {
    pub const ALL: [Code; 11] = [
        Code::E001,
        Code::E002,
        Code::E003,
        Code::E004,
        Code::E005,
        Code::E006,
        Code::E007,
        Code::E008,
        Code::E009,
        Code::E010,
        Code::E101,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Code::E001 => "E001",
            Code::E002 => "E002",
            Code::E003 => "E003",
            Code::E004 => "E004",
            Code::E005 => "E005",
            Code::E006 => "E006",
            Code::E007 => "E007",
            Code::E008 => "E008",
            Code::E009 => "E009",
            Code::E010 => "E010",
            Code::E101 => "E101",
        }
    }

    pub fn parse(s: &str) -> Option<Code> {
        Code::ALL.into_iter().find(|c| c.as_str() == s)
    }

    pub fn summary(self) -> &'static str {
        match self {
            Code::E001 => "unbound name",
            Code::E002 => "arity mismatch",
            Code::E003 => "argument type mismatch",
            Code::E004 => "superset sides differ",
            Code::E005 => "non-uniform conjunction",
            Code::E006 => "equality sides differ",
            Code::E007 => "stuck term",
            Code::E008 => "operand is not an action",
            Code::E009 => "vacuous quantifier",
            Code::E010 => "uninterpreted name",
            Code::E101 => "syntax error",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Code {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub code: Code,
    pub severity: Severity,
    pub message: String,
    pub span: Span,
    pub related: Vec<Span>,
}

impl Diagnostic {
    pub fn error(code: Code, message: impl Into<String>, span: Span) -> Self {
        Diagnostic {
            code,
            severity: Severity::Error,
            message: message.into(),
            span,
            related: Vec::new(),
        }
    }

    pub fn stuck(reason: &str, span: Span) -> Self {
        Diagnostic::error(Code::E007, format!("evaluation is stuck: {reason}"), span)
    }

    /// `file:line:col: error[E006]: message`
    pub fn render(&self, file: &str) -> String {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        format!(
            "{file}:{}:{}: {sev}[{}]: {}",
            self.span.line, self.span.column, self.code, self.message
        )
    }
}

impl From<&TypeError> for Diagnostic {
    fn from(e: &TypeError) -> Self {
        let code = Code::parse(e.code()).expect("type error codes are in the closed set");
        Diagnostic {
            related: e.related.clone(),
            ..Diagnostic::error(code, e.to_string(), e.span)
        }
    }
}

impl From<&ParseError> for Diagnostic {
    fn from(e: &ParseError) -> Self {
        Diagnostic::error(Code::E101, e.to_string(), e.span)
    }
}

impl From<&SatError> for Diagnostic {
    fn from(e: &SatError) -> Self {
        Diagnostic::error(Code::E010, e.to_string(), e.span)
    }
}

/// Outcome of checking one statement.
#[derive(Debug, Clone, PartialEq)]
pub struct StatementCheck {
    pub name: String,
    pub span: Span,
    pub result: Result<Judgment, TypeError>,
}

impl StatementCheck {
    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        match &self.result {
            Ok(_) => Vec::new(),
            Err(e) => vec![Diagnostic::from(e)],
        }
    }
}

/// Checks every statement independently. Each statement stops at its first
/// failing premise; later statements are still checked.
pub fn check_program(program: &SourceProgram) -> Result<Vec<StatementCheck>, ContextError> {
    let w = TypingContext::from_program(program)?;
    Ok(program
        .statements
        .iter()
        .map(|s| StatementCheck {
            name: s.name.name.clone(),
            span: s.span,
            result: typecheck_formula(&w, &s.formula),
        })
        .collect())
}

/// Orders `(statement index, diagnostic)` pairs by statement, then span start.
pub fn sort_diagnostics(diags: &mut [(usize, Diagnostic)]) {
    diags.sort_by(|(i, a), (j, b)| (i, a.span.start, a.code).cmp(&(j, b.span.start, b.code)));
}
