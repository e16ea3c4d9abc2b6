//! Typing judgments `W ⊢ t : T`.
//!
//! The term layer follows the printed `T-*` rules. At the formula layer,
//! connectives between behavioral terms are checked with the same-type
//! meta rules `M-SupsetBT`, `M-ConjUnit` and `M-Eq`.

mod checker;
mod derivation;
mod quantifier;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::ast::{Node, Span};
use crate::types::Type;

pub use checker::{
    typecheck_behavioral, typecheck_formula, typecheck_node, typecheck_quantifier, typecheck_term,
};
pub use derivation::{
    check_rule_schema, derivation_tree, render_derivation, rule_trace, DerivationNode,
};
pub use quantifier::{expand_quantifiers, expand_typed_quantifier, ExpandError, QuantifierMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    True,
    False,
    /// Typing of the `unit` literal.
    Unit,
    /// Typing of a situation value produced by evaluation (including `s0`).
    Stn,
    Var,
    Unv1,
    Est1,
    Unv2,
    Est2,
    Neg,
    Spt,
    Conj,
    Disj,
    Seq,
    RelFlt,
    FunFlt,
    Do,
    Poss,
    SupsetBT,
    ConjUnit,
    Eq,
}

impl Rule {
    pub const ALL: [Rule; 21] = [
        Rule::True,
        Rule::False,
        Rule::Unit,
        Rule::Stn,
        Rule::Var,
        Rule::Unv1,
        Rule::Est1,
        Rule::Unv2,
        Rule::Est2,
        Rule::Neg,
        Rule::Spt,
        Rule::Conj,
        Rule::Disj,
        Rule::Seq,
        Rule::RelFlt,
        Rule::FunFlt,
        Rule::Do,
        Rule::Poss,
        Rule::SupsetBT,
        Rule::ConjUnit,
        Rule::Eq,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::True => "T-True",
            Rule::False => "T-False",
            Rule::Unit => "T-Unit",
            Rule::Stn => "T-Stn",
            Rule::Var => "T-Var",
            Rule::Unv1 => "T-Unv1",
            Rule::Est1 => "T-Est1",
            Rule::Unv2 => "T-Unv2",
            Rule::Est2 => "T-Est2",
            Rule::Neg => "T-Neg",
            Rule::Spt => "T-Spt",
            Rule::Conj => "T-Conj",
            Rule::Disj => "T-Disj",
            Rule::Seq => "T-Seq",
            Rule::RelFlt => "T-RelFlt",
            Rule::FunFlt => "T-FunFlt",
            Rule::Do => "T-Do",
            Rule::Poss => "T-Poss",
            Rule::SupsetBT => "M-SupsetBT",
            Rule::ConjUnit => "M-ConjUnit",
            Rule::Eq => "M-Eq",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Rule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// One node of a typing derivation.
#[derive(Debug, Clone, PartialEq)]
pub struct Judgment {
    pub subject: Node,
    pub ty: Type,
    pub rule: Rule,
    pub premises: Vec<Judgment>,
}

impl Judgment {
    pub fn leaf(subject: Node, ty: Type, rule: Rule) -> Self {
        Judgment {
            subject,
            ty,
            rule,
            premises: Vec::new(),
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.premises.iter().map(Judgment::depth).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TypeErrorKind {
    #[error("unbound variable `{name}`")]
    UnboundVar { name: String },
    #[error("unbound fluent `{name}`")]
    UnboundFluent { name: String },
    #[error("`{name}` expects {expected} argument(s), got {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("argument {position} of `{name}`: expected {expected}, found {found}")]
    ArgumentType {
        name: String,
        position: usize,
        expected: Type,
        found: Type,
    },
    #[error("{0}")]
    Premise(String),
    #[error("sides of `=>` have different types: {} vs {}", left.ty, right.ty)]
    SupsetMismatch {
        left: Box<Judgment>,
        right: Box<Judgment>,
    },
    #[error(
        "{} is not Unit: component types ({}) are not all the same",
        if *conjunction { "conjunction" } else { "disjunction" },
        components.iter().map(|j| j.ty.to_string()).collect::<Vec<_>>().join(", ")
    )]
    NonUniform {
        conjunction: bool,
        components: Vec<Judgment>,
    },
    #[error("sides of `=` have different types: {} vs {}", left.ty, right.ty)]
    EqMismatch {
        left: Box<Judgment>,
        right: Box<Judgment>,
    },
    #[error("operand of `{construct}` must be an Action, found {found}")]
    NotAction {
        construct: &'static str,
        found: Type,
    },
    #[error("quantified variable `{var}` does not occur in its body")]
    Vacuous { var: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind}")]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub span: Span,
    pub related: Vec<Span>,
}

impl TypeError {
    pub(crate) fn new(kind: TypeErrorKind, span: Span) -> Self {
        TypeError {
            kind,
            span,
            related: Vec::new(),
        }
    }

    pub(crate) fn with_related(mut self, related: Vec<Span>) -> Self {
        self.related = related;
        self
    }

    pub fn code(&self) -> &'static str {
        match self.kind {
            TypeErrorKind::UnboundVar { .. } | TypeErrorKind::UnboundFluent { .. } => "E001",
            TypeErrorKind::Arity { .. } => "E002",
            TypeErrorKind::ArgumentType { .. } | TypeErrorKind::Premise(_) => "E003",
            TypeErrorKind::SupsetMismatch { .. } => "E004",
            TypeErrorKind::NonUniform { .. } => "E005",
            TypeErrorKind::EqMismatch { .. } => "E006",
            TypeErrorKind::NotAction { .. } => "E008",
            TypeErrorKind::Vacuous { .. } => "E009",
        }
    }
}
