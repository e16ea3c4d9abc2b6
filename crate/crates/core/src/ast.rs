//! Abstract syntax in three layers.
//!
//! `Term` covers variables, literal values and the term-level connectives,
//! `BehavioralTerm` covers fluents, `do` and `poss`, and `Formula` is the
//! statement layer where connectives range over behavioral terms. Argument
//! and situation slots of fluents hold `Term`s; a behavioral term sitting in
//! such a slot (e.g. the `do(..)` in `broken(x, do(drop(r, x), s))`) is
//! wrapped in [`Term::Behavioral`].
//!
//! Spans are metadata: they never take part in equality, so two trees parsed
//! from differently spaced text compare equal.

use std::fmt;
use std::hash::{Hash, Hasher};

use serde::Serialize;

use crate::types::{FluentKind, Type};

/// Byte range plus the 1-based line/column of its start and end.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
    pub end_line: usize,
    pub end_column: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Span {}

impl Hash for Span {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl Span {
    /// Field-wise comparison, for the cases where positions do matter.
    pub fn same_range(&self, other: &Span) -> bool {
        self.start == other.start && self.end == other.end
    }

    pub fn is_dummy(&self) -> bool {
        self.start == 0 && self.end == 0 && self.line == 0
    }

    /// Smallest span covering both. Dummy spans are absorbed.
    pub fn join(self, other: Span) -> Span {
        if self.is_dummy() {
            return other;
        }
        if other.is_dummy() {
            return self;
        }
        let (first, last) = if self.start <= other.start {
            (self, other)
        } else {
            (other, self)
        };
        let end = if last.end >= first.end { last } else { first };
        Span {
            start: first.start,
            end: end.end,
            line: first.line,
            column: first.column,
            end_line: end.end_line,
            end_column: end.end_column,
        }
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

impl Ident {
    pub fn new(name: impl Into<String>) -> Self {
        Ident {
            name: name.into(),
            span: Span::default(),
        }
    }

    pub fn spanned(name: impl Into<String>, span: Span) -> Self {
        Ident {
            name: name.into(),
            span,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        }
    }
}

/// A situation as an action history. `base: None` is the initial situation
/// `s0`; otherwise the history is rooted at an irreducible situation term
/// (typically a situation variable).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SituationValue {
    pub base: Option<Box<Term>>,
    pub actions: Vec<BehavioralTerm>,
}

impl SituationValue {
    pub fn initial() -> Self {
        SituationValue {
            base: None,
            actions: Vec::new(),
        }
    }

    pub fn is_initial(&self) -> bool {
        self.base.is_none() && self.actions.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Unit,
    True,
    False,
    Situation(SituationValue),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Ident),
    Lit(Value, Span),
    Quant {
        kind: Quantifier,
        var: Ident,
        /// Candidate types; more than one encodes a multi-typed variable.
        types: Vec<Type>,
        body: Box<Term>,
        span: Span,
    },
    Neg(Box<Term>),
    Supset(Box<Term>, Box<Term>),
    Conj(Box<Term>, Box<Term>),
    Disj(Box<Term>, Box<Term>),
    /// Never empty.
    Seq(Vec<Term>, Span),
    Behavioral(Box<BehavioralTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BehavioralTerm {
    Neg(Box<BehavioralTerm>),
    RelFluent {
        name: Ident,
        args: Vec<Term>,
        sit: Box<Term>,
        span: Span,
    },
    FunFluent {
        name: Ident,
        args: Vec<Term>,
        span: Span,
    },
    Do {
        action: Box<BehavioralTerm>,
        sit: Box<Term>,
        span: Span,
    },
    Poss {
        action: Box<BehavioralTerm>,
        sit: Box<Term>,
        span: Span,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(BehavioralTerm),
    Term(Term),
    Neg(Box<Formula>),
    Supset(Box<Formula>, Box<Formula>),
    Conj(Box<Formula>, Box<Formula>),
    Disj(Box<Formula>, Box<Formula>),
    Eq(Box<Formula>, Box<Formula>),
    Quant {
        kind: Quantifier,
        var: Ident,
        types: Vec<Type>,
        body: Box<Formula>,
        span: Span,
    },
}

/// Any node of the three layers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Term(Term),
    Behavioral(BehavioralTerm),
    Formula(Formula),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Supset,
    Conj,
    Disj,
}

// --- convenience constructors -------------------------------------------

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Ident::new(name))
    }

    pub fn lit(value: Value) -> Term {
        Term::Lit(value, Span::default())
    }

    pub fn s0() -> Term {
        Term::lit(Value::Situation(SituationValue::initial()))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(t: Term) -> Term {
        Term::Neg(Box::new(t))
    }

    pub fn binary(op: BinOp, a: Term, b: Term) -> Term {
        let (a, b) = (Box::new(a), Box::new(b));
        match op {
            BinOp::Supset => Term::Supset(a, b),
            BinOp::Conj => Term::Conj(a, b),
            BinOp::Disj => Term::Disj(a, b),
        }
    }

    /// Wraps a behavioral term for a slot position.
    pub fn bt(bt: BehavioralTerm) -> Term {
        Term::Behavioral(Box::new(bt))
    }

    pub fn span(&self) -> Span {
        match self {
            Term::Var(id) => id.span,
            Term::Lit(_, span) | Term::Seq(_, span) => *span,
            Term::Quant { span, body, .. } => span.join(body.span()),
            Term::Neg(t) => t.span(),
            Term::Supset(a, b) | Term::Conj(a, b) | Term::Disj(a, b) => a.span().join(b.span()),
            Term::Behavioral(bt) => bt.span(),
        }
    }

    /// True if a fluent, `do` or `poss` occurs anywhere inside.
    pub fn has_behavioral(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Lit(Value::Situation(sv), _) => {
                sv.base.as_ref().is_some_and(|b| b.has_behavioral()) || !sv.actions.is_empty()
            }
            Term::Lit(..) => false,
            Term::Quant { body, .. } | Term::Neg(body) => body.has_behavioral(),
            Term::Supset(a, b) | Term::Conj(a, b) | Term::Disj(a, b) => {
                a.has_behavioral() || b.has_behavioral()
            }
            Term::Seq(items, _) => items.iter().any(Term::has_behavioral),
            Term::Behavioral(_) => true,
        }
    }

    pub fn mentions(&self, var: &str) -> bool {
        match self {
            Term::Var(id) => id.name == var,
            Term::Lit(Value::Situation(sv), _) => {
                sv.base.as_ref().is_some_and(|b| b.mentions(var))
                    || sv.actions.iter().any(|a| a.mentions(var))
            }
            Term::Lit(..) => false,
            Term::Quant {
                var: bound, body, ..
            } => bound.name != var && body.mentions(var),
            Term::Neg(t) => t.mentions(var),
            Term::Supset(a, b) | Term::Conj(a, b) | Term::Disj(a, b) => {
                a.mentions(var) || b.mentions(var)
            }
            Term::Seq(items, _) => items.iter().any(|t| t.mentions(var)),
            Term::Behavioral(bt) => bt.mentions(var),
        }
    }

    pub fn node_count(&self) -> usize {
        1 + match self {
            Term::Var(_) | Term::Lit(..) => 0,
            Term::Quant { body, .. } | Term::Neg(body) => body.node_count(),
            Term::Supset(a, b) | Term::Conj(a, b) | Term::Disj(a, b) => {
                a.node_count() + b.node_count()
            }
            Term::Seq(items, _) => items.iter().map(Term::node_count).sum(),
            Term::Behavioral(bt) => bt.node_count(),
        }
    }

    pub fn count_poss(&self) -> usize {
        match self {
            Term::Var(_) | Term::Lit(..) => 0,
            Term::Quant { body, .. } | Term::Neg(body) => body.count_poss(),
            Term::Supset(a, b) | Term::Conj(a, b) | Term::Disj(a, b) => {
                a.count_poss() + b.count_poss()
            }
            Term::Seq(items, _) => items.iter().map(Term::count_poss).sum(),
            Term::Behavioral(bt) => bt.count_poss(),
        }
    }
}

impl BehavioralTerm {
    pub fn rel(name: &str, args: Vec<Term>, sit: Term) -> BehavioralTerm {
        BehavioralTerm::RelFluent {
            name: Ident::new(name),
            args,
            sit: Box::new(sit),
            span: Span::default(),
        }
    }

    pub fn fun(name: &str, args: Vec<Term>) -> BehavioralTerm {
        BehavioralTerm::FunFluent {
            name: Ident::new(name),
            args,
            span: Span::default(),
        }
    }

    pub fn do_(action: BehavioralTerm, sit: Term) -> BehavioralTerm {
        BehavioralTerm::Do {
            action: Box::new(action),
            sit: Box::new(sit),
            span: Span::default(),
        }
    }

    pub fn poss(action: BehavioralTerm, sit: Term) -> BehavioralTerm {
        BehavioralTerm::Poss {
            action: Box::new(action),
            sit: Box::new(sit),
            span: Span::default(),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(bt: BehavioralTerm) -> BehavioralTerm {
        BehavioralTerm::Neg(Box::new(bt))
    }

    pub fn span(&self) -> Span {
        match self {
            BehavioralTerm::Neg(bt) => bt.span(),
            BehavioralTerm::RelFluent { span, .. }
            | BehavioralTerm::FunFluent { span, .. }
            | BehavioralTerm::Do { span, .. }
            | BehavioralTerm::Poss { span, .. } => *span,
        }
    }

    /// Head fluent name and kind, looking through negations.
    pub fn fluent_head(&self) -> Option<(&Ident, FluentKind)> {
        match self {
            BehavioralTerm::Neg(bt) => bt.fluent_head(),
            BehavioralTerm::RelFluent { name, .. } => Some((name, FluentKind::Relational)),
            BehavioralTerm::FunFluent { name, .. } => Some((name, FluentKind::Functional)),
            _ => None,
        }
    }

    pub fn mentions(&self, var: &str) -> bool {
        match self {
            BehavioralTerm::Neg(bt) => bt.mentions(var),
            BehavioralTerm::RelFluent { args, sit, .. } => {
                args.iter().any(|t| t.mentions(var)) || sit.mentions(var)
            }
            BehavioralTerm::FunFluent { args, .. } => args.iter().any(|t| t.mentions(var)),
            BehavioralTerm::Do { action, sit, .. } | BehavioralTerm::Poss { action, sit, .. } => {
                action.mentions(var) || sit.mentions(var)
            }
        }
    }

    pub fn node_count(&self) -> usize {
        1 + match self {
            BehavioralTerm::Neg(bt) => bt.node_count(),
            BehavioralTerm::RelFluent { args, sit, .. } => {
                args.iter().map(Term::node_count).sum::<usize>() + sit.node_count()
            }
            BehavioralTerm::FunFluent { args, .. } => args.iter().map(Term::node_count).sum(),
            BehavioralTerm::Do { action, sit, .. } | BehavioralTerm::Poss { action, sit, .. } => {
                action.node_count() + sit.node_count()
            }
        }
    }

    pub fn count_poss(&self) -> usize {
        match self {
            BehavioralTerm::Neg(bt) => bt.count_poss(),
            BehavioralTerm::RelFluent { args, sit, .. } => {
                args.iter().map(Term::count_poss).sum::<usize>() + sit.count_poss()
            }
            BehavioralTerm::FunFluent { args, .. } => args.iter().map(Term::count_poss).sum(),
            BehavioralTerm::Do { action, sit, .. } => action.count_poss() + sit.count_poss(),
            BehavioralTerm::Poss { action, sit, .. } => 1 + action.count_poss() + sit.count_poss(),
        }
    }
}

impl Formula {
    pub fn atom(bt: BehavioralTerm) -> Formula {
        Formula::Atom(bt)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(f: Formula) -> Formula {
        Formula::Neg(Box::new(f))
    }

    pub fn binary(op: BinOp, a: Formula, b: Formula) -> Formula {
        let (a, b) = (Box::new(a), Box::new(b));
        match op {
            BinOp::Supset => Formula::Supset(a, b),
            BinOp::Conj => Formula::Conj(a, b),
            BinOp::Disj => Formula::Disj(a, b),
        }
    }

    pub fn eq(a: Formula, b: Formula) -> Formula {
        Formula::Eq(Box::new(a), Box::new(b))
    }

    pub fn quant(kind: Quantifier, var: &str, types: Vec<Type>, body: Formula) -> Formula {
        Formula::Quant {
            kind,
            var: Ident::new(var),
            types,
            body: Box::new(body),
            span: Span::default(),
        }
    }

    pub fn span(&self) -> Span {
        match self {
            Formula::Atom(bt) => bt.span(),
            Formula::Term(t) => t.span(),
            Formula::Neg(f) => f.span(),
            Formula::Supset(a, b)
            | Formula::Conj(a, b)
            | Formula::Disj(a, b)
            | Formula::Eq(a, b) => a.span().join(b.span()),
            Formula::Quant { span, body, .. } => span.join(body.span()),
        }
    }

    pub fn mentions(&self, var: &str) -> bool {
        match self {
            Formula::Atom(bt) => bt.mentions(var),
            Formula::Term(t) => t.mentions(var),
            Formula::Neg(f) => f.mentions(var),
            Formula::Supset(a, b)
            | Formula::Conj(a, b)
            | Formula::Disj(a, b)
            | Formula::Eq(a, b) => a.mentions(var) || b.mentions(var),
            Formula::Quant {
                var: bound, body, ..
            } => bound.name != var && body.mentions(var),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            // Layer wrappers are not counted: they carry no operator.
            Formula::Atom(bt) => bt.node_count(),
            Formula::Term(t) => t.node_count(),
            Formula::Neg(f) => 1 + f.node_count(),
            Formula::Supset(a, b)
            | Formula::Conj(a, b)
            | Formula::Disj(a, b)
            | Formula::Eq(a, b) => 1 + a.node_count() + b.node_count(),
            Formula::Quant { body, .. } => 1 + body.node_count(),
        }
    }

    pub fn count_poss(&self) -> usize {
        match self {
            Formula::Atom(bt) => bt.count_poss(),
            Formula::Term(t) => t.count_poss(),
            Formula::Neg(f) => f.count_poss(),
            Formula::Supset(a, b)
            | Formula::Conj(a, b)
            | Formula::Disj(a, b)
            | Formula::Eq(a, b) => a.count_poss() + b.count_poss(),
            Formula::Quant { body, .. } => body.count_poss(),
        }
    }
}

impl Node {
    pub fn span(&self) -> Span {
        match self {
            Node::Term(t) => t.span(),
            Node::Behavioral(bt) => bt.span(),
            Node::Formula(f) => f.span(),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Node::Term(t) => t.node_count(),
            Node::Behavioral(bt) => bt.node_count(),
            Node::Formula(f) => f.node_count(),
        }
    }

    pub fn count_poss(&self) -> usize {
        match self {
            Node::Term(t) => t.count_poss(),
            Node::Behavioral(bt) => bt.count_poss(),
            Node::Formula(f) => f.count_poss(),
        }
    }
}

impl From<Term> for Node {
    fn from(t: Term) -> Self {
        Node::Term(t)
    }
}

impl From<BehavioralTerm> for Node {
    fn from(bt: BehavioralTerm) -> Self {
        Node::Behavioral(bt)
    }
}

impl From<Formula> for Node {
    fn from(f: Formula) -> Self {
        Node::Formula(f)
    }
}

// --- programs ---------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Declaration {
    /// `var x: T1 | T2;`
    Var {
        name: Ident,
        types: Vec<Type>,
        span: Span,
    },
    /// `rel r(T..);` or `fun f(T..);`. `params` excludes the implicit
    /// situation parameter of relational fluents.
    Fluent {
        kind: FluentKind,
        name: Ident,
        params: Vec<Type>,
        span: Span,
    },
}

impl Declaration {
    pub fn name(&self) -> &str {
        match self {
            Declaration::Var { name, .. } | Declaration::Fluent { name, .. } => &name.name,
        }
    }

    pub fn fluent(kind: FluentKind, name: &str, params: Vec<Type>) -> Declaration {
        Declaration::Fluent {
            kind,
            name: Ident::new(name),
            params,
            span: Span::default(),
        }
    }

    pub fn var(name: &str, types: Vec<Type>) -> Declaration {
        Declaration::Var {
            name: Ident::new(name),
            types,
            span: Span::default(),
        }
    }

    /// Full curried signature of a fluent declaration.
    pub fn signature(&self) -> Option<Type> {
        match self {
            Declaration::Fluent { kind, params, .. } => Some(match kind {
                FluentKind::Relational => Type::relational(params.clone()),
                FluentKind::Functional => Type::functional(params.clone()),
            }),
            Declaration::Var { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub name: Ident,
    pub formula: Formula,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SourceProgram {
    pub declarations: Vec<Declaration>,
    pub statements: Vec<Statement>,
}

impl SourceProgram {
    pub fn statement(&self, name: &str) -> Option<&Statement> {
        self.statements.iter().find(|s| s.name.name == name)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print_value(self))
    }
}
