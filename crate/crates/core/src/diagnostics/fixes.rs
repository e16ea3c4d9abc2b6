//! Rewrite templates for E005 and E006.
//!
//! `WrapInRelationalFluent` turns an object-valued equation side into a
//! relational fluent over that object, e.g. `c` into `inColor(c, s)`.
//! `AddSituationArgument` turns the single action-typed conjunct of an
//! otherwise situation-typed conjunction into a relational fluent, e.g.
//! `heavy(x)` into `heavy(x, s)`. Both need a unique situation variable in
//! scope and are not offered otherwise.

use serde::Serialize;
use thiserror::Error;

use crate::ast::{BehavioralTerm, Declaration, Formula, Ident, Node, SourceProgram, Span, Term};
use crate::context::TypingContext;
use crate::parser::{parse_program, print_declaration, print_node, print_program, ParseError};
use crate::typecheck::{typecheck_formula, Judgment, TypeErrorKind};
use crate::types::{FluentKind, Type};

use super::Diagnostic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FixKind {
    WrapInRelationalFluent,
    AddSituationArgument,
}

/// A replacement of the node at `target` together with the declaration it
/// needs. The declaration replaces any existing one of the same name.
#[derive(Debug, Clone, PartialEq)]
pub struct Fix {
    pub kind: FixKind,
    pub target: Span,
    pub original: Node,
    pub replacement: BehavioralTerm,
    pub declaration: Declaration,
    pub rationale: String,
}

impl Fix {
    pub fn replacement_text(&self) -> String {
        print_node(&Node::Behavioral(self.replacement.clone()))
    }

    pub fn original_text(&self) -> String {
        print_node(&self.original)
    }
}

impl Serialize for Fix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View<'a> {
            kind: FixKind,
            target: &'a Span,
            original: String,
            replacement: String,
            declaration: String,
            rationale: &'a str,
        }
        View {
            kind: self.kind,
            target: &self.target,
            original: self.original_text(),
            replacement: self.replacement_text(),
            declaration: print_declaration(&self.declaration),
            rationale: &self.rationale,
        }
        .serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixError {
    #[error("fix is stale: no node at {}:{} matches `{original}`", target.line, target.column)]
    Stale { target: Span, original: String },
    #[error("fixed program does not parse: {0}")]
    Unparseable(ParseError),
}

fn situation_var(w: &TypingContext) -> Option<String> {
    let mut vars = w.vars_of_type(&Type::Situation);
    (vars.len() == 1).then(|| vars.remove(0))
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(first) => first.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

fn as_term(n: &Node) -> Option<Term> {
    match n {
        Node::Term(t) | Node::Formula(Formula::Term(t)) => Some(t.clone()),
        Node::Behavioral(bt) | Node::Formula(Formula::Atom(bt)) => Some(Term::bt(bt.clone())),
        Node::Formula(_) => None,
    }
}

fn head_name(n: &Node) -> Option<String> {
    let bt = match as_term(n)? {
        Term::Behavioral(bt) => *bt,
        _ => return None,
    };
    bt.fluent_head().map(|(id, _)| id.name.clone())
}

/// Proposes rewrites for `d`, which must have been reported for `f` under `w`.
pub fn suggest_fixes(w: &TypingContext, f: &Formula, d: &Diagnostic) -> Vec<Fix> {
    let Err(e) = typecheck_formula(w, f) else {
        return Vec::new();
    };
    if e.code() != d.code.as_str() || !e.span.same_range(&d.span) {
        return Vec::new();
    }
    let fix = match &e.kind {
        TypeErrorKind::EqMismatch { left, right } => wrap_fix(w, left, right),
        TypeErrorKind::NonUniform { components, .. } => situation_argument_fix(w, components),
        _ => None,
    };
    fix.into_iter().collect()
}

fn wrap_fix(w: &TypingContext, left: &Judgment, right: &Judgment) -> Option<Fix> {
    let (object, other) = match (&left.ty, &right.ty) {
        (Type::Object, Type::Situation) => (left, right),
        (Type::Situation, Type::Object) => (right, left),
        _ => return None,
    };
    let s = situation_var(w)?;
    let term = as_term(&object.subject)?;
    let name = match (head_name(&other.subject), &term) {
        (Some(head), _) => format!("in{}", capitalize(&head)),
        (None, Term::Var(id)) => format!("rel_{}", id.name),
        _ => return None,
    };
    if w.fluent(&name).is_some() {
        return None;
    }
    let target = term.span();
    let replacement = BehavioralTerm::RelFluent {
        name: Ident::spanned(name.as_str(), target),
        args: vec![term],
        sit: Box::new(Term::Var(Ident::spanned(s.as_str(), target))),
        span: target,
    };
    Some(Fix {
        kind: FixKind::WrapInRelationalFluent,
        target,
        original: object.subject.clone(),
        declaration: Declaration::fluent(FluentKind::Relational, &name, vec![Type::Object]),
        rationale: format!(
            "the other side is a Situation; relate the object to situation `{s}` through a new relational fluent `{name}`"
        ),
        replacement,
    })
}

/// The behavioral term under any negations of either layer.
fn strip_negations(n: &Node) -> Option<BehavioralTerm> {
    let mut f = match n {
        Node::Formula(f) => f,
        other => return strip_term(as_term(other)?),
    };
    while let Formula::Neg(inner) = f {
        f = inner;
    }
    strip_term(as_term(&Node::Formula(f.clone()))?)
}

fn strip_term(mut t: Term) -> Option<BehavioralTerm> {
    while let Term::Neg(inner) = t {
        t = *inner;
    }
    let Term::Behavioral(bt) = t else { return None };
    let mut bt = *bt;
    while let BehavioralTerm::Neg(inner) = bt {
        bt = *inner;
    }
    Some(bt)
}

fn situation_argument_fix(w: &TypingContext, components: &[Judgment]) -> Option<Fix> {
    let mut actions = components.iter().filter(|j| j.ty == Type::Action);
    let odd = actions.next()?;
    if actions.next().is_some()
        || !components
            .iter()
            .all(|j| j.ty == Type::Action || j.ty == Type::Situation)
        || components.len() < 2
    {
        return None;
    }
    let s = situation_var(w)?;
    let bt = strip_negations(&odd.subject)?;
    let BehavioralTerm::FunFluent { name, args, span } = &bt else {
        return None;
    };
    let Some(Type::Arrow { params, result }) = w.fluent(&name.name) else {
        return None;
    };
    if **result != Type::Action {
        return None;
    }
    let replacement = BehavioralTerm::RelFluent {
        name: name.clone(),
        args: args.clone(),
        sit: Box::new(Term::Var(Ident::spanned(s.as_str(), *span))),
        span: *span,
    };
    Some(Fix {
        kind: FixKind::AddSituationArgument,
        target: *span,
        original: Node::Behavioral(bt.clone()),
        declaration: Declaration::fluent(FluentKind::Relational, &name.name, params.clone()),
        rationale: format!(
            "the other conjuncts are Situations; make `{}` a relational fluent holding in situation `{s}`",
            name.name
        ),
        replacement,
    })
}

/// Applies `fix` to the first matching node. Spans of untouched nodes are
/// kept, so several fixes computed against one program can be applied in
/// sequence.
pub fn apply_fix(program: &SourceProgram, fix: &Fix) -> Result<SourceProgram, FixError> {
    let original = as_term(&fix.original);
    let rw = Rewriter {
        fix,
        original: original.as_ref(),
    };
    let mut out = program.clone();
    let hit = out.statements.iter_mut().find_map(|s| {
        let new = rw.formula(&s.formula)?;
        s.formula = new;
        Some(())
    });
    if hit.is_none() {
        return Err(FixError::Stale {
            target: fix.target,
            original: fix.original_text(),
        });
    }
    match out
        .declarations
        .iter_mut()
        .find(|d| d.name() == fix.declaration.name())
    {
        Some(d) => *d = fix.declaration.clone(),
        None => out.declarations.push(fix.declaration.clone()),
    }
    parse_program(&print_program(&out)).map_err(FixError::Unparseable)?;
    Ok(out)
}

struct Rewriter<'a> {
    fix: &'a Fix,
    original: Option<&'a Term>,
}

impl Rewriter<'_> {
    fn hit(&self, t: &Term) -> bool {
        t.span().same_range(&self.fix.target) && Some(t) == self.original
    }

    /// A different node now occupies the target span; nothing inside it is
    /// the fix's target any more.
    fn replaced(&self, t: &Term) -> bool {
        t.span().same_range(&self.fix.target) && Some(t) != self.original
    }

    fn repl(&self) -> BehavioralTerm {
        self.fix.replacement.clone()
    }

    fn pair<T: Clone>(&self, a: &T, b: &T, go: impl Fn(&T) -> Option<T>) -> Option<(T, T)> {
        if let Some(a2) = go(a) {
            return Some((a2, b.clone()));
        }
        go(b).map(|b2| (a.clone(), b2))
    }

    fn formula(&self, f: &Formula) -> Option<Formula> {
        let bin = |a: &Formula, b: &Formula, build: fn(Box<Formula>, Box<Formula>) -> Formula| {
            self.pair(a, b, |x| self.formula(x))
                .map(|(a, b)| build(Box::new(a), Box::new(b)))
        };
        match f {
            Formula::Atom(bt) => self.behavioral(bt).map(Formula::Atom),
            Formula::Term(t) => {
                if self.hit(t) {
                    return Some(Formula::Atom(self.repl()));
                }
                if self.replaced(t) {
                    return None;
                }
                self.term(t).map(Formula::Term)
            }
            Formula::Neg(a) => self.formula(a).map(Formula::neg),
            Formula::Supset(a, b) => bin(a, b, Formula::Supset),
            Formula::Conj(a, b) => bin(a, b, Formula::Conj),
            Formula::Disj(a, b) => bin(a, b, Formula::Disj),
            Formula::Eq(a, b) => bin(a, b, Formula::Eq),
            Formula::Quant {
                kind,
                var,
                types,
                body,
                span,
            } => self.formula(body).map(|b| Formula::Quant {
                kind: *kind,
                var: var.clone(),
                types: types.clone(),
                body: Box::new(b),
                span: *span,
            }),
        }
    }

    fn term(&self, t: &Term) -> Option<Term> {
        if self.hit(t) {
            return Some(Term::bt(self.repl()));
        }
        if self.replaced(t) {
            return None;
        }
        let bin = |a: &Term, b: &Term, build: fn(Box<Term>, Box<Term>) -> Term| {
            self.pair(a, b, |x| self.term(x))
                .map(|(a, b)| build(Box::new(a), Box::new(b)))
        };
        match t {
            Term::Var(_) | Term::Lit(..) => None,
            Term::Quant {
                kind,
                var,
                types,
                body,
                span,
            } => self.term(body).map(|b| Term::Quant {
                kind: *kind,
                var: var.clone(),
                types: types.clone(),
                body: Box::new(b),
                span: *span,
            }),
            Term::Neg(a) => self.term(a).map(Term::neg),
            Term::Supset(a, b) => bin(a, b, Term::Supset),
            Term::Conj(a, b) => bin(a, b, Term::Conj),
            Term::Disj(a, b) => bin(a, b, Term::Disj),
            Term::Seq(items, span) => self.list(items).map(|items| Term::Seq(items, *span)),
            Term::Behavioral(bt) => self.behavioral(bt).map(Term::bt),
        }
    }

    fn list(&self, items: &[Term]) -> Option<Vec<Term>> {
        items.iter().enumerate().find_map(|(i, item)| {
            let new = self.term(item)?;
            let mut out = items.to_vec();
            out[i] = new;
            Some(out)
        })
    }

    fn behavioral(&self, bt: &BehavioralTerm) -> Option<BehavioralTerm> {
        let as_term = Term::bt(bt.clone());
        if self.hit(&as_term) {
            return Some(self.repl());
        }
        if self.replaced(&as_term) {
            return None;
        }
        match bt {
            BehavioralTerm::Neg(inner) => self.behavioral(inner).map(BehavioralTerm::neg),
            BehavioralTerm::RelFluent {
                name,
                args,
                sit,
                span,
            } => {
                let mut all = args.clone();
                all.push((**sit).clone());
                let mut all = self.list(&all)?;
                let sit = all.pop().expect("situation slot");
                Some(BehavioralTerm::RelFluent {
                    name: name.clone(),
                    args: all,
                    sit: Box::new(sit),
                    span: *span,
                })
            }
            BehavioralTerm::FunFluent { name, args, span } => {
                self.list(args).map(|args| BehavioralTerm::FunFluent {
                    name: name.clone(),
                    args,
                    span: *span,
                })
            }
            BehavioralTerm::Do { action, sit, span }
            | BehavioralTerm::Poss { action, sit, span } => {
                let (action, sit) = match self.behavioral(action) {
                    Some(a) => (a, (**sit).clone()),
                    None => ((**action).clone(), self.term(sit)?),
                };
                let (action, sit) = (Box::new(action), Box::new(sit));
                Some(match bt {
                    BehavioralTerm::Do { .. } => BehavioralTerm::Do {
                        action,
                        sit,
                        span: *span,
                    },
                    _ => BehavioralTerm::Poss {
                        action,
                        sit,
                        span: *span,
                    },
                })
            }
        }
    }
}
