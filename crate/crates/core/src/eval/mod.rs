//! Small-step evaluation `t → t'`.
//!
//! Reduction is left-first: connectives, sequences and fluent argument lists
//! step their leftmost reducible component. The only contractions are
//! `do(bt, s) → s'` and `poss(bt, s) → s ⊃ s'`, where `s'` is the successor
//! situation chosen by a [`TransitionPolicy`]. Variables and fluent
//! applications over irreducible arguments are open normal forms: they do not
//! step and they are not stuck.
//!
//! The rule reported for a step is the rule at the root of the node: `E-Neg`
//! for `~t → ~t'`, `E-Seq` for reduction inside an argument list, and so on.

mod semantics;
mod soundness;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::ast::{BehavioralTerm, Formula, Node, Quantifier, SituationValue, Term, Value};
use crate::context::TypingContext;
use crate::parser::print_node;
use crate::types::Type;

pub use semantics::{satisfies, SatError};
pub use soundness::{
    check_preservation, check_progress, PreservationReport, PreservationViolation, ProgressReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EvalRule {
    Unv,
    Est,
    Neg,
    Spt,
    Conj,
    Disj,
    Seq,
    Do,
    Poss,
}

impl EvalRule {
    pub const ALL: [EvalRule; 9] = [
        EvalRule::Unv,
        EvalRule::Est,
        EvalRule::Neg,
        EvalRule::Spt,
        EvalRule::Conj,
        EvalRule::Disj,
        EvalRule::Seq,
        EvalRule::Do,
        EvalRule::Poss,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EvalRule::Unv => "E-Unv",
            EvalRule::Est => "E-Est",
            EvalRule::Neg => "E-Neg",
            EvalRule::Spt => "E-Spt",
            EvalRule::Conj => "E-Conj",
            EvalRule::Disj => "E-Disj",
            EvalRule::Seq => "E-Seq",
            EvalRule::Do => "E-Do",
            EvalRule::Poss => "E-Poss",
        }
    }

    fn quantifier(kind: Quantifier) -> EvalRule {
        match kind {
            Quantifier::Forall => EvalRule::Unv,
            Quantifier::Exists => EvalRule::Est,
        }
    }
}

impl fmt::Display for EvalRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for EvalRule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StepResult {
    Stepped {
        next: Node,
        rule: EvalRule,
    },
    IsValue(Value),
    /// Irreducible but not a value, e.g. `fragile(x, s)`.
    Normal(Node),
    Stuck {
        node: Node,
        reason: String,
    },
}

/// Chooses the successor situation `s'` for `[s ↦ s']`.
pub trait TransitionPolicy: Send + Sync {
    /// `sit` is an irreducible situation term and `action` an irreducible
    /// action. `None` means no successor exists, which makes the redex stuck.
    fn successor(&self, sit: &Term, action: &BehavioralTerm) -> Option<SituationValue>;
}

/// Extends the history of `s` by the executed action.
#[derive(Debug, Clone, Copy, Default)]
pub struct AppendHistory;

impl TransitionPolicy for AppendHistory {
    fn successor(&self, sit: &Term, action: &BehavioralTerm) -> Option<SituationValue> {
        match sit {
            Term::Lit(Value::Situation(sv), _) => {
                let mut next = sv.clone();
                next.actions.push(action.clone());
                Some(next)
            }
            Term::Lit(..) => None,
            other => Some(SituationValue {
                base: Some(Box::new(other.clone())),
                actions: vec![action.clone()],
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Value(Value),
    Normal(Node),
    Stuck { node: Node, reason: String },
    OutOfFuel(Node),
}

impl Outcome {
    pub fn is_stuck(&self) -> bool {
        matches!(self, Outcome::Stuck { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Value(_) => "value",
            Outcome::Normal(_) => "normal",
            Outcome::Stuck { .. } => "stuck",
            Outcome::OutOfFuel(_) => "out-of-fuel",
        }
    }

    pub fn node_text(&self) -> String {
        match self {
            Outcome::Value(v) => v.to_string(),
            Outcome::Normal(n) | Outcome::Stuck { node: n, .. } | Outcome::OutOfFuel(n) => {
                print_node(n)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub rule: EvalRule,
    pub node: Node,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub outcome: Outcome,
    /// Node after each step, in order.
    pub trace: Vec<TraceStep>,
}

impl Evaluation {
    pub fn steps(&self) -> usize {
        self.trace.len()
    }
}

enum Step<T> {
    Next(T, EvalRule),
    Done,
    Stuck(String),
}

impl<T> Step<T> {
    fn map<U>(self, f: impl FnOnce(T) -> U) -> Step<U> {
        match self {
            Step::Next(t, rule) => Step::Next(f(t), rule),
            Step::Done => Step::Done,
            Step::Stuck(r) => Step::Stuck(r),
        }
    }
}

/// Bound variables while descending into quantifier bodies. `None` marks a
/// multi-candidate binding whose sort is unknown.
type Scope = Vec<(String, Option<Type>)>;

/// A stepping engine. Optional variable sorts (usually from the typing
/// context) let it detect equations between differently sorted sides.
pub struct Machine<'p> {
    policy: &'p dyn TransitionPolicy,
    sorts: BTreeMap<String, Type>,
}

impl<'p> Machine<'p> {
    pub fn new(policy: &'p dyn TransitionPolicy) -> Self {
        Machine {
            policy,
            sorts: BTreeMap::new(),
        }
    }

    pub fn with_context(policy: &'p dyn TransitionPolicy, w: &TypingContext) -> Self {
        Machine {
            policy,
            sorts: w.var_sorts(),
        }
    }

    pub fn step(&self, node: &Node) -> StepResult {
        let mut scope = Scope::new();
        let literal = match node {
            Node::Term(Term::Lit(v, _)) | Node::Formula(Formula::Term(Term::Lit(v, _))) => Some(v),
            _ => None,
        };
        if let Some(v) = literal {
            return StepResult::IsValue(v.clone());
        }
        let result = match node {
            Node::Term(t) => self.term(t, &mut scope).map(Node::Term),
            Node::Behavioral(bt) => self.behavioral(bt, &mut scope).map(|t| match t {
                Term::Behavioral(b) => Node::Behavioral(*b),
                other => Node::Term(other),
            }),
            Node::Formula(f) => self.formula(f, &mut scope).map(Node::Formula),
        };
        match result {
            Step::Next(next, rule) => StepResult::Stepped { next, rule },
            Step::Done => StepResult::Normal(node.clone()),
            Step::Stuck(reason) => StepResult::Stuck {
                node: node.clone(),
                reason,
            },
        }
    }

    /// Steps at most `fuel` times.
    pub fn evaluate(&self, node: &Node, fuel: usize) -> Evaluation {
        let mut current = node.clone();
        let mut trace = Vec::new();
        loop {
            match self.step(&current) {
                StepResult::Stepped { next, rule } => {
                    if trace.len() == fuel {
                        return Evaluation {
                            outcome: Outcome::OutOfFuel(current),
                            trace,
                        };
                    }
                    trace.push(TraceStep {
                        rule,
                        node: next.clone(),
                    });
                    current = next;
                }
                StepResult::IsValue(v) => {
                    return Evaluation {
                        outcome: Outcome::Value(v),
                        trace,
                    }
                }
                StepResult::Normal(n) => {
                    return Evaluation {
                        outcome: Outcome::Normal(n),
                        trace,
                    }
                }
                StepResult::Stuck { node, reason } => {
                    return Evaluation {
                        outcome: Outcome::Stuck { node, reason },
                        trace,
                    }
                }
            }
        }
    }

    // --- sorts of irreducible heads ------------------------------------

    fn var_sort(&self, name: &str, scope: &Scope) -> Option<Type> {
        match scope.iter().rev().find(|(n, _)| n == name) {
            Some((_, sort)) => sort.clone(),
            None => self.sorts.get(name).cloned(),
        }
    }

    fn sort_term(&self, t: &Term, scope: &Scope) -> Option<Type> {
        match t {
            Term::Var(id) => self.var_sort(&id.name, scope),
            Term::Lit(Value::True | Value::False, _) => Some(Type::Bool),
            Term::Lit(Value::Unit, _) => Some(Type::Unit),
            Term::Lit(Value::Situation(_), _) => Some(Type::Situation),
            Term::Neg(inner) => self.sort_term(inner, scope),
            Term::Behavioral(bt) => Self::sort_bt(bt),
            _ => None,
        }
    }

    fn sort_bt(bt: &BehavioralTerm) -> Option<Type> {
        Some(match bt {
            BehavioralTerm::Neg(inner) => return Self::sort_bt(inner),
            BehavioralTerm::RelFluent { .. } | BehavioralTerm::Do { .. } => Type::Situation,
            BehavioralTerm::FunFluent { .. } => Type::Action,
            BehavioralTerm::Poss { .. } => Type::Unit,
        })
    }

    fn sort_formula(&self, f: &Formula, scope: &Scope) -> Option<Type> {
        match f {
            Formula::Atom(bt) => Self::sort_bt(bt),
            Formula::Term(t) => self.sort_term(t, scope),
            Formula::Neg(inner) => self.sort_formula(inner, scope),
            _ => None,
        }
    }

    // --- stepping --------------------------------------------------------

    fn term(&self, t: &Term, scope: &mut Scope) -> Step<Term> {
        match t {
            Term::Var(_) | Term::Lit(..) => Step::Done,
            Term::Quant {
                kind,
                var,
                types,
                body,
                span,
            } => {
                let sort = (types.len() == 1).then(|| types[0].clone());
                scope.push((var.name.clone(), sort));
                let inner = self.term(body, scope);
                scope.pop();
                match inner {
                    Step::Next(b, _) => Step::Next(
                        Term::Quant {
                            kind: *kind,
                            var: var.clone(),
                            types: types.clone(),
                            body: Box::new(b),
                            span: *span,
                        },
                        EvalRule::quantifier(*kind),
                    ),
                    Step::Done => Step::Done,
                    Step::Stuck(r) => Step::Stuck(r),
                }
            }
            Term::Neg(inner) => match self.term(inner, scope) {
                Step::Next(t, _) => Step::Next(Term::neg(t), EvalRule::Neg),
                Step::Done => Step::Done,
                Step::Stuck(r) => Step::Stuck(r),
            },
            Term::Supset(a, b) => self.term_pair(a, b, scope, EvalRule::Spt, Term::Supset),
            Term::Conj(a, b) => self.term_pair(a, b, scope, EvalRule::Conj, Term::Conj),
            Term::Disj(a, b) => self.term_pair(a, b, scope, EvalRule::Disj, Term::Disj),
            Term::Seq(items, span) => match self.term_list(items, scope) {
                Step::Next(items, rule) => Step::Next(Term::Seq(items, *span), rule),
                Step::Done => Step::Done,
                Step::Stuck(r) => Step::Stuck(r),
            },
            Term::Behavioral(bt) => self.behavioral(bt, scope),
        }
    }

    fn term_pair(
        &self,
        a: &Term,
        b: &Term,
        scope: &mut Scope,
        rule: EvalRule,
        build: fn(Box<Term>, Box<Term>) -> Term,
    ) -> Step<Term> {
        match self.term(a, scope) {
            Step::Next(a2, _) => return Step::Next(build(Box::new(a2), Box::new(b.clone())), rule),
            Step::Stuck(r) => return Step::Stuck(r),
            Step::Done => {}
        }
        match self.term(b, scope) {
            Step::Next(b2, _) => Step::Next(build(Box::new(a.clone()), Box::new(b2)), rule),
            other => other,
        }
    }

    /// Steps the leftmost reducible element (`E-Seq`).
    fn term_list(&self, items: &[Term], scope: &mut Scope) -> Step<Vec<Term>> {
        for (i, item) in items.iter().enumerate() {
            match self.term(item, scope) {
                Step::Next(t, _) => {
                    let mut out = items.to_vec();
                    out[i] = t;
                    return Step::Next(out, EvalRule::Seq);
                }
                Step::Stuck(r) => return Step::Stuck(r),
                Step::Done => {}
            }
        }
        Step::Done
    }

    /// Results are returned in term position; behavioral results come back
    /// wrapped in [`Term::Behavioral`].
    fn behavioral(&self, bt: &BehavioralTerm, scope: &mut Scope) -> Step<Term> {
        match bt {
            BehavioralTerm::Neg(inner) => match self.behavioral(inner, scope) {
                Step::Next(Term::Behavioral(b), _) => {
                    Step::Next(Term::bt(BehavioralTerm::Neg(b)), EvalRule::Neg)
                }
                Step::Next(t, _) => Step::Next(Term::neg(t), EvalRule::Neg),
                other => other,
            },
            BehavioralTerm::RelFluent {
                name,
                args,
                sit,
                span,
            } => {
                let mut all = args.clone();
                all.push((**sit).clone());
                match self.term_list(&all, scope) {
                    Step::Next(mut items, rule) => {
                        let sit = items.pop().expect("situation slot");
                        Step::Next(
                            Term::bt(BehavioralTerm::RelFluent {
                                name: name.clone(),
                                args: items,
                                sit: Box::new(sit),
                                span: *span,
                            }),
                            rule,
                        )
                    }
                    Step::Done => Step::Done,
                    Step::Stuck(r) => Step::Stuck(r),
                }
            }
            BehavioralTerm::FunFluent { name, args, span } => match self.term_list(args, scope) {
                Step::Next(items, rule) => Step::Next(
                    Term::bt(BehavioralTerm::FunFluent {
                        name: name.clone(),
                        args: items,
                        span: *span,
                    }),
                    rule,
                ),
                Step::Done => Step::Done,
                Step::Stuck(r) => Step::Stuck(r),
            },
            BehavioralTerm::Do { action, sit, span }
            | BehavioralTerm::Poss { action, sit, span } => {
                let poss = matches!(bt, BehavioralTerm::Poss { .. });
                let rebuild = |action: Box<BehavioralTerm>, sit: Box<Term>| {
                    Term::bt(if poss {
                        BehavioralTerm::Poss {
                            action,
                            sit,
                            span: *span,
                        }
                    } else {
                        BehavioralTerm::Do {
                            action,
                            sit,
                            span: *span,
                        }
                    })
                };
                let construct = if poss { "poss" } else { "do" };
                match self.behavioral(action, scope) {
                    Step::Next(Term::Behavioral(a), _) => {
                        return Step::Next(rebuild(a, sit.clone()), EvalRule::Seq)
                    }
                    Step::Next(_, _) => {
                        return Step::Stuck(format!(
                            "operand of `{construct}` reduced to a non-behavioral term"
                        ))
                    }
                    Step::Stuck(r) => return Step::Stuck(r),
                    Step::Done => {}
                }
                match self.term(sit, scope) {
                    Step::Next(s, _) => {
                        return Step::Next(rebuild(action.clone(), Box::new(s)), EvalRule::Seq)
                    }
                    Step::Stuck(r) => return Step::Stuck(r),
                    Step::Done => {}
                }
                if let Some(sort) = Self::sort_bt(action).filter(|s| *s != Type::Action) {
                    return Step::Stuck(format!(
                        "operand of `{construct}` has sort {sort}, not Action"
                    ));
                }
                if let Some(sort) = self.sort_term(sit, scope).filter(|s| *s != Type::Situation) {
                    return Step::Stuck(format!(
                        "situation of `{construct}` has sort {sort}, not Situation"
                    ));
                }
                let Some(next) = self.policy.successor(sit, action) else {
                    return Step::Stuck(format!("no successor situation for `{construct}`"));
                };
                let successor = Term::lit(Value::Situation(next));
                if poss {
                    Step::Next(
                        Term::Supset(sit.clone(), Box::new(successor)),
                        EvalRule::Poss,
                    )
                } else {
                    Step::Next(successor, EvalRule::Do)
                }
            }
        }
    }

    fn formula(&self, f: &Formula, scope: &mut Scope) -> Step<Formula> {
        match f {
            Formula::Atom(bt) => match self.behavioral(bt, scope) {
                Step::Next(Term::Behavioral(b), rule) => Step::Next(Formula::Atom(*b), rule),
                Step::Next(t, rule) => Step::Next(Formula::Term(t), rule),
                Step::Done => Step::Done,
                Step::Stuck(r) => Step::Stuck(r),
            },
            Formula::Term(t) => match self.term(t, scope) {
                Step::Next(t, rule) => Step::Next(Formula::Term(t), rule),
                Step::Done => Step::Done,
                Step::Stuck(r) => Step::Stuck(r),
            },
            Formula::Neg(inner) => match self.formula(inner, scope) {
                Step::Next(g, _) => Step::Next(Formula::neg(g), EvalRule::Neg),
                other => other,
            },
            Formula::Supset(a, b) => self.formula_pair(a, b, scope, EvalRule::Spt, Formula::Supset),
            Formula::Conj(a, b) => self.formula_pair(a, b, scope, EvalRule::Conj, Formula::Conj),
            Formula::Disj(a, b) => self.formula_pair(a, b, scope, EvalRule::Disj, Formula::Disj),
            Formula::Eq(a, b) => match self.formula_pair(a, b, scope, EvalRule::Seq, Formula::Eq) {
                Step::Done => match (self.sort_formula(a, scope), self.sort_formula(b, scope)) {
                    (Some(l), Some(r)) if l != r => {
                        Step::Stuck(format!("equation between sorts {l} and {r}"))
                    }
                    _ => Step::Done,
                },
                other => other,
            },
            Formula::Quant {
                kind,
                var,
                types,
                body,
                span,
            } => {
                let sort = (types.len() == 1).then(|| types[0].clone());
                scope.push((var.name.clone(), sort));
                let inner = self.formula(body, scope);
                scope.pop();
                match inner {
                    Step::Next(b, _) => Step::Next(
                        Formula::Quant {
                            kind: *kind,
                            var: var.clone(),
                            types: types.clone(),
                            body: Box::new(b),
                            span: *span,
                        },
                        EvalRule::quantifier(*kind),
                    ),
                    other => other,
                }
            }
        }
    }

    fn formula_pair(
        &self,
        a: &Formula,
        b: &Formula,
        scope: &mut Scope,
        rule: EvalRule,
        build: fn(Box<Formula>, Box<Formula>) -> Formula,
    ) -> Step<Formula> {
        match self.formula(a, scope) {
            Step::Next(a2, _) => return Step::Next(build(Box::new(a2), Box::new(b.clone())), rule),
            Step::Stuck(r) => return Step::Stuck(r),
            Step::Done => {}
        }
        match self.formula(b, scope) {
            Step::Next(b2, _) => Step::Next(build(Box::new(a.clone()), Box::new(b2)), rule),
            other => other,
        }
    }
}

pub fn step(node: &Node, policy: &dyn TransitionPolicy) -> StepResult {
    Machine::new(policy).step(node)
}

pub fn evaluate(node: &Node, policy: &dyn TransitionPolicy, fuel: usize) -> Evaluation {
    Machine::new(policy).evaluate(node, fuel)
}
