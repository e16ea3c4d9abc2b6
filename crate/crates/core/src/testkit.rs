//! Seeded random generators for property tests and benchmarks.
//!
//! Generated formulas are in the canonical layering produced by the parser,
//! so `parse(print(f)) == f` is expected to hold for every output.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::ast::{BehavioralTerm, BinOp, Formula, Ident, Quantifier, SourceProgram, Term, Value};
use crate::context::TypingContext;
use crate::parser::parse_program;
use crate::typecheck::typecheck_formula;
use crate::types::{FluentKind, Type};

/// Declarations plus the derived typing context.
#[derive(Debug, Clone)]
pub struct Signature {
    pub program: SourceProgram,
    pub context: TypingContext,
}

impl Signature {
    pub fn from_source(src: &str) -> Signature {
        let program = parse_program(src).expect("signature source parses");
        let context = TypingContext::from_program(&program).expect("signature is consistent");
        Signature { program, context }
    }

    /// Eight fluents over variables of every base type.
    pub fn pool() -> Signature {
        Signature::from_source(
            "var x: Object; var y: Object; var s: Situation; var t: Situation;
             var a: Action; var b: Bool; var u: Unit;
             rel fragile(Object); rel broken(Object); rel holding(Object, Object);
             rel nextTo(Object, Object); rel at(Situation);
             fun drop(Object, Object); fun pickup(Object); fun heavy(Object);",
        )
    }

    /// One relational and one functional fluent.
    pub fn two_fluents() -> Signature {
        Signature::from_source(
            "var x: Object; var s: Situation; var a: Action;
             rel p(Object); fun f(Object);",
        )
    }

    fn fluents(&self, kind: FluentKind) -> Vec<(String, Vec<Type>)> {
        self.context
            .fluents()
            .filter(|(_, ty)| ty.fluent_kind() == Some(kind))
            .map(|(name, ty)| {
                let Type::Arrow { params, .. } = ty else {
                    unreachable!("fluent signature")
                };
                let mut params = params.clone();
                if kind == FluentKind::Relational {
                    params.pop();
                }
                (name.to_string(), params)
            })
            .collect()
    }

    fn var_names(&self) -> Vec<String> {
        self.context.visible_vars().into_keys().collect()
    }
}

/// Lifts a term into the formula layer the way the parser would.
pub fn to_formula(t: Term) -> Formula {
    if !t.has_behavioral() {
        return Formula::Term(t);
    }
    match t {
        Term::Behavioral(bt) => Formula::Atom(*bt),
        Term::Neg(a) => Formula::neg(to_formula(*a)),
        Term::Supset(a, b) => Formula::binary(BinOp::Supset, to_formula(*a), to_formula(*b)),
        Term::Conj(a, b) => Formula::binary(BinOp::Conj, to_formula(*a), to_formula(*b)),
        Term::Disj(a, b) => Formula::binary(BinOp::Disj, to_formula(*a), to_formula(*b)),
        Term::Quant {
            kind,
            var,
            types,
            body,
            span,
        } => Formula::Quant {
            kind,
            var,
            types,
            body: Box::new(to_formula(*body)),
            span,
        },
        seq @ (Term::Seq(..) | Term::Var(_) | Term::Lit(..)) => Formula::Term(seq),
    }
}

const OPS: [BinOp; 3] = [BinOp::Supset, BinOp::Conj, BinOp::Disj];

fn quantifier<R: Rng>(rng: &mut R) -> Quantifier {
    if rng.gen_bool(0.5) {
        Quantifier::Forall
    } else {
        Quantifier::Exists
    }
}

/// Generator over a fixed signature. `max_depth` bounds the term depth.
pub struct Gen<'s, R> {
    pub rng: R,
    pub sig: &'s Signature,
    pub max_depth: usize,
    rels: Vec<(String, Vec<Type>)>,
    funs: Vec<(String, Vec<Type>)>,
    fresh: usize,
    scope: Vec<(String, Type)>,
}

impl<'s, R: Rng> Gen<'s, R> {
    pub fn new(rng: R, sig: &'s Signature, max_depth: usize) -> Self {
        Gen {
            rng,
            sig,
            max_depth: max_depth.max(1),
            rels: sig.fluents(FluentKind::Relational),
            funs: sig.fluents(FluentKind::Functional),
            fresh: 0,
            scope: Vec::new(),
        }
    }

    fn fresh_var(&mut self) -> String {
        self.fresh += 1;
        format!("q{}", self.fresh)
    }

    // --- untyped canonical ASTs -------------------------------------------

    /// Any canonical statement body, typed or not.
    pub fn any_formula(&mut self) -> Formula {
        self.scope.clear();
        let d = self.max_depth - 1;
        if self.rng.gen_bool(0.15) {
            let a = self.any_term(d);
            let b = self.any_term(d);
            Formula::eq(to_formula(a), to_formula(b))
        } else {
            let t = self.any_term(d);
            to_formula(t)
        }
    }

    fn any_var(&mut self) -> Term {
        let mut names = self.sig.var_names();
        names.extend(self.scope.iter().map(|(n, _)| n.clone()));
        Term::var(names.choose(&mut self.rng).expect("at least one variable"))
    }

    fn any_leaf(&mut self) -> Term {
        match self.rng.gen_range(0..6) {
            0 => Term::lit(Value::True),
            1 => Term::lit(Value::False),
            2 => Term::lit(Value::Unit),
            3 => Term::s0(),
            _ => self.any_var(),
        }
    }

    pub fn any_term(&mut self, depth: usize) -> Term {
        if depth == 0 {
            return self.any_leaf();
        }
        let d = depth - 1;
        match self.rng.gen_range(0..9) {
            0 => self.any_leaf(),
            1 => Term::neg(self.any_term(d)),
            2 | 3 => {
                let op = *OPS.choose(&mut self.rng).expect("ops");
                let a = self.any_term(d);
                let b = self.any_term(d);
                Term::binary(op, a, b)
            }
            4 => {
                let kind = quantifier(&mut self.rng);
                let n = self.rng.gen_range(1..=3);
                let types: Vec<Type> = Type::BASE
                    .choose_multiple(&mut self.rng, n)
                    .cloned()
                    .collect();
                let var = self.fresh_var();
                self.scope.push((var.clone(), types[0].clone()));
                let body = self.any_term(d);
                self.scope.pop();
                Term::Quant {
                    kind,
                    var: Ident::new(var),
                    types,
                    body: Box::new(body),
                    span: Default::default(),
                }
            }
            5 => {
                let n = self.rng.gen_range(1..=3);
                Term::Seq(
                    (0..n).map(|_| self.any_term(d)).collect(),
                    Default::default(),
                )
            }
            _ => Term::bt(self.any_head(d)),
        }
    }

    fn any_head(&mut self, depth: usize) -> BehavioralTerm {
        match self.rng.gen_range(0..4) {
            0 if !self.rels.is_empty() => {
                let (name, _) = self.rels.choose(&mut self.rng).expect("rel").clone();
                let n = self.rng.gen_range(1..=2);
                let args = (0..n).map(|_| self.any_term(depth)).collect();
                BehavioralTerm::rel(&name, args, self.any_term(depth))
            }
            1 if !self.funs.is_empty() => {
                let (name, _) = self.funs.choose(&mut self.rng).expect("fun").clone();
                let n = self.rng.gen_range(1..=2);
                BehavioralTerm::fun(&name, (0..n).map(|_| self.any_term(depth)).collect())
            }
            k if depth > 0 => {
                let action = self.any_operand(depth - 1);
                let sit = self.any_term(depth - 1);
                if k == 2 {
                    BehavioralTerm::do_(action, sit)
                } else {
                    BehavioralTerm::poss(action, sit)
                }
            }
            _ => {
                let (name, _) = self
                    .funs
                    .first()
                    .or(self.rels.first())
                    .expect("signature has fluents")
                    .clone();
                BehavioralTerm::fun(&name, vec![self.any_leaf()])
            }
        }
    }

    fn any_operand(&mut self, depth: usize) -> BehavioralTerm {
        if depth > 0 && self.rng.gen_bool(0.2) {
            BehavioralTerm::neg(self.any_operand(depth - 1))
        } else {
            self.any_head(depth)
        }
    }

    // --- type-directed ----------------------------------------------------

    /// A formula accepted by the checker together with its type.
    pub fn well_typed_formula(&mut self) -> (Formula, Type) {
        loop {
            self.scope.clear();
            let ty = Type::BASE.choose(&mut self.rng).expect("base").clone();
            let d = self.max_depth - 1;
            let f = if self.rng.gen_bool(0.15) {
                let a = self.typed_term(&ty, d);
                let b = self.typed_term(&ty, d);
                Formula::eq(to_formula(a), to_formula(b))
            } else {
                to_formula(self.typed_term(&ty, d))
            };
            if let Ok(j) = typecheck_formula(&self.sig.context, &f) {
                return (f, j.ty);
            }
        }
    }

    fn vars_of(&self, ty: &Type) -> Vec<String> {
        let mut out = self.sig.context.vars_of_type(ty);
        out.retain(|v| !self.scope.iter().any(|(n, _)| n == v));
        out.extend(
            self.scope
                .iter()
                .filter(|(_, t)| t == ty)
                .map(|(n, _)| n.clone()),
        );
        out
    }

    fn typed_leaf(&mut self, ty: &Type) -> Option<Term> {
        let mut options: Vec<Term> = self.vars_of(ty).iter().map(|v| Term::var(v)).collect();
        match ty {
            Type::Bool => options.extend([Term::lit(Value::True), Term::lit(Value::False)]),
            Type::Unit => options.push(Term::lit(Value::Unit)),
            Type::Situation => options.push(Term::s0()),
            _ => {}
        }
        // Prefer bound variables so quantifiers are not vacuous.
        if let Some((name, _)) = self.scope.iter().rev().find(|(_, t)| t == ty) {
            if self.rng.gen_bool(0.5) {
                return Some(Term::var(name));
            }
        }
        options.choose(&mut self.rng).cloned()
    }

    fn typed_term(&mut self, ty: &Type, depth: usize) -> Term {
        if depth == 0 || self.rng.gen_bool(0.2) {
            if let Some(t) = self.typed_leaf(ty) {
                return t;
            }
            if depth == 0 {
                return self.fallback(ty);
            }
        }
        let d = depth - 1;
        let pick = self.rng.gen_range(0..10);
        match (ty, pick) {
            (_, 0) => Term::neg(self.typed_term(ty, d)),
            (_, 1) if ty != &Type::Action => self.typed_quant(ty, d),
            (Type::Situation, 2..=5) => match self.relational(Some(ty), d) {
                Some(bt) => Term::bt(bt),
                None => self.typed_term(ty, d),
            },
            (Type::Situation, _) => {
                let action = self.action(d);
                let sit = self.typed_term(&Type::Situation, d);
                Term::bt(BehavioralTerm::do_(action, sit))
            }
            (Type::Action, _) => Term::bt(self.action(d)),
            (Type::Unit, 2..=4) => {
                let action = self.action(d);
                let sit = self.typed_term(&Type::Situation, d);
                Term::bt(BehavioralTerm::poss(action, sit))
            }
            (Type::Unit, 5..=7) => {
                let inner = Type::BASE.choose(&mut self.rng).expect("base").clone();
                let op = *OPS.choose(&mut self.rng).expect("ops");
                let a = self.typed_term(&inner, d);
                let b = self.typed_term(&inner, d);
                Term::binary(op, a, b)
            }
            (Type::Unit, _) => {
                let inner = Type::BASE.choose(&mut self.rng).expect("base").clone();
                let n = self.rng.gen_range(1..=3);
                Term::Seq(
                    (0..n).map(|_| self.typed_term(&inner, d)).collect(),
                    Default::default(),
                )
            }
            (Type::Bool, _) => {
                let mut pair: Vec<Type> = Type::BASE
                    .choose_multiple(&mut self.rng, 2)
                    .cloned()
                    .collect();
                let second = pair.pop().expect("two types");
                let first = pair.pop().expect("two types");
                let a = self.typed_term(&first, d);
                let b = self.typed_term(&second, d);
                if self.rng.gen_bool(0.25) {
                    Term::Seq(vec![a, b], Default::default())
                } else {
                    Term::binary(*OPS.choose(&mut self.rng).expect("ops"), a, b)
                }
            }
            _ => self.fallback(ty),
        }
    }

    fn fallback(&mut self, ty: &Type) -> Term {
        match ty {
            Type::Action => Term::bt(self.action(0)),
            Type::Situation => Term::s0(),
            _ => self
                .typed_leaf(ty)
                .unwrap_or_else(|| Term::lit(Value::Unit)),
        }
    }

    fn typed_quant(&mut self, ty: &Type, depth: usize) -> Term {
        let bound = Type::BASE.choose(&mut self.rng).expect("base").clone();
        let var = self.fresh_var();
        self.scope.push((var.clone(), bound.clone()));
        let body = self.typed_term(ty, depth);
        self.scope.pop();
        if !body.mentions(&var) {
            return body;
        }
        Term::Quant {
            kind: quantifier(&mut self.rng),
            var: Ident::new(var),
            types: vec![bound],
            body: Box::new(body),
            span: Default::default(),
        }
    }

    fn args(&mut self, params: &[Type], depth: usize) -> Vec<Term> {
        params.iter().map(|p| self.typed_term(p, depth)).collect()
    }

    fn relational(&mut self, _ty: Option<&Type>, depth: usize) -> Option<BehavioralTerm> {
        let (name, params) = self.rels.choose(&mut self.rng)?.clone();
        let args = self.args(&params, depth);
        let sit = self.typed_term(&Type::Situation, depth);
        Some(BehavioralTerm::rel(&name, args, sit))
    }

    /// An action-typed behavioral term (a `do`/`poss` operand).
    fn action(&mut self, depth: usize) -> BehavioralTerm {
        if depth > 0 && self.rng.gen_bool(0.15) {
            return BehavioralTerm::neg(self.action(depth - 1));
        }
        let (name, params) = self
            .funs
            .choose(&mut self.rng)
            .expect("functional fluent")
            .clone();
        let d = depth.saturating_sub(1);
        let args = if depth == 0 {
            params
                .iter()
                .map(|p| self.typed_leaf(p).unwrap_or_else(|| self.fallback(p)))
                .collect()
        } else {
            self.args(&params, d)
        };
        BehavioralTerm::fun(&name, args)
    }
}
