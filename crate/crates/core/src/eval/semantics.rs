//! The satisfaction relation `w ⊨ t` over a finite [`World`].
//!
//! Clauses follow the printed semantics literally, including quantifiers
//! that range over the situations of `w` without binding their variable.

use thiserror::Error;

use crate::ast::{BehavioralTerm, Formula, Ident, Node, Quantifier, Span, Term, Value};
use crate::parser::print_term;
use crate::world::World;

/// A name the world does not interpret (E010).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("`{name}` is not interpreted in the world: {reason}")]
pub struct SatError {
    pub name: String,
    pub span: Span,
    pub reason: &'static str,
}

impl SatError {
    pub fn code(&self) -> &'static str {
        "E010"
    }
}

pub fn satisfies(w: &World, node: &Node) -> Result<bool, SatError> {
    match node {
        Node::Term(t) => term(w, t),
        Node::Behavioral(bt) => behavioral(w, bt),
        Node::Formula(f) => formula(w, f),
    }
}

fn over_situations(
    w: &World,
    kind: Quantifier,
    mut body: impl FnMut() -> Result<bool, SatError>,
) -> Result<bool, SatError> {
    let mut results = Vec::with_capacity(w.situations.len());
    for _ in &w.situations {
        results.push(body()?);
    }
    Ok(match kind {
        Quantifier::Forall => results.iter().all(|b| *b),
        Quantifier::Exists => results.iter().any(|b| *b),
    })
}

// Both sides are always evaluated so that an uninterpreted name is reported
// regardless of short-circuiting.
fn both(a: Result<bool, SatError>, b: Result<bool, SatError>) -> Result<(bool, bool), SatError> {
    Ok((a?, b?))
}

fn term(w: &World, t: &Term) -> Result<bool, SatError> {
    match t {
        Term::Var(id) => Ok(w.contains(&id.name)),
        Term::Lit(Value::True | Value::Unit, _) => Ok(true),
        Term::Lit(Value::False, _) => Ok(false),
        Term::Lit(Value::Situation(sv), _) => {
            let base = match &sv.base {
                Some(b) => term(w, b)?,
                None => true,
            };
            let mut ok = base;
            for a in &sv.actions {
                ok &= behavioral(w, a)?;
            }
            Ok(ok)
        }
        Term::Quant { kind, body, .. } => over_situations(w, *kind, || term(w, body)),
        Term::Neg(a) => Ok(!term(w, a)?),
        Term::Supset(a, b) => both(term(w, a), term(w, b)).map(|(a, b)| !a || b),
        Term::Conj(a, b) => both(term(w, a), term(w, b)).map(|(a, b)| a && b),
        Term::Disj(a, b) => both(term(w, a), term(w, b)).map(|(a, b)| a || b),
        Term::Seq(items, _) => {
            let mut ok = true;
            for i in items {
                ok &= term(w, i)?;
            }
            Ok(ok)
        }
        Term::Behavioral(bt) => behavioral(w, bt),
    }
}

/// Table key for an argument: a variable's name, `s0` as the world's first
/// situation, anything else its printed form (which matches no entry).
fn key(w: &World, t: &Term) -> String {
    match t {
        Term::Var(id) => id.name.clone(),
        Term::Lit(Value::Situation(sv), _) if sv.is_initial() => w.initial().to_string(),
        other => print_term(other),
    }
}

fn args_hold(w: &World, args: &[Term]) -> Result<bool, SatError> {
    let mut ok = true;
    for a in args {
        ok &= term(w, a)?;
    }
    Ok(ok)
}

fn behavioral(w: &World, bt: &BehavioralTerm) -> Result<bool, SatError> {
    match bt {
        BehavioralTerm::Neg(inner) => Ok(!behavioral(w, inner)?),
        BehavioralTerm::RelFluent {
            name,
            args,
            sit,
            span,
        } => {
            let uninterpreted = || SatError {
                name: name.name.clone(),
                span: *span,
                reason: "no relational table",
            };
            if !w.rel_tables.contains_key(&name.name) {
                return Err(uninterpreted());
            }
            let args_ok = args_hold(w, args)?;
            let keys: Vec<String> = args.iter().map(|a| key(w, a)).collect();
            let in_table = match &**sit {
                Term::Var(id) => {
                    if !w.is_situation(&id.name) {
                        return Err(SatError {
                            name: id.name.clone(),
                            span: id.span,
                            reason: "not a situation of the world",
                        });
                    }
                    w.rel_holds(&name.name, &keys, &id.name).unwrap_or(false)
                }
                Term::Lit(Value::Situation(sv), _) if sv.is_initial() => {
                    w.rel_holds(&name.name, &keys, w.initial()).unwrap_or(false)
                }
                other => {
                    let slot = term(w, other)?;
                    slot && w
                        .situations
                        .iter()
                        .any(|s| w.rel_holds(&name.name, &keys, s).unwrap_or(false))
                }
            };
            Ok(args_ok && in_table)
        }
        BehavioralTerm::FunFluent { name, args, span } => {
            let keys: Vec<String> = args.iter().map(|a| key(w, a)).collect();
            let Some(in_table) = w.fun_holds(&name.name, &keys) else {
                return Err(SatError {
                    name: name.name.clone(),
                    span: *span,
                    reason: "no functional table",
                });
            };
            Ok(args_hold(w, args)? && in_table)
        }
        BehavioralTerm::Do { action, sit, .. } => {
            let mut any = false;
            for s in &w.situations {
                any |= behavioral(w, &at_situation(action, sit, s))?;
            }
            Ok(any)
        }
        BehavioralTerm::Poss { action, .. } => {
            // sᵢ ⊃ do(bt, sᵢ), with sᵢ ∈ L(w) always holding.
            let mut any = false;
            for s in &w.situations {
                let si = Term::Var(Ident::new(s.as_str()));
                let step = BehavioralTerm::do_((**action).clone(), si.clone());
                let holds = term(w, &si)?;
                let then = behavioral(w, &step)?;
                any |= !holds || then;
            }
            Ok(any)
        }
    }
}

/// `bt` evaluated in `sᵢ`: a situation variable in the `do` slot is
/// replaced by `sᵢ` throughout the operand.
fn at_situation(action: &BehavioralTerm, sit: &Term, si: &str) -> BehavioralTerm {
    match sit {
        Term::Var(id) => subst_bt(action, &id.name, si),
        _ => action.clone(),
    }
}

fn subst_term(t: &Term, from: &str, to: &str) -> Term {
    match t {
        Term::Var(id) if id.name == from => Term::Var(Ident::spanned(to, id.span)),
        Term::Var(_) | Term::Lit(..) => t.clone(),
        Term::Quant { var, .. } if var.name == from => t.clone(),
        Term::Quant {
            kind,
            var,
            types,
            body,
            span,
        } => Term::Quant {
            kind: *kind,
            var: var.clone(),
            types: types.clone(),
            body: Box::new(subst_term(body, from, to)),
            span: *span,
        },
        Term::Neg(a) => Term::Neg(Box::new(subst_term(a, from, to))),
        Term::Supset(a, b) => Term::Supset(
            Box::new(subst_term(a, from, to)),
            Box::new(subst_term(b, from, to)),
        ),
        Term::Conj(a, b) => Term::Conj(
            Box::new(subst_term(a, from, to)),
            Box::new(subst_term(b, from, to)),
        ),
        Term::Disj(a, b) => Term::Disj(
            Box::new(subst_term(a, from, to)),
            Box::new(subst_term(b, from, to)),
        ),
        Term::Seq(items, span) => Term::Seq(
            items.iter().map(|i| subst_term(i, from, to)).collect(),
            *span,
        ),
        Term::Behavioral(bt) => Term::Behavioral(Box::new(subst_bt(bt, from, to))),
    }
}

fn subst_bt(bt: &BehavioralTerm, from: &str, to: &str) -> BehavioralTerm {
    let sub = |t: &Term| subst_term(t, from, to);
    match bt {
        BehavioralTerm::Neg(inner) => BehavioralTerm::Neg(Box::new(subst_bt(inner, from, to))),
        BehavioralTerm::RelFluent {
            name,
            args,
            sit,
            span,
        } => BehavioralTerm::RelFluent {
            name: name.clone(),
            args: args.iter().map(sub).collect(),
            sit: Box::new(sub(sit)),
            span: *span,
        },
        BehavioralTerm::FunFluent { name, args, span } => BehavioralTerm::FunFluent {
            name: name.clone(),
            args: args.iter().map(sub).collect(),
            span: *span,
        },
        BehavioralTerm::Do { action, sit, span } => BehavioralTerm::Do {
            action: Box::new(subst_bt(action, from, to)),
            sit: Box::new(sub(sit)),
            span: *span,
        },
        BehavioralTerm::Poss { action, sit, span } => BehavioralTerm::Poss {
            action: Box::new(subst_bt(action, from, to)),
            sit: Box::new(sub(sit)),
            span: *span,
        },
    }
}

fn formula(w: &World, f: &Formula) -> Result<bool, SatError> {
    match f {
        Formula::Atom(bt) => behavioral(w, bt),
        Formula::Term(t) => term(w, t),
        Formula::Neg(a) => Ok(!formula(w, a)?),
        Formula::Supset(a, b) => both(formula(w, a), formula(w, b)).map(|(a, b)| !a || b),
        Formula::Conj(a, b) => both(formula(w, a), formula(w, b)).map(|(a, b)| a && b),
        Formula::Disj(a, b) => both(formula(w, a), formula(w, b)).map(|(a, b)| a || b),
        Formula::Eq(a, b) => both(formula(w, a), formula(w, b)).map(|(a, b)| a == b),
        Formula::Quant { kind, body, .. } => over_situations(w, *kind, || formula(w, body)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_formula, parse_program};

    const DECLS: &str = "var x: Object; var y: Object; var s: Situation; var r: Object;
        rel fragile(Object); rel broken(Object); fun drop(Object, Object);";

    fn world() -> World {
        World::parse(
            "instances x, r; situations s0, s1;
             rel fragile: (x, s0); rel broken: (x, s1); fun drop: (r, x);",
        )
        .unwrap()
    }

    fn sat(src: &str) -> Result<bool, SatError> {
        let prog = parse_program(DECLS).unwrap();
        let f = parse_formula(src, &prog.declarations).unwrap();
        satisfies(&world(), &Node::Formula(f))
    }

    #[test]
    fn variables_are_members_of_the_domain() {
        assert_eq!(sat("x"), Ok(true));
        assert_eq!(sat("y"), Ok(false));
        assert_eq!(sat("~y"), Ok(true));
        assert_eq!(sat("s"), Ok(false));
    }

    #[test]
    fn fluent_tables() {
        assert_eq!(sat("fragile(x, s0)"), Ok(true));
        assert_eq!(sat("fragile(x, s1)"), Ok(false));
        assert_eq!(sat("broken(x, do(drop(r, x), s0))"), Ok(true));
        assert_eq!(sat("drop(r, x)"), Ok(true));
        assert_eq!(sat("drop(x, r)"), Ok(false));
        assert_eq!(sat("do(drop(r, x), s0)"), Ok(true));
        assert_eq!(sat("poss(drop(r, x), s0)"), Ok(true));
    }

    #[test]
    fn uninterpreted_names() {
        let err = sat("fragile(x, s)").unwrap_err();
        assert_eq!((err.name.as_str(), err.code()), ("s", "E010"));
        let prog = parse_program("var x: Object; rel heavy(Object);").unwrap();
        let f = parse_formula("heavy(x, s0)", &prog.declarations).unwrap();
        assert_eq!(
            satisfies(&world(), &Node::Formula(f)).unwrap_err().name,
            "heavy"
        );
    }

    #[test]
    fn connective_truth_tables() {
        for (a, va) in [("x", true), ("y", false)] {
            for (b, vb) in [("r", true), ("y", false)] {
                assert_eq!(sat(&format!("{a} /\\ {b}")), Ok(va && vb));
                assert_eq!(sat(&format!("{a} \\/ {b}")), Ok(va || vb));
                assert_eq!(sat(&format!("{a} => {b}")), Ok(!va || vb));
                assert_eq!(sat(&format!("{a} = {b}")), Ok(va == vb));
            }
        }
    }

    #[test]
    fn quantifiers_range_over_situations() {
        assert_eq!(sat("(forall z: Object) x"), Ok(true));
        assert_eq!(sat("(exists z: Object) y"), Ok(false));
    }
}
