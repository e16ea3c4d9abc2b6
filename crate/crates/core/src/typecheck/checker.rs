use std::collections::BTreeSet;

use crate::ast::{BehavioralTerm, Formula, Ident, Node, Quantifier, Span, Term, Value};
use crate::context::TypingContext;
use crate::types::{FluentKind, Type};

use super::{Judgment, Rule, TypeError, TypeErrorKind};

type Checked = Result<Judgment, TypeError>;

pub fn typecheck_node(w: &TypingContext, node: &Node) -> Checked {
    match node {
        Node::Term(t) => typecheck_term(w, t),
        Node::Behavioral(bt) => typecheck_behavioral(w, bt),
        Node::Formula(f) => typecheck_formula(w, f),
    }
}

/// Term-level connectives relate same-typed sides as a `Unit` collection;
/// sides of different types form a plain `Bool` connective.
fn connective_type<'a>(types: impl IntoIterator<Item = &'a Type>) -> Type {
    let distinct: BTreeSet<&Type> = types.into_iter().collect();
    if distinct.len() == 1 {
        Type::Unit
    } else {
        Type::Bool
    }
}

pub fn typecheck_term(w: &TypingContext, t: &Term) -> Checked {
    let subject = || Node::Term(t.clone());
    match t {
        Term::Var(id) => {
            let types = w.lookup(&id.name);
            match types.len() {
                0 => Err(TypeError::new(
                    TypeErrorKind::UnboundVar {
                        name: id.name.clone(),
                    },
                    id.span,
                )),
                1 => Ok(Judgment::leaf(
                    subject(),
                    types.into_iter().next().expect("singleton"),
                    Rule::Var,
                )),
                _ => Err(TypeError::new(
                    TypeErrorKind::Premise(format!(
                        "`{}` has several candidate types ({}) and no expected type here",
                        id.name,
                        types
                            .iter()
                            .map(Type::to_string)
                            .collect::<Vec<_>>()
                            .join(" | ")
                    )),
                    id.span,
                )),
            }
        }
        Term::Lit(v, _) => Ok(match v {
            Value::True => Judgment::leaf(subject(), Type::Bool, Rule::True),
            Value::False => Judgment::leaf(subject(), Type::Bool, Rule::False),
            Value::Unit => Judgment::leaf(subject(), Type::Unit, Rule::Unit),
            Value::Situation(_) => Judgment::leaf(subject(), Type::Situation, Rule::Stn),
        }),
        Term::Quant {
            kind,
            var,
            types,
            body,
            span,
        } => quantifier(
            w,
            subject(),
            *kind,
            var,
            types,
            *span,
            body.mentions(&var.name),
            |w| typecheck_term(w, body),
        ),
        Term::Neg(inner) => {
            let j = typecheck_term(w, inner)?;
            Ok(Judgment {
                subject: subject(),
                ty: j.ty.clone(),
                rule: Rule::Neg,
                premises: vec![j],
            })
        }
        Term::Supset(a, b) | Term::Conj(a, b) | Term::Disj(a, b) => {
            let rule = match t {
                Term::Supset(..) => Rule::Spt,
                Term::Conj(..) => Rule::Conj,
                _ => Rule::Disj,
            };
            let ja = typecheck_term(w, a)?;
            let jb = typecheck_term(w, b)?;
            Ok(Judgment {
                subject: subject(),
                ty: connective_type([&ja.ty, &jb.ty]),
                rule,
                premises: vec![ja, jb],
            })
        }
        Term::Seq(items, span) => {
            if items.is_empty() {
                return Err(TypeError::new(
                    TypeErrorKind::Premise("term sequence cannot be empty".into()),
                    *span,
                ));
            }
            let premises = items
                .iter()
                .map(|i| typecheck_term(w, i))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Judgment {
                subject: subject(),
                ty: connective_type(premises.iter().map(|j| &j.ty)),
                rule: Rule::Seq,
                premises,
            })
        }
        Term::Behavioral(bt) => typecheck_behavioral(w, bt),
    }
}

/// Checks a term in a position that demands `expected`. A multi-candidate
/// variable is accepted when `expected` is among its candidates.
fn check_slot(
    w: &TypingContext,
    t: &Term,
    expected: &Type,
    fluent: &str,
    position: usize,
) -> Checked {
    if let Term::Var(id) = t {
        let types = w.lookup(&id.name);
        if types.len() > 1 && types.contains(expected) {
            return Ok(Judgment::leaf(
                Node::Term(t.clone()),
                expected.clone(),
                Rule::Var,
            ));
        }
    }
    let j = typecheck_term(w, t)?;
    if &j.ty != expected {
        return Err(TypeError::new(
            TypeErrorKind::ArgumentType {
                name: fluent.to_string(),
                position,
                expected: expected.clone(),
                found: j.ty,
            },
            t.span(),
        ));
    }
    Ok(j)
}

fn signature<'w>(
    w: &'w TypingContext,
    name: &Ident,
) -> Result<(&'w [Type], FluentKind), TypeError> {
    let sig = w.fluent(&name.name).ok_or_else(|| {
        TypeError::new(
            TypeErrorKind::UnboundFluent {
                name: name.name.clone(),
            },
            name.span,
        )
    })?;
    let kind = sig
        .fluent_kind()
        .expect("contexts only hold fluent signatures");
    let Type::Arrow { params, .. } = sig else {
        unreachable!("fluent signatures are arrows")
    };
    Ok((params, kind))
}

fn check_fluent_args(
    w: &TypingContext,
    name: &Ident,
    params: &[Type],
    args: &[&Term],
    span: Span,
) -> Result<Vec<Judgment>, TypeError> {
    if args.len() != params.len() {
        return Err(TypeError::new(
            TypeErrorKind::Arity {
                name: name.name.clone(),
                expected: params.len(),
                found: args.len(),
            },
            span,
        ));
    }
    args.iter()
        .zip(params)
        .enumerate()
        .map(|(i, (arg, param))| check_slot(w, arg, param, &name.name, i + 1))
        .collect()
}

pub fn typecheck_behavioral(w: &TypingContext, bt: &BehavioralTerm) -> Checked {
    let subject = || Node::Behavioral(bt.clone());
    match bt {
        BehavioralTerm::Neg(inner) => {
            let j = typecheck_behavioral(w, inner)?;
            Ok(Judgment {
                subject: subject(),
                ty: j.ty.clone(),
                rule: Rule::Neg,
                premises: vec![j],
            })
        }
        BehavioralTerm::RelFluent {
            name,
            args,
            sit,
            span,
        } => {
            let (params, kind) = signature(w, name)?;
            let all: Vec<&Term> = args.iter().chain(std::iter::once(&**sit)).collect();
            if kind == FluentKind::Functional && params.len() == all.len() {
                return Err(TypeError::new(
                    TypeErrorKind::Premise(format!(
                        "`{}` is a functional fluent and takes no situation argument",
                        name.name
                    )),
                    *span,
                ));
            }
            let premises = check_fluent_args(w, name, params, &all, *span)?;
            Ok(Judgment {
                subject: subject(),
                ty: Type::Situation,
                rule: Rule::RelFlt,
                premises,
            })
        }
        BehavioralTerm::FunFluent { name, args, span } => {
            let (params, kind) = signature(w, name)?;
            let all: Vec<&Term> = args.iter().collect();
            if kind == FluentKind::Relational {
                // A relational fluent used without its situation argument.
                return Err(TypeError::new(
                    TypeErrorKind::Arity {
                        name: name.name.clone(),
                        expected: params.len(),
                        found: all.len(),
                    },
                    *span,
                ));
            }
            let premises = check_fluent_args(w, name, params, &all, *span)?;
            Ok(Judgment {
                subject: subject(),
                ty: Type::Action,
                rule: Rule::FunFlt,
                premises,
            })
        }
        BehavioralTerm::Do { action, sit, .. } | BehavioralTerm::Poss { action, sit, .. } => {
            let (construct, ty, rule) = if matches!(bt, BehavioralTerm::Do { .. }) {
                ("do", Type::Situation, Rule::Do)
            } else {
                ("poss", Type::Unit, Rule::Poss)
            };
            let ja = typecheck_behavioral(w, action)?;
            if ja.ty != Type::Action {
                return Err(TypeError::new(
                    TypeErrorKind::NotAction {
                        construct,
                        found: ja.ty,
                    },
                    action.span(),
                ));
            }
            let js = check_slot(w, sit, &Type::Situation, construct, 2)?;
            Ok(Judgment {
                subject: subject(),
                ty,
                rule,
                premises: vec![ja, js],
            })
        }
    }
}

/// Checks `(kind var: T1 | .. | Tn) body` by checking the body once per
/// candidate type. Every candidate must succeed with one common type.
#[allow(clippy::too_many_arguments)]
fn quantifier(
    w: &TypingContext,
    subject: Node,
    kind: Quantifier,
    var: &Ident,
    types: &[Type],
    span: Span,
    mentioned: bool,
    check_body: impl Fn(&TypingContext) -> Checked,
) -> Checked {
    if types.is_empty() {
        return Err(TypeError::new(
            TypeErrorKind::Premise(format!("quantifier over `{}` declares no type", var.name)),
            span,
        ));
    }
    if !mentioned {
        return Err(TypeError::new(
            TypeErrorKind::Vacuous {
                var: var.name.clone(),
            },
            var.span,
        ));
    }
    let mut premises: Vec<Judgment> = Vec::with_capacity(types.len());
    for ty in types {
        let inner = w
            .extend(&var.name, BTreeSet::from([ty.clone()]))
            .expect("non-empty type set");
        let j = check_body(&inner)?;
        if let Some(first) = premises.first() {
            if first.ty != j.ty {
                return Err(TypeError::new(
                    TypeErrorKind::Premise(format!(
                        "body of the quantifier over `{}` has type {} for candidate {} but {} for candidate {}",
                        var.name, first.ty, types[0], j.ty, ty
                    )),
                    span,
                ));
            }
        }
        premises.push(j);
    }
    let ty = premises[0].ty.clone();
    let rule = match (kind, ty == Type::Action) {
        (Quantifier::Forall, false) => Rule::Unv1,
        (Quantifier::Exists, false) => Rule::Est1,
        (Quantifier::Forall, true) => Rule::Unv2,
        (Quantifier::Exists, true) => Rule::Est2,
    };
    Ok(Judgment {
        subject,
        ty,
        rule,
        premises,
    })
}

/// `(kind var: types) body` at the formula layer.
pub fn typecheck_quantifier(
    w: &TypingContext,
    kind: Quantifier,
    var: &str,
    types: &[Type],
    body: &Formula,
) -> Checked {
    let f = Formula::quant(kind, var, types.to_vec(), body.clone());
    typecheck_formula(w, &f)
}

fn flatten<'f>(f: &'f Formula, conj: bool, out: &mut Vec<&'f Formula>) {
    match f {
        Formula::Conj(a, b) if conj => {
            flatten(a, conj, out);
            flatten(b, conj, out);
        }
        Formula::Disj(a, b) if !conj => {
            flatten(a, conj, out);
            flatten(b, conj, out);
        }
        other => out.push(other),
    }
}

pub fn typecheck_formula(w: &TypingContext, f: &Formula) -> Checked {
    let subject = || Node::Formula(f.clone());
    match f {
        Formula::Atom(bt) => typecheck_behavioral(w, bt),
        Formula::Term(t) => typecheck_term(w, t),
        Formula::Neg(inner) => {
            let j = typecheck_formula(w, inner)?;
            Ok(Judgment {
                subject: subject(),
                ty: j.ty.clone(),
                rule: Rule::Neg,
                premises: vec![j],
            })
        }
        Formula::Supset(a, b) => {
            let ja = typecheck_formula(w, a)?;
            let jb = typecheck_formula(w, b)?;
            let ty = if ja.ty == jb.ty {
                ja.ty.clone()
            } else if ja.ty == Type::Unit {
                Type::Unit
            } else {
                return Err(TypeError::new(
                    TypeErrorKind::SupsetMismatch {
                        left: Box::new(ja),
                        right: Box::new(jb),
                    },
                    f.span(),
                )
                .with_related(vec![a.span(), b.span()]));
            };
            Ok(Judgment {
                subject: subject(),
                ty,
                rule: Rule::SupsetBT,
                premises: vec![ja, jb],
            })
        }
        Formula::Conj(..) | Formula::Disj(..) => {
            let conjunction = matches!(f, Formula::Conj(..));
            let mut parts = Vec::new();
            flatten(f, conjunction, &mut parts);
            let premises = parts
                .iter()
                .map(|p| typecheck_formula(w, p))
                .collect::<Result<Vec<_>, _>>()?;
            if premises.iter().any(|j| j.ty != premises[0].ty) {
                let related = parts.iter().map(|p| p.span()).collect();
                return Err(TypeError::new(
                    TypeErrorKind::NonUniform {
                        conjunction,
                        components: premises,
                    },
                    f.span(),
                )
                .with_related(related));
            }
            Ok(Judgment {
                subject: subject(),
                ty: Type::Unit,
                rule: Rule::ConjUnit,
                premises,
            })
        }
        Formula::Eq(a, b) => {
            let ja = typecheck_formula(w, a)?;
            let jb = typecheck_formula(w, b)?;
            if ja.ty != jb.ty {
                return Err(TypeError::new(
                    TypeErrorKind::EqMismatch {
                        left: Box::new(ja),
                        right: Box::new(jb),
                    },
                    f.span(),
                )
                .with_related(vec![a.span(), b.span()]));
            }
            Ok(Judgment {
                subject: subject(),
                ty: ja.ty.clone(),
                rule: Rule::Eq,
                premises: vec![ja, jb],
            })
        }
        Formula::Quant {
            kind,
            var,
            types,
            body,
            span,
        } => quantifier(
            w,
            subject(),
            *kind,
            var,
            types,
            *span,
            body.mentions(&var.name),
            |w| typecheck_formula(w, body),
        ),
    }
}
