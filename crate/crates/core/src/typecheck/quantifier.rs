//! Expansion of multi-candidate quantifiers into chains of single-typed ones.

use serde::Serialize;
use thiserror::Error;

use crate::ast::{BinOp, Formula, Quantifier, Term};

/// How `(Q x: T1 | .. | Tn) φ` is rewritten.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuantifierMode {
    /// `∀` becomes a conjunction and `∃` a disjunction of the per-type cases.
    #[default]
    Standard,
    /// Connectives as written in the source mathematics: `∀` becomes a
    /// disjunction and `∃` a conjunction.
    PaperFaithful,
}

impl QuantifierMode {
    fn connective(self, kind: Quantifier) -> BinOp {
        match (self, kind) {
            (QuantifierMode::Standard, Quantifier::Forall)
            | (QuantifierMode::PaperFaithful, Quantifier::Exists) => BinOp::Conj,
            _ => BinOp::Disj,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpandError {
    #[error("quantifier over `{0}` has an empty candidate type set")]
    EmptyCandidates(String),
    #[error("not a quantified formula")]
    NotQuantified,
}

fn chain<T>(mut parts: Vec<T>, join: impl Fn(T, T) -> T) -> T {
    let mut acc = parts.pop().expect("non-empty");
    while let Some(prev) = parts.pop() {
        acc = join(prev, acc);
    }
    acc
}

fn expand_term(t: &Term, mode: QuantifierMode) -> Result<Term, ExpandError> {
    let Term::Quant {
        kind,
        var,
        types,
        body,
        span,
    } = t
    else {
        return Err(ExpandError::NotQuantified);
    };
    if types.is_empty() {
        return Err(ExpandError::EmptyCandidates(var.name.clone()));
    }
    let op = mode.connective(*kind);
    let parts = types
        .iter()
        .map(|ty| Term::Quant {
            kind: *kind,
            var: var.clone(),
            types: vec![ty.clone()],
            body: body.clone(),
            span: *span,
        })
        .collect();
    Ok(chain(parts, |a, b| Term::binary(op, a, b)))
}

/// Rewrites one quantifier node. A single candidate is returned unchanged.
pub fn expand_typed_quantifier(f: &Formula, mode: QuantifierMode) -> Result<Formula, ExpandError> {
    match f {
        Formula::Term(t) => Ok(Formula::Term(expand_term(t, mode)?)),
        Formula::Quant {
            kind,
            var,
            types,
            body,
            span,
        } => {
            if types.is_empty() {
                return Err(ExpandError::EmptyCandidates(var.name.clone()));
            }
            let op = mode.connective(*kind);
            let parts = types
                .iter()
                .map(|ty| Formula::Quant {
                    kind: *kind,
                    var: var.clone(),
                    types: vec![ty.clone()],
                    body: body.clone(),
                    span: *span,
                })
                .collect();
            Ok(chain(parts, |a, b| Formula::binary(op, a, b)))
        }
        _ => Err(ExpandError::NotQuantified),
    }
}

fn expand_all_term(t: &Term, mode: QuantifierMode) -> Result<Term, ExpandError> {
    Ok(match t {
        Term::Quant {
            kind,
            var,
            types,
            body,
            span,
        } => {
            let q = Term::Quant {
                kind: *kind,
                var: var.clone(),
                types: types.clone(),
                body: Box::new(expand_all_term(body, mode)?),
                span: *span,
            };
            expand_term(&q, mode)?
        }
        Term::Neg(a) => Term::neg(expand_all_term(a, mode)?),
        Term::Supset(a, b) => Term::binary(
            BinOp::Supset,
            expand_all_term(a, mode)?,
            expand_all_term(b, mode)?,
        ),
        Term::Conj(a, b) => Term::binary(
            BinOp::Conj,
            expand_all_term(a, mode)?,
            expand_all_term(b, mode)?,
        ),
        Term::Disj(a, b) => Term::binary(
            BinOp::Disj,
            expand_all_term(a, mode)?,
            expand_all_term(b, mode)?,
        ),
        Term::Seq(items, span) => Term::Seq(
            items
                .iter()
                .map(|i| expand_all_term(i, mode))
                .collect::<Result<_, _>>()?,
            *span,
        ),
        Term::Var(_) | Term::Lit(..) | Term::Behavioral(_) => t.clone(),
    })
}

/// Expands every multi-candidate quantifier in `f`, innermost first.
pub fn expand_quantifiers(f: &Formula, mode: QuantifierMode) -> Result<Formula, ExpandError> {
    let rec = |g: &Formula| expand_quantifiers(g, mode).map(Box::new);
    Ok(match f {
        Formula::Atom(_) => f.clone(),
        Formula::Term(t) => Formula::Term(expand_all_term(t, mode)?),
        Formula::Neg(a) => Formula::Neg(rec(a)?),
        Formula::Supset(a, b) => Formula::Supset(rec(a)?, rec(b)?),
        Formula::Conj(a, b) => Formula::Conj(rec(a)?, rec(b)?),
        Formula::Disj(a, b) => Formula::Disj(rec(a)?, rec(b)?),
        Formula::Eq(a, b) => Formula::Eq(rec(a)?, rec(b)?),
        Formula::Quant {
            kind,
            var,
            types,
            body,
            span,
        } => {
            let q = Formula::Quant {
                kind: *kind,
                var: var.clone(),
                types: types.clone(),
                body: rec(body)?,
                span: *span,
            };
            expand_typed_quantifier(&q, mode)?
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::BehavioralTerm;
    use crate::types::Type;

    fn body() -> Formula {
        Formula::atom(BehavioralTerm::rel(
            "p",
            vec![Term::var("x")],
            Term::var("s"),
        ))
    }

    fn single(kind: Quantifier, ty: Type) -> Formula {
        Formula::quant(kind, "x", vec![ty], body())
    }

    #[test]
    fn singleton_unchanged_in_both_modes() {
        let q = single(Quantifier::Forall, Type::Object);
        for mode in [QuantifierMode::Standard, QuantifierMode::PaperFaithful] {
            assert_eq!(expand_typed_quantifier(&q, mode).unwrap(), q);
        }
    }

    #[test]
    fn connectives_per_mode() {
        let types = vec![Type::Object, Type::Action];
        let forall = Formula::quant(Quantifier::Forall, "x", types.clone(), body());
        let exists = Formula::quant(Quantifier::Exists, "x", types, body());

        let paper = expand_typed_quantifier(&forall, QuantifierMode::PaperFaithful).unwrap();
        assert_eq!(
            paper,
            Formula::binary(
                BinOp::Disj,
                single(Quantifier::Forall, Type::Object),
                single(Quantifier::Forall, Type::Action)
            )
        );
        let std = expand_typed_quantifier(&exists, QuantifierMode::Standard).unwrap();
        assert!(matches!(std, Formula::Disj(..)));
        let std = expand_typed_quantifier(&forall, QuantifierMode::Standard).unwrap();
        assert!(matches!(std, Formula::Conj(..)));
    }

    #[test]
    fn empty_candidates_rejected() {
        let q = Formula::quant(Quantifier::Forall, "x", vec![], body());
        assert_eq!(
            expand_typed_quantifier(&q, QuantifierMode::Standard),
            Err(ExpandError::EmptyCandidates("x".into()))
        );
        assert_eq!(
            expand_typed_quantifier(&body(), QuantifierMode::Standard),
            Err(ExpandError::NotQuantified)
        );
    }

    #[test]
    fn nested_expansion() {
        let inner = Formula::quant(
            Quantifier::Exists,
            "x",
            vec![Type::Object, Type::Action],
            body(),
        );
        let f = Formula::neg(inner);
        let out = expand_quantifiers(&f, QuantifierMode::Standard).unwrap();
        let Formula::Neg(inner) = out else { panic!() };
        assert!(matches!(*inner, Formula::Disj(..)));
    }
}
