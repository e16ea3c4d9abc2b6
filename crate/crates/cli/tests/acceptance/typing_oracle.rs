//! Brute-force typing oracle: the set of types derivable for an expression
//! with a derivation of bounded height, computed straight from the rules.

use std::collections::{BTreeMap, BTreeSet};

use sitc_core::ast::BinOp;
use sitc_core::Type;

use crate::space::{Expr, Lit};

pub type Types = BTreeSet<Type>;

#[derive(Clone)]
pub struct Ctx {
    vars: BTreeMap<String, Types>,
}

impl Ctx {
    pub fn new(vars: &[(&str, &[Type])]) -> Ctx {
        Ctx {
            vars: vars
                .iter()
                .map(|(n, t)| (n.to_string(), t.iter().cloned().collect()))
                .collect(),
        }
    }

    fn bind(&self, z: &str, ty: &Type) -> Ctx {
        let mut next = self.clone();
        next.vars
            .insert(z.to_string(), BTreeSet::from([ty.clone()]));
        next
    }

    fn candidates(&self, n: &str) -> Types {
        self.vars.get(n).cloned().unwrap_or_default()
    }
}

fn one(t: Type) -> Types {
    BTreeSet::from([t])
}

/// Types an expression may take at the root of a statement.
pub fn derivable(cx: &Ctx, e: &Expr, budget: usize) -> Types {
    match e {
        Expr::Eq(a, b) => {
            if budget == 0 {
                return Types::new();
            }
            let ta = formula(cx, a, budget - 1);
            let tb = formula(cx, b, budget - 1);
            ta.intersection(&tb).cloned().collect()
        }
        other => formula(cx, other, budget),
    }
}

/// A position demanding `want`: a variable with several candidates is
/// accepted when `want` is one of them.
fn slot(cx: &Ctx, e: &Expr, want: &Type, budget: usize) -> bool {
    if budget == 0 {
        return false;
    }
    if let Expr::Var(n) = e {
        let c = cx.candidates(n);
        if c.len() > 1 {
            return c.contains(want);
        }
    }
    term(cx, e, budget).contains(want)
}

fn action(cx: &Ctx, neg: bool, arg: &Expr, budget: usize) -> Types {
    let fun = Expr::F(Box::new(arg.clone()));
    if neg {
        if budget == 0 {
            return Types::new();
        }
        term(cx, &fun, budget - 1)
    } else {
        term(cx, &fun, budget)
    }
}

fn quant(
    cx: &Ctx,
    z: &str,
    tys: &[Type],
    body: &Expr,
    budget: usize,
    layer: fn(&Ctx, &Expr, usize) -> Types,
) -> Types {
    if tys.is_empty() || !body.mentions(z) {
        return Types::new();
    }
    let mut common: Option<Types> = None;
    for ty in tys {
        let ts = layer(&cx.bind(z, ty), body, budget - 1);
        common = Some(match common {
            None => ts,
            Some(c) => c.intersection(&ts).cloned().collect(),
        });
    }
    common.unwrap_or_default()
}

/// Term-layer rules.
pub fn term(cx: &Ctx, e: &Expr, budget: usize) -> Types {
    if budget == 0 {
        return Types::new();
    }
    let b = budget - 1;
    match e {
        Expr::Var(n) => {
            let c = cx.candidates(n);
            if c.len() == 1 {
                c
            } else {
                Types::new()
            }
        }
        Expr::Lit(Lit::True) => one(Type::Bool),
        Expr::Lit(Lit::Unit) => one(Type::Unit),
        Expr::Lit(Lit::S0) => one(Type::Situation),
        Expr::P(a, s) => {
            if slot(cx, a, &Type::Object, b) && slot(cx, s, &Type::Situation, b) {
                one(Type::Situation)
            } else {
                Types::new()
            }
        }
        Expr::F(a) => {
            if slot(cx, a, &Type::Object, b) {
                one(Type::Action)
            } else {
                Types::new()
            }
        }
        Expr::Do { neg, arg, sit } | Expr::Poss { neg, arg, sit } => {
            let result = if matches!(e, Expr::Do { .. }) {
                Type::Situation
            } else {
                Type::Unit
            };
            if action(cx, *neg, arg, b).contains(&Type::Action)
                && slot(cx, sit, &Type::Situation, b)
            {
                one(result)
            } else {
                Types::new()
            }
        }
        Expr::Neg(a) => term(cx, a, b),
        Expr::Bin(_, x, y) => connective(&[term(cx, x, b), term(cx, y, b)]),
        Expr::Seq(items) => {
            let sets: Vec<Types> = items.iter().map(|i| term(cx, i, b)).collect();
            if sets.is_empty() {
                Types::new()
            } else {
                connective(&sets)
            }
        }
        Expr::Quant(_, z, tys, body) => quant(cx, z, tys, body, budget, term),
        Expr::Eq(..) => Types::new(),
    }
}

/// One type throughout gives `Unit`; a mix gives `Bool`.
fn connective(sets: &[Types]) -> Types {
    let mut out = Types::new();
    let mut choose = |picked: &[&Type]| {
        let first = picked[0];
        out.insert(if picked.iter().all(|t| *t == first) {
            Type::Unit
        } else {
            Type::Bool
        });
    };
    fn walk<'a>(sets: &'a [Types], acc: &mut Vec<&'a Type>, k: &mut dyn FnMut(&[&Type])) {
        match sets.split_first() {
            None => k(acc),
            Some((head, rest)) => {
                for t in head {
                    acc.push(t);
                    walk(rest, acc, k);
                    acc.pop();
                }
            }
        }
    }
    walk(sets, &mut Vec::new(), &mut choose);
    out
}

fn components<'e>(op: BinOp, e: &'e Expr, out: &mut Vec<&'e Expr>) {
    match e {
        Expr::Bin(o, a, b) if *o == op && e.behavioral() => {
            components(op, a, out);
            components(op, b, out);
        }
        other => out.push(other),
    }
}

/// Formula-layer rules; subtrees without behavioral content are terms.
pub fn formula(cx: &Ctx, e: &Expr, budget: usize) -> Types {
    if !e.behavioral() || matches!(e, Expr::Seq(_)) {
        return term(cx, e, budget);
    }
    if budget == 0 {
        return Types::new();
    }
    let b = budget - 1;
    match e {
        Expr::Neg(a) => formula(cx, a, b),
        Expr::Quant(_, z, tys, body) => quant(cx, z, tys, body, budget, formula),
        Expr::Bin(BinOp::Supset, x, y) => {
            let tx = formula(cx, x, b);
            let ty = formula(cx, y, b);
            let mut out = Types::new();
            for l in &tx {
                for r in &ty {
                    if l == r {
                        out.insert(l.clone());
                    } else if *l == Type::Unit {
                        out.insert(Type::Unit);
                    }
                }
            }
            out
        }
        Expr::Bin(op, ..) => {
            let mut parts = Vec::new();
            components(*op, e, &mut parts);
            let mut common: Option<Types> = None;
            for part in parts {
                let ts = formula(cx, part, b);
                common = Some(match common {
                    None => ts,
                    Some(c) => c.intersection(&ts).cloned().collect(),
                });
            }
            if common.is_some_and(|c| !c.is_empty()) {
                one(Type::Unit)
            } else {
                Types::new()
            }
        }
        // Fluents, `do` and `poss` are the same judgment at either layer.
        _ => term(cx, e, budget),
    }
}
