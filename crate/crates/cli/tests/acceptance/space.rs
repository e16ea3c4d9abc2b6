//! A small expression language shared by the oracles, plus its lowering
//! into the crate's AST. The oracles never look at the AST.

use sitc_core::ast::{BehavioralTerm, BinOp, Formula, Ident, Quantifier, Span, Term, Value};
use sitc_core::testkit::to_formula;
use sitc_core::Type;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lit {
    True,
    Unit,
    S0,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Var(String),
    Lit(Lit),
    /// `p(arg, sit)`
    P(Box<Expr>, Box<Expr>),
    /// `f(arg)`
    F(Box<Expr>),
    /// `do(f(arg), sit)`, or `do(~f(arg), sit)` when `neg`.
    Do {
        neg: bool,
        arg: Box<Expr>,
        sit: Box<Expr>,
    },
    Poss {
        neg: bool,
        arg: Box<Expr>,
        sit: Box<Expr>,
    },
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Seq(Vec<Expr>),
    Quant(Quantifier, String, Vec<Type>, Box<Expr>),
    /// Only ever at the root.
    Eq(Box<Expr>, Box<Expr>),
}

pub fn var(n: &str) -> Expr {
    Expr::Var(n.to_string())
}

pub fn p(a: Expr, s: Expr) -> Expr {
    Expr::P(Box::new(a), Box::new(s))
}

pub fn f(a: Expr) -> Expr {
    Expr::F(Box::new(a))
}

pub fn do_(neg: bool, a: Expr, s: Expr) -> Expr {
    Expr::Do {
        neg,
        arg: Box::new(a),
        sit: Box::new(s),
    }
}

pub fn poss(neg: bool, a: Expr, s: Expr) -> Expr {
    Expr::Poss {
        neg,
        arg: Box::new(a),
        sit: Box::new(s),
    }
}

pub fn neg(e: Expr) -> Expr {
    Expr::Neg(Box::new(e))
}

pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
    Expr::Bin(op, Box::new(a), Box::new(b))
}

pub fn quant(q: Quantifier, z: &str, tys: Vec<Type>, body: Expr) -> Expr {
    Expr::Quant(q, z.to_string(), tys, Box::new(body))
}

pub const OPS: [BinOp; 3] = [BinOp::Supset, BinOp::Conj, BinOp::Disj];

impl Expr {
    pub fn apps(&self) -> usize {
        match self {
            Expr::Var(_) | Expr::Lit(_) => 0,
            Expr::P(a, s) => 1 + a.apps() + s.apps(),
            Expr::F(a) => 1 + a.apps(),
            Expr::Do { arg, sit, .. } | Expr::Poss { arg, sit, .. } => 2 + arg.apps() + sit.apps(),
            Expr::Neg(e) | Expr::Quant(.., e) => e.apps(),
            Expr::Bin(_, a, b) | Expr::Eq(a, b) => a.apps() + b.apps(),
            Expr::Seq(items) => items.iter().map(Expr::apps).sum(),
        }
    }

    pub fn mentions(&self, v: &str) -> bool {
        match self {
            Expr::Var(n) => n == v,
            Expr::Lit(_) => false,
            Expr::P(a, s) => a.mentions(v) || s.mentions(v),
            Expr::F(a) => a.mentions(v),
            Expr::Do { arg, sit, .. } | Expr::Poss { arg, sit, .. } => {
                arg.mentions(v) || sit.mentions(v)
            }
            Expr::Neg(e) => e.mentions(v),
            Expr::Quant(_, z, _, e) => z != v && e.mentions(v),
            Expr::Bin(_, a, b) | Expr::Eq(a, b) => a.mentions(v) || b.mentions(v),
            Expr::Seq(items) => items.iter().any(|i| i.mentions(v)),
        }
    }

    /// Whether the expression contains a fluent, `do` or `poss`.
    pub fn behavioral(&self) -> bool {
        self.apps() > 0
    }

    fn op(neg: bool, arg: &Expr) -> BehavioralTerm {
        let f = BehavioralTerm::fun("f", vec![arg.term()]);
        if neg {
            BehavioralTerm::neg(f)
        } else {
            f
        }
    }

    pub fn term(&self) -> Term {
        match self {
            Expr::Var(n) => Term::var(n),
            Expr::Lit(Lit::True) => Term::lit(Value::True),
            Expr::Lit(Lit::Unit) => Term::lit(Value::Unit),
            Expr::Lit(Lit::S0) => Term::s0(),
            Expr::P(a, s) => Term::bt(BehavioralTerm::rel("p", vec![a.term()], s.term())),
            Expr::F(a) => Term::bt(BehavioralTerm::fun("f", vec![a.term()])),
            Expr::Do { neg, arg, sit } => {
                Term::bt(BehavioralTerm::do_(Expr::op(*neg, arg), sit.term()))
            }
            Expr::Poss { neg, arg, sit } => {
                Term::bt(BehavioralTerm::poss(Expr::op(*neg, arg), sit.term()))
            }
            Expr::Neg(e) => Term::neg(e.term()),
            Expr::Bin(op, a, b) => Term::binary(*op, a.term(), b.term()),
            Expr::Seq(items) => Term::Seq(items.iter().map(Expr::term).collect(), Span::default()),
            Expr::Quant(q, z, tys, body) => Term::Quant {
                kind: *q,
                var: Ident::new(z.as_str()),
                types: tys.clone(),
                body: Box::new(body.term()),
                span: Span::default(),
            },
            Expr::Eq(..) => panic!("equations only occur at the root"),
        }
    }

    /// The canonical formula the parser would build for this expression.
    pub fn formula(&self) -> Formula {
        match self {
            Expr::Eq(a, b) => Formula::eq(to_formula(a.term()), to_formula(b.term())),
            other => to_formula(other.term()),
        }
    }
}
