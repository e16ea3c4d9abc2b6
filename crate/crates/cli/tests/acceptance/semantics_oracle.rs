//! Satisfaction oracle. For a fixed world shape (which names exist, which
//! are situations, which one is initial) an expression compiles to a
//! propositional formula over table entries; a truth table over those
//! entries then covers every world of that shape.

use sitc_core::ast::BinOp;
use sitc_core::World;

use crate::space::{Expr, Lit};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Absent,
    Instance,
    Situation,
}

/// Names of `L(w)` with their roles; `initial` indexes into `names`.
#[derive(Debug, Clone)]
pub struct Shape {
    pub names: Vec<(&'static str, Role)>,
    pub initial: usize,
}

impl Shape {
    /// Every shape over `pool` with at least one situation.
    pub fn all(pool: &[&'static str]) -> Vec<Shape> {
        let roles = [Role::Absent, Role::Instance, Role::Situation];
        let mut out = Vec::new();
        let total = 3usize.pow(pool.len() as u32);
        for code in 0..total {
            let mut c = code;
            let mut names = Vec::new();
            for n in pool {
                let role = roles[c % 3];
                c /= 3;
                if role != Role::Absent {
                    names.push((*n, role));
                }
            }
            for (i, (_, role)) in names.iter().enumerate() {
                if *role == Role::Situation {
                    out.push(Shape {
                        names: names.clone(),
                        initial: i,
                    });
                }
            }
        }
        out
    }

    fn index(&self, n: &str) -> Option<usize> {
        self.names.iter().position(|(m, _)| *m == n)
    }

    fn is_situation(&self, n: &str) -> bool {
        self.index(n)
            .is_some_and(|i| self.names[i].1 == Role::Situation)
    }

    fn situations(&self) -> Vec<usize> {
        (0..self.names.len())
            .filter(|i| self.names[*i].1 == Role::Situation)
            .collect()
    }

    /// Bits for `p(k, s)` entries followed by bits for `f(k)` entries.
    pub fn atoms(&self) -> usize {
        let l = self.names.len();
        l * self.situations().len() + l
    }

    fn rel_atom(&self, key: Option<usize>, sit: usize) -> Prop {
        let sits = self.situations();
        let col = sits.iter().position(|s| *s == sit).expect("a situation");
        match key {
            Some(k) => Prop::Atom(k * sits.len() + col),
            None => Prop::Const(false),
        }
    }

    fn fun_atom(&self, key: Option<usize>) -> Prop {
        let base = self.names.len() * self.situations().len();
        match key {
            Some(k) => Prop::Atom(base + k),
            None => Prop::Const(false),
        }
    }

    /// The world of this shape whose tables are given by `bits`.
    pub fn world(&self, bits: u32) -> World {
        let instances = self
            .names
            .iter()
            .filter(|(_, r)| *r == Role::Instance)
            .map(|(n, _)| *n);
        let mut sits: Vec<&str> = vec![self.names[self.initial].0];
        sits.extend(
            self.names
                .iter()
                .enumerate()
                .filter(|(i, (_, r))| *r == Role::Situation && *i != self.initial)
                .map(|(_, (n, _))| *n),
        );
        let mut w = World::new(instances, sits).expect("distinct names");
        w.declare_rel("p");
        w.declare_fun("f");
        let cols = self.situations();
        for (k, (name, _)) in self.names.iter().enumerate() {
            for (c, s) in cols.iter().enumerate() {
                if bits & (1 << (k * cols.len() + c)) != 0 {
                    w.add_rel("p", &[name], self.names[*s].0)
                        .expect("known names");
                }
            }
            if bits & (1 << (self.names.len() * cols.len() + k)) != 0 {
                w.add_fun("f", &[name]).expect("known names");
            }
        }
        w
    }
}

#[derive(Debug, Clone)]
pub enum Prop {
    Const(bool),
    Atom(usize),
    Not(Box<Prop>),
    And(Vec<Prop>),
    Or(Vec<Prop>),
    Imp(Box<Prop>, Box<Prop>),
    Iff(Box<Prop>, Box<Prop>),
}

impl Prop {
    pub fn eval(&self, bits: u32) -> bool {
        match self {
            Prop::Const(b) => *b,
            Prop::Atom(i) => bits & (1 << i) != 0,
            Prop::Not(p) => !p.eval(bits),
            Prop::And(ps) => ps.iter().all(|p| p.eval(bits)),
            Prop::Or(ps) => ps.iter().any(|p| p.eval(bits)),
            Prop::Imp(a, b) => !a.eval(bits) || b.eval(bits),
            Prop::Iff(a, b) => a.eval(bits) == b.eval(bits),
        }
    }
}

/// An uninterpreted name; these depend only on the shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Uninterpreted;

type Compiled = Result<Prop, Uninterpreted>;

fn rename(e: &Expr, from: &str, to: &str) -> Expr {
    match e {
        Expr::Var(n) if n == from => Expr::Var(to.to_string()),
        other => other.clone(),
    }
}

fn key(shape: &Shape, e: &Expr) -> Option<usize> {
    match e {
        Expr::Var(n) => shape.index(n),
        Expr::Lit(Lit::S0) => Some(shape.initial),
        _ => None,
    }
}

/// `f(arg)`, negated when `neg`.
fn action(shape: &Shape, neg: bool, arg: &Expr) -> Compiled {
    let f = Prop::And(vec![shape.fun_atom(key(shape, arg)), compile(shape, arg)?]);
    Ok(if neg { Prop::Not(Box::new(f)) } else { f })
}

pub fn compile(shape: &Shape, e: &Expr) -> Compiled {
    let sits = shape.situations();
    Ok(match e {
        Expr::Var(n) => Prop::Const(shape.index(n).is_some()),
        Expr::Lit(_) => Prop::Const(true),
        Expr::P(a, s) => {
            let arg = compile(shape, a)?;
            let k = key(shape, a);
            let entry = match &**s {
                Expr::Var(n) if shape.is_situation(n) => {
                    shape.rel_atom(k, shape.index(n).expect("present"))
                }
                Expr::Var(_) => return Err(Uninterpreted),
                Expr::Lit(Lit::S0) => shape.rel_atom(k, shape.initial),
                other => Prop::And(vec![
                    compile(shape, other)?,
                    Prop::Or(sits.iter().map(|si| shape.rel_atom(k, *si)).collect()),
                ]),
            };
            Prop::And(vec![arg, entry])
        }
        Expr::F(a) => action(shape, false, a)?,
        // `do(bt, v)` holds when `bt` does with some situation substituted
        // for the variable `v`.
        Expr::Do { neg, arg, sit } => match &**sit {
            Expr::Var(n) => Prop::Or(
                sits.iter()
                    .map(|to| action(shape, *neg, &rename(arg, n, shape.names[*to].0)))
                    .collect::<Result<_, _>>()?,
            ),
            _ => action(shape, *neg, arg)?,
        },
        // Some situation sᵢ with `do(bt, sᵢ)`; the given situation is unused.
        Expr::Poss { neg, arg, .. } => {
            let mut alts = Vec::new();
            for from in &sits {
                for to in &sits {
                    alts.push(action(
                        shape,
                        *neg,
                        &rename(arg, shape.names[*from].0, shape.names[*to].0),
                    )?);
                }
            }
            Prop::Or(alts)
        }
        Expr::Neg(a) => Prop::Not(Box::new(compile(shape, a)?)),
        Expr::Bin(op, a, b) => {
            let (a, b) = (compile(shape, a)?, compile(shape, b)?);
            match op {
                BinOp::Supset => Prop::Imp(Box::new(a), Box::new(b)),
                BinOp::Conj => Prop::And(vec![a, b]),
                BinOp::Disj => Prop::Or(vec![a, b]),
            }
        }
        Expr::Seq(items) => Prop::And(
            items
                .iter()
                .map(|i| compile(shape, i))
                .collect::<Result<_, _>>()?,
        ),
        // With at least one situation the unbound body is its own quantification.
        Expr::Quant(.., body) => compile(shape, body)?,
        Expr::Eq(a, b) => Prop::Iff(Box::new(compile(shape, a)?), Box::new(compile(shape, b)?)),
    })
}
