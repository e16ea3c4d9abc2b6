//! Canonical text for ASTs. Output re-parses to a structurally equal tree.

use crate::ast::{
    BehavioralTerm, BinOp, Declaration, Formula, Node, Quantifier, SourceProgram, Statement, Term,
    Value,
};
use crate::types::Type;

const PREC_EQ: u8 = 0;
const PREC_IMPLIES: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_PREFIX: u8 = 4;
const PREC_ATOM: u8 = 5;

fn op_info(op: BinOp) -> (&'static str, u8) {
    match op {
        BinOp::Supset => ("=>", PREC_IMPLIES),
        BinOp::Disj => ("\\/", PREC_OR),
        BinOp::Conj => ("/\\", PREC_AND),
    }
}

/// Printed text with its precedence. `open` marks text ending in an
/// unbracketed quantifier, whose body would swallow anything appended.
struct Doc {
    text: String,
    prec: u8,
    open: bool,
}

fn atom(text: String) -> Doc {
    Doc {
        text,
        prec: PREC_ATOM,
        open: false,
    }
}

fn paren_if(cond: bool, s: String) -> String {
    if cond {
        format!("({s})")
    } else {
        s
    }
}

/// `=>` associates to the right, `/\` and `\/` to the left.
fn binary(op: BinOp, l: Doc, r: Doc) -> Doc {
    let (sym, p) = op_info(op);
    let right_assoc = op == BinOp::Supset;
    let wrap_l = l.open || if right_assoc { l.prec <= p } else { l.prec < p };
    let wrap_r = if right_assoc { r.prec < p } else { r.prec <= p };
    Doc {
        text: format!(
            "{} {sym} {}",
            paren_if(wrap_l, l.text),
            paren_if(wrap_r, r.text)
        ),
        prec: p,
        open: r.open && !wrap_r,
    }
}

fn neg(body: Doc) -> Doc {
    let wrap = body.prec < PREC_PREFIX;
    Doc {
        text: format!("~{}", paren_if(wrap, body.text)),
        prec: PREC_PREFIX,
        open: body.open && !wrap,
    }
}

/// The body of a quantifier extends as far right as possible.
fn quant(kind: Quantifier, var: &str, types: &[Type], body: Doc) -> Doc {
    let tys = types
        .iter()
        .map(Type::to_string)
        .collect::<Vec<_>>()
        .join(" | ");
    Doc {
        text: format!("({} {var}: {tys}) {}", kind.keyword(), body.text),
        prec: PREC_PREFIX,
        open: true,
    }
}

pub fn print_value(v: &Value) -> String {
    match v {
        Value::Unit => "unit".into(),
        Value::True => "true".into(),
        Value::False => "false".into(),
        Value::Situation(sv) if sv.is_initial() => "s0".into(),
        Value::Situation(sv) => {
            let mut out = String::from("[");
            out.push_str(&sv.base.as_ref().map_or("s0".into(), |b| print_term(b)));
            for a in &sv.actions {
                out.push_str(" . ");
                out.push_str(&print_behavioral(a));
            }
            out.push(']');
            out
        }
    }
}

fn term(t: &Term) -> Doc {
    match t {
        Term::Var(id) => atom(id.name.clone()),
        Term::Lit(v, _) => atom(print_value(v)),
        Term::Quant {
            kind,
            var,
            types,
            body,
            ..
        } => quant(*kind, &var.name, types, term(body)),
        Term::Neg(t) => neg(term(t)),
        Term::Supset(a, b) => binary(BinOp::Supset, term(a), term(b)),
        Term::Conj(a, b) => binary(BinOp::Conj, term(a), term(b)),
        Term::Disj(a, b) => binary(BinOp::Disj, term(a), term(b)),
        Term::Seq(items, _) => {
            let parts: Vec<String> = items.iter().map(|t| term(t).text).collect();
            if parts.len() == 1 {
                atom(format!("({},)", parts[0]))
            } else {
                atom(format!("({})", parts.join(", ")))
            }
        }
        Term::Behavioral(bt) => behavioral(bt),
    }
}

fn args(items: &[Term], extra: Option<&Term>) -> String {
    items
        .iter()
        .chain(extra)
        .map(|t| term(t).text)
        .collect::<Vec<_>>()
        .join(", ")
}

fn behavioral(bt: &BehavioralTerm) -> Doc {
    match bt {
        BehavioralTerm::Neg(inner) => neg(behavioral(inner)),
        BehavioralTerm::RelFluent {
            name, args: a, sit, ..
        } => atom(format!("{}({})", name.name, args(a, Some(sit)))),
        BehavioralTerm::FunFluent { name, args: a, .. } => {
            atom(format!("{}({})", name.name, args(a, None)))
        }
        BehavioralTerm::Do { action, sit, .. } => atom(format!(
            "do({}, {})",
            behavioral(action).text,
            term(sit).text
        )),
        BehavioralTerm::Poss { action, sit, .. } => atom(format!(
            "poss({}, {})",
            behavioral(action).text,
            term(sit).text
        )),
    }
}

fn formula(f: &Formula) -> Doc {
    match f {
        Formula::Atom(bt) => behavioral(bt),
        Formula::Term(t) => term(t),
        Formula::Neg(f) => neg(formula(f)),
        Formula::Supset(a, b) => binary(BinOp::Supset, formula(a), formula(b)),
        Formula::Conj(a, b) => binary(BinOp::Conj, formula(a), formula(b)),
        Formula::Disj(a, b) => binary(BinOp::Disj, formula(a), formula(b)),
        // A quantifier body stops before `=`, so open sides need no brackets.
        Formula::Eq(a, b) => {
            let (l, r) = (formula(a), formula(b));
            Doc {
                text: format!(
                    "{} = {}",
                    paren_if(l.prec == PREC_EQ, l.text),
                    paren_if(r.prec == PREC_EQ, r.text)
                ),
                prec: PREC_EQ,
                open: false,
            }
        }
        Formula::Quant {
            kind,
            var,
            types,
            body,
            ..
        } => quant(*kind, &var.name, types, formula(body)),
    }
}

pub fn print_term(t: &Term) -> String {
    term(t).text
}

pub fn print_behavioral(bt: &BehavioralTerm) -> String {
    behavioral(bt).text
}

pub fn print_formula(f: &Formula) -> String {
    formula(f).text
}

pub fn print_node(n: &Node) -> String {
    match n {
        Node::Term(t) => print_term(t),
        Node::Behavioral(bt) => print_behavioral(bt),
        Node::Formula(f) => print_formula(f),
    }
}

pub fn print_declaration(d: &Declaration) -> String {
    match d {
        Declaration::Var { name, types, .. } => {
            let tys = types
                .iter()
                .map(Type::to_string)
                .collect::<Vec<_>>()
                .join(" | ");
            format!("var {}: {tys};", name.name)
        }
        Declaration::Fluent {
            kind, name, params, ..
        } => {
            let ps = params
                .iter()
                .map(Type::to_string)
                .collect::<Vec<_>>()
                .join(", ");
            format!("{} {}({ps});", kind.keyword(), name.name)
        }
    }
}

pub fn print_statement(s: &Statement) -> String {
    format!("stmt {}: {};", s.name.name, print_formula(&s.formula))
}

pub fn print_program(p: &SourceProgram) -> String {
    let mut out = String::new();
    for d in &p.declarations {
        out.push_str(&print_declaration(d));
        out.push('\n');
    }
    if !p.declarations.is_empty() && !p.statements.is_empty() {
        out.push('\n');
    }
    for s in &p.statements {
        out.push_str(&print_statement(s));
        out.push('\n');
    }
    out
}
