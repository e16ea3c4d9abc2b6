//! Rendering of derivations and the per-rule schema table.

use serde::Serialize;

use crate::parser::print_node;
use crate::types::Type;

use super::{Judgment, Rule};

/// Serializable form of a derivation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivationNode {
    pub rule: Rule,
    pub subject: String,
    #[serde(rename = "type")]
    pub ty: String,
    pub premises: Vec<DerivationNode>,
}

pub fn derivation_tree(j: &Judgment) -> DerivationNode {
    DerivationNode {
        rule: j.rule,
        subject: print_node(&j.subject),
        ty: j.ty.to_string(),
        premises: j.premises.iter().map(derivation_tree).collect(),
    }
}

/// One line per rule application, conclusion first, premises indented.
pub fn render_derivation(j: &Judgment) -> String {
    fn go(j: &Judgment, depth: usize, out: &mut String) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(&format!(
            "{}  {} : {}\n",
            j.rule,
            print_node(&j.subject),
            j.ty
        ));
        for p in &j.premises {
            go(p, depth + 1, out);
        }
    }
    let mut out = String::new();
    go(j, 0, &mut out);
    out
}

/// Rules in the order they are applied (premises before conclusions),
/// leaving out `T-Var` leaves.
pub fn rule_trace(j: &Judgment) -> Vec<Rule> {
    fn go(j: &Judgment, out: &mut Vec<Rule>) {
        for p in &j.premises {
            go(p, out);
        }
        if j.rule != Rule::Var {
            out.push(j.rule);
        }
    }
    let mut out = Vec::new();
    go(j, &mut out);
    out
}

fn uniform(premises: &[Judgment]) -> bool {
    premises.windows(2).all(|w| w[0].ty == w[1].ty)
}

fn connective(premises: &[Judgment]) -> Type {
    if uniform(premises) {
        Type::Unit
    } else {
        Type::Bool
    }
}

/// Checks that every node's premise types fit its rule's shape.
pub fn check_rule_schema(j: &Judgment) -> Result<(), String> {
    let p = &j.premises;
    let tys: Vec<&Type> = p.iter().map(|q| &q.ty).collect();
    let ok = match j.rule {
        Rule::True | Rule::False => p.is_empty() && j.ty == Type::Bool,
        Rule::Unit => p.is_empty() && j.ty == Type::Unit,
        Rule::Stn => p.is_empty() && j.ty == Type::Situation,
        Rule::Var => p.is_empty() && j.ty.is_base(),
        Rule::Neg => p.len() == 1 && *tys[0] == j.ty,
        Rule::Spt | Rule::Conj | Rule::Disj => p.len() == 2 && j.ty == connective(p),
        Rule::Seq => !p.is_empty() && j.ty == connective(p),
        Rule::RelFlt => {
            p.len() >= 2 && *tys[p.len() - 1] == Type::Situation && j.ty == Type::Situation
        }
        Rule::FunFlt => !p.is_empty() && j.ty == Type::Action,
        Rule::Do => {
            p.len() == 2
                && *tys[0] == Type::Action
                && *tys[1] == Type::Situation
                && j.ty == Type::Situation
        }
        Rule::Poss => {
            p.len() == 2
                && *tys[0] == Type::Action
                && *tys[1] == Type::Situation
                && j.ty == Type::Unit
        }
        Rule::Unv1 | Rule::Est1 => {
            !p.is_empty() && tys.iter().all(|t| **t == j.ty) && j.ty != Type::Action
        }
        Rule::Unv2 | Rule::Est2 => {
            !p.is_empty() && tys.iter().all(|t| **t == j.ty) && j.ty == Type::Action
        }
        Rule::SupsetBT => {
            p.len() == 2
                && ((tys[0] == tys[1] && *tys[0] == j.ty)
                    || (*tys[0] == Type::Unit && j.ty == Type::Unit))
        }
        Rule::ConjUnit => p.len() >= 2 && uniform(p) && j.ty == Type::Unit,
        Rule::Eq => p.len() == 2 && tys[0] == tys[1] && *tys[0] == j.ty,
    };
    if !ok {
        return Err(format!(
            "{} concluding {} from premises ({}) at `{}`",
            j.rule,
            j.ty,
            tys.iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(", "),
            print_node(&j.subject)
        ));
    }
    p.iter().try_for_each(check_rule_schema)
}
