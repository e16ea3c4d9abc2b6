//! Preservation and progress checks along evaluation traces.

use crate::ast::{Formula, Node};
use crate::context::TypingContext;
use crate::parser::print_node;
use crate::typecheck::{typecheck_formula, typecheck_node, TypeError};
use crate::types::Type;

use super::{EvalRule, Machine, Outcome, TransitionPolicy};

#[derive(Debug, Clone, PartialEq)]
pub struct PreservationViolation {
    /// 1-based index of the step that produced the node.
    pub step: usize,
    pub rule: EvalRule,
    pub node: String,
    pub expected: Type,
    /// The node's type, or the checker's message if it no longer types.
    pub found: Result<Type, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreservationReport {
    /// Type of the input. `Err` means the precondition failed and nothing
    /// was stepped.
    pub initial: Result<Type, TypeError>,
    pub steps: usize,
    pub outcome: Option<Outcome>,
    pub violations: Vec<PreservationViolation>,
}

impl PreservationReport {
    pub fn holds(&self) -> bool {
        self.initial.is_ok() && self.violations.is_empty()
    }
}

/// Evaluates `f` and re-checks every intermediate node against the type of
/// `f`.
pub fn check_preservation(
    w: &TypingContext,
    f: &Formula,
    policy: &dyn TransitionPolicy,
    fuel: usize,
) -> PreservationReport {
    let initial = typecheck_formula(w, f).map(|j| j.ty);
    let Ok(expected) = initial.clone() else {
        return PreservationReport {
            initial,
            steps: 0,
            outcome: None,
            violations: Vec::new(),
        };
    };
    let ev = Machine::with_context(policy, w).evaluate(&Node::Formula(f.clone()), fuel);
    let violations = ev
        .trace
        .iter()
        .enumerate()
        .filter_map(|(i, step)| {
            let found = typecheck_node(w, &step.node)
                .map(|j| j.ty)
                .map_err(|e| format!("{}: {e}", e.code()));
            (found.as_ref() != Ok(&expected)).then(|| PreservationViolation {
                step: i + 1,
                rule: step.rule,
                node: print_node(&step.node),
                expected: expected.clone(),
                found,
            })
        })
        .collect();
    PreservationReport {
        initial,
        steps: ev.trace.len(),
        outcome: Some(ev.outcome),
        violations,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProgressReport {
    pub well_typed: bool,
    pub steps: usize,
    pub outcome: Outcome,
    /// Set when a well-typed node was stuck.
    pub violation: Option<String>,
}

impl ProgressReport {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

/// Evaluates `f` and flags a stuck end state whose node still type-checks.
/// Ill-typed inputs are evaluated too; getting stuck on them is not a
/// violation.
pub fn check_progress(
    w: &TypingContext,
    f: &Formula,
    policy: &dyn TransitionPolicy,
    fuel: usize,
) -> ProgressReport {
    let well_typed = typecheck_formula(w, f).is_ok();
    let ev = Machine::with_context(policy, w).evaluate(&Node::Formula(f.clone()), fuel);
    let violation = match &ev.outcome {
        Outcome::Stuck { node, reason } if typecheck_node(w, node).is_ok() => Some(format!(
            "well-typed node `{}` is stuck: {reason}",
            print_node(node)
        )),
        _ => None,
    };
    ProgressReport {
        well_typed,
        steps: ev.trace.len(),
        outcome: ev.outcome,
        violation,
    }
}
