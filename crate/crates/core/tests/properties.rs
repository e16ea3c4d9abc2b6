#![cfg(feature = "testkit")]

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use sitc_core::ast::{Formula, Node, Term};
use sitc_core::context::TypingContext;
use sitc_core::parser::{parse_formula, parse_program, print_formula, print_program};
use sitc_core::testkit::{Gen, Signature};
use sitc_core::typecheck::{check_rule_schema, typecheck_formula, typecheck_node};
use sitc_core::types::Type;

fn generated(seed: u64, typed: bool) -> Formula {
    let sig = Signature::pool();
    let mut g = Gen::new(StdRng::seed_from_u64(seed), &sig, 6);
    if typed {
        g.well_typed_formula().0
    } else {
        g.any_formula()
    }
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(seed in any::<u64>()) {
        let sig = Signature::pool();
        let f = generated(seed, false);
        let text = print_formula(&f);
        prop_assert_eq!(parse_formula(&text, &sig.program.declarations).unwrap(), f);
    }

    #[test]
    fn derivations_fit_rule_schemas(seed in any::<u64>()) {
        let sig = Signature::pool();
        let f = generated(seed, true);
        let j = typecheck_formula(&sig.context, &f).unwrap();
        prop_assert!(check_rule_schema(&j).is_ok());
    }

    #[test]
    fn negation_is_transparent(seed in any::<u64>()) {
        let sig = Signature::pool();
        let Formula::Term(t) = generated(seed, true) else { return Ok(()) };
        let ty = typecheck_node(&sig.context, &Node::Term(t.clone())).unwrap().ty;
        let neg = typecheck_node(&sig.context, &Node::Term(Term::neg(t))).unwrap().ty;
        prop_assert_eq!(ty, neg);
    }

    #[test]
    fn checking_is_deterministic(seed in any::<u64>()) {
        let sig = Signature::pool();
        let f = generated(seed, false);
        prop_assert_eq!(typecheck_formula(&sig.context, &f), typecheck_formula(&sig.context, &f));
    }

    #[test]
    fn context_extend_then_exit_round_trips(name in "[a-z]{1,4}", pick in 0usize..5) {
        let sig = Signature::pool();
        let w = &sig.context;
        let ty = Type::BASE[pick].clone();
        let inner = w.extend(&name, [ty.clone()].into()).unwrap();
        prop_assert_eq!(inner.lookup_unique(&name), Some(ty));
        prop_assert_eq!(&inner.exit_scope().unwrap(), w);
    }
}

#[test]
fn program_round_trip() {
    let src = "var x: Object | Situation; rel p(Object); fun f(Object, Object);\nstmt a: p(x, s0) /\\ ~f(x, x);\nstmt b: ((x,), unit) = true;\n";
    let prog = parse_program(src).unwrap();
    assert_eq!(parse_program(&print_program(&prog)).unwrap(), prog);
    assert!(TypingContext::from_program(&prog).is_ok());
}
