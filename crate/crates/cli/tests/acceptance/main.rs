//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod semantics_oracle;
mod space;
mod typing_oracle;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command as Process;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use sitc_cli::{process_file, validate_report, Command, Format, RunConfig};
use sitc_core::ast::{Formula, Node, Quantifier};
use sitc_core::eval::{check_preservation, check_progress, AppendHistory, Machine, Outcome};
use sitc_core::parser::{
    parse_formula, parse_program, print_declaration, print_formula, print_program,
};
use sitc_core::testkit::{Gen, Signature};
use sitc_core::typecheck::typecheck_formula;
use sitc_core::{Type, TypingContext};

use semantics_oracle::{compile, Shape};
use space::{bin, do_, f, neg, p, poss, quant, var, Expr, Lit, OPS};
use typing_oracle::{derivable, Ctx};

type Verdict = Result<String, String>;

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus/paper_corpus.sitc")
}

fn report(command: Command, explain: bool, path: &Path) -> Value {
    let mut cfg = RunConfig::new(command, vec![path.to_path_buf()]);
    cfg.explain = explain;
    cfg.format = Format::Json;
    let (r, _) = process_file(&cfg, path, None).expect("corpus is readable");
    serde_json::to_value(&r).expect("report serializes")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || {
        format!("{what} took {took:?}, limit {limit:?}")
    })
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let r = report(Command::Check, false, &corpus());
    within(Duration::from_secs(1), start, "checking the corpus")?;
    let expected = [
        (
            "broken_after_drop",
            "well-typed",
            None,
            vec!["Situation", "Situation"],
        ),
        (
            "color_after_paint",
            "ill-typed",
            Some("E006"),
            vec!["Situation", "Object"],
        ),
        (
            "pickup_precondition",
            "ill-typed",
            Some("E005"),
            vec!["Situation", "Action", "Situation"],
        ),
    ];
    let stmts = r["statements"].as_array().ok_or("no statements")?;
    ensure(stmts.len() == expected.len(), || {
        format!("{} statements", stmts.len())
    })?;
    for (s, (name, status, code, sides)) in stmts.iter().zip(&expected) {
        ensure(s["name"] == *name && s["status"] == *status, || {
            format!("{name}: {}", s["status"])
        })?;
        let got = s["diagnostics"].get(0).map(|d| d["code"].clone());
        ensure(got.as_ref().and_then(Value::as_str) == *code, || {
            format!("{name}: code {got:?}")
        })?;
        let got: Vec<&str> = s["sides"]
            .as_array()
            .into_iter()
            .flatten()
            .filter_map(Value::as_str)
            .collect();
        ensure(got == *sides, || format!("{name}: sides {got:?}"))?;
    }
    Ok(format!("3 verdicts in {:?}", start.elapsed()))
}

/// Rule names in post-order, leaving out variable lookups.
fn post_order(tree: &Value, out: &mut Vec<String>) {
    for p in tree["premises"].as_array().into_iter().flatten() {
        post_order(p, out);
    }
    if let Some(rule) = tree["rule"].as_str() {
        if rule != "T-Var" {
            out.push(rule.to_string());
        }
    }
}

fn criterion_2() -> Verdict {
    let r = report(Command::Check, true, &corpus());
    validate_report(&r)?;
    let mut rhs = Vec::new();
    post_order(&r["statements"][0]["derivation"]["premises"][1], &mut rhs);
    ensure(rhs == ["T-FunFlt", "T-Do", "T-RelFlt"], || {
        format!("broken_after_drop right side: {rhs:?}")
    })?;
    let mut first = Vec::new();
    post_order(&r["statements"][2]["partial-derivations"][0], &mut first);
    ensure(first == ["T-RelFlt", "T-Neg", "T-Unv1"], || {
        format!("pickup_precondition conjunct: {first:?}")
    })?;
    Ok("derivations match and the report validates".into())
}

fn criterion_3() -> Verdict {
    let mut cfg = RunConfig::new(Command::Fix, vec![corpus()]);
    cfg.suggest_fixes = true;
    let (r, _) = process_file(&cfg, &corpus(), None)?;
    let texts: Vec<(String, String)> = r
        .statements
        .iter()
        .flat_map(|s| &s.diagnostics)
        .flat_map(|d| &d.fixes)
        .map(|fx| (fx.replacement_text(), print_declaration(&fx.declaration)))
        .collect();
    let want = [
        (
            "inColor(c, s)".to_string(),
            "rel inColor(Object);".to_string(),
        ),
        ("heavy(x, s)".to_string(), "rel heavy(Object);".to_string()),
    ];
    ensure(texts == want, || format!("fixes {texts:?}"))?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let copy = dir.path().join("corpus.sitc");
    std::fs::copy(corpus(), &copy).map_err(|e| e.to_string())?;
    let bin = env!("CARGO_BIN_EXE_sitc");
    let fixed = Process::new(bin)
        .args(["fix", "--apply-fixes"])
        .arg(&copy)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(fixed.status.code() == Some(0), || {
        format!("fix --apply-fixes exited {:?}", fixed.status.code())
    })?;
    let out = dir.path().join("corpus.fixed.sitc");
    let check = Process::new(bin)
        .arg("check")
        .arg(&out)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(check.status.code() == Some(0), || {
        format!(
            "check of the fixed file exited {:?}: {}",
            check.status.code(),
            String::from_utf8_lossy(&check.stderr)
        )
    })?;
    Ok("2 fixes suggested; the fixed corpus checks cleanly".into())
}

fn generated(sig: &Signature) -> Vec<Formula> {
    let mut g = Gen::new(ChaCha8Rng::seed_from_u64(7), sig, 6);
    (0..1000).map(|_| g.well_typed_formula().0).collect()
}

fn fuel(f: &Formula) -> usize {
    f.node_count() + f.count_poss() + 1
}

fn criterion_4(sig: &Signature, suite: &[Formula]) -> Verdict {
    let start = Instant::now();
    let mut steps = 0;
    for f in suite {
        let r = check_preservation(&sig.context, f, &AppendHistory, fuel(f));
        ensure(r.holds(), || {
            format!("{}: {:?}", print_formula(f), r.violations)
        })?;
        ensure(!matches!(r.outcome, Some(Outcome::OutOfFuel(_))), || {
            format!("{}: out of fuel", print_formula(f))
        })?;
        steps += r.steps;
    }
    within(Duration::from_secs(30), start, "preservation")?;
    Ok(format!(
        "{} formulas, {steps} steps, {:?}",
        suite.len(),
        start.elapsed()
    ))
}

fn criterion_5(sig: &Signature, suite: &[Formula]) -> Verdict {
    for f in suite {
        let r = check_progress(&sig.context, f, &AppendHistory, fuel(f));
        ensure(r.holds(), || {
            format!("{}: {:?}", print_formula(f), r.violation)
        })?;
    }
    let src = std::fs::read_to_string(corpus()).map_err(|e| e.to_string())?;
    let program = parse_program(&src).map_err(|e| e.to_string())?;
    let w = TypingContext::from_program(&program).map_err(|e| e.to_string())?;
    let paint = &program
        .statement("color_after_paint")
        .ok_or("missing statement")?
        .formula;
    let ev = Machine::with_context(&AppendHistory, &w)
        .evaluate(&Node::Formula(paint.clone()), fuel(paint));
    ensure(ev.outcome.is_stuck(), || {
        format!("negative control ended {}", ev.outcome.label())
    })?;
    Ok(format!(
        "{} formulas progress; the ill-typed control is stuck",
        suite.len()
    ))
}

const LITS: [Lit; 3] = [Lit::True, Lit::Unit, Lit::S0];

/// Leaves and single applications over `vars`.
fn atoms(vars: &[&str]) -> Vec<Expr> {
    let leaves: Vec<Expr> = vars
        .iter()
        .map(|v| var(v))
        .chain(LITS.iter().map(|l| Expr::Lit(*l)))
        .collect();
    let slots: Vec<Expr> = vars
        .iter()
        .map(|v| var(v))
        .chain([Expr::Lit(Lit::S0)])
        .collect();
    let mut out = leaves;
    for v in vars {
        out.push(f(var(v)));
        for w in &slots {
            out.push(p(var(v), w.clone()));
            out.push(p(var(v), do_(false, var(v), w.clone())));
            for negated in [false, true] {
                out.push(do_(negated, var(v), w.clone()));
                out.push(poss(negated, var(v), w.clone()));
            }
        }
    }
    out
}

fn typing_space() -> Vec<Expr> {
    let vars = ["x", "s", "a", "m"];
    let e0 = atoms(&vars);
    let s = || var("s");
    let small = vec![
        var("x"),
        var("s"),
        var("a"),
        var("m"),
        Expr::Lit(Lit::True),
        Expr::Lit(Lit::Unit),
        Expr::Lit(Lit::S0),
        p(var("x"), s()),
        p(var("m"), var("m")),
        f(var("x")),
        f(var("m")),
        do_(false, var("x"), s()),
        do_(true, var("x"), var("m")),
        poss(false, var("x"), s()),
        poss(true, var("m"), Expr::Lit(Lit::S0)),
        p(var("x"), do_(false, var("x"), s())),
    ];
    let mut e1 = e0.clone();
    e1.extend(e0.iter().map(|e| neg(e.clone())));
    for a in &small {
        for b in &small {
            e1.extend(OPS.iter().map(|op| bin(*op, a.clone(), b.clone())));
            e1.push(Expr::Seq(vec![a.clone(), b.clone()]));
        }
    }
    let with_z = atoms(&["x", "s", "a", "m", "z"]);
    let sorts = [
        vec![Type::Object],
        vec![Type::Situation],
        vec![Type::Action],
        vec![Type::Object, Type::Situation],
    ];
    for q in [Quantifier::Forall, Quantifier::Exists] {
        for tys in &sorts {
            e1.extend(
                with_z
                    .iter()
                    .map(|body| quant(q, "z", tys.clone(), body.clone())),
            );
        }
    }
    let mut top = e1.clone();
    for a in &small {
        for b in &e1 {
            top.extend(OPS.iter().map(|op| bin(*op, a.clone(), b.clone())));
        }
    }
    for a in &e0 {
        for b in &e0 {
            top.push(Expr::Eq(Box::new(a.clone()), Box::new(b.clone())));
        }
    }
    top.retain(|e| e.apps() <= 3);
    top
}

const MAX_DEPTH: usize = 6;

fn criterion_6() -> Verdict {
    let sig = Signature::from_source(
        "var x: Object; var s: Situation; var a: Action; var m: Object | Situation;
         rel p(Object); fun f(Object);",
    );
    let cx = Ctx::new(&[
        ("x", &[Type::Object]),
        ("s", &[Type::Situation]),
        ("a", &[Type::Action]),
        ("m", &[Type::Object, Type::Situation]),
    ]);
    let space = typing_space();
    let (mut typed, mut disagreements) = (0, Vec::new());
    for e in &space {
        let formula = e.formula();
        let oracle = derivable(&cx, e, MAX_DEPTH);
        let checker = typecheck_formula(&sig.context, &formula);
        let agree = match &checker {
            Ok(j) => j.depth() <= MAX_DEPTH && oracle.len() == 1 && oracle.contains(&j.ty),
            Err(_) => oracle.is_empty(),
        };
        typed += usize::from(checker.is_ok());
        if !agree && disagreements.len() < 5 {
            disagreements.push(format!(
                "{}: checker {:?}, oracle {:?}",
                print_formula(&formula),
                checker.map(|j| j.ty).map_err(|e| e.code()),
                oracle
            ));
        }
    }
    ensure(disagreements.is_empty(), || disagreements.join("; "))?;
    Ok(format!(
        "{} expressions, {typed} well-typed, 0 disagreements",
        space.len()
    ))
}

fn semantics_space() -> Vec<Expr> {
    let e0 = atoms(&["x", "s", "a"]);
    let small = vec![
        var("x"),
        var("s"),
        Expr::Lit(Lit::True),
        p(var("x"), var("s")),
        p(var("s"), var("x")),
        f(var("x")),
        do_(true, var("s"), var("s")),
        poss(false, var("x"), var("a")),
    ];
    let mut out = e0.clone();
    out.extend(e0.iter().map(|e| neg(e.clone())));
    for a in &small {
        for b in &small {
            out.extend(OPS.iter().map(|op| bin(*op, a.clone(), b.clone())));
            out.push(Expr::Seq(vec![a.clone(), b.clone()]));
            out.push(Expr::Eq(Box::new(a.clone()), Box::new(b.clone())));
        }
    }
    for q in [Quantifier::Forall, Quantifier::Exists] {
        for body in [
            var("z"),
            p(var("z"), var("s")),
            f(var("z")),
            do_(false, var("z"), var("s")),
            p(var("x"), var("s")),
        ] {
            out.push(quant(q, "z", vec![Type::Object], body));
        }
    }
    out
}

fn criterion_7() -> Verdict {
    let start = Instant::now();
    let space = semantics_space();
    let nodes: Vec<Node> = space.iter().map(|e| Node::Formula(e.formula())).collect();
    let shapes = Shape::all(&["x", "s", "a"]);
    let mut worlds = 0usize;
    for shape in &shapes {
        let compiled: Vec<_> = space.iter().map(|e| compile(shape, e)).collect();
        for bits in 0..(1u32 << shape.atoms()) {
            let w = shape.world(bits);
            worlds += 1;
            for (node, c) in nodes.iter().zip(&compiled) {
                let got = sitc_core::eval::satisfies(&w, node).ok();
                let want = c.as_ref().ok().map(|p| p.eval(bits));
                ensure(got == want, || {
                    format!(
                        "{} in {w:?}: satisfies {got:?}, oracle {want:?}",
                        sitc_core::parser::print_node(node)
                    )
                })?;
            }
        }
    }
    within(Duration::from_secs(60), start, "the semantics sweep")?;
    Ok(format!(
        "{} formulas over {worlds} worlds in {:?}",
        space.len(),
        start.elapsed()
    ))
}

fn criterion_8() -> Verdict {
    let src = std::fs::read_to_string(corpus()).map_err(|e| e.to_string())?;
    let program = parse_program(&src).map_err(|e| e.to_string())?;
    let again = parse_program(&print_program(&program)).map_err(|e| e.to_string())?;
    ensure(again == program, || {
        "corpus program changed under print and parse".into()
    })?;
    for s in &program.statements {
        let back = parse_formula(&print_formula(&s.formula), &program.declarations)
            .map_err(|e| e.to_string())?;
        ensure(back == s.formula, || {
            format!("statement {} changed", s.name.name)
        })?;
    }
    let sig = Signature::pool();
    let mut g = Gen::new(ChaCha8Rng::seed_from_u64(8), &sig, 6);
    for _ in 0..1000 {
        let f = g.any_formula();
        let text = print_formula(&f);
        let back =
            parse_formula(&text, &sig.program.declarations).map_err(|e| format!("{text}: {e}"))?;
        ensure(back == f, || {
            format!("{text} reparsed as {}", print_formula(&back))
        })?;
    }
    Ok("corpus and 1000 generated formulas round-trip".into())
}

fn run(n: usize, c: impl FnOnce() -> Verdict) -> bool {
    let result = catch_unwind(AssertUnwindSafe(c)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    match result {
        Ok(detail) => {
            println!("criterion {n}: PASS ({detail})");
            true
        }
        Err(detail) => {
            println!("criterion {n}: FAIL ({detail})");
            false
        }
    }
}

fn main() {
    let sig = Signature::pool();
    let suite = generated(&sig);
    let results = [
        run(1, criterion_1),
        run(2, criterion_2),
        run(3, criterion_3),
        run(4, || criterion_4(&sig, &suite)),
        run(5, || criterion_5(&sig, &suite)),
        run(6, criterion_6),
        run(7, criterion_7),
        run(8, criterion_8),
    ];
    if results.iter().any(|ok| !ok) {
        std::process::exit(1);
    }
}
