//! Parse, type-check, evaluate and satisfy a fixed batch of generated
//! formulas over the testkit pool signature.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion, Throughput};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sitc_core::ast::{Formula, Node};
use sitc_core::eval::{satisfies, AppendHistory, Machine};
use sitc_core::parser::{parse_formula, print_formula};
use sitc_core::testkit::{Gen, Signature};
use sitc_core::typecheck::typecheck_formula;
use sitc_core::World;

const BATCH: usize = 200;

fn batch(sig: &Signature) -> Vec<Formula> {
    let mut g = Gen::new(ChaCha8Rng::seed_from_u64(11), sig, 6);
    (0..BATCH).map(|_| g.well_typed_formula().0).collect()
}

fn world() -> World {
    World::parse(
        "instances x, y; situations s, t;
         rel fragile: (x, s), (y, t); rel broken: (x, t); rel holding: (x, y, s);
         rel nextTo: (x, y, s), (y, x, t); rel at: (s, s), (t, t);
         fun drop: (x, y); fun pickup: (x); fun heavy: (y);",
    )
    .expect("bench world parses")
}

fn pipeline(c: &mut Criterion) {
    let sig = Signature::pool();
    let formulas = batch(&sig);
    let texts: Vec<String> = formulas.iter().map(print_formula).collect();
    let decls = &sig.program.declarations;
    let machine = Machine::with_context(&AppendHistory, &sig.context);
    let w = world();

    let mut group = c.benchmark_group("pipeline");
    group.throughput(Throughput::Elements(BATCH as u64));
    group.bench_function("parse", |b| {
        b.iter(|| {
            for t in &texts {
                black_box(parse_formula(t, decls).expect("generated text parses"));
            }
        })
    });
    group.bench_function("typecheck", |b| {
        b.iter(|| {
            for f in &formulas {
                black_box(typecheck_formula(&sig.context, f).is_ok());
            }
        })
    });
    group.bench_function("evaluate", |b| {
        b.iter(|| {
            for f in &formulas {
                let fuel = f.node_count() + f.count_poss() + 1;
                black_box(machine.evaluate(&Node::Formula(f.clone()), fuel));
            }
        })
    });
    group.bench_function("satisfies", |b| {
        b.iter(|| {
            for f in &formulas {
                black_box(satisfies(&w, &Node::Formula(f.clone())).ok());
            }
        })
    });
    group.finish();
}

criterion_group!(benches, pipeline);
criterion_main!(benches);
