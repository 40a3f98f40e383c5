//! Print/parse round trip over randomly generated terms, parser as oracle.

use proptest::prelude::*;
use qpalg::syntax::ast::*;
use qpalg::syntax::{parse_process, print_process};

fn ident() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("x".to_string()),
        Just("y".to_string()),
        Just("k".to_string()),
        Just("q0".to_string()),
        Just("psi".to_string()),
    ]
}

fn gate() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("g".to_string()),
        Just("h".to_string()),
        Just("c1".to_string()),
    ]
}

fn expr(depth: u32) -> BoxedStrategy<Expression> {
    let leaf = prop_oneof![
        (0i64..100).prop_map(Expression::NatLit),
        ident().prop_map(Expression::Var),
        ident().prop_map(|x| Expression::Apply("H".to_string(), vec![x])),
        (ident(), ident()).prop_filter("distinct", |(a, b)| a != b).prop_map(|(a, b)| {
            Expression::Apply("CNot".to_string(), vec![a, b])
        }),
    ];
    leaf.prop_recursive(depth, 16, 2, |inner| {
        prop_oneof![
            (
                prop_oneof![
                    Just(ArithOp::Add),
                    Just(ArithOp::Sub),
                    Just(ArithOp::Mul),
                    Just(ArithOp::Div)
                ],
                inner.clone(),
                inner.clone()
            )
                .prop_map(|(op, a, b)| Expression::Arith(op, Box::new(a), Box::new(b))),
            inner.prop_map(|a| Expression::Neg(Box::new(a))),
        ]
    })
    .boxed()
}

fn condition() -> BoxedStrategy<Condition> {
    let cmp = (
        prop_oneof![Just(CmpOp::Eq), Just(CmpOp::Lt)],
        expr(1),
        expr(1),
    )
        .prop_map(|(op, a, b)| Condition::Cmp(op, a, b));
    cmp.prop_recursive(2, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Condition::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Condition::Or(Box::new(a), Box::new(b))),
            inner.prop_map(|a| Condition::Not(Box::new(a))),
        ]
    })
    .boxed()
}

fn action() -> BoxedStrategy<Action> {
    prop_oneof![
        (gate(), expr(2)).prop_map(|(g, e)| Action::Send(g, e)),
        (gate(), ident()).prop_map(|(g, x)| Action::Receive(g, x)),
        expr(2).prop_map(Action::Expr),
    ]
    .boxed()
}

/// Dyadic chain probabilities in (0,1); the flattened weights are their
/// left-associative products, mirroring what parsing a chain produces.
fn chain_probs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((1u32..16).prop_map(|k| k as f64 / 16.0), 1..3)
}

fn process(depth: u32) -> BoxedStrategy<Process> {
    let leaf = prop_oneof![
        Just(Process::Nil),
        Just(Process::End),
        ident().prop_map(|n| Process::Call(format!("P{n}"), vec![])),
        (ident(), ident()).prop_map(|(n, a)| Process::Call(format!("P{n}"), vec![a])),
    ];
    leaf.prop_recursive(depth, 64, 3, |inner| {
        prop_oneof![
            (action(), inner.clone()).prop_map(|(a, p)| Process::prefix(a, p)),
            (
                prop::collection::vec((ident(), prop_oneof![Just(VarType::Nat), Just(VarType::Qubit)]), 1..3)
                    .prop_filter("distinct names", |ds| {
                        ds.iter().map(|(n, _)| n).collect::<std::collections::BTreeSet<_>>().len()
                            == ds.len()
                    }),
                inner.clone()
            )
                .prop_map(|(ds, p)| Process::VarDecl(ds, Box::new(p))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Process::Parallel(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Process::NondetChoice(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Process::Seq(Box::new(a), Box::new(b))),
            (chain_probs(), prop::collection::vec(inner.clone(), 2..4)).prop_map(|(ps, mut procs)| {
                // build the flat distribution exactly as chain parsing does
                let n = procs.len().min(ps.len() + 1);
                procs.truncate(n);
                let mut weighted: Vec<(f64, Process)> = vec![(1.0, procs.remove(0))];
                for (p, proc_) in ps.iter().take(n - 1).zip(procs.into_iter()) {
                    for w in weighted.iter_mut() {
                        w.0 *= p;
                    }
                    weighted.push((1.0 - p, proc_));
                }
                if weighted.len() == 1 {
                    weighted.remove(0).1
                } else {
                    Process::ProbChoice(weighted)
                }
            }),
            (prop::collection::vec((condition(), inner.clone()), 1..3))
                .prop_map(Process::CondChoice),
            (inner.clone(), prop::collection::vec(gate(), 1..3)).prop_map(|(p, mut gs)| {
                gs.dedup();
                Process::Restrict(Box::new(p), gs)
            }),
        ]
    })
    .boxed()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn print_then_parse_is_identity(p in process(8)) {
        let text = print_process(&p);
        let reparsed = parse_process(&text)
            .unwrap_or_else(|e| panic!("failed to reparse `{text}`: {e}"));
        prop_assert!(
            reparsed.structural_eq(&p, 1e-12),
            "round trip changed the term:\n  printed: {text}\n  original: {p:?}\n  reparsed: {reparsed:?}"
        );
    }

    #[test]
    fn probabilities_sum_to_one_after_parsing(p in process(8)) {
        fn check(p: &Process) {
            if let Process::ProbChoice(ws) = p {
                let sum: f64 = ws.iter().map(|(w, _)| w).sum();
                assert!((sum - 1.0).abs() <= 1e-12, "sum {sum}");
            }
            match p {
                Process::Prefix(_, c) => check(c),
                Process::VarDecl(_, b) | Process::Restrict(b, _) => check(b),
                Process::Parallel(a, b)
                | Process::NondetChoice(a, b)
                | Process::Seq(a, b) => {
                    check(a);
                    check(b);
                }
                Process::ProbChoice(bs) => bs.iter().for_each(|(_, q)| check(q)),
                Process::CondChoice(bs) => bs.iter().for_each(|(_, q)| check(q)),
                _ => {}
            }
        }
        let text = print_process(&p);
        if let Ok(reparsed) = parse_process(&text) {
            check(&reparsed);
        }
    }
}
