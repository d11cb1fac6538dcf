use super::*;
use crate::formula::Dialect;
use crate::parse::parse_formula;
use crate::translate::{translate, translate_impl, Lasso};
use proptest::prelude::*;

fn ltlp(s: &str) -> Formula {
    parse_formula(s, Dialect::Ltlp).unwrap()
}

/// Every lasso over boolean signals `p`, `q` with `prefix + cycle ≤ max`.
fn all_lassos(max: usize) -> Vec<Lasso> {
    let letters = [[0, 0], [0, 1], [1, 0], [1, 1]];
    let mut out = Vec::new();
    for total in 1..=max {
        let words = 4usize.pow(total as u32);
        for w in 0..words {
            let mut rows = Vec::with_capacity(total);
            let mut x = w;
            for _ in 0..total {
                rows.push(letters[x % 4].to_vec());
                x /= 4;
            }
            for cycle_len in 1..=total {
                let split = total - cycle_len;
                out.push(
                    Lasso::new(
                        vec!["p".into(), "q".into()],
                        1,
                        rows[..split].to_vec(),
                        rows[split..].to_vec(),
                    )
                    .unwrap(),
                );
            }
        }
    }
    out
}

fn semantic(psi: &Formula, lasso: &Lasso) -> bool {
    eval_ltlp(psi, lasso, 0, &Env::new()).unwrap().as_bool().expect("lassos are complete words")
}

fn agrees_on_all_lassos(psi: &Formula, lassos: &[Lasso]) -> Result<(), String> {
    let aut = ltl_to_buchi(psi).map_err(|e| e.to_string())?;
    for l in lassos {
        let a = accepts(&aut, l).unwrap();
        let s = semantic(psi, l);
        if a != s {
            return Err(format!(
                "{psi}: automaton {a}, semantics {s} on prefix {:?} cycle {:?}",
                l.prefix(),
                l.cycle()
            ));
        }
    }
    Ok(())
}

#[test]
fn true_is_one_accepting_self_loop() {
    let aut = ltl_to_buchi(&Formula::True).unwrap();
    assert_eq!(aut.state_count(), 1);
    assert!(aut.is_accepting(0));
    assert_eq!(
        aut.states()[0].transitions,
        vec![BuchiTransition { label: vec![], target: 0 }]
    );
}

#[test]
fn eventually_has_two_states() {
    let aut = ltl_to_buchi(&ltlp("F (p > 0)")).unwrap();
    assert_eq!(aut.state_count(), 2);
    agrees_on_all_lassos(&ltlp("F (p > 0)"), &all_lassos(4)).unwrap();
}

#[test]
fn fairness_shape_rejects_eventual_silence() {
    let psi = ltlp("G F (p > 0)");
    let aut = ltl_to_buchi(&psi).unwrap();
    let silent = Lasso::new(vec!["p".into(), "q".into()], 1, vec![vec![1, 0]], vec![vec![0, 0]]).unwrap();
    let pulsing = Lasso::new(vec!["p".into(), "q".into()], 1, vec![], vec![vec![0, 0], vec![1, 0]]).unwrap();
    assert!(!accepts(&aut, &silent).unwrap());
    assert!(accepts(&aut, &pulsing).unwrap());
    agrees_on_all_lassos(&psi, &all_lassos(4)).unwrap();
}

#[test]
fn false_has_no_accepting_run() {
    let aut = ltl_to_buchi(&Formula::falsity()).unwrap();
    for l in all_lassos(2) {
        assert!(!accepts(&aut, &l).unwrap());
    }
}

#[test]
fn unbound_guard_is_rejected() {
    assert_eq!(
        ltl_to_buchi(&ltlp("F within[0,2]@3")),
        Err(AutomataError::UnboundObligation(ObligationId(3)))
    );
}

#[test]
fn classic_shapes_match_semantics() {
    let lassos = all_lassos(4);
    for s in [
        "(p > 0) U (q > 0)",
        "G (p > 0 -> F (q > 0))",
        "F G (p > 0)",
        "X (p > 0) && X X !(q > 0)",
        "!((p > 0) U !(q > 0))",
        "G (p > 0) || F (q > 0)",
        "(p > 0) U X (q > 0)",
    ] {
        agrees_on_all_lassos(&ltlp(s), &lassos).unwrap();
    }
}

#[test]
fn bounded_obligations_match_semantics() {
    let lassos = all_lassos(4);
    for s in [
        "G (p > 0 -> F[1,2] (q > 0))",
        "G F[0,1] (p > 0)",
        "(p > 0) U[1,3] (q > 0)",
        "F[2,inf] (p > 0)",
        "G[1,2] (p > 0) || F (q > 0)",
        "!G ((p > 0) U[0,2] (q > 0))",
        "G (p > 0 -> (q > 0) U[2,inf] (p > 0))",
    ] {
        let phi = parse_formula(s, Dialect::Sstl).unwrap();
        agrees_on_all_lassos(&translate(&phi).unwrap(), &lassos).unwrap();
        agrees_on_all_lassos(&translate_impl(&phi).unwrap(), &lassos).unwrap();
    }
}

/// Small explicit system: states are indices, valuations are `[p, q]`.
struct Graph {
    signals: Vec<String>,
    vals: Vec<Vec<i64>>,
    succ: Vec<Vec<usize>>,
}

impl StateSpace for Graph {
    type State = usize;

    fn signals(&self) -> &[String] {
        &self.signals
    }

    fn value_factor(&self) -> i64 {
        1
    }

    fn initial_states(&self) -> Vec<usize> {
        vec![0]
    }

    fn valuation<'a>(&'a self, s: &'a usize) -> &'a [i64] {
        &self.vals[*s]
    }

    fn successors(&self, s: &usize) -> Result<Vec<usize>, String> {
        Ok(self.succ[*s].clone())
    }
}

fn graph() -> Graph {
    // 0 -> 1 -> 2 -> 0, and 1 -> 3 -> 3: q never holds on the 3-loop.
    Graph {
        signals: vec!["p".into(), "q".into()],
        vals: vec![vec![1, 0], vec![0, 0], vec![0, 1], vec![1, 0]],
        succ: vec![vec![1], vec![2, 3], vec![0], vec![3]],
    }
}

#[test]
fn verify_finds_lasso_counterexamples() {
    let g = graph();
    let phi = parse_formula("G F (q > 0)", Dialect::Sstl).unwrap();
    let report = verify(&g, &phi, Encoding::Impl, Budget::default()).unwrap();
    let Outcome::Violated(cex) = &report.outcome else {
        panic!("expected a violation, got {:?}", report.outcome);
    };
    assert!(replay_violates(&report.property, cex).unwrap());
    assert!(cex.cycle.iter().all(|s| s.values == vec![1, 0]));
    assert!(cex.to_string().contains("cycle"));

    let ok = parse_formula("G (q > 0 -> F[1,1] (p > 0))", Dialect::Sstl).unwrap();
    for enc in [Encoding::Impl, Encoding::Conceptual] {
        let r = verify(&g, &ok, enc, Budget::default()).unwrap();
        assert_eq!(r.outcome, Outcome::Satisfied);
    }
    assert_eq!(
        verify(&g, &Formula::True, Encoding::Impl, Budget::default()).unwrap().outcome,
        Outcome::Satisfied
    );
}

#[test]
fn counterexamples_are_reproducible() {
    let g = graph();
    let phi = parse_formula("G (p > 0 -> F[1,2] (q > 0))", Dialect::Sstl).unwrap();
    let a = verify(&g, &phi, Encoding::Impl, Budget::default()).unwrap();
    let b = verify(&g, &phi, Encoding::Impl, Budget::default()).unwrap();
    assert_eq!(a, b);
    let Outcome::Violated(cex) = &a.outcome else { panic!() };
    assert!(replay_violates(&a.property, cex).unwrap());
}

#[test]
fn budgets_are_reported() {
    let g = graph();
    let phi = parse_formula("G F (q > 0)", Dialect::Sstl).unwrap();
    let tiny = Budget { max_states: 2, max_depth: 100 };
    let r = verify(&g, &phi, Encoding::Impl, tiny).unwrap();
    assert_eq!(r.outcome, Outcome::ResourceLimit(Limit::States));
    let shallow = Budget { max_states: 100, max_depth: 1 };
    let r = verify(&g, &phi, Encoding::Impl, shallow).unwrap();
    assert_eq!(r.outcome, Outcome::ResourceLimit(Limit::Depth));
}

#[test]
fn unknown_signal_is_a_configuration_error() {
    let g = graph();
    let phi = parse_formula("G (zz > 0)", Dialect::Sstl).unwrap();
    assert!(matches!(
        verify(&g, &phi, Encoding::Impl, Budget::default()),
        Err(AutomataError::Predicate(_))
    ));
}

fn arb_ltlp() -> impl Strategy<Value = String> {
    // At most two temporal operators over the atoms p and q.
    let atom = prop_oneof![Just("p > 0"), Just("q > 0")].prop_map(String::from);
    let boolean = (atom.clone(), atom.clone(), 0u8..4).prop_map(|(a, b, op)| match op {
        0 => a,
        1 => format!("!({a})"),
        2 => format!("({a}) && ({b})"),
        _ => format!("({a}) || ({b})"),
    });
    let unary = ["X", "F", "G"];
    let one = (boolean.clone(), boolean.clone(), 0usize..4).prop_map(move |(a, b, op)| {
        if op < 3 {
            format!("{} ({a})", unary[op])
        } else {
            format!("({a}) U ({b})")
        }
    });
    let two = (one.clone(), boolean.clone(), 0usize..4, prop::bool::ANY).prop_map(move |(inner, b, op, left)| {
        if op < 3 {
            format!("{} ({inner})", unary[op])
        } else if left {
            format!("({inner}) U ({b})")
        } else {
            format!("({b}) U ({inner})")
        }
    });
    let combined = (one.clone(), one.clone(), prop::bool::ANY)
        .prop_map(|(a, b, and)| format!("({a}) {} ({b})", if and { "&&" } else { "||" }));
    prop_oneof![boolean, one, two, combined].prop_map(|s| s)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn automaton_matches_semantics_on_small_lassos(text in arb_ltlp(), negated in prop::bool::ANY) {
        let psi = ltlp(&text);
        let psi = if negated { negate(&psi) } else { psi };
        let lassos = all_lassos(4);
        if let Err(msg) = agrees_on_all_lassos(&psi, &lassos) {
            prop_assert!(false, "{}", msg);
        }
    }
}
