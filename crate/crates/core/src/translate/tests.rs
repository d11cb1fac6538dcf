use super::*;
use crate::formula::GuardAtom;
use crate::monitor::eval_all;
use crate::parse::parse_formula;
use crate::time::Real;
use crate::trace::DiscreteTrace;
use crate::verdict::Verdict;
use proptest::prelude::*;

use Verdict::{False as F, True as T};

fn sstl(s: &str) -> Formula {
    parse_formula(s, Dialect::Sstl).unwrap()
}

fn ltlp(s: &str) -> Formula {
    parse_formula(s, Dialect::Ltlp).unwrap()
}

fn example_trace() -> DiscreteTrace {
    let x1 = [1000, 1000, 1000, 500, 800, 200, 1000, 500, 200, -1000, -700];
    let x2 = [-1000, -1000, -800, -600, -500, -100, -150, 600, 1000, 1000, 800];
    DiscreteTrace::new(
        Real::new(1, 1000),
        vec!["x1".into(), "x2".into()],
        x1.iter().zip(x2).map(|(a, b)| vec![*a, b]).collect(),
        1000,
    )
    .unwrap()
}

fn ltlp_all(psi: &Formula, w: &DiscreteTrace) -> Vec<Verdict> {
    let mut ev = LtlpEvaluator::new(psi, w).unwrap();
    (0..w.len() as u64).map(|j| ev.eval(j, &Env::new()).unwrap()).collect()
}

#[test]
fn unbounded_until_is_unchanged() {
    let phi = sstl("(x1 >= 0) U (x2 >= 0)");
    assert_eq!(translate(&phi).unwrap(), phi);
    assert_eq!(translate_impl(&phi).unwrap(), phi);
}

#[test]
fn bounded_until_gets_a_within_guard() {
    let phi = sstl("(x1 >= 0) U[5,10] (x2 >= 0)");
    assert_eq!(
        translate(&phi).unwrap(),
        ltlp("(x1 >= 0) U@1 ((x2 >= 0) && within[5,10]@1)")
    );
}

#[test]
fn bounded_until_impl_encoding() {
    let phi = sstl("(x1 >= 0) U[5,10] (x2 >= 0)");
    assert_eq!(
        translate_impl(&phi).unwrap(),
        ltlp("((x1 >= 0) && j<=j0@1+10) U@1 (((x2 >= 0) && j>=j0@1+5) && j<=j0@1+10)")
    );
}

#[test]
fn impl_eventually_is_true_until() {
    let f = translate_impl(&sstl("F[2,4] (x1 > 0)")).unwrap();
    let u = translate_impl(&sstl("true U[2,4] (x1 > 0)")).unwrap();
    assert_eq!(f, u);
}

#[test]
fn true_and_untimed_operators_are_fixed_points() {
    assert_eq!(translate(&Formula::True).unwrap(), Formula::True);
    for s in ["G (x1 > 0)", "F (x1 > 0) && G[0,inf] (x2 < 1)", "!(x1 > 0) -> (x2 > 0)"] {
        let phi = sstl(s);
        let expected = sstl(&s.replace("[0,inf]", ""));
        assert_eq!(translate(&phi).unwrap(), expected);
        assert_eq!(translate_impl(&phi).unwrap(), expected);
    }
}

#[test]
fn nested_always_over_until() {
    let phi = sstl("G[0,20] ((x1 >= 0) U (x2 >= 0))");
    assert_eq!(
        translate(&phi).unwrap(),
        ltlp("G@1 (within[0,20]@1 -> ((x1 >= 0) U (x2 >= 0)))")
    );
}

#[test]
fn nested_bounded_operators_get_fresh_obligations() {
    let phi = sstl("G[0,20] (x1 > 0 -> F[3,5] (x2 > 0))");
    let psi = translate(&phi).unwrap();
    assert_eq!(psi, ltlp("G@1 (within[0,20]@1 -> ((x1 > 0) -> F@2 ((x2 > 0) && within[3,5]@2)))"));
    let reg = ObligationRegistry::from_formula(&psi);
    assert_eq!(reg.windows().len(), 2);
    assert_eq!(reg.bound(), 21 + 3);
}

#[test]
fn dialect_errors() {
    let stl = parse_formula("F[0.5,1] (x > 0)", Dialect::Stl).unwrap();
    assert!(translate(&stl).is_err());
    assert!(translate_impl(&stl).is_err());
}

#[test]
fn within_row_of_the_worked_example() {
    let w = example_trace();
    let guard = Formula::Guard(GuardAtom {
        kind: GuardKind::Within { lo: 5, hi: 10 },
        obligation: ObligationId(1),
    });
    let env = Env::from([(ObligationId(1), 0)]);
    let row: Vec<Verdict> = (0..11).map(|j| eval_ltlp(&guard, &w, j, &env).unwrap()).collect();
    let expected: Vec<Verdict> = (0..11).map(|j| Verdict::from_bool((5..=10).contains(&j))).collect();
    assert_eq!(row, expected);
}

#[test]
fn translated_bounded_until_on_the_worked_example() {
    let w = example_trace();
    let phi = sstl("(x1 >= 0) U[5,10] (x2 >= 0)");
    let expected = vec![T, T, T, T, T, F, F, F, F, F, F];
    assert_eq!(ltlp_all(&translate(&phi).unwrap(), &w), expected);
    assert_eq!(ltlp_all(&translate_impl(&phi).unwrap(), &w), expected);
    assert_eq!(eval_all(&phi, &w).unwrap(), expected);
}

#[test]
fn translated_true_holds_everywhere() {
    let w = example_trace();
    assert_eq!(ltlp_all(&Formula::True, &w), vec![T; 11]);
}

#[test]
fn unbound_guard_is_an_error() {
    let w = example_trace();
    let psi = ltlp("within[0,3]@7");
    assert_eq!(
        eval_ltlp(&psi, &w, 0, &Env::new()),
        Err(LtlpError::UnboundObligation(ObligationId(7)))
    );
}

#[test]
fn next_reads_the_following_position() {
    let w = example_trace();
    let psi = ltlp("X (x2 >= 0)");
    assert_eq!(eval_ltlp(&psi, &w, 6, &Env::new()).unwrap(), T);
    assert_eq!(eval_ltlp(&psi, &w, 5, &Env::new()).unwrap(), F);
    assert_eq!(eval_ltlp(&psi, &w, 10, &Env::new()).unwrap(), Verdict::Inconclusive);
}

#[test]
fn lasso_words_are_periodic() {
    let lasso = Lasso::new(vec!["p".into()], 1, vec![vec![0]], vec![vec![1], vec![0]]).unwrap();
    assert_eq!(lasso.at(0), &[0]);
    assert_eq!(lasso.at(1), &[1]);
    assert_eq!(lasso.at(4), &[0]);
    assert_eq!(lasso.at(5), &[1]);
    let gf = ltlp("G F (p > 0)");
    let fg = ltlp("F G (p > 0)");
    assert_eq!(eval_ltlp(&gf, &lasso, 0, &Env::new()).unwrap(), T);
    assert_eq!(eval_ltlp(&fg, &lasso, 0, &Env::new()).unwrap(), F);
    let bounded = translate(&sstl("G F[0,1] (p > 0)")).unwrap();
    assert_eq!(eval_ltlp(&bounded, &lasso, 0, &Env::new()).unwrap(), T);
    let tight = translate(&sstl("G F[0,0] (p > 0)")).unwrap();
    assert_eq!(eval_ltlp(&tight, &lasso, 0, &Env::new()).unwrap(), F);
    assert!(Lasso::new(vec!["p".into()], 1, vec![], vec![]).is_err());
}

#[test]
fn live_obligations_on_a_response_pattern() {
    let w = example_trace();
    let psi = translate(&sstl("G (x1 > 0 -> F[1,3] (x2 > 900))")).unwrap();
    let bound = ObligationRegistry::from_formula(&psi).bound();
    assert_eq!(bound, 3);
    for j in 0..11 {
        let live = live_obligation_count(&psi, &w, j).unwrap();
        assert!(live as u64 <= bound, "j={j} live={live}");
    }
    // Entered at 0..=8, every one of them is open at 4 only for j₀ ∈ {1,2,3}.
    assert_eq!(live_obligation_count(&psi, &w, 4).unwrap(), 3);
}

fn arb_trace() -> impl Strategy<Value = DiscreteTrace> {
    (1usize..=30).prop_flat_map(|len| {
        proptest::collection::vec((-2i64..=2, -2i64..=2), len).prop_map(|rows| {
            DiscreteTrace::new(
                Real::from_integer(1),
                vec!["p".into(), "q".into()],
                rows.into_iter().map(|(a, b)| vec![a, b]).collect(),
                1,
            )
            .unwrap()
        })
    })
}

fn arb_window() -> impl Strategy<Value = String> {
    prop_oneof![
        Just(String::new()),
        (0u64..=8, 0u64..=8).prop_map(|(a, b)| format!("[{},{}]", a.min(b), a.max(b))),
        (0u64..=8).prop_map(|a| format!("[{a},inf]")),
    ]
}

fn arb_formula() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("p > 0".to_string()),
        Just("q >= 0".to_string()),
        Just("p - q <= 1".to_string()),
        Just("true".to_string()),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| format!("!({a})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) && ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) || ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) -> ({b})")),
            (inner.clone(), arb_window(), inner.clone())
                .prop_map(|(a, w, b)| format!("({a}) U{w} ({b})")),
            (arb_window(), inner.clone()).prop_map(|(w, a)| format!("F{w} ({a})")),
            (arb_window(), inner).prop_map(|(w, a)| format!("G{w} ({a})")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// Both encodings agree with the monitor at every tick, including
    /// inconclusive ones.
    #[test]
    fn translation_preserves_verdicts(text in arb_formula(), w in arb_trace()) {
        let phi = sstl(&text);
        let direct = eval_all(&phi, &w).unwrap();
        prop_assert_eq!(&ltlp_all(&translate(&phi).unwrap(), &w), &direct);
        prop_assert_eq!(&ltlp_all(&translate_impl(&phi).unwrap(), &w), &direct);
    }

    #[test]
    fn translation_is_size_linear(text in arb_formula()) {
        let phi = sstl(&text);
        for psi in [translate(&phi).unwrap(), translate_impl(&phi).unwrap()] {
            prop_assert!(psi.node_count() <= 7 * phi.node_count());
        }
    }

    #[test]
    fn live_obligations_stay_within_bound(text in arb_formula(), w in arb_trace()) {
        let phi = sstl(&text);
        for psi in [translate(&phi).unwrap(), translate_impl(&phi).unwrap()] {
            let mut ev = LtlpEvaluator::new(&psi, &w).unwrap();
            for j in 0..w.len() as u64 {
                ev.eval(j, &Env::new()).unwrap();
            }
            let bound = ev.registry().bound();
            for j in 0..w.len() as u64 + 10 {
                prop_assert!(ev.live_obligations(j) as u64 <= bound);
            }
        }
    }

    #[test]
    fn print_parse_round_trip(text in arb_formula()) {
        let psi = translate_impl(&sstl(&text)).unwrap();
        prop_assert_eq!(ltlp(&psi.to_string()), psi);
    }
}
