use super::*;
use crate::automata::{replay_violates, verify, Budget, Outcome};
use crate::discretize::discretize_formula;
use crate::formula::{Dialect, Formula};
use crate::monitor::eval_all;
use crate::parse::parse_formula;
use crate::translate::Encoding;
use crate::verdict::Verdict;
use num_rational::Rational64;

const PHI_AV: &str = "G (A_EGM >= 80 -> F[0.180,0.240] (V_EGM >= 80))";
const PHI_VV: &str = "G (V_EGM >= 80 -> F[0.6,1.00] (V_EGM > 80))";
const PHI_LIVE_A: &str = "F (A_EGM > 80)";
const PHI_LIVE_V: &str = "F (V_EGM > 80)";

fn heart_phi(text: &str) -> Formula {
    let phi = parse_formula(text, Dialect::Stl).unwrap();
    discretize_formula(&phi, Rational64::new(1, 1000)).unwrap()
}

fn sstl(text: &str) -> Formula {
    parse_formula(text, Dialect::Sstl).unwrap()
}

fn check(sys: &TransitionSystem, phi: &Formula) -> Outcome {
    let report = verify(sys, phi, Encoding::Impl, Budget::default()).unwrap();
    if let Outcome::Violated(cex) = &report.outcome {
        assert!(replay_violates(&report.property, cex).unwrap());
    }
    report.outcome
}

fn parse_err(text: &str) -> ModelErrorKind {
    parse_model(text).unwrap_err().kind
}

#[test]
fn parses_a_small_model() {
    let sys = parse_model(
        "model counter; dt 0.5;\n\
         var x in [0..3] init 0;\n\
         trans inc: guard x < 3 -> { x := x + 1 };\n\
         trans wrap: guard x = 3 -> { x := 0 };",
    )
    .unwrap();
    assert_eq!(sys.name(), "counter");
    assert_eq!(sys.dt(), Rational64::new(1, 2));
    assert_eq!(sys.processes().len(), 1);
    assert_eq!(sys.check_domains(100).unwrap(), 4);
    let w = simulate(&sys, 6, 0).unwrap();
    assert_eq!(w.column("x").unwrap(), vec![0, 1, 2, 3, 0, 1]);
}

#[test]
fn model_errors_are_reported() {
    assert!(matches!(parse_err("var x in [0..1] init 2;"), ModelErrorKind::InitOutOfDomain { .. }));
    assert!(matches!(parse_err("var x in [3..1] init 2;"), ModelErrorKind::EmptyDomain { .. }));
    assert!(matches!(
        parse_err("var x in [0..1] init 0; var x in [0..1] init 0;"),
        ModelErrorKind::DuplicateVariable(_)
    ));
    assert!(matches!(
        parse_err("var x in [0..1] init 0; trans t: guard y = 0 -> { x := 1 };"),
        ModelErrorKind::UnknownVariable(_)
    ));
    assert!(matches!(parse_err("model empty;"), ModelErrorKind::NoVariables));
    assert!(matches!(parse_err("var x in [0..1] init 0 trans"), ModelErrorKind::Syntax(_)));
    assert!(matches!(
        parse_err(
            "var x in [0..1] init 0;\n\
             process a { trans t: guard true -> { x := 0 }; }\n\
             process b { trans u: guard true -> { x := 1 }; }"
        ),
        ModelErrorKind::SharedVariable { .. }
    ));
    assert!(matches!(
        parse_err("var x in [0..1] init 0; trans t: guard true -> { x := 0, x := 1 };"),
        ModelErrorKind::DoubleAssignment(_)
    ));
    let e = parse_model("var x in [0..1] init 0;\ntrans t guard").unwrap_err();
    assert_eq!(e.line, 2);
}

#[test]
fn domain_violations_surface_at_run_time() {
    let sys = parse_model("var x in [0..2] init 0; trans inc: guard true -> { x := x + 1 };").unwrap();
    assert!(matches!(
        sys.check_domains(100),
        Err(SystemError::Step(StepError::Domain { value: 3, .. }))
    ));
    assert!(simulate(&sys, 3, 1).is_ok());
    assert!(simulate(&sys, 4, 1).is_err());
}

#[test]
fn processes_step_synchronously_from_the_old_state() {
    let sys = parse_model(
        "var a in [0..1] init 0; var b in [0..1] init 1;\n\
         process p { trans t: guard true -> { a := b }; }\n\
         process q { trans t: guard true -> { b := a }; }",
    )
    .unwrap();
    let w = simulate(&sys, 3, 0).unwrap();
    assert_eq!(w.rows(), &[vec![0, 1], vec![1, 0], vec![0, 1]]);
}

#[test]
fn processes_with_nothing_enabled_idle() {
    let sys = parse_model("var x in [0..1] init 0; trans t: guard x = 0 -> { x := 1 };").unwrap();
    let s1 = sys.successors(&sys.initial_state()).unwrap();
    assert_eq!(s1, vec![vec![1].into_boxed_slice()]);
    assert_eq!(sys.successors(&s1[0]).unwrap(), s1);
}

#[test]
fn tick_limit_freezes_the_state() {
    let sys = parse_model("ticks 2; var x in [0..9] init 0; trans inc: guard true -> { x := x + 1 };").unwrap();
    assert_eq!(sys.tick_limit(), Some(2));
    let w = simulate(&sys, 5, 0).unwrap();
    assert_eq!(w.column("x").unwrap(), vec![0, 1, 2, 2, 2]);
    assert_eq!(sys.check_domains(100).unwrap(), 3);
}

#[test]
fn choices_branch_the_successors() {
    let sys = parse_model(
        "var x in [0..2] init 0;\n\
         trans t: guard x = 0 -> choose { { x := 1 } | { x := 2 } | { } };",
    )
    .unwrap();
    assert_eq!(sys.successors(&sys.initial_state()).unwrap().len(), 3);
}

#[test]
fn one_tick_is_the_initial_valuation() {
    for sys in [traffic_light(), pedestrian_crossing(), heart_abstract(HeartConfig::Healthy)] {
        let w = simulate(&sys, 1, 42).unwrap();
        assert_eq!(w.len(), 1);
        let init: Vec<i64> = sys.variables().iter().map(|v| v.init).collect();
        assert_eq!(w.row(0), init.as_slice());
    }
    assert_eq!(simulate(&traffic_light(), 0, 0), Err(SystemError::NoTicks));
}

#[test]
fn simulation_is_deterministic_per_seed() {
    let sys = pedestrian_crossing();
    let a = simulate(&sys, 200, 7).unwrap();
    let b = simulate(&sys, 200, 7).unwrap();
    assert_eq!(a, b);
    let differs = (0..20).any(|s| simulate(&sys, 200, s).unwrap() != a);
    assert!(differs);
}

#[test]
fn traffic_simulation_keeps_mutual_exclusion() {
    let mutex = sstl("G !(NS_green = 1 && EW_green = 1)");
    for seed in 0..5 {
        let w = simulate(&traffic_light(), 100, seed).unwrap();
        let ns = w.column("NS_green").unwrap();
        let ew = w.column("EW_green").unwrap();
        let oracle = ns.iter().zip(&ew).all(|(a, b)| !(*a == 1 && *b == 1));
        assert!(oracle);
        // The tail is unknown, so the monitor can only rule out violations.
        let v = eval_all(&mutex, &w).unwrap();
        assert!(v.iter().all(|v| *v != Verdict::False));
    }
}

/// Ticks of rising edges of `col` above the threshold.
fn pulses(w: &crate::DiscreteTrace, col: &str) -> Vec<usize> {
    let c = w.column(col).unwrap();
    (0..c.len()).filter(|&k| c[k] >= 80 && (k == 0 || c[k - 1] < 80)).collect()
}

#[test]
fn healthy_heart_conducts_within_the_window() {
    let w = simulate(&heart_abstract(HeartConfig::Healthy), 5000, 3).unwrap();
    let a = pulses(&w, "A_EGM");
    let v = pulses(&w, "V_EGM");
    assert!(a.len() >= 6);
    for &ta in &a {
        if ta + 240 >= w.len() {
            continue;
        }
        assert!(v.iter().any(|&tv| tv >= ta + 180 && tv <= ta + 240), "A at {ta}");
    }
    // The monitor never refutes the four heart properties on healthy runs.
    for p in [PHI_AV, PHI_VV, PHI_LIVE_A, PHI_LIVE_V] {
        let verdicts = eval_all(&heart_phi(p), &w).unwrap();
        assert!(verdicts.iter().all(|v| *v != Verdict::False), "{p}");
    }
}

#[test]
fn av_block_delays_conduction_past_the_window() {
    let w = simulate(&heart_abstract(HeartConfig::AvBlock), 3000, 5).unwrap();
    let a = pulses(&w, "A_EGM");
    let v = pulses(&w, "V_EGM");
    for (ta, tv) in a.iter().zip(&v) {
        assert!(tv - ta >= 260 && tv - ta <= 300);
    }
    let verdicts = eval_all(&heart_phi(PHI_AV), &w).unwrap();
    assert_eq!(verdicts[0], Verdict::False);
}

#[test]
fn shipped_models_stay_in_domain() {
    assert!(traffic_light().check_domains(1_000_000).unwrap() > 4);
    assert!(pedestrian_crossing().check_domains(1_000_000).unwrap() > 4);
    for c in HeartConfig::ALL {
        assert!(heart_abstract(c).check_domains(1_000_000).unwrap() >= 800);
    }
}

#[test]
fn builtin_names_resolve() {
    for name in BUILTIN_NAMES {
        let src = builtin_source(name).unwrap();
        parse_model(&src).unwrap();
    }
    assert!(builtin_source("nope").is_none());
    assert_eq!("lbb_block".parse::<HeartConfig>(), Ok(HeartConfig::LbbBlock));
}

#[test]
fn traffic_light_verdicts() {
    let sys = traffic_light();
    for p in [
        "G !(NS_green = 1 && EW_green = 1)",
        "G (NS_green = 1 -> EW_red = 1)",
        "G (EW_green = 1 -> NS_red = 1)",
        "F (NS_green = 1)",
        "G (NS_green = 1 -> F (NS_yellow = 1))",
        "G (NS_green = 1 -> F[3,5] (NS_yellow = 1))",
    ] {
        assert_eq!(check(&sys, &sstl(p)), Outcome::Satisfied, "{p}");
    }
    let Outcome::Violated(cex) = check(&sys, &sstl("G F (NS_green = 1)")) else {
        panic!("fairness should fail");
    };
    // The livelock keeps EW green forever.
    let ew = sys.variables().iter().position(|v| v.name == "EW_green").unwrap();
    assert!(cex.cycle.iter().all(|s| s.values[ew] == 1));
}

#[test]
fn pedestrian_verdicts() {
    let sys = pedestrian_crossing();
    for p in [
        "G !(cars_green = 1 && walk_signal = 1)",
        "G (waiting_peds <= 5 && waiting_peds >= 0)",
    ] {
        assert_eq!(check(&sys, &sstl(p)), Outcome::Satisfied, "{p}");
    }
    for p in [
        "G (waiting_peds >= 2 -> F (walk_signal = 1))",
        "G ((cars_green = 1 && waiting_peds >= 2) -> F[2,5] (walk_signal = 1))",
    ] {
        assert!(matches!(check(&sys, &sstl(p)), Outcome::Violated(_)), "{p}");
    }
}

#[test]
fn heart_verdicts() {
    for c in HeartConfig::ALL {
        let sys = heart_abstract(c);
        let av = check(&sys, &heart_phi(PHI_AV));
        if c == HeartConfig::Healthy {
            assert_eq!(av, Outcome::Satisfied);
        } else {
            assert!(matches!(av, Outcome::Violated(_)), "{c}");
        }
        for p in [PHI_VV, PHI_LIVE_A, PHI_LIVE_V] {
            assert_eq!(check(&sys, &heart_phi(p)), Outcome::Satisfied, "{c}: {p}");
        }
    }
}
