use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;
use crate::classify::classify;
use crate::convex::{skolemize, SkolemCase};
use crate::fixtures;
use crate::gen::random_pl_unary;
use crate::pl::Piece;
use crate::testutil::{p, rng};

fn affine(slope: Rational, c: Rational) -> PlUnary {
    PlUnary::affine(slope, Term::constant(c))
}

fn valuational() -> Vec<ModelDescriptor> {
    fixtures::all()
        .into_iter()
        .map(|(_, m)| m)
        .filter(|m| classify(m).cut_kind == CutKind::IrrationalValuational)
        .collect()
}

fn nonvaluational() -> Vec<ModelDescriptor> {
    vec![fixtures::q1_pi(), fixtures::q3_11pi()]
}

#[test]
fn verify_skolem_examples() {
    let m = fixtures::lex2_sub1();
    let phi = p("x < y & U(y)");
    let sk = skolemize(&phi, "y", &m).unwrap();
    let report = verify_skolem(&m, &phi, &sk, 500, 1).unwrap();
    assert!(report.passed, "{report:?}");
    assert!(report.solvable > 0);

    let lazy = SkolemDefinition {
        target: "y".into(),
        cases: vec![SkolemCase { guard: Formula::True, witness: Term::var("x") }],
    };
    let report = verify_skolem(&m, &p("x < y"), &lazy, 50, 2).unwrap();
    assert!(!report.passed);
    assert!(matches!(
        report.counterexample,
        Some(SkolemCounterexample { failure: SkolemFailure::WitnessFails { case: 0, .. }, .. })
    ));

    let empty = SkolemDefinition { target: "y".into(), cases: Vec::new() };
    let report = verify_skolem(&m, &p("x < y & y < x"), &empty, 50, 3).unwrap();
    assert!(report.passed);
    assert_eq!(report.solvable, 0);
    let report = verify_skolem(&m, &p("x < y"), &empty, 50, 3).unwrap();
    assert_eq!(report.counterexample.unwrap().failure, SkolemFailure::NoGuardFired);
}

#[test]
fn obstruction_examples() {
    let m = fixtures::q1_pi();
    let cases = [
        (affine(ratio(1, 2), ratio(3, 2)), Obstruction::NotIncreasing),
        (affine(int(1), int(1)), Obstruction::EscapesU),
        (affine(ratio(1, 2), int(2)), Obstruction::EscapesU),
        (PlUnary::identity(), Obstruction::NotIncreasing),
    ];
    for (f, kind) in cases {
        let w = obstruction_find(&m, &f).unwrap();
        assert_eq!(w.violation, kind, "{f}");
        assert!(w.verify(&m, &f).unwrap(), "{f}");
        assert_eq!(w.certificate[0].order, ThresholdOrder::Below);
        if kind == Obstruction::EscapesU {
            assert_ne!(w.certificate[1].order, ThresholdOrder::Below);
            let iv = w.certificate[1].interval.as_ref().expect("decided by the oracle");
            assert!(iv.lo < iv.hi && iv.hi <= w.image.0[0]);
        }
    }
    assert!(matches!(
        obstruction_find(&fixtures::lex2_1inf(), &affine(int(1), int(1))),
        Err(LabError::PreconditionViolated(_))
    ));
}

#[test]
fn a_wrong_witness_does_not_verify() {
    let m = fixtures::q1_pi();
    let f = affine(int(1), int(1));
    let mut w = obstruction_find(&m, &f).unwrap();
    w.point = Point(vec![int(1)]);
    assert!(!w.verify(&m, &f).unwrap());
}

#[test]
fn choice_examples() {
    let m = fixtures::lex2_sub1();
    let id = PlUnary::identity();
    let v = choice_violation(&m, &ChoiceCandidate::Pl(&id)).unwrap();
    let zero = Point::zero(2);
    let expected =
        ChoiceViolation::SplitFiber { a: zero.clone(), b: Point::unit(2, 1), fa: zero, fb: Point::unit(2, 1) };
    assert_eq!(v, expected);
    assert!(v.verify(&m, &ChoiceCandidate::Pl(&id)).unwrap());

    let constant = PlUnary::new(Vec::new(), vec![Piece::new(int(0), Term::zero())]).unwrap();
    let v = choice_violation(&m, &ChoiceCandidate::Pl(&constant)).unwrap();
    assert!(matches!(v, ChoiceViolation::NoValidOutput { .. }));
    assert!(v.verify(&m, &ChoiceCandidate::Pl(&constant)).unwrap());

    assert!(matches!(
        choice_violation(&fixtures::q1_pi(), &ChoiceCandidate::Pl(&id)),
        Err(LabError::PreconditionViolated(_))
    ));
}

#[test]
fn synthesized_fiber_functions_fail_choice() {
    let phi = p("I(x - y)");
    for m in valuational() {
        let sk = skolemize(&phi, "y", &m).unwrap();
        assert!(verify_skolem(&m, &phi, &sk, 100, 4).unwrap().passed);
        let f = ChoiceCandidate::Skolem { definition: &sk, param: "x" };
        let v = choice_violation(&m, &f).unwrap();
        assert!(v.verify(&m, &f).unwrap(), "{v:?}");
    }
}

proptest! {
    #![proptest_config(crate::testutil::config(32))]

    #[test]
    fn obstructions_verify(seed in any::<u64>(), which in 0usize..2) {
        let m = nonvaluational().swap_remove(which);
        let slopes = [int(0), int(1), int(-1), int(2), ratio(1, 2), ratio(-1, 3)];
        let f = random_pl_unary(&mut rng(seed), 4, &slopes);
        let w = obstruction_find(&m, &f).unwrap();
        prop_assert!(w.verify(&m, &f).unwrap(), "{}: {:?}", f, w);
    }

    #[test]
    fn choice_violations_verify(seed in any::<u64>(), which in 0usize..6) {
        let m = valuational().swap_remove(which);
        let slopes = [int(0), int(1), int(-1), int(2), ratio(1, 2)];
        let f = random_pl_unary(&mut rng(seed), 3, &slopes);
        let candidate = ChoiceCandidate::Pl(&f);
        let v = choice_violation(&m, &candidate).unwrap();
        prop_assert!(v.verify(&m, &candidate).unwrap(), "{}: {:?}", f, v);
    }
}
