//! Worked examples checked through the public API, with the truth oracle as
//! the reference wherever a value is computed rather than given.

use convexqe_core::classify::{classify, stabilizer, CutKind};
use convexqe_core::convex::{check_resistance, qe_model, skolemize, Resistance};
use convexqe_core::fixtures;
use convexqe_core::lab::{obstruction_find, verify_skolem, Obstruction};
use convexqe_core::model::sample::PointSampler;
use convexqe_core::model::{
    eval_formula, oracle_truth, Assignment, ModelDescriptor, Point, ThresholdOrder, TruthOracle, DEFAULT_BUDGET_BITS,
};
use convexqe_core::pl::PlUnary;
use convexqe_core::qe::qe;
use convexqe_core::rational::{int, ratio};
use convexqe_core::syntax::{parse_formula, Formula, Term};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn p(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

fn pt(xs: &[i64]) -> Point {
    Point(xs.iter().map(|&x| int(x)).collect())
}

fn at(pairs: &[(&str, Point)]) -> Assignment {
    pairs.iter().map(|(v, x)| (v.to_string(), x.clone())).collect()
}

/// `candidate` agrees with the oracle's reading of `original` on samples.
fn agrees(m: &ModelDescriptor, original: &Formula, candidate: &Formula, samples: usize) {
    assert!(candidate.is_quantifier_free(), "{candidate}");
    let oracle = TruthOracle::compile(m, original).unwrap();
    let vars: Vec<String> = original.free_vars().union(&candidate.free_vars()).cloned().collect();
    let sampler = PointSampler::new(m);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..samples {
        let asgn = sampler.assignment(&mut rng, &vars);
        let want = oracle.eval(&asgn).unwrap();
        assert_eq!(eval_formula(m, candidate, &asgn, DEFAULT_BUDGET_BITS).unwrap(), want, "{original} vs {candidate}");
    }
}

#[test]
fn threshold_comparisons() {
    assert_eq!(fixtures::q1_pi().compare_to_threshold(&pt(&[3])).unwrap(), ThresholdOrder::Below);
    assert_eq!(fixtures::q3_11pi().compare_to_threshold(&pt(&[1, 1, 4])).unwrap(), ThresholdOrder::Above);
    assert_eq!(fixtures::lex2_1inf().compare_to_threshold(&pt(&[1, 1_000_000])).unwrap(), ThresholdOrder::Below);
}

#[test]
fn oracle_examples() {
    let m = fixtures::lex2_sub1();
    let f = p("E y. (x < y & U(y))");
    assert!(!oracle_truth(&m, &f, &at(&[("x", pt(&[1, 0]))])).unwrap());
    assert!(oracle_truth(&m, &f, &at(&[("x", pt(&[0, 7]))])).unwrap());
    assert!(oracle_truth(&m, &p("U(x) & ~U(y)"), &at(&[("x", pt(&[0, 5])), ("y", pt(&[1, 0]))])).unwrap());
}

#[test]
fn pure_group_elimination() {
    let m = fixtures::lex2_11();
    let f = p("E v. (a < v & v < b & v != c)");
    let out = qe(&f).unwrap();
    agrees(&m, &f, &out, 300);
    agrees(&m, &f, &p("a < b"), 300);
    let f = p("E y. (x < y + y & y + y < z)");
    agrees(&m, &f, &qe(&f).unwrap(), 300);
    agrees(&m, &f, &p("x < z"), 300);
}

#[test]
fn convex_elimination() {
    let sub = fixtures::lex2_sub1();
    let f = p("E y. (x < y & U(y))");
    agrees(&sub, &f, &qe_model(&f, &sub).unwrap(), 400);
    agrees(&sub, &f, &p("~((0 < x) & ~U(x))"), 400);

    let f = p("E y. (U(y) & x < y & y < z)");
    agrees(&sub, &f, &qe_model(&f, &sub).unwrap(), 400);
    agrees(&sub, &f, &p("x < z & ~(0 < x & ~U(x)) & ~(z < 0 & ~U(z))"), 400);

    let cut = fixtures::lex3_1pi0();
    let f = p("E y. (I(y - x) & U(y))");
    agrees(&cut, &f, &qe_model(&f, &cut).unwrap(), 300);
    agrees(&cut, &f, &p("U(x)"), 300);

    for m in [fixtures::lex2_sub1(), fixtures::lex2_1inf()] {
        for s in ["E y. (U(y) & e_in < y)", "E y. (~U(y) & y < e_out)", "A x. (U(x) -> U(x + e_in))"] {
            assert!(oracle_truth(&m, &p(s), &Assignment::new()).unwrap(), "{s}");
            assert_eq!(qe_model(&p(s), &m).unwrap(), Formula::True, "{s}");
        }
    }
}

#[test]
fn skolem_examples_verify() {
    let m = fixtures::lex2_sub1();
    for phi in ["x < y & U(y)", "y + y = x", "I(x - y)"] {
        let phi = p(phi);
        let sk = skolemize(&phi, "y", &m).unwrap();
        assert!(verify_skolem(&m, &phi, &sk, 500, 3).unwrap().passed, "{phi}");
    }
}

#[test]
fn resistance_examples() {
    let sub = fixtures::lex2_sub1();
    assert_eq!(check_resistance(&sub, &PlUnary::affine(int(3), Term::zero())).unwrap(), Resistance::Closed);
    let shift = PlUnary::affine(int(1), Term::e_out());
    assert!(matches!(check_resistance(&sub, &shift).unwrap(), Resistance::Violation { .. }));
    let pi = fixtures::q1_pi();
    let Resistance::Violation { witness, image } =
        check_resistance(&pi, &PlUnary::affine(int(2), Term::zero())).unwrap()
    else {
        panic!("doubling escapes the cut at pi");
    };
    assert!(pi.in_u(&witness).unwrap() && !pi.in_u(&image).unwrap());
}

#[test]
fn obstruction_witnesses_hold() {
    let m = fixtures::q1_pi();
    let cases = [
        (ratio(1, 2), ratio(3, 2), Obstruction::NotIncreasing),
        (int(1), int(1), Obstruction::EscapesU),
        (ratio(1, 2), int(2), Obstruction::EscapesU),
    ];
    for (slope, c, kind) in cases {
        let f = PlUnary::affine(slope, Term::constant(c));
        let w = obstruction_find(&m, &f).unwrap();
        assert_eq!(w.violation, kind, "{f}");
        assert!(m.in_u(&w.point).unwrap());
        let escapes = !m.in_u(&w.image).unwrap();
        assert!(escapes || w.image <= w.point, "{f}");
        assert_eq!(w.image, f.eval(&m, &w.point).unwrap());
    }
}

#[test]
fn classification_and_stabilizer() {
    assert_eq!(classify(&fixtures::q3_11pi()).cut_kind, CutKind::IrrationalNonvaluational);
    assert_eq!(stabilizer(&fixtures::q3_11pi()), 3);
    assert_eq!(stabilizer(&fixtures::lex3_1pi0()), 2);
    assert_eq!(stabilizer(&fixtures::lex2_1inf()), 1);
}
