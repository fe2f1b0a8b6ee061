use alloc::string::{String, ToString};
use alloc::vec::Vec;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::sample::PointSampler;
use super::*;
use crate::fixtures;
use crate::gen::{random_formula, FormulaShape};
use crate::rational::{int, ratio};
use crate::syntax::{dnf_clauses, dnf_to_formula, normalize_atoms, parse_formula, substitute, Formula, Term};

fn pt(xs: &[i64]) -> Point {
    Point(xs.iter().map(|&x| int(x)).collect())
}

fn asgn(pairs: &[(&str, Point)]) -> Assignment {
    pairs.iter().map(|(v, p)| (String::from(*v), p.clone())).collect()
}

fn eval(m: &ModelDescriptor, f: &str, a: &Assignment) -> bool {
    eval_formula(m, &parse_formula(f).unwrap(), a, DEFAULT_BUDGET_BITS).unwrap()
}

fn truth(m: &ModelDescriptor, f: &str, a: &Assignment) -> bool {
    oracle_truth(m, &parse_formula(f).unwrap(), a).unwrap()
}

#[test]
fn threshold_comparisons() {
    assert_eq!(fixtures::q1_pi().compare_to_threshold(&pt(&[3])).unwrap(), ThresholdOrder::Below);
    assert_eq!(fixtures::q3_11pi().compare_to_threshold(&pt(&[1, 1, 4])).unwrap(), ThresholdOrder::Above);
    let (o, iv) = fixtures::q3_11pi().compare_to_threshold_with(&pt(&[1, 1, 4]), DEFAULT_BUDGET_BITS).unwrap();
    assert_eq!(o, ThresholdOrder::Above);
    assert!(iv.unwrap().hi < int(4));
    assert_eq!(fixtures::lex2_1inf().compare_to_threshold(&pt(&[1, 1_000_000])).unwrap(), ThresholdOrder::Below);
    assert_eq!(fixtures::lex2_11().compare_to_threshold(&pt(&[1, 1])).unwrap(), ThresholdOrder::Equal);
    assert_eq!(fixtures::lex2_sub1().compare_to_threshold(&pt(&[0, 1])), Err(EvalError::NotACut));
}

#[test]
fn pi_interval_certificate() {
    // 3.1415 < pi < 3.1416
    let iv = Irrational::Pi.refine(16);
    assert!(iv.lo > ratio(31415, 10000) && iv.hi < ratio(31416, 10000));
}

#[test]
fn eval_examples() {
    let a = asgn(&[("x", pt(&[3]))]);
    assert!(eval(&fixtures::q1_pi(), "U(x)", &a));
    for (_, m) in fixtures::all() {
        let n = m.dim();
        let mut p = Point::zero(n);
        p.0[0] = ratio(7, 3);
        assert!(eval(&m, "x + (-1)*x = 0", &asgn(&[("x", p)])));
    }
    let a = asgn(&[("x", pt(&[0, 5])), ("y", pt(&[1, 0]))]);
    assert!(eval(&fixtures::lex2_sub1(), "U(x) & ~U(y)", &a));
}

#[test]
fn oracle_examples() {
    for (_, m) in fixtures::all() {
        let mut p = Point::zero(m.dim());
        p.0[m.dim() - 1] = ratio(5, 3);
        assert!(truth(&m, "E y. y + y = x", &asgn(&[("x", p)])));
    }
    let m = fixtures::lex2_sub1();
    assert!(!truth(&m, "E y. (x < y & U(y))", &asgn(&[("x", pt(&[1, 0]))])));
    assert!(truth(&m, "E y. (x < y & U(y))", &asgn(&[("x", pt(&[0, 7]))])));
    assert!(truth(&m, "A x. E y. x < y", &Assignment::new()));
    assert!(!truth(&m, "E y. (x < y & y < x)", &asgn(&[("x", pt(&[0, 7]))])));
}

#[test]
fn oracle_handles_irrational_quantifiers() {
    let m = fixtures::q1_pi();
    // No rational point equals pi: every element of U has a larger one in U.
    assert!(truth(&m, "A x. (U(x) -> E y. (x < y & U(y)))", &Assignment::new()));
    assert!(!truth(&m, "E x. (U(x) & A y. (x < y -> ~U(y)))", &Assignment::new()));
    // The cut is archimedean: no positive epsilon keeps U invariant.
    assert!(!truth(&m, "E e. (0 < e & A x. (U(x) -> U(x + e)))", &Assignment::new()));
    let v = fixtures::lex2_1inf();
    assert!(truth(&v, "E e. (0 < e & A x. (U(x) -> U(x + e)))", &Assignment::new()));
    let q3 = fixtures::q3_11pi();
    assert!(!truth(&q3, "E e. (0 < e & A x. (U(x) -> U(x + e)))", &Assignment::new()));
}

#[test]
fn stabilizer_levels() {
    assert_eq!(fixtures::q1_pi().stabilizer_level(), 1);
    assert_eq!(fixtures::q3_11pi().stabilizer_level(), 3);
    assert_eq!(fixtures::lex3_1pi0().stabilizer_level(), 2);
    assert_eq!(fixtures::lex2_1inf().stabilizer_level(), 1);
    assert_eq!(fixtures::lex2_11().stabilizer_level(), 2);
    assert_eq!(fixtures::lex2_sub1().stabilizer_level(), 1);
}

#[test]
fn descriptor_validation() {
    let cut = |t: Vec<Entry>| UInterp::DownwardCut { threshold: t, strict: true };
    assert!(matches!(
        ModelDescriptor::new(2, UInterp::Subgroup { level: 2 }, pt(&[0, 1]), pt(&[1, 0])),
        Err(ModelError::SubgroupLevel { .. })
    ));
    assert!(matches!(
        ModelDescriptor::new(2, cut([Entry::PlusInf, Entry::PlusInf].into()), pt(&[0, 1]), pt(&[1, 0])),
        Err(ModelError::MalformedThreshold(_))
    ));
    assert!(matches!(
        ModelDescriptor::new(2, cut([Entry::Rational(int(1)), Entry::PlusInf].into()), pt(&[1, 0]), pt(&[2, 0])),
        Err(ModelError::Constant { name: "e_in", .. })
    ));
    assert!(matches!(
        ModelDescriptor::new(2, cut([Entry::Rational(int(1)), Entry::PlusInf].into()), pt(&[0, 1]), pt(&[1, 0])),
        Err(ModelError::Constant { name: "e_out", .. })
    ));
    assert!(ModelDescriptor::new(1, cut([Entry::Rational(int(1))].into()), pt(&[1]), pt(&[1])).is_err());
}

fn qf_shape(allow_i: bool) -> FormulaShape {
    FormulaShape { max_quantifier_depth: 0, max_connective_depth: 3, allow_i, ..FormulaShape::default() }
}

fn vars() -> Vec<String> {
    ["x", "y", "z"].iter().map(|s| s.to_string()).collect()
}

proptest! {
    #![proptest_config(crate::testutil::config(64))]

    #[test]
    fn oracle_agrees_with_eval_on_quantifier_free(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (name, m) in fixtures::all() {
            let f = random_formula(&mut rng, &qf_shape(true));
            let oracle = TruthOracle::compile(&m, &f).unwrap();
            let sampler = PointSampler::new(&m);
            for _ in 0..8 {
                let a = sampler.assignment(&mut rng, &vars());
                let e = eval_formula(&m, &f, &a, DEFAULT_BUDGET_BITS).unwrap();
                prop_assert_eq!(oracle.eval(&a).unwrap(), e, "{} on {}", f, name);
            }
        }
    }

    #[test]
    fn normal_forms_preserve_truth(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (_, m) in fixtures::all() {
            let f = random_formula(&mut rng, &qf_shape(true));
            let norm = normalize_atoms(&f);
            let dnf = dnf_to_formula(&dnf_clauses(&f, 4096).unwrap());
            let sampler = PointSampler::new(&m);
            for _ in 0..8 {
                let a = sampler.assignment(&mut rng, &vars());
                let e = eval_formula(&m, &f, &a, DEFAULT_BUDGET_BITS).unwrap();
                prop_assert_eq!(eval_formula(&m, &norm, &a, DEFAULT_BUDGET_BITS).unwrap(), e);
                prop_assert_eq!(eval_formula(&m, &dnf, &a, DEFAULT_BUDGET_BITS).unwrap(), e);
            }
        }
    }

    #[test]
    fn substitution_lemma(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (_, m) in fixtures::all() {
            let f = random_formula(&mut rng, &qf_shape(true));
            let t = crate::gen::random_term(&mut rng, &FormulaShape::default(), &vars());
            let g = substitute(&f, "x", &t);
            let sampler = PointSampler::new(&m);
            for _ in 0..6 {
                let mut a = sampler.assignment(&mut rng, &vars());
                let lhs = eval_formula(&m, &g, &a, DEFAULT_BUDGET_BITS).unwrap();
                let tv = eval_term(&m, &t, &a).unwrap();
                a.insert("x".into(), tv);
                prop_assert_eq!(eval_formula(&m, &f, &a, DEFAULT_BUDGET_BITS).unwrap(), lhs);
            }
        }
    }

    #[test]
    fn order_axioms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (_, m) in fixtures::all() {
            let s = PointSampler::new(&m);
            let (a, b, c) = (s.point(&mut rng), s.point(&mut rng), s.point(&mut rng));
            prop_assert!((a < b) ^ (b < a) ^ (a == b));
            if a < b {
                prop_assert!(&a + &c < &b + &c);
            }
            let half = a.scaled(&ratio(1, 2));
            prop_assert_eq!(&half + &half, a.clone());
            let e = eval_formula(&m, &parse_formula("y + y = x").unwrap(),
                &asgn(&[("x", a.clone()), ("y", half)]), DEFAULT_BUDGET_BITS).unwrap();
            prop_assert!(e);
            if m.threshold().is_some() && matches!(m.u(), UInterp::DownwardCut { .. }) {
                let below = m.compare_to_threshold(&a).unwrap() == ThresholdOrder::Below;
                if below && b < a {
                    prop_assert_eq!(m.compare_to_threshold(&b).unwrap(), ThresholdOrder::Below);
                }
            }
        }
    }

    #[test]
    fn oracle_agrees_with_brute_force_witnesses(seed in any::<u64>()) {
        // E y. phi(x, y) is true whenever some sampled y works.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (_, m) in fixtures::all() {
            let phi = random_formula(&mut rng, &FormulaShape { vars: ["x".into(), "y".into()].into(), ..qf_shape(true) });
            let ex = Formula::exists("y", phi.clone());
            let oracle = TruthOracle::compile(&m, &ex);
            prop_assume!(!matches!(oracle, Err(OracleError::Budget(_))));
            let oracle = oracle.unwrap();
            let s = PointSampler::new(&m);
            for _ in 0..4 {
                let a = s.assignment(&mut rng, &["x".into()]);
                let claimed = oracle.eval(&a).unwrap();
                for _ in 0..6 {
                    let mut b = a.clone();
                    b.insert("y".into(), s.point(&mut rng));
                    if eval_formula(&m, &phi, &b, DEFAULT_BUDGET_BITS).unwrap() {
                        prop_assert!(claimed, "{} has a witness", ex);
                    }
                }
            }
        }
    }
}

#[test]
fn e_in_and_e_out_terms() {
    let m = fixtures::q3_11pi();
    let t = Term::e_out() - Term::e_in().scale(&int(2)) + Term::constant(ratio(1, 2));
    assert_eq!(eval_term(&m, &t, &Assignment::new()).unwrap(), Point([ratio(5, 2), int(0), int(-2)].into()));
}
