use convexqe::format::{
    model_from_str, model_json, pl_binary_from_str, pl_binary_json, pl_unary_from_str, pl_unary_json, point_from_text,
    rational, skolem_cases_json, skolem_from_str, FormatError,
};
use convexqe_core::classify::pluslike_from_unary;
use convexqe_core::convex::skolemize;
use convexqe_core::fixtures;
use convexqe_core::gen::{random_matrix, random_pl_unary, random_pluslike, FormulaShape};
use convexqe_core::rational::{int, ratio};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn every_fixture_round_trips() {
    for (name, m) in fixtures::all() {
        assert_eq!(model_from_str(&model_json(&m).to_string()).unwrap(), m, "{name}");
    }
}

#[test]
fn scalar_parsing() {
    assert_eq!(rational("-3/6").unwrap(), ratio(-1, 2));
    assert_eq!(rational("4").unwrap(), int(4));
    assert!(matches!(rational("1/0"), Err(FormatError::Rational(_))));
    assert_eq!(point_from_text("1/2,0").unwrap().0, vec![ratio(1, 2), int(0)]);
}

#[test]
fn malformed_models_are_rejected() {
    let base = r#"{"dim": 2, "U": {"kind": "subgroup", "level": 1}, "e_in": ["0", "1"], "e_out": ["1", "0"]}"#;
    assert!(model_from_str(base).is_ok());
    for bad in [
        base.replace(r#""level": 1"#, r#""level": 2"#),
        base.replace(r#""e_in": ["0", "1"]"#, r#""e_in": ["1", "0"]"#),
        base.replace("subgroup", "lattice"),
        base.replace(r#""dim": 2"#, r#""dim": 2, "extra": 0"#),
        r#"{"dim": 1, "U": {"kind": "downward-cut", "threshold": [{"irrational": "sqrt(4)"}], "strict": true}, "e_in": ["1"], "e_out": ["5"]}"#.into(),
    ] {
        assert!(model_from_str(&bad).is_err(), "{bad}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unary_functions_round_trip(seed in any::<u64>()) {
        let slopes = [int(1), int(-2), int(0), ratio(1, 3)];
        let f = random_pl_unary(&mut rng(seed), 4, &slopes);
        prop_assert_eq!(pl_unary_from_str(&pl_unary_json(&f).to_string()).unwrap(), f);
    }

    #[test]
    fn binary_functions_round_trip(seed in any::<u64>()) {
        let f = random_pluslike(&mut rng(seed));
        prop_assert_eq!(pl_binary_from_str(&pl_binary_json(&f).to_string()).unwrap(), f.clone());
        let h = random_pl_unary(&mut rng(seed ^ 1), 3, &[int(1), int(2)]);
        let g = pluslike_from_unary(&h);
        prop_assert_eq!(pl_binary_from_str(&pl_binary_json(&g).to_string()).unwrap(), g);
    }

    #[test]
    fn skolem_definitions_round_trip(seed in any::<u64>()) {
        let m = fixtures::lex2_sub1();
        let shape = FormulaShape { max_quantifier_depth: 0, ..FormulaShape::default() };
        let phi = random_matrix(&mut rng(seed), &shape, &["x".to_string()], "y");
        let sk = skolemize(&phi, "y", &m).unwrap();
        let text = skolem_cases_json(&sk).to_string();
        prop_assert_eq!(skolem_from_str(&text, "y").unwrap(), sk);
    }
}
