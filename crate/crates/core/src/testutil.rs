//! Helpers shared by the unit tests.

use alloc::string::String;
use alloc::vec::Vec;

use proptest::test_runner::{Config, RngSeed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::sample::PointSampler;
use crate::model::{eval_formula, ModelDescriptor, OracleError, TruthOracle, DEFAULT_BUDGET_BITS};
use crate::syntax::{parse_formula, Formula};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn p(s: &str) -> Formula {
    parse_formula(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

/// Proptest settings with a fixed seed, so runs are reproducible.
pub fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(0x5eed), failure_persistence: None, ..Config::default() }
}

/// Checks that the quantifier-free `candidate` agrees with `original` (which
/// may contain quantifiers) at sampled assignments, using the oracle for
/// `original`. Returns `false` without comparing when the oracle exceeds its
/// clause budget on `original`.
pub fn check_equivalent(
    m: &ModelDescriptor,
    original: &Formula,
    candidate: &Formula,
    samples: usize,
    seed: u64,
) -> bool {
    assert!(candidate.is_quantifier_free(), "not quantifier-free: {candidate}");
    let oracle = match TruthOracle::compile(m, original) {
        Ok(o) => o,
        Err(OracleError::Budget(_)) => return false,
        Err(e) => panic!("oracle: {e}"),
    };
    let vars: Vec<String> = original.free_vars().union(&candidate.free_vars()).cloned().collect();
    let sampler = PointSampler::new(m);
    let mut r = rng(seed);
    for _ in 0..samples {
        let asgn = sampler.assignment(&mut r, &vars);
        let want = oracle.eval(&asgn).expect("oracle eval");
        let got = eval_formula(m, candidate, &asgn, DEFAULT_BUDGET_BITS).expect("eval");
        assert_eq!(got, want, "{original}  vs  {candidate}  at {asgn:?}");
    }
    true
}

pub fn assert_equivalent(m: &ModelDescriptor, original: &Formula, candidate: &Formula, samples: usize, seed: u64) {
    assert!(check_equivalent(m, original, candidate, samples, seed), "oracle over budget on {original}");
}
