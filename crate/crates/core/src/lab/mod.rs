//! Checks and counterexample searches around Skolem functions: verifying a
//! synthesized definition, refuting candidate Skolem functions over a
//! nonvaluational cut, and refuting definable choice modulo the stabilizer.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::classify::{classify, CutKind};
use crate::convex::SkolemDefinition;
use crate::model::sample::PointSampler;
use crate::model::{
    eval_formula, eval_term, Assignment, Cut, EvalError, Interval, ModelDescriptor, OracleError, Point, Side,
    ThresholdOrder, TruthOracle, DEFAULT_BUDGET_BITS,
};
use crate::pl::PlUnary;
use crate::rational::{int, pow2, ratio, Rational};
use crate::syntax::{Atom, Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("no witness found within the search bound")]
    NotFound,
}

/// Why a Skolem definition failed at a parameter tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SkolemFailure {
    /// A solution exists but no guard fires.
    NoGuardFired,
    /// Case `case` fired and its witness does not satisfy the formula.
    WitnessFails { case: usize, witness: Point },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkolemCounterexample {
    pub assignment: Assignment,
    pub failure: SkolemFailure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkolemReport {
    pub samples: usize,
    /// Samples at which a solution exists.
    pub solvable: usize,
    pub passed: bool,
    pub counterexample: Option<SkolemCounterexample>,
}

/// Samples parameter tuples; wherever `E target. phi` holds, some guard of
/// `sk` must fire and its witness must satisfy `phi`. Both formulas are
/// evaluated by the truth oracle, independently of the eliminator.
pub fn verify_skolem(
    m: &ModelDescriptor,
    phi: &Formula,
    sk: &SkolemDefinition,
    samples: usize,
    seed: u64,
) -> Result<SkolemReport, LabError> {
    let target = sk.target.as_str();
    let params: Vec<String> = phi.free_vars().into_iter().filter(|v| v != target).collect();
    let solvable_oracle = TruthOracle::compile(m, &Formula::exists(target, phi.clone()))?;
    let phi_oracle = TruthOracle::compile(m, phi)?;
    let sampler = PointSampler::new(m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut solvable = 0;
    for _ in 0..samples {
        let asgn = sampler.assignment(&mut rng, &params);
        if !solvable_oracle.eval(&asgn)? {
            continue;
        }
        solvable += 1;
        let failure = match sk.firing_case(m, &asgn, DEFAULT_BUDGET_BITS)? {
            None => Some(SkolemFailure::NoGuardFired),
            Some(case) => {
                let witness = eval_term(m, &sk.cases[case].witness, &asgn)?;
                let mut full = asgn.clone();
                full.insert(target.into(), witness.clone());
                (!phi_oracle.eval(&full)?).then_some(SkolemFailure::WitnessFails { case, witness })
            }
        };
        if let Some(failure) = failure {
            let counterexample = SkolemCounterexample { assignment: asgn, failure };
            return Ok(SkolemReport { samples, solvable, passed: false, counterexample: Some(counterexample) });
        }
    }
    Ok(SkolemReport { samples, solvable, passed: true, counterexample: None })
}

/// How a candidate fails to be a Skolem function for `x < y & U(y)` on `U`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Obstruction {
    /// `f(a) <= a`.
    NotIncreasing,
    /// `f(a)` lies outside `U`.
    EscapesU,
}

/// A comparison against the threshold, with the oracle interval that decided
/// an irrational entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdComparison {
    pub point: Point,
    pub order: ThresholdOrder,
    pub interval: Option<Interval>,
}

/// A point `a` of `U` at which `f` is not a Skolem function for
/// `x < y & U(y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionWitness {
    pub point: Point,
    pub image: Point,
    pub violation: Obstruction,
    /// How `a` and `f(a)` compare with the threshold.
    pub certificate: [ThresholdComparison; 2],
}

impl ObstructionWitness {
    /// Re-checks the claim with the formula evaluator.
    pub fn verify(&self, m: &ModelDescriptor, f: &PlUnary) -> Result<bool, EvalError> {
        if f.eval(m, &self.point)? != self.image {
            return Ok(false);
        }
        let (a, fa) = (Term::var("a"), Term::var("fa"));
        let broken = match self.violation {
            Obstruction::NotIncreasing => Formula::Atom(Atom::le(&fa, &a)),
            Obstruction::EscapesU => Formula::not(Formula::Atom(Atom::in_u(fa.clone()))),
        };
        let claim = Formula::and([Formula::Atom(Atom::in_u(a.clone())), broken]);
        let asgn: Assignment = [("a".into(), self.point.clone()), ("fa".into(), self.image.clone())].into();
        eval_formula(m, &claim, &asgn, DEFAULT_BUDGET_BITS)
    }
}

/// How many points of a cofinal sequence to try.
const APPROACH_STEPS: u32 = 512;

/// Finds `a` in `U` with `f(a) <= a` or `f(a)` outside `U`. On the piece of
/// `f` met just below the irrational cut, the limit of `f` at the cut differs
/// from the cut unless `f` is the identity there; that decides which
/// violation to look for near the cut. Other pieces are tried directly.
pub fn obstruction_find(m: &ModelDescriptor, f: &PlUnary) -> Result<ObstructionWitness, LabError> {
    if classify(m).cut_kind != CutKind::IrrationalNonvaluational {
        return Err(LabError::PreconditionViolated("the cut must be irrational and nonvaluational"));
    }
    let c = m.upper_boundary();
    let unit = m.unit();
    let at = |b: &Rational| Cut::point(&unit.scaled(b), Side::AT);
    let i = f.breakpoints().iter().filter(|b| at(b) < c).count();
    let piece = &f.pieces()[i];
    let w = eval_term(m, &piece.intercept, &Assignment::new())?;
    let expected = if piece.slope.is_zero() {
        if c.is_above(&w) {
            Obstruction::NotIncreasing
        } else {
            Obstruction::EscapesU
        }
    } else if c.affine(&piece.slope, &w) > c {
        Obstruction::EscapesU
    } else {
        Obstruction::NotIncreasing
    };
    let start = f.interval(i).0.map(at);
    for k in 0..APPROACH_STEPS {
        let Some(a) = c.approach_from_below(k) else { break };
        if start.as_ref().is_some_and(|s| *s >= Cut::point(&a, Side::AT)) {
            continue;
        }
        if let Some(found) = check_point(m, f, &a, Some(expected))? {
            return Ok(found);
        }
    }
    let mut fallback: Vec<Point> = f.breakpoints().iter().map(|b| unit.scaled(b)).collect();
    fallback.extend((0..64).filter_map(|k| c.approach_from_below(k)));
    fallback.extend((-8..=8).map(|k| unit.scaled(&int(k))));
    for a in fallback {
        if let Some(found) = check_point(m, f, &a, None)? {
            return Ok(found);
        }
    }
    Err(LabError::NotFound)
}

/// A witness at `a`, if `a` is in `U` and shows the violation (either one
/// when `want` is `None`).
fn check_point(
    m: &ModelDescriptor,
    f: &PlUnary,
    a: &Point,
    want: Option<Obstruction>,
) -> Result<Option<ObstructionWitness>, LabError> {
    if !m.in_u(a)? {
        return Ok(None);
    }
    let image = f.eval(m, a)?;
    let violation = if image <= *a {
        Obstruction::NotIncreasing
    } else if !m.in_u(&image)? {
        Obstruction::EscapesU
    } else {
        return Ok(None);
    };
    if want.is_some_and(|w| w != violation) {
        return Ok(None);
    }
    let compare = |p: &Point| -> Result<ThresholdComparison, EvalError> {
        let (order, interval) = m.compare_to_threshold_with(p, DEFAULT_BUDGET_BITS)?;
        Ok(ThresholdComparison { point: p.clone(), order, interval })
    };
    let certificate = [compare(a)?, compare(&image)?];
    Ok(Some(ObstructionWitness { point: a.clone(), image, violation, certificate }))
}

/// A candidate choice function for the fibers of `I(x - y)`.
#[derive(Clone, Copy, Debug)]
pub enum ChoiceCandidate<'a> {
    Pl(&'a PlUnary),
    /// A definition of its target from the single parameter `param`.
    Skolem {
        definition: &'a SkolemDefinition,
        param: &'a str,
    },
}

impl ChoiceCandidate<'_> {
    fn value(&self, m: &ModelDescriptor, x: &Point) -> Result<Option<Point>, EvalError> {
        match self {
            ChoiceCandidate::Pl(f) => f.eval(m, x).map(Some),
            ChoiceCandidate::Skolem { definition, param } => {
                let asgn: Assignment = [(String::from(*param), x.clone())].into();
                definition.value(m, &asgn, DEFAULT_BUDGET_BITS)
            }
        }
    }
}

/// Failure of definable choice for the relation `I(x - y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChoiceViolation {
    /// `F(point)` is undefined or lies outside the coset `point + I`.
    NoValidOutput { point: Point, value: Option<Point> },
    /// `a` and `b` share a coset of `I` but `F(a) != F(b)`.
    SplitFiber { a: Point, b: Point, fa: Point, fb: Point },
}

impl ChoiceViolation {
    /// Re-checks the claim by evaluating the candidate and the fiber formula.
    pub fn verify(&self, m: &ModelDescriptor, f: &ChoiceCandidate<'_>) -> Result<bool, EvalError> {
        let i_of = |a: &str, b: &str| Formula::Atom(Atom::in_i(&Term::var(a) - &Term::var(b)));
        match self {
            ChoiceViolation::NoValidOutput { point, value } => {
                if f.value(m, point)? != *value {
                    return Ok(false);
                }
                let Some(v) = value else { return Ok(true) };
                let asgn: Assignment = [("x".into(), point.clone()), ("y".into(), v.clone())].into();
                eval_formula(m, &Formula::not(i_of("x", "y")), &asgn, DEFAULT_BUDGET_BITS)
            }
            ChoiceViolation::SplitFiber { a, b, fa, fb } => {
                if f.value(m, a)?.as_ref() != Some(fa) || f.value(m, b)?.as_ref() != Some(fb) {
                    return Ok(false);
                }
                let claim = Formula::and([
                    i_of("a", "b"),
                    Formula::not(Formula::Atom(Atom::eq(&Term::var("fa"), &Term::var("fb")))),
                ]);
                let asgn: Assignment = [
                    ("a".into(), a.clone()),
                    ("b".into(), b.clone()),
                    ("fa".into(), fa.clone()),
                    ("fb".into(), fb.clone()),
                ]
                .into();
                eval_formula(m, &claim, &asgn, DEFAULT_BUDGET_BITS)
            }
        }
    }
}

/// Finds where `f` fails to choose one point per coset of the stabilizer
/// `I`: some `a` whose value leaves `a + I`, or two points of one coset with
/// different values. Tries multiples of the unit and the constants, each
/// perturbed by elements of `I` at several scales.
pub fn choice_violation(m: &ModelDescriptor, f: &ChoiceCandidate<'_>) -> Result<ChoiceViolation, LabError> {
    if classify(m).cut_kind != CutKind::IrrationalValuational {
        return Err(LabError::PreconditionViolated("the stabilizer must be nontrivial"));
    }
    let n = m.dim();
    let level = m.stabilizer_level();
    let unit = m.unit();
    let mut starts: Vec<Point> = Vec::new();
    for q in [int(0), int(1), int(-1), int(2), int(-2), ratio(1, 2), int(3), int(10), int(-10)] {
        starts.push(unit.scaled(&q));
    }
    starts.extend([m.e_in().clone(), m.e_out().clone(), -m.e_out()]);
    if let ChoiceCandidate::Pl(g) = f {
        for b in g.breakpoints() {
            for d in [Rational::zero(), int(1), int(-1), ratio(1, 2), ratio(-1, 2)] {
                starts.push(unit.scaled(&(b + d)));
            }
        }
    }
    let mut seen = BTreeSet::new();
    starts.retain(|p| seen.insert(p.clone()));
    let deltas: Vec<Point> =
        (level..n).flat_map(|i| [0, 1, -1, 2, -2, 3, -3].map(|k| Point::unit(n, i).scaled(&pow2(k)))).collect();
    let valid = |x: &Point| -> Result<Result<Point, ChoiceViolation>, LabError> {
        let value = f.value(m, x)?;
        match value {
            Some(v) if m.in_i(&(x - &v)) => Ok(Ok(v)),
            _ => Ok(Err(ChoiceViolation::NoValidOutput { point: x.clone(), value })),
        }
    };
    for a in &starts {
        let fa = match valid(a)? {
            Ok(v) => v,
            Err(violation) => return Ok(violation),
        };
        for d in &deltas {
            let b = a + d;
            let fb = match valid(&b)? {
                Ok(v) => v,
                Err(violation) => return Ok(violation),
            };
            if fa != fb {
                return Ok(ChoiceViolation::SplitFiber { a: a.clone(), b, fa, fb });
            }
        }
    }
    Err(LabError::NotFound)
}

#[cfg(test)]
mod tests;
