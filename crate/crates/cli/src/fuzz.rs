//! Differential fuzzing of `qe_star` against the truth oracle.
//!
//! Each formula is eliminated, the output is checked to be quantifier-free,
//! and both are evaluated at sampled assignments of their free variables.
//! Disagreements are shrunk to a smaller formula that still disagrees.

use convexqe_core::convex::{qe_star_using, ConvexEliminator, ModelClass};
use convexqe_core::gen::{random_formula, FormulaShape};
use convexqe_core::model::sample::PointSampler;
use convexqe_core::model::{eval_formula, Assignment, ModelDescriptor, OracleError, TruthOracle};
use convexqe_core::qe::{Budget, Eliminator, QeError};
use convexqe_core::syntax::{AtomKind, Formula, Literal};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::format::assignment_json;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzConfig {
    pub formulas: usize,
    /// Assignments per formula.
    pub samples: usize,
    pub seed: u64,
    pub max_quantifier_depth: usize,
    pub budget: Budget,
    /// Precision budget, in bits, for evaluating the eliminated formula.
    pub precision: u32,
    /// Negates the elimination rule for a lone strict bound, to check that
    /// the harness notices.
    pub inject_bug: bool,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        Self {
            formulas: 500,
            samples: 1000,
            seed: 0,
            max_quantifier_depth: 2,
            budget: Budget::default(),
            precision: convexqe_core::model::DEFAULT_BUDGET_BITS,
            inject_bug: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Finding {
    /// The output still has quantifiers.
    NotQuantifierFree,
    /// The eliminator failed.
    Error(String),
    /// Output and oracle disagree at `assignment`.
    Disagrees { assignment: Assignment, expected: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub index: usize,
    pub formula: Formula,
    pub output: Option<Formula>,
    pub finding: Finding,
    /// A smaller formula with the same kind of finding.
    pub minimized: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzReport {
    pub config: FuzzConfig,
    /// Formulas compared at every sample.
    pub checked: usize,
    /// Formulas whose oracle exceeded its clause budget.
    pub oracle_skipped: usize,
    pub discrepancies: Vec<Discrepancy>,
}

/// The convex eliminator with one rule negated: `E v. t < v` (or `v < t`)
/// alone answers false.
struct Mutant(ConvexEliminator);

impl Eliminator for Mutant {
    fn eliminate_clause(&self, clause: &[Literal], v: &str) -> Result<Formula, QeError> {
        let out = self.0.eliminate_clause(clause, v)?;
        let lone_bound = matches!(clause, [l] if l.positive && l.atom.kind == AtomKind::Lt);
        Ok(if lone_bound { Formula::not(out) } else { out })
    }

    fn simplify(&self, f: &Formula) -> Formula {
        self.0.simplify(f)
    }
}

/// Seed of the assignment stream of formula `index`.
fn sample_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (index as u64).wrapping_add(1).wrapping_mul(0xbf58_476d_1ce4_e5b9)
}

struct Harness<'a> {
    m: &'a ModelDescriptor,
    class: ModelClass,
    config: &'a FuzzConfig,
}

enum Outcome {
    Agrees,
    OracleOverBudget,
    Found(Option<Formula>, Finding),
}

impl Harness<'_> {
    fn eliminate(&self, f: &Formula) -> Result<Formula, QeError> {
        let base = ConvexEliminator { class: self.class.clone() };
        if self.config.inject_bug {
            qe_star_using(&Mutant(base), f, &self.class, &self.config.budget)
        } else {
            qe_star_using(&base, f, &self.class, &self.config.budget)
        }
    }

    fn check(&self, f: &Formula, seed: u64, samples: usize) -> Outcome {
        let out = match self.eliminate(f) {
            Ok(out) => out,
            Err(e) => return Outcome::Found(None, Finding::Error(e.to_string())),
        };
        if !out.is_quantifier_free() {
            return Outcome::Found(Some(out), Finding::NotQuantifierFree);
        }
        let oracle = match TruthOracle::compile(self.m, f) {
            Ok(o) => o,
            Err(OracleError::Budget(_)) => return Outcome::OracleOverBudget,
            Err(e) => return Outcome::Found(Some(out), Finding::Error(e.to_string())),
        };
        let vars: Vec<String> = f.free_vars().union(&out.free_vars()).cloned().collect();
        let sampler = PointSampler::new(self.m);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let asgn = sampler.assignment(&mut rng, &vars);
            let expected = match oracle.eval(&asgn) {
                Ok(b) => b,
                Err(e) => return Outcome::Found(Some(out), Finding::Error(e.to_string())),
            };
            let got = match eval_formula(self.m, &out, &asgn, self.config.precision) {
                Ok(b) => b,
                Err(e) => return Outcome::Found(Some(out), Finding::Error(e.to_string())),
            };
            if got != expected {
                return Outcome::Found(Some(out), Finding::Disagrees { assignment: asgn, expected });
            }
        }
        Outcome::Agrees
    }

    /// Greedily replaces `f` by a smaller variant that still produces a
    /// finding of the same kind.
    fn minimize(&self, f: &Formula, finding: &Finding, seed: u64) -> Formula {
        const ATTEMPTS: usize = 400;
        let samples = self.config.samples.min(200);
        let same_kind = |g: &Finding| core::mem::discriminant(g) == core::mem::discriminant(finding);
        let mut best = f.clone();
        let mut attempts = 0;
        'outer: loop {
            for candidate in shrinks(&best) {
                attempts += 1;
                if attempts > ATTEMPTS {
                    break 'outer;
                }
                if let Outcome::Found(_, g) = self.check(&candidate, seed, samples) {
                    if same_kind(&g) {
                        best = candidate;
                        continue 'outer;
                    }
                }
            }
            break;
        }
        best
    }
}

/// Strictly smaller variants of `f`, smallest first.
fn shrinks(f: &Formula) -> Vec<Formula> {
    let mut out = Vec::new();
    match f {
        Formula::True | Formula::False => {}
        Formula::Atom(_) => out.extend([Formula::True, Formula::False]),
        Formula::Not(g) => {
            out.push((**g).clone());
            out.extend(shrinks(g).into_iter().map(Formula::not));
        }
        Formula::And(gs) | Formula::Or(gs) => {
            let rebuild = |parts: Vec<Formula>| match f {
                Formula::And(_) => Formula::and(parts),
                _ => Formula::or(parts),
            };
            out.extend(gs.iter().cloned());
            for i in 0..gs.len() {
                let mut rest = gs.clone();
                rest.remove(i);
                out.push(rebuild(rest));
                for s in shrinks(&gs[i]) {
                    let mut parts = gs.clone();
                    parts[i] = s;
                    out.push(rebuild(parts));
                }
            }
        }
        Formula::Implies(a, b) => {
            out.extend([(**b).clone(), Formula::not((**a).clone())]);
            out.extend(shrinks(a).into_iter().map(|s| Formula::implies(s, (**b).clone())));
            out.extend(shrinks(b).into_iter().map(|s| Formula::implies((**a).clone(), s)));
        }
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            out.push((**g).clone());
            let wrap = |s: Formula| match f {
                Formula::Exists(..) => Formula::exists(v, s),
                _ => Formula::forall(v, s),
            };
            out.extend(shrinks(g).into_iter().map(wrap));
        }
    }
    let size = f.size();
    out.retain(|g| g.size() < size);
    out.sort_by_key(Formula::size);
    out.dedup();
    out
}

/// Runs the differential check. Fails only if the model has no complete
/// elimination.
pub fn fuzz(m: &ModelDescriptor, config: &FuzzConfig) -> Result<FuzzReport, QeError> {
    let class = ModelClass::of(m)?;
    let harness = Harness { m, class, config };
    let shape = FormulaShape { max_quantifier_depth: config.max_quantifier_depth, ..FormulaShape::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = FuzzReport { config: config.clone(), checked: 0, oracle_skipped: 0, discrepancies: Vec::new() };
    for index in 0..config.formulas {
        let formula = random_formula(&mut rng, &shape);
        let seed = sample_seed(config.seed, index);
        match harness.check(&formula, seed, config.samples) {
            Outcome::Agrees => report.checked += 1,
            Outcome::OracleOverBudget => report.oracle_skipped += 1,
            Outcome::Found(output, finding) => {
                report.checked += 1;
                let minimized = harness.minimize(&formula, &finding, seed);
                report.discrepancies.push(Discrepancy { index, formula, output, finding, minimized });
            }
        }
    }
    report.discrepancies.sort_by_key(|d| d.index);
    Ok(report)
}

impl FuzzReport {
    pub fn to_json(&self) -> Value {
        let c = &self.config;
        let discrepancies: Vec<Value> = self
            .discrepancies
            .iter()
            .map(|d| {
                let finding = match &d.finding {
                    Finding::NotQuantifierFree => json!({ "kind": "NotQuantifierFree" }),
                    Finding::Error(e) => json!({ "kind": "Error", "message": e }),
                    Finding::Disagrees { assignment, expected } => json!({
                        "kind": "Disagrees",
                        "assignment": assignment_json(assignment),
                        "expected": expected,
                    }),
                };
                json!({
                    "index": d.index,
                    "formula": d.formula.to_string(),
                    "output": d.output.as_ref().map(ToString::to_string),
                    "finding": finding,
                    "minimized": d.minimized.to_string(),
                })
            })
            .collect();
        json!({
            "config": {
                "formulas": c.formulas,
                "samples": c.samples,
                "seed": c.seed,
                "max_quantifier_depth": c.max_quantifier_depth,
                "budget_dnf": c.budget.dnf_clauses,
                "budget_depth": c.budget.depth,
                "precision": c.precision,
                "inject_bug": c.inject_bug,
            },
            "checked": self.checked,
            "oracle_skipped": self.oracle_skipped,
            "discrepancies": discrepancies,
        })
    }
}
