//! Definable Skolem functions as ordered lists of guarded witness terms.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Signed;
use thiserror::Error;

use super::{analyse, endpoint_less, Analysis, ConvexEliminator, Endpoint, ModelClass, Region};
use crate::model::{eval_formula, eval_term, Assignment, EvalError, ModelDescriptor, Point};
use crate::qe::{eliminate_all, Budget, QeError};
use crate::rational::{int, ratio, Rational};
use crate::syntax::{dnf_clauses, substitute, Atom, Formula, Literal, Term};

/// One guarded witness: when `guard` holds, `witness` is a solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkolemCase {
    pub guard: Formula,
    pub witness: Term,
}

/// A definable function of the parameters, given by cases tried in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkolemDefinition {
    pub target: String,
    pub cases: Vec<SkolemCase>,
}

impl SkolemDefinition {
    /// Index of the first case whose guard holds.
    pub fn firing_case(
        &self,
        m: &ModelDescriptor,
        asgn: &Assignment,
        budget_bits: u32,
    ) -> Result<Option<usize>, EvalError> {
        for (i, c) in self.cases.iter().enumerate() {
            if eval_formula(m, &c.guard, asgn, budget_bits)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// The value of the function at `asgn`, if some guard fires.
    pub fn value(&self, m: &ModelDescriptor, asgn: &Assignment, budget_bits: u32) -> Result<Option<Point>, EvalError> {
        match self.firing_case(m, asgn, budget_bits)? {
            Some(i) => Ok(Some(eval_term(m, &self.cases[i].witness, asgn)?)),
            None => Ok(None),
        }
    }

    /// The disjunction of all guards.
    pub fn domain(&self) -> Formula {
        Formula::or(self.cases.iter().map(|c| c.guard.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SkolemError {
    #[error(transparent)]
    Qe(#[from] QeError),
    #[error("no definable witness where {guard}")]
    NoDefinableWitness { guard: Formula },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// A Skolem function for `target` in `phi` over the model `m`.
pub fn skolemize(phi: &Formula, target: &str, m: &ModelDescriptor) -> Result<SkolemDefinition, SkolemError> {
    skolemize_with(phi, target, m, &Budget::default())
}

pub fn skolemize_with(
    phi: &Formula,
    target: &str,
    m: &ModelDescriptor,
    budget: &Budget,
) -> Result<SkolemDefinition, SkolemError> {
    let class = ModelClass::of(m)?;
    let e = ConvexEliminator { class: class.clone() };
    let matrix = eliminate_all(&e, &class.rewrite_u(phi), budget)?;
    let mut builder = Builder { class: &class, m, budget, cases: Vec::new(), target };
    for clause in dnf_clauses(&matrix, budget.dnf_clauses).map_err(QeError::from)? {
        builder.clause(&clause)?;
    }
    let cases =
        builder.cases.into_iter().map(|c| SkolemCase { guard: class.present(&c.guard), witness: c.witness }).collect();
    Ok(SkolemDefinition { target: target.into(), cases })
}

struct Builder<'a> {
    class: &'a ModelClass,
    m: &'a ModelDescriptor,
    budget: &'a Budget,
    cases: Vec<SkolemCase>,
    target: &'a str,
}

impl Builder<'_> {
    fn push(&mut self, guard: Formula, witness: Term) {
        let guard = self.class.simplify(&guard);
        if guard != Formula::False {
            self.cases.push(SkolemCase { guard, witness });
        }
    }

    fn clause(&mut self, clause: &[Literal]) -> Result<(), SkolemError> {
        let v = self.target;
        let rest = Formula::and(clause.iter().filter(|l| !l.atom.arg.has_var(v)).map(Literal::to_formula));
        match analyse(clause, v, self.class)? {
            Analysis::Pinned(t) => {
                let all = Formula::and(clause.iter().map(Literal::to_formula));
                self.push(substitute(&all, v, &t), t);
            }
            Analysis::Split(a, b) => {
                self.clause(&a)?;
                self.clause(&b)?;
            }
            Analysis::Regions { regions, disequalities } => {
                for region in &regions {
                    self.region(&rest, region, &disequalities)?;
                }
            }
        }
        Ok(())
    }

    /// One case per choice of greatest lower and least upper endpoint and
    /// per candidate needed to dodge the disequalities.
    fn region(&mut self, rest: &Formula, region: &Region, diseqs: &[Term]) -> Result<(), SkolemError> {
        let lowers = choices(&region.lowers);
        let uppers = choices(&region.uppers);
        for li in &lowers {
            for ui in &uppers {
                let mut parts = alloc::vec![rest.clone()];
                if let Some(i) = li {
                    let l = &region.lowers[*i];
                    for (k, other) in region.lowers.iter().enumerate() {
                        if k != *i {
                            parts.push(Formula::not(endpoint_less(l, other)));
                        }
                    }
                }
                if let Some(j) = ui {
                    let u = &region.uppers[*j];
                    for (k, other) in region.uppers.iter().enumerate() {
                        if k != *j {
                            parts.push(Formula::not(endpoint_less(other, u)));
                        }
                    }
                }
                let lower = li.map(|i| &region.lowers[i]);
                let upper = ui.map(|j| &region.uppers[j]);
                if let (Some(l), Some(u)) = (lower, upper) {
                    parts.push(endpoint_less(l, u));
                }
                let base = self.class.simplify(&Formula::and(parts));
                if base == Formula::False {
                    continue;
                }
                for j in 0..=diseqs.len() {
                    let Some(w) = witness(self.class, lower, upper, j, diseqs.len()) else {
                        if self.satisfiable(&base)? {
                            return Err(SkolemError::NoDefinableWitness { guard: base });
                        }
                        break;
                    };
                    let dodge = diseqs.iter().map(|d| Formula::Atom(Atom::ne(&w, d)));
                    let guard = Formula::and(core::iter::once(base.clone()).chain(dodge));
                    self.push(guard, w);
                }
            }
        }
        Ok(())
    }

    /// Whether some parameter values satisfy `guard` in the model.
    fn satisfiable(&self, guard: &Formula) -> Result<bool, SkolemError> {
        let mut closed = guard.clone();
        for v in guard.free_vars() {
            closed = Formula::exists(&v, closed);
        }
        let e = ConvexEliminator { class: self.class.clone() };
        let decided = eliminate_all(&e, &closed, self.budget)?;
        Ok(eval_formula(self.m, &decided, &Assignment::new(), crate::model::DEFAULT_BUDGET_BITS)?)
    }
}

fn choices<T>(xs: &[T]) -> Vec<Option<usize>> {
    if xs.is_empty() {
        alloc::vec![None]
    } else {
        (0..xs.len()).map(Some).collect()
    }
}

/// The `j`-th of `k + 1` distinct witnesses strictly between `lower` and
/// `upper`, assuming `lower < upper`. `None` when no term is guaranteed to
/// lie between them.
fn witness(class: &ModelClass, lower: Option<&Endpoint>, upper: Option<&Endpoint>, j: usize, k: usize) -> Option<Term> {
    use Endpoint::*;
    let e = Term::e_in();
    let o = Term::e_out();
    let step = |n: usize| e.scale(&int(n as i64));
    let unit = |q: &Rational| Term::constant(q.clone());
    // Representatives of a coset inside U and one above U.
    let (inside, outside) = match class {
        ModelClass::IrrationalQuotient { inside, outside } => (inside.clone(), outside.clone()),
        _ => (int(0), int(0)),
    };
    // A point of the coset `scale * c + shift` on the requested side of the cut
    // edge: above it when `above`, below otherwise.
    let near_cut = |scale: &Rational, shift: &Term, above: bool| {
        let q = if scale.is_positive() == above { &outside } else { &inside };
        &unit(&(scale * q)) + shift
    };
    Some(match (lower, upper) {
        (None, None) => step(j),
        (Some(Point { at, .. }), None) => at + &step(j + 1),
        (Some(CosetEdge { rep, upper: false }), None) => rep + &step(j),
        (Some(CosetEdge { rep, upper: true }), None) => &(rep + &o) + &step(j),
        (Some(CutEdge { scale, shift }), None) => &near_cut(scale, shift, true) + &step(j),
        (None, Some(Point { at, .. })) => at - &step(j + 1),
        (None, Some(CosetEdge { rep, upper: true })) => rep - &step(j),
        (None, Some(CosetEdge { rep, upper: false })) => &(rep - &o) - &step(j),
        (None, Some(CutEdge { scale, shift })) => &near_cut(scale, shift, false) - &step(j),
        (Some(Point { at: p, .. }), Some(Point { at: q, .. })) => {
            let t = ratio(j as i64 + 1, k as i64 + 2);
            p + &(q - p).scale(&t)
        }
        (Some(Point { at, .. }), Some(_)) => at + &step(j + 1),
        (Some(_), Some(Point { at, .. })) => at - &step(j + 1),
        (Some(CosetEdge { rep, upper: false }), Some(CosetEdge { .. } | CutEdge { .. })) => rep + &step(j),
        (Some(CosetEdge { upper: true, .. }), Some(CosetEdge { rep: q, upper: true })) => q - &step(j),
        (Some(CosetEdge { rep: p, upper: true }), Some(CosetEdge { rep: q, upper: false })) => {
            &(p + q).scale(&ratio(1, 2)) + &step(j)
        }
        (Some(CutEdge { .. }), Some(CosetEdge { rep, upper: true })) => rep - &step(j),
        (Some(CosetEdge { upper: true, .. }), Some(CutEdge { .. }))
        | (Some(CutEdge { .. }), Some(CosetEdge { upper: false, .. }))
        | (Some(CutEdge { .. }), Some(CutEdge { .. })) => return None,
    })
}
