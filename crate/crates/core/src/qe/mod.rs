//! The quantifier-elimination driver shared by the base and convex
//! eliminators: innermost quantifier first, `A v. f` as `~E v. ~f`, and a
//! DNF split per quantifier.

mod doag;

use alloc::vec::Vec;

use thiserror::Error;

pub use doag::{eliminate_one, qe, qe_with, Bound, BoundSet, DoagEliminator};
pub(crate) use doag::{solve, Solved};

use crate::syntax::{dnf_clauses, normalize_atoms, rename_bound_apart, simplify, DnfOverflow, Formula, Literal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QeError {
    #[error(transparent)]
    Dnf(#[from] DnfOverflow),
    #[error("quantifier depth {depth} exceeds the budget of {cap}")]
    DepthExceeded { depth: usize, cap: usize },
    #[error("predicate {0} is outside the base language")]
    UnexpectedPredicate(&'static str),
    #[error("U has a trivial stabilizer; elimination over a nonvaluational interpretation is refused")]
    NonvaluationalInterpretation,
    #[error("unsupported cut: {0}")]
    UnsupportedCut(&'static str),
}

/// Resource limits for elimination.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of DNF clauses per quantifier.
    pub dnf_clauses: usize,
    /// Maximum quantifier nesting depth of the input.
    pub depth: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self { dnf_clauses: 1 << 14, depth: 8 }
    }
}

/// Eliminates one existential quantifier from a conjunction of literals.
pub trait Eliminator {
    /// A formula free of `v` equivalent to `E v. /\ clause`. Every literal
    /// of `clause` mentions `v`.
    fn eliminate_clause(&self, clause: &[Literal], v: &str) -> Result<Formula, QeError>;

    /// Simplification sound for the models the eliminator targets.
    fn simplify(&self, f: &Formula) -> Formula {
        simplify(f)
    }
}

/// Eliminates every quantifier of `f`.
pub fn eliminate_all<E: Eliminator + ?Sized>(e: &E, f: &Formula, budget: &Budget) -> Result<Formula, QeError> {
    let depth = f.quantifier_depth();
    if depth > budget.depth {
        return Err(QeError::DepthExceeded { depth, cap: budget.depth });
    }
    let f = rename_bound_apart(&normalize_atoms(f));
    let out = eliminate_rec(e, &f, budget)?;
    Ok(e.simplify(&out))
}

fn eliminate_rec<E: Eliminator + ?Sized>(e: &E, f: &Formula, budget: &Budget) -> Result<Formula, QeError> {
    if f.is_quantifier_free() {
        return Ok(f.clone());
    }
    Ok(match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::Not(g) => Formula::not(eliminate_rec(e, g, budget)?),
        Formula::And(gs) => {
            Formula::and(gs.iter().map(|g| eliminate_rec(e, g, budget)).collect::<Result<Vec<_>, _>>()?)
        }
        Formula::Or(gs) => Formula::or(gs.iter().map(|g| eliminate_rec(e, g, budget)).collect::<Result<Vec<_>, _>>()?),
        Formula::Implies(a, b) => {
            Formula::or([Formula::not(eliminate_rec(e, a, budget)?), eliminate_rec(e, b, budget)?])
        }
        Formula::Exists(v, g) => {
            let body = eliminate_rec(e, g, budget)?;
            exists_free(e, v, &body, budget)?
        }
        Formula::Forall(v, g) => {
            let body = Formula::not(eliminate_rec(e, g, budget)?);
            Formula::not(exists_free(e, v, &body, budget)?)
        }
    })
}

/// `E v. body` for a quantifier-free `body`.
pub fn exists_free<E: Eliminator + ?Sized>(
    e: &E,
    v: &str,
    body: &Formula,
    budget: &Budget,
) -> Result<Formula, QeError> {
    let body = e.simplify(body);
    if !body.free_vars().contains(v) {
        return Ok(body);
    }
    let mut parts = Vec::new();
    for clause in dnf_clauses(&body, budget.dnf_clauses)? {
        let (with_v, without): (Vec<Literal>, Vec<Literal>) = clause.into_iter().partition(|l| l.atom.arg.has_var(v));
        let eliminated = e.eliminate_clause(&with_v, v)?;
        let part = e.simplify(&Formula::and(without.iter().map(Literal::to_formula).chain([eliminated])));
        if part == Formula::True {
            return Ok(Formula::True);
        }
        parts.push(part);
    }
    Ok(e.simplify(&Formula::or(parts)))
}
