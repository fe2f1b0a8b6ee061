//! Fourier-Motzkin elimination for divisible ordered abelian groups.

use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use super::{eliminate_all, Budget, Eliminator, QeError};
use crate::rational::Rational;
use crate::syntax::{substitute, Atom, AtomKind, Formula, Literal, Term};

/// A one-sided bound `v > term` / `v >= term` (lower) or `v < term` /
/// `v <= term` (upper).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Bound {
    pub term: Term,
    pub strict: bool,
}

/// What a literal says about `v` once solved for it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Solved {
    Lower(Bound),
    Upper(Bound),
    Equal(Term),
    Unequal(Term),
    /// `U(c*v + rest)` or its negation, kept unsolved since `U` is not
    /// closed under scaling.
    InU {
        coeff: Rational,
        rest: Term,
        positive: bool,
    },
    /// `I(v - t)` or its negation.
    InI {
        t: Term,
        positive: bool,
    },
}

/// Solves a literal for `v`; the literal must mention `v`.
pub(crate) fn solve(lit: &Literal, v: &str) -> Solved {
    let (c, rest) = lit.atom.arg.split(v);
    debug_assert!(!c.is_zero());
    let t = rest.scale(&-c.recip());
    let order = |upper: bool, strict: bool| {
        let upper = upper == lit.positive;
        let strict = strict == lit.positive;
        let upper = upper == c.is_positive();
        let b = Bound { term: t.clone(), strict };
        if upper {
            Solved::Upper(b)
        } else {
            Solved::Lower(b)
        }
    };
    match lit.atom.kind {
        AtomKind::Lt => order(true, true),
        AtomKind::Le => order(true, false),
        AtomKind::Eq | AtomKind::Ne => {
            if (lit.atom.kind == AtomKind::Eq) == lit.positive {
                Solved::Equal(t)
            } else {
                Solved::Unequal(t)
            }
        }
        AtomKind::InU => Solved::InU { coeff: c, rest, positive: lit.positive },
        AtomKind::InI => Solved::InI { t, positive: lit.positive },
    }
}

/// The constraints on the eliminated variable, solved for it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoundSet {
    pub lowers: Vec<Bound>,
    pub uppers: Vec<Bound>,
    pub equalities: Vec<Term>,
    pub disequalities: Vec<Term>,
}

impl BoundSet {
    /// Collects the literals mentioning `v`; literals free of `v` are skipped.
    pub fn collect(conjunct: &[Literal], v: &str) -> Result<Self, QeError> {
        let mut set = BoundSet::default();
        for lit in conjunct.iter().filter(|l| l.atom.arg.has_var(v)) {
            match solve(lit, v) {
                Solved::Lower(b) => set.lowers.push(b),
                Solved::Upper(b) => set.uppers.push(b),
                Solved::Equal(t) => set.equalities.push(t),
                Solved::Unequal(t) => set.disequalities.push(t),
                Solved::InU { .. } => return Err(QeError::UnexpectedPredicate("U")),
                Solved::InI { .. } => return Err(QeError::UnexpectedPredicate("I")),
            }
        }
        Ok(set)
    }

    /// The `v`-free condition for the bounds to leave room for `v`.
    fn feasibility(&self) -> Formula {
        let mut parts = Vec::new();
        for l in &self.lowers {
            for u in &self.uppers {
                let gap = if l.strict || u.strict { Atom::lt(&l.term, &u.term) } else { Atom::le(&l.term, &u.term) };
                parts.push(Formula::Atom(gap));
                // Two closed bounds may pin `v` to a single point, which the
                // disequalities must then avoid.
                if !l.strict && !u.strict && !self.disequalities.is_empty() {
                    let pinned = Formula::Atom(Atom::eq(&l.term, &u.term));
                    let avoids = Formula::and(self.disequalities.iter().map(|d| Formula::Atom(Atom::ne(&l.term, d))));
                    parts.push(Formula::implies(pinned, avoids));
                }
            }
        }
        Formula::and(parts)
    }
}

/// A formula free of `v` equivalent to `E v. /\ conjunct` in every divisible
/// ordered abelian group. The conjunct must not mention `U` or `I`.
pub fn eliminate_one(conjunct: &[Literal], v: &str) -> Result<Formula, QeError> {
    let bounds = BoundSet::collect(conjunct, v)?;
    let free = conjunct.iter().filter(|l| !l.atom.arg.has_var(v)).map(Literal::to_formula);
    let out = if let Some(t) = bounds.equalities.first() {
        let all = Formula::and(conjunct.iter().map(Literal::to_formula));
        substitute(&all, v, t)
    } else {
        // Density: an interval with two distinct points is infinite, so
        // finitely many disequalities only matter for a pinned point.
        Formula::and(free.chain([bounds.feasibility()]))
    };
    Ok(crate::syntax::simplify(&out))
}

/// Eliminator for the language without `U` and `I`.
#[derive(Clone, Copy, Debug, Default)]
pub struct DoagEliminator;

impl Eliminator for DoagEliminator {
    fn eliminate_clause(&self, clause: &[Literal], v: &str) -> Result<Formula, QeError> {
        eliminate_one(clause, v)
    }
}

/// Quantifier elimination for formulas without `U` and `I`.
pub fn qe(f: &Formula) -> Result<Formula, QeError> {
    qe_with(f, &Budget::default())
}

pub fn qe_with(f: &Formula, budget: &Budget) -> Result<Formula, QeError> {
    if let Some(a) = f.atoms().into_iter().find(|a| matches!(a.kind, AtomKind::InU | AtomKind::InI)) {
        let name = if a.kind == AtomKind::InU { "U" } else { "I" };
        return Err(QeError::UnexpectedPredicate(name));
    }
    eliminate_all(&DoagEliminator, f, budget)
}
