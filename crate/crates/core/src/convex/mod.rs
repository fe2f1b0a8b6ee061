//! Quantifier elimination with `U` and its stabilizer `I`, and Skolem
//! witnesses for the valuational case.
//!
//! Every literal mentioning the eliminated variable `v` confines it to one
//! side of an [`Endpoint`]: a point, an edge of an `I`-coset, or (when `U`
//! is a cut whose image in the quotient by `I` is irrational) a rational
//! multiple of the edge of `U` shifted by a term. Satisfiability is the
//! pairwise order of lower against upper endpoints, which compiles to a
//! quantifier-free condition.

mod resistance;
mod skolem;

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

pub use resistance::{check_resistance, Resistance};
pub use skolem::{skolemize, skolemize_with, SkolemCase, SkolemDefinition, SkolemError};

use crate::model::{deciding_index, eval_formula, Entry, ModelDescriptor, UInterp, DEFAULT_BUDGET_BITS};
use crate::qe::{eliminate_all, Budget, Eliminator, QeError};
use crate::qe::{solve, Solved};
use crate::rational::{int, Rational};
use crate::syntax::{decide_atom, simplify_with, substitute, Atom, AtomKind, Formula, Literal, Term};

/// The shape of `U` as far as elimination is concerned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelClass {
    /// `U` is a convex subgroup and equals `I`.
    Subgroup,
    /// `U` is a union of `I`-cosets with a top coset `top * 1 + I`:
    /// `U(z) <-> z < top or I(z - top)` when `closed`, and
    /// `U(z) <-> z < top and ~I(z - top)` otherwise. With `symmetric`, `U` is
    /// the symmetric part `{z : z in C and -z in C}` of that cut `C`.
    Coset { top: Rational, closed: bool, symmetric: bool },
    /// `U` is a downward cut whose image modulo `I` is an irrational cut;
    /// `inside * 1` lies in `U` and `outside * 1` above it.
    IrrationalQuotient { inside: Rational, outside: Rational },
}

impl ModelClass {
    /// Classifies `m`, refusing interpretations without a complete
    /// elimination.
    pub fn of(m: &ModelDescriptor) -> Result<Self, QeError> {
        let (threshold, symmetric) = match m.u() {
            UInterp::Subgroup { .. } => return Ok(ModelClass::Subgroup),
            UInterp::DownwardCut { threshold, .. } => (threshold, false),
            UInterp::Symmetric { threshold, .. } => (threshold, true),
        };
        let Some(j) = deciding_index(threshold) else {
            return Err(QeError::NonvaluationalInterpretation);
        };
        match &threshold[j] {
            Entry::Irrational(_) if j + 1 == threshold.len() => Err(QeError::NonvaluationalInterpretation),
            Entry::Irrational(_) if symmetric => {
                Err(QeError::UnsupportedCut("symmetric part of an irrational quotient cut"))
            }
            Entry::Irrational(irr) => {
                let (inside, outside) = match &threshold[0] {
                    Entry::Rational(q) => (q - int(1), q + int(1)),
                    _ => {
                        let iv = irr.refine(crate::model::START_BITS);
                        (iv.lo.floor() - int(1), iv.hi.ceil() + int(1))
                    }
                };
                Ok(ModelClass::IrrationalQuotient { inside, outside })
            }
            inf => {
                let prefix: Vec<&Rational> = threshold[..j]
                    .iter()
                    .map(|e| match e {
                        Entry::Rational(q) => q,
                        _ => unreachable!("prefix before the deciding index is rational"),
                    })
                    .collect();
                if prefix.iter().skip(1).any(|q| !q.is_zero()) {
                    return Err(QeError::UnsupportedCut("top coset must be a rational multiple of the unit"));
                }
                Ok(ModelClass::Coset { top: prefix[0].clone(), closed: *inf == Entry::PlusInf, symmetric })
            }
        }
    }

    /// Rewrites `U` atoms into `I` and order atoms where possible.
    fn rewrite_u(&self, f: &Formula) -> Formula {
        match self {
            ModelClass::Subgroup => f.map_atoms(&mut |a| match a.kind {
                AtomKind::InU => Formula::Atom(Atom::in_i(a.arg.clone())),
                _ => Formula::Atom(a.clone()),
            }),
            ModelClass::Coset { top, closed, symmetric } => f.map_atoms(&mut |a| match a.kind {
                AtomKind::InU => {
                    let t = Term::constant(top.clone());
                    let below = coset_edge(&a.arg, &t, *closed);
                    if *symmetric {
                        Formula::and([below, coset_edge(&-&a.arg, &t, *closed)])
                    } else {
                        below
                    }
                }
                _ => Formula::Atom(a.clone()),
            }),
            ModelClass::IrrationalQuotient { .. } => f.clone(),
        }
    }

    /// Reverses [`Self::rewrite_u`] where it is purely notational.
    fn present(&self, f: &Formula) -> Formula {
        match self {
            ModelClass::Subgroup => f.map_atoms(&mut |a| match a.kind {
                AtomKind::InI => Formula::Atom(Atom::in_u(a.arg.clone())),
                _ => Formula::Atom(a.clone()),
            }),
            _ => f.clone(),
        }
    }

    /// Decides atoms whose truth is the same in every model of the class.
    pub fn decide(&self, a: &Atom) -> Option<bool> {
        if let Some(b) = decide_atom(a) {
            return Some(b);
        }
        if !a.arg.is_closed() {
            return None;
        }
        let q = a.arg.offset();
        let e_in = a.arg.e_in_coeff();
        let e_out = a.arg.e_out_coeff();
        // 0 < e_in in I, e_out > I, and 1 lies outside I; I is convex.
        match a.kind {
            AtomKind::InI if e_out.is_zero() => Some(q.is_zero()),
            // b * e_out + a * e_in lies outside the subgroup I when b != 0.
            AtomKind::InI if q.is_zero() => Some(false),
            AtomKind::InU if matches!(self, ModelClass::Subgroup) && e_out.is_zero() => Some(q.is_zero()),
            AtomKind::InU => match self {
                ModelClass::IrrationalQuotient { inside, outside } if e_out.is_zero() => {
                    if q <= inside {
                        Some(true)
                    } else if q >= outside {
                        Some(false)
                    } else {
                        None
                    }
                }
                _ => None,
            },
            AtomKind::Lt | AtomKind::Le | AtomKind::Eq | AtomKind::Ne => {
                let s = closed_sign(q, e_in, e_out)?;
                Some(match a.kind {
                    AtomKind::Lt => s < 0,
                    AtomKind::Le => s <= 0,
                    AtomKind::Eq => s == 0,
                    _ => s != 0,
                })
            }
            _ => None,
        }
    }

    pub fn simplify(&self, f: &Formula) -> Formula {
        simplify_with(f, &|a: &Atom| self.decide(a))
    }

    /// Simplification in the model `m`: closed atoms are evaluated there.
    pub fn simplify_in(&self, m: &ModelDescriptor, f: &Formula) -> Formula {
        simplify_with(f, &|a: &Atom| {
            self.decide(a).or_else(|| {
                let closed = a.arg.is_closed();
                let asgn = crate::model::Assignment::new();
                closed.then(|| eval_formula(m, &Formula::Atom(a.clone()), &asgn, DEFAULT_BUDGET_BITS).ok()).flatten()
            })
        })
    }
}

/// Sign of `q * 1 + a * e_in + b * e_out` when it does not depend on the
/// model.
fn closed_sign(q: &Rational, a: &Rational, b: &Rational) -> Option<i8> {
    let s = |x: &Rational| crate::rational::sign(x);
    if b.is_zero() {
        return Some(if q.is_zero() { s(a) } else { s(q) });
    }
    if q.is_zero() || s(q) == s(b) {
        return Some(s(b));
    }
    None
}

/// `z/I <= t/I` when `closed`, else `z/I < t/I`.
fn coset_edge(z: &Term, t: &Term, closed: bool) -> Formula {
    if closed {
        coset_le(z, t)
    } else {
        coset_lt(z, t)
    }
}

fn lt(a: &Term, b: &Term) -> Formula {
    Formula::Atom(Atom::lt(a, b))
}

fn in_i(t: Term) -> Formula {
    Formula::Atom(Atom::in_i(t))
}

fn in_u(t: Term) -> Formula {
    Formula::Atom(Atom::in_u(t))
}

/// `p/I < q/I`.
pub(crate) fn coset_lt(p: &Term, q: &Term) -> Formula {
    Formula::and([lt(p, q), Formula::not(in_i(p - q))])
}

/// `p/I <= q/I`.
pub(crate) fn coset_le(p: &Term, q: &Term) -> Formula {
    Formula::or([lt(p, q), in_i(p - q)])
}

/// A position in the completion of the model, used as a bound for the
/// eliminated variable: a lower bound `L` means `v > L`, an upper bound `U`
/// means `v < U`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Endpoint {
    /// Just below (`above = false`) or just above the point `at`.
    Point { at: Term, above: bool },
    /// The lower (`upper = false`) or upper edge of the coset `rep + I`.
    CosetEdge { rep: Term, upper: bool },
    /// `scale * sup U + shift`, for `U` with an irrational quotient cut.
    CutEdge { scale: Rational, shift: Term },
}

/// `p/I < scale * c + shift/I`, where `c` is the quotient cut of `U`:
/// `U(z) <-> z/I < c` and `c` is never attained.
fn below_cut_edge(p: &Term, scale: &Rational, shift: &Term) -> Formula {
    let z = (p - shift).scale(&scale.recip());
    if scale.is_positive() {
        in_u(z)
    } else {
        Formula::not(in_u(z))
    }
}

/// The quantifier-free condition `a < b` between endpoints.
pub fn endpoint_less(a: &Endpoint, b: &Endpoint) -> Formula {
    use Endpoint::*;
    match (a, b) {
        (Point { at: p, above: false }, Point { at: q, above: true }) => Formula::Atom(Atom::le(p, q)),
        (Point { at: p, .. }, Point { at: q, .. }) => lt(p, q),
        (Point { at: p, .. }, CosetEdge { rep: q, upper }) => {
            if *upper {
                coset_le(p, q)
            } else {
                coset_lt(p, q)
            }
        }
        (CosetEdge { rep: p, upper }, Point { at: q, .. }) => {
            if *upper {
                coset_lt(p, q)
            } else {
                coset_le(p, q)
            }
        }
        (CosetEdge { rep: p, upper: a_up }, CosetEdge { rep: q, upper: b_up }) => {
            if !a_up && *b_up {
                coset_le(p, q)
            } else {
                coset_lt(p, q)
            }
        }
        (Point { at: p, .. } | CosetEdge { rep: p, .. }, CutEdge { scale, shift }) => below_cut_edge(p, scale, shift),
        (CutEdge { scale, shift }, Point { at: q, .. } | CosetEdge { rep: q, .. }) => {
            Formula::not(below_cut_edge(q, scale, shift))
        }
        (CutEdge { scale: s1, shift: r1 }, CutEdge { scale: s2, shift: r2 }) => {
            // s1*c + r1 < s2*c + r2  <->  (s1 - s2)*c < r2 - r1
            let d = s1 - s2;
            if d.is_zero() {
                coset_lt(r1, r2)
            } else {
                Formula::not(below_cut_edge(&(r2 - r1), &d, &Term::zero()))
            }
        }
    }
}

/// Bounds on `v` from one conjunct, after case splits.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Region {
    pub lowers: Vec<Endpoint>,
    pub uppers: Vec<Endpoint>,
}

impl Region {
    pub fn feasibility(&self) -> Formula {
        let mut parts = Vec::new();
        for l in &self.lowers {
            for u in &self.uppers {
                parts.push(endpoint_less(l, u));
            }
        }
        Formula::and(parts)
    }
}

/// A conjunct analysed with respect to the eliminated variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Analysis {
    /// An equality `v = t` pins the variable.
    Pinned(Term),
    /// A closed point bound meets disequalities; the conjunct is replaced by
    /// the two conjuncts with the bound made strict and made an equality.
    Split(Vec<Literal>, Vec<Literal>),
    /// One region per choice of side for each negated `I` literal; every
    /// region is a convex set with at least two points when nonempty, so the
    /// disequalities never empty it.
    Regions { regions: Vec<Region>, disequalities: Vec<Term> },
}

pub(crate) fn analyse(clause: &[Literal], v: &str, class: &ModelClass) -> Result<Analysis, QeError> {
    let solved: Vec<(usize, Solved)> =
        clause.iter().enumerate().filter(|(_, l)| l.atom.arg.has_var(v)).map(|(i, l)| (i, solve(l, v))).collect();
    if let Some((_, Solved::Equal(t))) = solved.iter().find(|(_, s)| matches!(s, Solved::Equal(_))) {
        return Ok(Analysis::Pinned(t.clone()));
    }
    let disequalities: Vec<Term> = solved
        .iter()
        .filter_map(|(_, s)| match s {
            Solved::Unequal(t) => Some(t.clone()),
            _ => None,
        })
        .collect();
    if !disequalities.is_empty() {
        let closed = solved.iter().find(|(_, s)| matches!(s, Solved::Lower(b) | Solved::Upper(b) if !b.strict));
        if let Some((i, _)) = closed {
            // t >= 0  <->  t > 0 | t = 0, with the atom `~(-t < 0)`.
            let lit = &clause[*i];
            let arg = -&lit.atom.arg;
            let (strict, equal) = match lit.atom.kind {
                AtomKind::Lt => (Atom::lt(&arg, &Term::zero()), Atom::eq(&arg, &Term::zero())),
                _ => (Atom::lt(&lit.atom.arg, &Term::zero()), Atom::eq(&lit.atom.arg, &Term::zero())),
            };
            let with = |a: Atom| {
                let mut c = clause.to_vec();
                c[*i] = Literal::pos(a);
                c
            };
            return Ok(Analysis::Split(with(strict), with(equal)));
        }
    }
    let mut regions = vec![Region::default()];
    for (_, s) in solved {
        let mut add = |lower: Option<Endpoint>, upper: Option<Endpoint>| {
            for r in regions.iter_mut() {
                r.lowers.extend(lower.clone());
                r.uppers.extend(upper.clone());
            }
        };
        match s {
            Solved::Lower(b) => add(Some(Endpoint::Point { at: b.term, above: b.strict }), None),
            Solved::Upper(b) => add(None, Some(Endpoint::Point { at: b.term, above: !b.strict })),
            Solved::Unequal(_) => {}
            Solved::Equal(_) => unreachable!("pinned above"),
            Solved::InI { t, positive: true } => add(
                Some(Endpoint::CosetEdge { rep: t.clone(), upper: false }),
                Some(Endpoint::CosetEdge { rep: t, upper: true }),
            ),
            Solved::InI { t, positive: false } => {
                let mut split = Vec::with_capacity(regions.len() * 2);
                for r in regions {
                    let mut above = r.clone();
                    above.lowers.push(Endpoint::CosetEdge { rep: t.clone(), upper: true });
                    let mut below = r;
                    below.uppers.push(Endpoint::CosetEdge { rep: t.clone(), upper: false });
                    split.push(above);
                    split.push(below);
                }
                regions = split;
            }
            Solved::InU { coeff, rest, positive } => {
                if !matches!(class, ModelClass::IrrationalQuotient { .. }) {
                    return Err(QeError::UnexpectedPredicate("U"));
                }
                // U(c*v + r) <-> (c*v + r)/I < c*  <->  v/I vs c*/c - (r/c)/I.
                let scale = coeff.recip();
                let shift = rest.scale(&-&scale);
                let e = Endpoint::CutEdge { scale, shift };
                if coeff.is_positive() == positive {
                    add(None, Some(e));
                } else {
                    add(Some(e), None);
                }
            }
        }
    }
    Ok(Analysis::Regions { regions, disequalities })
}

/// A formula free of `v` equivalent to `E v. /\ conjunct` over every model
/// of the class. `U` atoms are only allowed for
/// [`ModelClass::IrrationalQuotient`]; other classes express `U` through `I`.
pub fn eliminate_one_cut(conjunct: &[Literal], v: &str, class: &ModelClass) -> Result<Formula, QeError> {
    let free = Formula::and(conjunct.iter().filter(|l| !l.atom.arg.has_var(v)).map(Literal::to_formula));
    let body = match analyse(conjunct, v, class)? {
        Analysis::Pinned(t) => {
            let all = Formula::and(conjunct.iter().map(Literal::to_formula));
            return Ok(class.simplify(&substitute(&all, v, &t)));
        }
        Analysis::Split(a, b) => Formula::or([eliminate_one_cut(&a, v, class)?, eliminate_one_cut(&b, v, class)?]),
        Analysis::Regions { regions, .. } => Formula::or(regions.iter().map(Region::feasibility)),
    };
    Ok(class.simplify(&Formula::and([free, body])))
}

/// Eliminator for a model class.
#[derive(Clone, Debug)]
pub struct ConvexEliminator {
    pub class: ModelClass,
}

impl Eliminator for ConvexEliminator {
    fn eliminate_clause(&self, clause: &[Literal], v: &str) -> Result<Formula, QeError> {
        eliminate_one_cut(clause, v, &self.class)
    }

    fn simplify(&self, f: &Formula) -> Formula {
        self.class.simplify(f)
    }
}

/// Quantifier elimination in the language with `U`, `I`, `e_in` and
/// `e_out`, valid in every model of the class.
pub fn qe_star(f: &Formula, class: &ModelClass) -> Result<Formula, QeError> {
    qe_star_with(f, class, &Budget::default())
}

pub fn qe_star_with(f: &Formula, class: &ModelClass, budget: &Budget) -> Result<Formula, QeError> {
    qe_star_using(&ConvexEliminator { class: class.clone() }, f, class, budget)
}

/// [`qe_star_with`] driving a caller-supplied eliminator, for differential
/// testing of the driver against modified clause rules.
pub fn qe_star_using<E: Eliminator + ?Sized>(
    e: &E,
    f: &Formula,
    class: &ModelClass,
    budget: &Budget,
) -> Result<Formula, QeError> {
    let out = eliminate_all(e, &class.rewrite_u(f), budget)?;
    Ok(class.present(&out))
}

/// [`qe_star`] for the class of `m`, with closed atoms decided in `m`.
pub fn qe_model(f: &Formula, m: &ModelDescriptor) -> Result<Formula, QeError> {
    qe_model_with(f, m, &Budget::default())
}

pub fn qe_model_with(f: &Formula, m: &ModelDescriptor, budget: &Budget) -> Result<Formula, QeError> {
    let class = ModelClass::of(m)?;
    let out = qe_star_with(f, &class, budget)?;
    Ok(class.simplify_in(m, &out))
}
