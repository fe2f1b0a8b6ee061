//! Atom normalization, negation normal form, DNF and substitution.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use thiserror::Error;

use super::formula::{Atom, AtomKind, Formula, Literal};
use super::parse::fresh_name;
use super::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("DNF exceeds the budget of {cap} clauses")]
pub struct DnfOverflow {
    pub cap: usize,
}

/// Rewrites `<=`, `!=` and `->` into `<`, `=`, `~`, `|`.
pub fn normalize_atoms(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(a) => normalize_atom(a),
        Formula::Not(g) => Formula::not(normalize_atoms(g)),
        Formula::And(gs) => Formula::And(gs.iter().map(normalize_atoms).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(normalize_atoms).collect()),
        Formula::Implies(a, b) => Formula::Or(alloc::vec![Formula::not(normalize_atoms(a)), normalize_atoms(b)]),
        Formula::Exists(v, g) => Formula::exists(v, normalize_atoms(g)),
        Formula::Forall(v, g) => Formula::forall(v, normalize_atoms(g)),
    }
}

fn normalize_atom(a: &Atom) -> Formula {
    match a.kind {
        // t <= 0 iff not (0 < t) iff not (-t < 0)
        AtomKind::Le => Formula::not(Atom::new(AtomKind::Lt, -&a.arg).into()),
        AtomKind::Ne => Formula::not(Atom::new(AtomKind::Eq, a.arg.clone()).into()),
        _ => Formula::Atom(a.clone()),
    }
}

/// Negation normal form of a normalized formula: negations only on atoms.
/// Quantifiers are kept and dualized under negation.
pub fn nnf(f: &Formula) -> Formula {
    nnf_signed(f, true)
}

fn nnf_signed(f: &Formula, positive: bool) -> Formula {
    match f {
        Formula::True => {
            if positive {
                Formula::True
            } else {
                Formula::False
            }
        }
        Formula::False => {
            if positive {
                Formula::False
            } else {
                Formula::True
            }
        }
        Formula::Atom(a) => {
            let a = Formula::Atom(a.clone());
            if positive {
                a
            } else {
                Formula::not(a)
            }
        }
        Formula::Not(g) => nnf_signed(g, !positive),
        Formula::And(gs) | Formula::Or(gs) => {
            let parts = gs.iter().map(|g| nnf_signed(g, positive));
            if matches!(f, Formula::And(_)) == positive {
                Formula::and(parts)
            } else {
                Formula::or(parts)
            }
        }
        Formula::Implies(a, b) => {
            let alt = Formula::Or(alloc::vec![Formula::not((**a).clone()), (**b).clone()]);
            nnf_signed(&alt, positive)
        }
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let body = Box::new(nnf_signed(g, positive));
            if matches!(f, Formula::Exists(..)) == positive {
                Formula::Exists(v.clone(), body)
            } else {
                Formula::Forall(v.clone(), body)
            }
        }
    }
}

/// A disjunction of conjunctions of literals, sorted and deduplicated.
pub type Dnf = Vec<Vec<Literal>>;

/// DNF of a quantifier-free formula. Contradictory clauses (a literal and its
/// negation) are dropped; an empty clause list means `false`.
pub fn dnf_clauses(f: &Formula, cap: usize) -> Result<Dnf, DnfOverflow> {
    let mut names = Interner::default();
    let clauses = tidy(dnf_rec(&nnf(&normalize_atoms(f)), cap, &mut names)?);
    let mut out: Dnf = clauses
        .into_iter()
        .map(|c| {
            let mut c: Vec<Literal> = c.into_iter().map(|id| names.literal(id)).collect();
            c.sort();
            c
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Clauses over interned literals, which compare far more cheaply than
/// terms with rational coefficients.
type Ids = Vec<Vec<u32>>;

/// Atoms numbered as they are met; `2 * i + positive` is a literal on atom `i`.
#[derive(Default)]
struct Interner {
    atoms: Vec<Atom>,
    index: BTreeMap<Atom, u32>,
}

impl Interner {
    fn id(&mut self, a: &Atom, positive: bool) -> u32 {
        let i = match self.index.get(a) {
            Some(&i) => i,
            None => {
                let i = u32::try_from(self.atoms.len()).expect("fewer than 2^31 atoms");
                self.atoms.push(a.clone());
                self.index.insert(a.clone(), i);
                i
            }
        };
        2 * i + u32::from(positive)
    }

    fn literal(&self, id: u32) -> Literal {
        Literal { atom: self.atoms[(id / 2) as usize].clone(), positive: id % 2 == 1 }
    }
}

fn tidy(clauses: Ids) -> Ids {
    let mut set: BTreeSet<Vec<u32>> = BTreeSet::new();
    for mut c in clauses {
        c.sort_unstable();
        c.dedup();
        let contradictory = c.windows(2).any(|w| w[0] / 2 == w[1] / 2);
        if !contradictory {
            set.insert(c);
        }
    }
    // A clause that is a superset of another is redundant. Shorter clauses
    // come first; a kept clause inside `c` has its least literal in `c`.
    let mut all: Ids = set.into_iter().collect();
    all.sort_by_key(Vec::len);
    let mut out: Ids = Vec::new();
    let mut by_least: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for c in all {
        let Some(&least) = c.first() else { return alloc::vec![c] };
        let subsumed = c.iter().any(|l| {
            by_least.get(l).is_some_and(|ds| ds.iter().any(|&i| out[i].iter().all(|x| c.binary_search(x).is_ok())))
        });
        if !subsumed {
            by_least.entry(least).or_default().push(out.len());
            out.push(c);
        }
    }
    out
}

/// The clauses of `l & (r_1 | ... | r_k)`. When some `r_i` is already part
/// of `l`, that product is `l` itself and absorbs the others.
fn product(l: &[u32], rhs: &Ids, out: &mut Ids) {
    if rhs.iter().any(|r| r.iter().all(|x| l.contains(x))) {
        out.push(l.to_vec());
        return;
    }
    for r in rhs {
        out.push(l.iter().chain(r).copied().collect());
    }
}

fn dnf_rec(f: &Formula, cap: usize, names: &mut Interner) -> Result<Ids, DnfOverflow> {
    match f {
        Formula::True => Ok(alloc::vec![Vec::new()]),
        Formula::False => Ok(Vec::new()),
        Formula::Atom(a) => Ok(alloc::vec![alloc::vec![names.id(a, true)]]),
        Formula::Not(g) => match &**g {
            Formula::Atom(a) => Ok(alloc::vec![alloc::vec![names.id(a, false)]]),
            other => dnf_rec(&nnf_signed(other, false), cap, names),
        },
        Formula::Or(gs) => {
            let mut out = Vec::new();
            for g in gs {
                out.extend(dnf_rec(g, cap, names)?);
                if out.len() > cap {
                    return Err(DnfOverflow { cap });
                }
            }
            Ok(out)
        }
        Formula::And(gs) => {
            let mut acc: Ids = alloc::vec![Vec::new()];
            for g in gs {
                let rhs = dnf_rec(g, cap, names)?;
                if acc.len().saturating_mul(rhs.len()) > cap {
                    // Pruning contradictions may still fit; only fail after tidying.
                    let mut next = Vec::new();
                    for l in &acc {
                        product(l, &rhs, &mut next);
                        if next.len() > cap.saturating_mul(4) {
                            return Err(DnfOverflow { cap });
                        }
                    }
                    acc = tidy(next);
                    if acc.len() > cap {
                        return Err(DnfOverflow { cap });
                    }
                } else {
                    let mut next = Vec::with_capacity(acc.len() * rhs.len());
                    for l in &acc {
                        product(l, &rhs, &mut next);
                    }
                    acc = next;
                }
            }
            Ok(acc)
        }
        Formula::Implies(..) | Formula::Exists(..) | Formula::Forall(..) => {
            let n = nnf(&normalize_atoms(f));
            if n.is_quantifier_free() {
                dnf_rec(&n, cap, names)
            } else {
                panic!("dnf of a quantified formula")
            }
        }
    }
}

/// Rebuilds a formula from clauses.
pub fn dnf_to_formula(clauses: &Dnf) -> Formula {
    Formula::or(clauses.iter().map(|c| Formula::and(c.iter().map(Literal::to_formula))))
}

/// DNF as a formula (see [`dnf_clauses`]).
pub fn to_dnf(f: &Formula, cap: usize) -> Result<Formula, DnfOverflow> {
    dnf_clauses(f, cap).map(|c| dnf_to_formula(&c))
}

/// Capture-avoiding substitution of `t` for the free occurrences of `v`.
pub fn substitute(f: &Formula, v: &str, t: &Term) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(a) => Formula::Atom(a.map_term(|arg| arg.substitute(v, t))),
        Formula::Not(g) => Formula::not(substitute(g, v, t)),
        Formula::And(gs) => Formula::And(gs.iter().map(|g| substitute(g, v, t)).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| substitute(g, v, t)).collect()),
        Formula::Implies(a, b) => Formula::implies(substitute(a, v, t), substitute(b, v, t)),
        Formula::Exists(w, body) | Formula::Forall(w, body) => {
            if w == v || !body.free_vars().contains(v) {
                return f.clone();
            }
            let (w, body) = if t.has_var(w) {
                let taken = |n: &str| t.has_var(n) || body.all_vars().contains(n) || n == v;
                let fresh = fresh_name(w, taken);
                let renamed = substitute(body, w, &Term::var(&fresh));
                (fresh, renamed)
            } else {
                (w.clone(), (**body).clone())
            };
            let body = substitute(&body, v, t);
            if matches!(f, Formula::Exists(..)) {
                Formula::exists(&w, body)
            } else {
                Formula::forall(&w, body)
            }
        }
    }
}
