//! Independent truth oracle by coordinate decomposition.
//!
//! Every variable ranging over `Q^n` is split into `n` rational coordinates.
//! Since addition is componentwise and the order lexicographic, each atom
//! becomes a boolean combination of linear constraints over `Q`, with at
//! most one irrational constant `theta` taken from the threshold. Each
//! rational coordinate is then eliminated by its own Fourier-Motzkin step.
//! Nothing here is shared with the elimination procedures it checks.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::cell::Cell;
use core::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::eval::{Assignment, EvalError};
use super::irrational::{Irrational, DEFAULT_BUDGET_BITS};
use super::{Entry, ModelDescriptor, UInterp};
use crate::rational::Rational;
use crate::syntax::{AtomKind, Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("coordinate DNF exceeds {0} clauses")]
    Budget(usize),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// `a + b * theta`
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
struct Scalar {
    a: Rational,
    b: Rational,
}

impl Scalar {
    fn rat(a: Rational) -> Self {
        Scalar { a, b: Rational::zero() }
    }

    fn add(&self, o: &Scalar) -> Scalar {
        Scalar { a: &self.a + &o.a, b: &self.b + &o.b }
    }

    fn scale(&self, c: &Rational) -> Scalar {
        Scalar { a: &self.a * c, b: &self.b * c }
    }
}

/// `sum coeffs[i] * x_i + c`
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
struct Lin {
    coeffs: BTreeMap<u32, Rational>,
    c: Scalar,
}

impl Lin {
    fn add(&self, o: &Lin) -> Lin {
        let mut out = self.clone();
        for (k, v) in &o.coeffs {
            let s = out.coeffs.get(k).cloned().unwrap_or_else(Rational::zero) + v;
            if s.is_zero() {
                out.coeffs.remove(k);
            } else {
                out.coeffs.insert(*k, s);
            }
        }
        out.c = out.c.add(&o.c);
        out
    }

    fn scale(&self, c: &Rational) -> Lin {
        if c.is_zero() {
            return Lin::default();
        }
        Lin { coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect(), c: self.c.scale(c) }
    }

    fn neg(&self) -> Lin {
        self.scale(&-Rational::one())
    }

    fn sub(&self, o: &Lin) -> Lin {
        self.add(&o.neg())
    }

    fn constant(c: Scalar) -> Lin {
        Lin { coeffs: BTreeMap::new(), c }
    }

    fn split(&self, x: u32) -> (Rational, Lin) {
        let mut rest = self.clone();
        let c = rest.coeffs.remove(&x).unwrap_or_else(Rational::zero);
        (c, rest)
    }

    /// Replaces `x` by `t`.
    fn substitute(&self, x: u32, t: &Lin) -> Lin {
        let (c, rest) = self.split(x);
        if c.is_zero() {
            rest
        } else {
            rest.add(&t.scale(&c))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Rel {
    Lt,
    Le,
    Eq,
    Ne,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Lit {
    rel: Rel,
    lin: Lin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Node {
    Const(bool),
    Lit(Lit),
    And(Vec<Node>),
    Or(Vec<Node>),
}

fn and(parts: Vec<Node>) -> Node {
    let mut out = Vec::new();
    for p in parts {
        match p {
            Node::Const(true) => {}
            Node::Const(false) => return Node::Const(false),
            Node::And(inner) => out.extend(inner),
            other => out.push(other),
        }
    }
    match out.len() {
        0 => Node::Const(true),
        1 => out.pop().unwrap(),
        _ => Node::And(out),
    }
}

fn or(parts: Vec<Node>) -> Node {
    let mut out = Vec::new();
    for p in parts {
        match p {
            Node::Const(false) => {}
            Node::Const(true) => return Node::Const(true),
            Node::Or(inner) => out.extend(inner),
            other => out.push(other),
        }
    }
    match out.len() {
        0 => Node::Const(false),
        1 => out.pop().unwrap(),
        _ => Node::Or(out),
    }
}

fn mentions(n: &Node, x: u32) -> bool {
    match n {
        Node::Const(_) => false,
        Node::Lit(l) => l.lin.coeffs.contains_key(&x),
        Node::And(ps) | Node::Or(ps) => ps.iter().any(|p| mentions(p, x)),
    }
}

fn negate(n: Node) -> Node {
    match n {
        Node::Const(b) => Node::Const(!b),
        Node::Lit(l) => Node::Lit(negate_lit(l)),
        Node::And(ps) => or(ps.into_iter().map(negate).collect()),
        Node::Or(ps) => and(ps.into_iter().map(negate).collect()),
    }
}

fn negate_lit(l: Lit) -> Lit {
    match l.rel {
        Rel::Lt => Lit { rel: Rel::Le, lin: l.lin.neg() },
        Rel::Le => Lit { rel: Rel::Lt, lin: l.lin.neg() },
        Rel::Eq => Lit { rel: Rel::Ne, lin: l.lin },
        Rel::Ne => Lit { rel: Rel::Eq, lin: l.lin },
    }
}

struct Compiler<'m> {
    m: &'m ModelDescriptor,
    theta: Option<Irrational>,
    next_id: u32,
    /// Coordinates of each variable in scope (innermost binding last).
    scope: BTreeMap<String, Vec<Vec<u32>>>,
    cap: usize,
    /// Clause combinations left before giving up, shared by the whole
    /// compilation: products that mostly cancel can take long without ever
    /// exceeding `cap`.
    work: Cell<usize>,
}

/// Clause combinations allowed per unit of the clause cap.
const WORK_PER_CLAUSE: usize = 8;

impl Compiler<'_> {
    fn charge(&self, n: usize) -> Result<(), OracleError> {
        let left = self.work.get().checked_sub(n).ok_or(OracleError::Budget(self.cap))?;
        self.work.set(left);
        Ok(())
    }

    fn sign(&self, s: &Scalar) -> Ordering {
        if s.b.is_zero() {
            return s.a.cmp(&Rational::zero());
        }
        let theta = self.theta.as_ref().expect("theta part without an irrational threshold");
        theta.sign_of_affine(&s.b, &s.a, DEFAULT_BUDGET_BITS).expect("irrational oracle refinement exhausted").0
    }

    /// Builds a literal, deciding constants and using that no rational
    /// point makes a theta-dependent form vanish.
    fn lit(&self, rel: Rel, lin: Lin) -> Node {
        if lin.coeffs.is_empty() {
            let s = self.sign(&lin.c);
            return Node::Const(match rel {
                Rel::Lt => s == Ordering::Less,
                Rel::Le => s != Ordering::Greater,
                Rel::Eq => s == Ordering::Equal,
                Rel::Ne => s != Ordering::Equal,
            });
        }
        let irrational = !lin.c.b.is_zero();
        let rel = match (rel, irrational) {
            (Rel::Eq, true) => return Node::Const(false),
            (Rel::Ne, true) => return Node::Const(true),
            (Rel::Le, true) => Rel::Lt,
            (r, _) => r,
        };
        let lead = lin.coeffs.values().next().unwrap().clone();
        let factor = match rel {
            Rel::Lt | Rel::Le => lead.abs().recip(),
            Rel::Eq | Rel::Ne => lead.recip(),
        };
        Node::Lit(Lit { rel, lin: lin.scale(&factor) })
    }

    fn coords_of(&self, v: &str) -> Option<&Vec<u32>> {
        self.scope.get(v).and_then(|s| s.last())
    }

    fn fresh(&mut self, v: &str) -> Vec<u32> {
        let ids: Vec<u32> = (0..self.m.dim() as u32).map(|i| self.next_id + i).collect();
        self.next_id += self.m.dim() as u32;
        self.scope.entry(v.into()).or_default().push(ids.clone());
        ids
    }

    fn pop(&mut self, v: &str) {
        if let Some(s) = self.scope.get_mut(v) {
            s.pop();
        }
    }

    fn term(&mut self, t: &Term) -> Vec<Lin> {
        let n = self.m.dim();
        let unit = self.m.unit();
        (0..n)
            .map(|i| {
                let c = t.offset() * &unit.0[i]
                    + t.e_in_coeff() * &self.m.e_in().0[i]
                    + t.e_out_coeff() * &self.m.e_out().0[i];
                let mut lin = Lin::constant(Scalar::rat(c));
                for (v, k) in t.coeffs() {
                    let id = match self.coords_of(v) {
                        Some(ids) => ids[i],
                        None => self.fresh(v)[i],
                    };
                    lin = lin.add(&Lin { coeffs: [(id, k.clone())].into(), c: Scalar::default() });
                }
                lin
            })
            .collect()
    }

    /// `t < 0` lexicographically.
    fn lex_negative(&self, t: &[Lin]) -> Node {
        let mut branches = Vec::new();
        let mut prefix = Vec::new();
        for ti in t {
            branches.push(and(prefix.iter().cloned().chain([self.lit(Rel::Lt, ti.clone())]).collect()));
            prefix.push(self.lit(Rel::Eq, ti.clone()));
        }
        or(branches)
    }

    fn all_zero(&self, t: &[Lin]) -> Node {
        and(t.iter().map(|ti| self.lit(Rel::Eq, ti.clone())).collect())
    }

    /// `t` lies in the downward cut with this threshold.
    fn in_cut(&self, t: &[Lin], threshold: &[Entry], strict: bool) -> Node {
        let mut branches = Vec::new();
        let mut prefix = Vec::new();
        for (ti, e) in t.iter().zip(threshold) {
            match e {
                Entry::Rational(r) => {
                    let d = ti.sub(&Lin::constant(Scalar::rat(r.clone())));
                    branches.push(and(prefix.iter().cloned().chain([self.lit(Rel::Lt, d.clone())]).collect()));
                    prefix.push(self.lit(Rel::Eq, d));
                }
                Entry::Irrational(_) => {
                    let d = ti.sub(&Lin::constant(Scalar { a: Rational::zero(), b: Rational::one() }));
                    branches.push(and(prefix.iter().cloned().chain([self.lit(Rel::Lt, d)]).collect()));
                    return or(branches);
                }
                Entry::PlusInf => {
                    branches.push(and(prefix));
                    return or(branches);
                }
                Entry::MinusInf => return or(branches),
            }
        }
        if !strict {
            branches.push(and(prefix));
        }
        or(branches)
    }

    fn atom(&mut self, kind: AtomKind, arg: &Term) -> Node {
        let t = self.term(arg);
        match kind {
            AtomKind::Lt => self.lex_negative(&t),
            AtomKind::Le => or([self.lex_negative(&t), self.all_zero(&t)].into()),
            AtomKind::Eq => self.all_zero(&t),
            AtomKind::Ne => negate(self.all_zero(&t)),
            AtomKind::InI => {
                let k = self.m.stabilizer_level();
                self.all_zero(&t[..k])
            }
            AtomKind::InU => match self.m.u() {
                UInterp::Subgroup { level } => self.all_zero(&t[..*level]),
                UInterp::DownwardCut { threshold, strict } => self.in_cut(&t, threshold, *strict),
                UInterp::Symmetric { threshold, strict } => {
                    let neg: Vec<Lin> = t.iter().map(Lin::neg).collect();
                    and([self.in_cut(&t, threshold, *strict), self.in_cut(&neg, threshold, *strict)].into())
                }
            },
        }
    }

    fn formula(&mut self, f: &Formula) -> Result<Node, OracleError> {
        Ok(match f {
            Formula::True => Node::Const(true),
            Formula::False => Node::Const(false),
            Formula::Atom(a) => self.atom(a.kind, &a.arg),
            Formula::Not(g) => negate(self.formula(g)?),
            Formula::And(gs) => and(gs.iter().map(|g| self.formula(g)).collect::<Result<_, _>>()?),
            Formula::Or(gs) => or(gs.iter().map(|g| self.formula(g)).collect::<Result<_, _>>()?),
            Formula::Implies(a, b) => or([negate(self.formula(a)?), self.formula(b)?].into()),
            Formula::Exists(v, body) => {
                let ids = self.fresh(v);
                let inner = self.formula(body)?;
                self.pop(v);
                self.exists(&ids, inner)?
            }
            Formula::Forall(v, body) => {
                let ids = self.fresh(v);
                let inner = self.formula(body)?;
                self.pop(v);
                negate(self.exists(&ids, negate(inner))?)
            }
        })
    }

    fn dnf(&self, n: &Node) -> Result<Vec<Vec<Lit>>, OracleError> {
        Ok(match n {
            Node::Const(true) => alloc::vec![Vec::new()],
            Node::Const(false) => Vec::new(),
            Node::Lit(l) => alloc::vec![alloc::vec![l.clone()]],
            Node::Or(ps) => {
                let mut out = Vec::new();
                for p in ps {
                    out.extend(self.dnf(p)?);
                    if out.len() > self.cap {
                        return Err(OracleError::Budget(self.cap));
                    }
                }
                out
            }
            Node::And(ps) => {
                let mut acc = alloc::vec![Vec::new()];
                for p in ps {
                    let rhs = self.dnf(p)?;
                    let mut next = BTreeSet::new();
                    self.charge(acc.len() * rhs.len())?;
                    for l in &acc {
                        for r in &rhs {
                            let merged: Vec<Lit> = l.iter().chain(r).cloned().collect();
                            if let Some(c) = self.normalize_clause(merged) {
                                next.insert(c);
                                if next.len() > self.cap {
                                    return Err(OracleError::Budget(self.cap));
                                }
                            }
                        }
                    }
                    acc = next.into_iter().collect();
                }
                acc
            }
        })
    }

    /// Solves equalities into the other literals (pivoting on the highest
    /// coordinate) and checks bounds on equal linear parts. `None` if the
    /// clause is contradictory.
    fn normalize_clause(&self, mut lits: Vec<Lit>) -> Option<Vec<Lit>> {
        let mut i = 0;
        while i < lits.len() {
            if lits[i].rel == Rel::Eq {
                let pivot = *lits[i].lin.coeffs.keys().next_back().expect("constant equality");
                let (c, rest) = lits[i].lin.split(pivot);
                let value = rest.scale(&-c.recip());
                let mut j = 0;
                while j < lits.len() {
                    if j != i && lits[j].lin.coeffs.contains_key(&pivot) {
                        let sub = lits[j].lin.substitute(pivot, &value);
                        match self.lit(lits[j].rel, sub) {
                            Node::Const(true) => {
                                lits.remove(j);
                                if j < i {
                                    i -= 1;
                                }
                                continue;
                            }
                            Node::Const(false) => return None,
                            Node::Lit(l) => lits[j] = l,
                            _ => unreachable!(),
                        }
                    }
                    j += 1;
                }
            }
            i += 1;
        }
        lits.sort();
        lits.dedup();
        self.prune(lits)
    }

    fn exists(&self, ids: &[u32], body: Node) -> Result<Node, OracleError> {
        let mut node = body;
        for &x in ids {
            node = self.exists_one(x, node)?;
        }
        Ok(node)
    }

    /// `E x. n`, pushing the quantifier through disjunctions and past
    /// conjuncts without `x` before expanding anything.
    fn exists_one(&self, x: u32, n: Node) -> Result<Node, OracleError> {
        if !mentions(&n, x) {
            return Ok(n);
        }
        Ok(match n {
            Node::Lit(l) => self.clauses(self.eliminate(alloc::vec![l], x)),
            Node::Or(ps) => {
                self.charge(ps.len())?;
                or(ps.into_iter().map(|p| self.exists_one(x, p)).collect::<Result<_, _>>()?)
            }
            Node::And(ps) => {
                let (mut with, without): (Vec<Node>, Vec<Node>) = ps.into_iter().partition(|p| mentions(p, x));
                let inner = if with.len() == 1 {
                    self.exists_one(x, with.pop().unwrap())?
                } else {
                    let mut out = Vec::new();
                    for c in self.dnf(&Node::And(with))? {
                        self.charge(1)?;
                        out.extend(self.eliminate(c, x));
                    }
                    self.clauses(out)
                };
                and(without.into_iter().chain([inner]).collect())
            }
            Node::Const(_) => unreachable!(),
        })
    }

    fn clauses(&self, cs: Vec<Vec<Lit>>) -> Node {
        or(cs.into_iter().map(|c| and(c.into_iter().map(Node::Lit).collect())).collect())
    }

    /// Eliminates `x` from a conjunction; disequalities on `x` split the clause.
    fn eliminate(&self, clause: Vec<Lit>, x: u32) -> Vec<Vec<Lit>> {
        // Equality on x: substitute.
        if let Some(pos) = clause.iter().position(|l| l.rel == Rel::Eq && l.lin.coeffs.contains_key(&x)) {
            let (c, rest) = clause[pos].lin.split(x);
            let value = rest.scale(&-c.recip());
            let mut out = Vec::new();
            for (i, l) in clause.iter().enumerate() {
                if i == pos {
                    continue;
                }
                match self.lit(l.rel, l.lin.substitute(x, &value)) {
                    Node::Const(true) => {}
                    Node::Const(false) => return Vec::new(),
                    Node::Lit(l) => out.push(l),
                    _ => unreachable!(),
                }
            }
            return self.normalize_clause(out).into_iter().collect();
        }
        // A disequality on x splits into two strict bounds.
        if let Some(pos) = clause.iter().position(|l| l.rel == Rel::Ne && l.lin.coeffs.contains_key(&x)) {
            let lin = clause[pos].lin.clone();
            let mut out = Vec::new();
            for side in [lin.clone(), lin.neg()] {
                let mut c = clause.clone();
                c[pos] = Lit { rel: Rel::Lt, lin: side };
                out.extend(self.eliminate(c, x));
            }
            return out;
        }
        let mut lowers: Vec<(Lin, bool)> = Vec::new();
        let mut uppers: Vec<(Lin, bool)> = Vec::new();
        let mut rest: Vec<Lit> = Vec::new();
        for l in clause {
            let (c, r) = l.lin.split(x);
            if c.is_zero() {
                rest.push(l);
                continue;
            }
            // c x + r < 0: x < -r/c if c > 0, x > -r/c if c < 0
            let bound = r.scale(&-c.recip());
            let strict = l.rel == Rel::Lt;
            if c.is_positive() {
                uppers.push((bound, strict));
            } else {
                lowers.push((bound, strict));
            }
        }
        for (lo, s1) in &lowers {
            for (hi, s2) in &uppers {
                let rel = if *s1 || *s2 { Rel::Lt } else { Rel::Le };
                match self.lit(rel, lo.sub(hi)) {
                    Node::Const(true) => {}
                    Node::Const(false) => return Vec::new(),
                    Node::Lit(l) => rest.push(l),
                    _ => unreachable!(),
                }
            }
        }
        rest.sort();
        rest.dedup();
        self.prune(rest).into_iter().collect()
    }

    /// Keeps the tightest upper and lower bound for each linear part and
    /// detects empty ranges. Order literals are stored scaled to a leading
    /// coefficient of `+1` or `-1`; both signs share the key `L` (lead `+1`).
    fn prune(&self, lits: Vec<Lit>) -> Option<Vec<Lit>> {
        // key -> (upper: L < / <= u, lower: L > / >= l) with constants
        type Bound = Option<(Scalar, bool)>;
        let mut ranges: BTreeMap<BTreeMap<u32, Rational>, (Bound, Bound)> = BTreeMap::new();
        let mut others = Vec::new();
        for l in lits {
            if !matches!(l.rel, Rel::Lt | Rel::Le) {
                others.push(l);
                continue;
            }
            let strict = l.rel == Rel::Lt;
            let lead_positive = l.lin.coeffs.values().next().is_some_and(Signed::is_positive);
            let (key, bound_is_upper, value) = if lead_positive {
                // L + c < 0: L < -c
                (l.lin.coeffs.clone(), true, l.lin.c.scale(&-Rational::one()))
            } else {
                // -L + c < 0: L > c
                let key = l.lin.coeffs.iter().map(|(k, v)| (*k, -v)).collect();
                (key, false, l.lin.c.clone())
            };
            let entry = ranges.entry(key).or_insert((None, None));
            let slot = if bound_is_upper { &mut entry.0 } else { &mut entry.1 };
            let replace = match slot {
                None => true,
                Some((old, old_strict)) => {
                    let diff = value.add(&old.scale(&-Rational::one()));
                    match self.sign(&diff) {
                        Ordering::Less => bound_is_upper,
                        Ordering::Greater => !bound_is_upper,
                        Ordering::Equal => strict && !*old_strict,
                    }
                }
            };
            if replace {
                *slot = Some((value, strict));
            }
        }
        for (key, (upper, lower)) in ranges {
            if let (Some((u, su)), Some((l, sl))) = (&upper, &lower) {
                match self.sign(&u.add(&l.scale(&-Rational::one()))) {
                    Ordering::Less => return None,
                    Ordering::Equal if *su || *sl => return None,
                    _ => {}
                }
            }
            if let Some((u, strict)) = upper {
                let lin = Lin { coeffs: key.clone(), c: u.scale(&-Rational::one()) };
                others.push(Lit { rel: if strict { Rel::Lt } else { Rel::Le }, lin });
            }
            if let Some((l, strict)) = lower {
                let lin = Lin { coeffs: key.iter().map(|(k, v)| (*k, -v)).collect(), c: l };
                others.push(Lit { rel: if strict { Rel::Lt } else { Rel::Le }, lin });
            }
        }
        others.sort();
        Some(others)
    }
}

/// A formula compiled to a quantifier-free condition on the coordinates of
/// its free variables; evaluate it at many assignments.
pub struct TruthOracle {
    node: Node,
    free: BTreeMap<u32, (String, usize)>,
    theta: Option<Irrational>,
}

/// Default clause cap for the coordinate DNF.
pub const ORACLE_CLAUSE_CAP: usize = 20_000;

impl TruthOracle {
    pub fn compile(m: &ModelDescriptor, f: &Formula) -> Result<Self, OracleError> {
        Self::compile_with_cap(m, f, ORACLE_CLAUSE_CAP)
    }

    pub fn compile_with_cap(m: &ModelDescriptor, f: &Formula, cap: usize) -> Result<Self, OracleError> {
        let theta = m.threshold().and_then(|(t, _)| {
            t.iter().find_map(|e| match e {
                Entry::Irrational(i) => Some(i.clone()),
                _ => None,
            })
        });
        let work = Cell::new(cap.saturating_mul(WORK_PER_CLAUSE));
        let mut c = Compiler { m, theta: theta.clone(), next_id: 0, scope: BTreeMap::new(), cap, work };
        let mut free = BTreeMap::new();
        for v in f.free_vars() {
            let ids = c.fresh(&v);
            for (i, id) in ids.into_iter().enumerate() {
                free.insert(id, (v.clone(), i));
            }
        }
        let node = c.formula(f)?;
        Ok(TruthOracle { node, free, theta })
    }

    pub fn eval(&self, asgn: &Assignment) -> Result<bool, EvalError> {
        let mut values: BTreeMap<u32, &Rational> = BTreeMap::new();
        for (id, (v, i)) in &self.free {
            let p = asgn.get(v).ok_or_else(|| EvalError::Unassigned(v.clone()))?;
            values.insert(*id, p.0.get(*i).ok_or(EvalError::DimensionMismatch)?);
        }
        self.eval_node(&self.node, &values)
    }

    fn eval_node(&self, n: &Node, values: &BTreeMap<u32, &Rational>) -> Result<bool, EvalError> {
        Ok(match n {
            Node::Const(b) => *b,
            Node::Lit(l) => {
                let mut a = l.lin.c.a.clone();
                for (id, c) in &l.lin.coeffs {
                    a += c * *values.get(id).ok_or(EvalError::DimensionMismatch)?;
                }
                let s = if l.lin.c.b.is_zero() {
                    a.cmp(&Rational::zero())
                } else {
                    self.theta
                        .as_ref()
                        .expect("theta")
                        .sign_of_affine(&l.lin.c.b, &a, DEFAULT_BUDGET_BITS)
                        .ok_or(EvalError::PrecisionExhausted)?
                        .0
                };
                match l.rel {
                    Rel::Lt => s == Ordering::Less,
                    Rel::Le => s != Ordering::Greater,
                    Rel::Eq => s == Ordering::Equal,
                    Rel::Ne => s != Ordering::Equal,
                }
            }
            Node::And(ps) => {
                for p in ps {
                    if !self.eval_node(p, values)? {
                        return Ok(false);
                    }
                }
                true
            }
            Node::Or(ps) => {
                for p in ps {
                    if self.eval_node(p, values)? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }

    /// Number of literal occurrences in the compiled condition.
    pub fn size(&self) -> usize {
        fn go(n: &Node) -> usize {
            match n {
                Node::Const(_) => 1,
                Node::Lit(_) => 1,
                Node::And(ps) | Node::Or(ps) => ps.iter().map(go).sum(),
            }
        }
        go(&self.node)
    }
}

/// Truth of `f` (quantifiers allowed) under `asgn`.
pub fn oracle_truth(m: &ModelDescriptor, f: &Formula, asgn: &Assignment) -> Result<bool, OracleError> {
    Ok(TruthOracle::compile(m, f)?.eval(asgn)?)
}
