//! Seeded random generation of terms and formulas for fuzzing and tests.

use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::pl::{Piece, PlBinary, PlUnary};
use crate::rational::{int, ratio, Rational};
use crate::syntax::{Atom, AtomKind, Formula, Term};

#[derive(Debug, Clone)]
pub struct FormulaShape {
    /// Variable pool; free variables are drawn from it and binders reuse it.
    pub vars: Vec<String>,
    pub max_quantifier_depth: usize,
    /// Maximum nesting of connectives below each quantifier.
    pub max_connective_depth: usize,
    pub coefficients: Vec<Rational>,
    pub allow_u: bool,
    pub allow_i: bool,
    pub allow_constants: bool,
    /// Also produce the sugar forms `<=`, `!=` and `->`.
    pub sugar: bool,
}

impl Default for FormulaShape {
    fn default() -> Self {
        Self {
            vars: ["x", "y", "z"].iter().map(|s| String::from(*s)).collect(),
            max_quantifier_depth: 2,
            max_connective_depth: 2,
            coefficients: default_coefficients(),
            allow_u: true,
            allow_i: false,
            allow_constants: true,
            sugar: true,
        }
    }
}

/// `{±1, ±2, ±3, ±1/2}`
pub fn default_coefficients() -> Vec<Rational> {
    [int(1), int(-1), int(2), int(-2), int(3), int(-3), ratio(1, 2), ratio(-1, 2)].into()
}

pub fn random_term<R: Rng>(rng: &mut R, shape: &FormulaShape, vars: &[String]) -> Term {
    let mut t = Term::zero();
    let n_vars = rng.gen_range(1..=2.min(vars.len().max(1)));
    let mut pool: Vec<&String> = vars.iter().collect();
    pool.shuffle(rng);
    for v in pool.into_iter().take(n_vars) {
        let c = shape.coefficients.choose(rng).cloned().unwrap_or_else(|| int(1));
        t = t + Term::var_scaled(v, c);
    }
    if shape.allow_constants {
        match rng.gen_range(0..6) {
            0 => t = t + Term::e_in(),
            1 => t = t - Term::e_in(),
            2 => t = t + Term::e_out(),
            3 => t = t + Term::constant(shape.coefficients.choose(rng).cloned().unwrap_or_else(|| int(1))),
            _ => {}
        }
    }
    t
}

pub fn random_atom<R: Rng>(rng: &mut R, shape: &FormulaShape, vars: &[String]) -> Formula {
    let mut kinds = alloc::vec![AtomKind::Lt, AtomKind::Lt, AtomKind::Eq];
    if shape.sugar {
        kinds.extend([AtomKind::Le, AtomKind::Ne]);
    }
    if shape.allow_u {
        kinds.extend([AtomKind::InU, AtomKind::InU]);
    }
    if shape.allow_i {
        kinds.push(AtomKind::InI);
    }
    let kind = *kinds.choose(rng).unwrap();
    let arg = random_term(rng, shape, vars);
    match kind {
        // Relational atoms compare two terms rather than one term against zero.
        AtomKind::Lt | AtomKind::Le | AtomKind::Eq | AtomKind::Ne => {
            let other = if rng.gen_bool(0.5) { random_term(rng, shape, vars) } else { Term::zero() };
            Formula::Atom(Atom::new(kind, arg - other))
        }
        _ => Formula::Atom(Atom::new(kind, arg)),
    }
}

fn random_qf<R: Rng>(rng: &mut R, shape: &FormulaShape, vars: &[String], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.35) {
        return random_atom(rng, shape, vars);
    }
    let choices = if shape.sugar { 4 } else { 3 };
    match rng.gen_range(0..choices) {
        0 => Formula::not(random_qf(rng, shape, vars, depth - 1)),
        1 | 2 => {
            let n = rng.gen_range(2..=3);
            let parts = (0..n).map(|_| random_qf(rng, shape, vars, depth - 1)).collect();
            if rng.gen_bool(0.5) {
                Formula::And(parts)
            } else {
                Formula::Or(parts)
            }
        }
        _ => Formula::implies(random_qf(rng, shape, vars, depth - 1), random_qf(rng, shape, vars, depth - 1)),
    }
}

/// A formula whose quantifier depth is at most `shape.max_quantifier_depth`.
pub fn random_formula<R: Rng>(rng: &mut R, shape: &FormulaShape) -> Formula {
    random_with_depth(rng, shape, shape.max_quantifier_depth)
}

fn random_with_depth<R: Rng>(rng: &mut R, shape: &FormulaShape, qdepth: usize) -> Formula {
    if qdepth == 0 || rng.gen_bool(0.25) {
        return random_qf(rng, shape, &shape.vars, shape.max_connective_depth);
    }
    let v = shape.vars.choose(rng).unwrap().clone();
    let body = if rng.gen_bool(0.6) {
        random_with_depth(rng, shape, qdepth - 1)
    } else {
        let inner = random_with_depth(rng, shape, qdepth - 1);
        let side = random_qf(rng, shape, &shape.vars, 1);
        if rng.gen_bool(0.5) {
            Formula::And(alloc::vec![side, inner])
        } else {
            Formula::Or(alloc::vec![inner, side])
        }
    };
    let q = if rng.gen_bool(0.6) { Formula::exists(&v, body) } else { Formula::forall(&v, body) };
    if rng.gen_bool(0.3) {
        Formula::And(alloc::vec![q, random_atom(rng, shape, &shape.vars)])
    } else {
        q
    }
}

/// A conjunction-heavy matrix `phi(params, target)` mentioning the target.
pub fn random_matrix<R: Rng>(rng: &mut R, shape: &FormulaShape, params: &[String], target: &str) -> Formula {
    let mut all: Vec<String> = params.to_vec();
    all.push(target.into());
    let n = rng.gen_range(1..=3);
    let mut parts = Vec::new();
    for i in 0..n {
        let f = if i == 0 {
            // Make sure the target occurs.
            let t = Term::var(target) - random_term(rng, shape, params);
            let kinds = if shape.allow_u {
                [AtomKind::Lt, AtomKind::InU, AtomKind::Eq, AtomKind::InU]
            } else {
                [AtomKind::Lt, AtomKind::Lt, AtomKind::Eq, AtomKind::Le]
            };
            let kind = *kinds.choose(rng).unwrap();
            let t = if rng.gen_bool(0.5) { -t } else { t };
            Formula::Atom(Atom::new(kind, t))
        } else if rng.gen_bool(0.2) {
            Formula::Or(alloc::vec![random_atom(rng, shape, &all), random_atom(rng, shape, &all)])
        } else if rng.gen_bool(0.2) {
            Formula::not(random_atom(rng, shape, &all))
        } else {
            random_atom(rng, shape, &all)
        };
        parts.push(f);
    }
    if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        Formula::And(parts)
    }
}

/// A continuous piecewise-linear function with `1..=max_pieces` pieces,
/// breakpoints among the half-integers in `[-4, 4]`, slopes drawn from
/// `slopes` and rational intercepts.
pub fn random_pl_unary<R: Rng>(rng: &mut R, max_pieces: usize, slopes: &[Rational]) -> PlUnary {
    let n = rng.gen_range(1..=max_pieces.max(1));
    let mut grid: Vec<Rational> = (-8..=8).map(|k| ratio(k, 2)).collect();
    grid.shuffle(rng);
    let mut breakpoints: Vec<Rational> = grid.into_iter().take(n - 1).collect();
    breakpoints.sort();
    let slope = |rng: &mut R| slopes.choose(rng).cloned().unwrap_or_else(|| int(1));
    let mut pieces = alloc::vec![Piece::new(slope(rng), Term::constant(ratio(rng.gen_range(-6..=6), 2)))];
    for b in &breakpoints {
        let prev = pieces.last().expect("nonempty");
        let s = slope(rng);
        // Matches the previous piece at `b`.
        let c = prev.at(b) - Term::constant(&s * b);
        pieces.push(Piece::new(s, c));
    }
    PlUnary::new(breakpoints, pieces).expect("continuous by construction")
}

/// A pluslike function: `a*x + b*y + c` with positive `a`, `b`, or
/// `H(x + y)` for a random strictly increasing `H`.
pub fn random_pluslike<R: Rng>(rng: &mut R) -> PlBinary {
    let positive = [int(1), int(2), int(3), ratio(1, 2), ratio(1, 3), ratio(3, 2)];
    if rng.gen_bool(0.5) {
        let a = positive.choose(rng).cloned().expect("nonempty");
        let b = positive.choose(rng).cloned().expect("nonempty");
        PlBinary::affine(a, b, Term::constant(ratio(rng.gen_range(-4..=4), 2)))
    } else {
        crate::classify::pluslike_from_unary(&random_pl_unary(rng, 3, &positive))
    }
}
