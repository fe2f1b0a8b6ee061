//! Pluslike binary functions and `F`-valuational cuts.

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::model::{eval_term, Assignment, Cut, EvalError, ModelDescriptor, Point, Side};
use crate::pl::{BinaryPiece, PlBinary, PlUnary};
use crate::rational::{int, pow2, sign, Rational};

/// Why a function is not pluslike.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PluslikeFailure {
    /// Strips `left` and `left + 1` disagree on their common line.
    Discontinuous { left: usize },
    /// Not strictly increasing in the first argument on strip `piece`.
    NotIncreasingInX { piece: usize },
    /// Not strictly increasing in the second argument on strip `piece`.
    NotIncreasingInY { piece: usize },
}

/// Outcome of [`check_pluslike`]. Witnesses are pairs of points
/// `(x, y)` of `Q^2`, read as multiples of the unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pluslike {
    Pluslike,
    /// For a monotonicity failure the second point is larger in one argument
    /// and the value does not grow; for a discontinuity both points are the
    /// place where the strips disagree.
    Violation {
        reason: PluslikeFailure,
        witness: [(Rational, Rational); 2],
    },
}

/// Checks continuity across every strip boundary and strict monotonicity in
/// each argument on every strip.
pub fn check_pluslike(f: &PlBinary) -> Pluslike {
    let (a, b) = f.direction();
    let pieces = f.pieces();
    for (i, beta) in f.breakpoints().iter().enumerate() {
        let (l, r) = (&pieces[i], &pieces[i + 1]);
        let p0 = on_line(a, b, beta);
        let p1 = (&p0.0 - b, &p0.1 + a);
        for p in [p0, p1] {
            if l.at(&p.0, &p.1) != r.at(&p.0, &p.1) {
                return Pluslike::Violation {
                    reason: PluslikeFailure::Discontinuous { left: i },
                    witness: [p.clone(), p],
                };
            }
        }
    }
    for (i, piece) in pieces.iter().enumerate() {
        let (lo, hi) = f.interval(i);
        let (s, room) = interior(lo, hi);
        let p = on_line(a, b, &s);
        if !piece.dx.is_positive() {
            let d = step(&room, a);
            let q = (&p.0 + &d, p.1.clone());
            return Pluslike::Violation { reason: PluslikeFailure::NotIncreasingInX { piece: i }, witness: [p, q] };
        }
        if !piece.dy.is_positive() {
            let d = step(&room, b);
            let q = (p.0.clone(), &p.1 + &d);
            return Pluslike::Violation { reason: PluslikeFailure::NotIncreasingInY { piece: i }, witness: [p, q] };
        }
    }
    Pluslike::Pluslike
}

/// A point of `Q^2` with `a*x + b*y = s`.
fn on_line(a: &Rational, b: &Rational, s: &Rational) -> (Rational, Rational) {
    if a.is_zero() {
        (Rational::zero(), s / b)
    } else {
        (s / a, Rational::zero())
    }
}

/// A value strictly inside the interval and its distance to the ends.
fn interior(lo: Option<&Rational>, hi: Option<&Rational>) -> (Rational, Rational) {
    match (lo, hi) {
        (None, None) => (Rational::zero(), Rational::one()),
        (Some(l), None) => (l + int(1), Rational::one()),
        (None, Some(h)) => (h - int(1), Rational::one()),
        (Some(l), Some(h)) => ((l + h) / int(2), (h - l) / int(2)),
    }
}

/// A positive step along one axis that keeps `a*x + b*y` within `room / 2`.
fn step(room: &Rational, coeff: &Rational) -> Rational {
    if coeff.is_zero() {
        Rational::one()
    } else {
        room / (coeff.abs() * int(2))
    }
}

/// `F(x, y) = H(x + y)`.
pub fn pluslike_from_unary(h: &PlUnary) -> PlBinary {
    let pieces =
        h.pieces().iter().map(|p| BinaryPiece::new(p.slope.clone(), p.slope.clone(), p.intercept.clone())).collect();
    PlBinary::new((Rational::one(), Rational::one()), h.breakpoints().to_vec(), pieces)
        .expect("the strips of a unary function are valid")
}

/// Outcome of [`f_valuational`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FValuational {
    /// `F(a, epsilon)` lies in `C` for every `a` in `C`.
    Yes { epsilon: Point },
    /// For each tested `epsilon`, a point `a` of `C` with `F(a, epsilon)`
    /// above `C`.
    No { falsifiers: Vec<(Point, Point)> },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FValuationalError {
    #[error("the function is not pluslike: {0:?}")]
    NotPluslike(Pluslike),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("no concrete epsilon found within the search bound")]
    SearchExhausted,
}

/// How many halvings of `e_n` to try for a concrete epsilon.
const EPSILON_STEPS: i64 = 256;
/// How many points of a cofinal sequence to try per falsified epsilon.
const APPROACH_STEPS: u32 = 512;

/// Decides whether some `epsilon > 0` has `F(a, epsilon)` in `C` for all `a`
/// in `C`, where `C` is `U` (for a subgroup, its downward closure).
///
/// `F` is increasing in `y`, so the condition only gets easier as `epsilon`
/// shrinks; it is decided at an infinitesimal `epsilon`, by comparing the
/// supremum of `F(C, epsilon)` (the image of the boundary of `C` under the
/// strip met just below it) with the boundary itself.
pub fn f_valuational(m: &ModelDescriptor, f: &PlBinary) -> Result<FValuational, FValuationalError> {
    let verdict = check_pluslike(f);
    if verdict != Pluslike::Pluslike {
        return Err(FValuationalError::NotPluslike(verdict));
    }
    let c = m.upper_boundary();
    if sup_image(m, f, &c, None)? <= c {
        for k in 0..EPSILON_STEPS {
            let eps = Point::unit(m.dim(), m.dim() - 1).scaled(&pow2(-k));
            if sup_image(m, f, &c, Some(&eps))? <= c {
                return Ok(FValuational::Yes { epsilon: eps });
            }
        }
        return Err(FValuationalError::SearchExhausted);
    }
    let mut falsifiers = Vec::new();
    for k in 0..4 {
        let eps = Point::unit(m.dim(), m.dim() - 1).scaled(&pow2(-k));
        for t in 0..APPROACH_STEPS {
            let Some(a) = c.approach_from_below(t) else { break };
            if c.is_above(&a) && !c.is_above(&f.eval(m, &a, &eps)?) {
                falsifiers.push((eps, a));
                break;
            }
        }
    }
    Ok(FValuational::No { falsifiers })
}

/// The supremum of `{F(a, eps) : a < c}` as a position, with `eps = None`
/// standing for a positive infinitesimal.
fn sup_image(m: &ModelDescriptor, f: &PlBinary, c: &Cut, eps: Option<&Point>) -> Result<Cut, EvalError> {
    let dim = m.dim();
    let (a, b) = f.direction();
    let eps_point = eps.cloned().unwrap_or_else(|| Point::zero(dim));
    let infinitesimal = |cut: Cut, coeff: &Rational| if eps.is_none() { cut.shifted(sign(coeff)) } else { cut };
    // Where `a*x + b*eps` ends up as `x` approaches `c` from below.
    let s = if a.is_zero() {
        infinitesimal(Cut::point(&eps_point.scaled(b), Side::AT), b)
    } else {
        infinitesimal(c.affine(a, &eps_point.scaled(b)), b)
    };
    let unit = m.unit();
    let cell = f.breakpoints().iter().filter(|beta| Cut::point(&unit.scaled(beta), Side::AT) < s).count();
    let piece = &f.pieces()[cell];
    let k = eval_term(m, &piece.intercept, &Assignment::new())?;
    let w = eps_point.scaled(&piece.dy).add_scaled(&Rational::one(), &k);
    Ok(infinitesimal(c.affine(&piece.dx, &w), &piece.dy))
}
