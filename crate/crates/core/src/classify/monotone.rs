//! Turning a piecewise-monotone function into a strictly increasing one by
//! reflecting everything left of each turning point.

use alloc::vec::Vec;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::convex::{check_resistance, Resistance};
use crate::model::{eval_term, Assignment, Cut, EvalError, ModelDescriptor, Side};
use crate::pl::{Piece, PlUnary};
use crate::rational::int;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonotoneError {
    #[error("piece {0} is constant")]
    ConstantPieceUnsupported(usize),
    #[error("the last piece must be increasing")]
    NotEventuallyIncreasing,
}

/// Scans the breakpoints right to left; where the piece on the left
/// decreases and the one on the right increases, replaces `H` on
/// `(-inf, p]` by `2 H(p) - H`. The value at `p` is fixed, so continuity
/// survives, and every piece ends up increasing.
pub fn normalize_monotone(g: &PlUnary) -> Result<PlUnary, MonotoneError> {
    if let Some(i) = g.pieces().iter().position(|p| p.slope.is_zero()) {
        return Err(MonotoneError::ConstantPieceUnsupported(i));
    }
    if !g.pieces().last().is_some_and(|p| p.slope.is_positive()) {
        return Err(MonotoneError::NotEventuallyIncreasing);
    }
    let mut pieces: Vec<Piece> = g.pieces().to_vec();
    for (i, p) in g.breakpoints().iter().enumerate().rev() {
        if pieces[i].slope.is_positive() {
            continue;
        }
        let twice = pieces[i + 1].at(p).scale(&int(2));
        for piece in &mut pieces[..=i] {
            *piece = Piece::new(-&piece.slope, &twice - &piece.intercept);
        }
    }
    Ok(PlUnary::from_parts(g.breakpoints().to_vec(), pieces).merged())
}

/// Rearranges `g` by `x -> -g(x)` and `x -> g(-x)` so that a resistance
/// violation on the symmetric `U` of `m` escapes upward on the last piece,
/// with every breakpoint and its value inside `U`; the situation the
/// reflection cascade preserves. `None` when `g` maps `U` into `U` or no
/// rearrangement has that shape.
pub fn arrange_violation(m: &ModelDescriptor, g: &PlUnary) -> Result<Option<PlUnary>, EvalError> {
    if check_resistance(m, g)? == Resistance::Closed {
        return Ok(None);
    }
    let unit = m.unit();
    let (u_lo, u_hi) = (m.lower_boundary(), m.upper_boundary());
    let inside = |c: &Cut| u_lo < *c && *c < u_hi;
    for candidate in [g.clone(), g.negated(), g.reflected(), g.reflected().negated()] {
        let last = candidate.pieces().last().expect("at least one piece");
        if !last.slope.is_positive() {
            continue;
        }
        let mut arranged = true;
        for b in candidate.breakpoints() {
            let value = candidate.eval(m, &unit.scaled(b))?;
            if !inside(&Cut::point(&unit.scaled(b), Side::AT)) || !m.in_u(&value)? {
                arranged = false;
                break;
            }
        }
        if !arranged {
            continue;
        }
        let c = eval_term(m, &last.intercept, &Assignment::new())?;
        let (start, has_breakpoint) = match candidate.breakpoints().last() {
            Some(b) => (Cut::point(&unit.scaled(b), Side::AT), true),
            None => (u_lo.clone(), false),
        };
        let escapes = u_hi.affine(&last.slope, &c) > u_hi;
        // With no breakpoint, some point of U must still land in U.
        let meets = has_breakpoint || start.affine(&last.slope, &c) < u_hi;
        if escapes && meets {
            return Ok(Some(candidate));
        }
    }
    Ok(None)
}
