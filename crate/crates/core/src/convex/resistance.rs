//! Closure of `U` under a unary piecewise-linear function.

use num_traits::{Signed, Zero};

use crate::model::{eval_term, Assignment, Cut, EvalError, ModelDescriptor, Point, Side};
use crate::pl::PlUnary;

/// Outcome of [`check_resistance`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Resistance {
    /// `f(U)` is contained in `U`.
    Closed,
    /// `witness` lies in `U` and `image = f(witness)` does not.
    Violation { witness: Point, image: Point },
}

/// How many refinements of a limit point to try before giving up.
const APPROACH_STEPS: u32 = 512;

/// Decides whether `f` maps `U` into `U`, comparing the images of the edges
/// of `U` on each piece against the edges of `U`.
pub fn check_resistance(m: &ModelDescriptor, f: &PlUnary) -> Result<Resistance, EvalError> {
    let unit = m.unit();
    let (u_lo, u_hi) = (m.lower_boundary(), m.upper_boundary());
    for (i, piece) in f.pieces().iter().enumerate() {
        let (b_lo, b_hi) = f.interval(i);
        let mut lo = u_lo.clone();
        if let Some(b) = b_lo {
            lo = lo.max(Cut::point(&unit.scaled(b), Side::BELOW));
        }
        let mut hi = u_hi.clone();
        if let Some(b) = b_hi {
            hi = hi.min(Cut::point(&unit.scaled(b), Side::ABOVE));
        }
        if lo >= hi {
            continue;
        }
        let c = eval_term(m, &piece.intercept, &Assignment::new())?;
        let escapes = |a: &Point| -> Result<Option<Resistance>, EvalError> {
            if !inside(&lo, &hi, a) || !m.in_u(a)? {
                return Ok(None);
            }
            let image = f.eval(m, a)?;
            Ok((!m.in_u(&image)?).then(|| Resistance::Violation { witness: a.clone(), image }))
        };
        if piece.slope.is_zero() {
            if m.in_u(&c)? {
                continue;
            }
            for k in 0..APPROACH_STEPS {
                for a in [hi.approach_from_below(k), lo.approach_from_above(k)].into_iter().flatten() {
                    if let Some(v) = escapes(&a)? {
                        return Ok(v);
                    }
                }
            }
            continue;
        }
        let image_of = |e: &Cut| e.affine(&piece.slope, &c);
        let (img_lo, img_hi) =
            if piece.slope.is_positive() { (image_of(&lo), image_of(&hi)) } else { (image_of(&hi), image_of(&lo)) };
        let too_high = img_hi > u_hi;
        let too_low = img_lo < u_lo;
        if !too_high && !too_low {
            continue;
        }
        // The end of the piece whose image leaves U.
        let from_hi = too_high == piece.slope.is_positive();
        for k in 0..APPROACH_STEPS {
            let a = if from_hi { hi.approach_from_below(k) } else { lo.approach_from_above(k) };
            if let Some(a) = a {
                if let Some(v) = escapes(&a)? {
                    return Ok(v);
                }
            }
        }
        return Err(EvalError::PrecisionExhausted);
    }
    Ok(Resistance::Closed)
}

/// Whether `p` lies strictly between the positions `lo` and `hi`.
fn inside(lo: &Cut, hi: &Cut, p: &Point) -> bool {
    let at = Cut::point(p, Side::AT);
    *lo < at && at < *hi
}
