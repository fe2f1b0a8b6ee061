//! Positions in the Dedekind completion of `LEX(n)`, refined by
//! infinitesimal sides so that limits of affine images can be compared.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{Signed, Zero};

use super::irrational::{Irrational, DEFAULT_BUDGET_BITS};
use super::point::Point;
use super::Entry;
use crate::rational::{pow2, Rational};

/// Displacement of a position: `shift` moves by a positive infinitesimal
/// multiple of `e_n` (a limit parameter), `edge` selects the gap just below
/// or above. `shift` dominates `edge`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Side {
    pub shift: i8,
    pub edge: i8,
}

impl Side {
    pub const AT: Side = Side { shift: 0, edge: 0 };
    pub const BELOW: Side = Side { shift: 0, edge: -1 };
    pub const ABOVE: Side = Side { shift: 0, edge: 1 };

    fn flipped(self) -> Side {
        Side { shift: -self.shift, edge: -self.edge }
    }
}

/// How a cut ends after its rational prefix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CutEnd {
    /// The prefix is a full point.
    Point(Side),
    /// The next coordinate is `a + b * theta`, `b != 0`. The shift only matters
    /// when this is the last coordinate.
    Irrational {
        a: Rational,
        b: Rational,
        theta: Irrational,
        shift: i8,
    },
    PlusInf,
    MinusInf,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cut {
    dim: usize,
    prefix: Vec<Rational>,
    end: CutEnd,
}

impl Cut {
    pub fn point(p: &Point, side: Side) -> Self {
        Cut { dim: p.dim(), prefix: p.0.clone(), end: CutEnd::Point(side) }
    }

    /// `+inf` (or `-inf`) at coordinate `prefix.len()`.
    pub fn infinite(dim: usize, prefix: Vec<Rational>, plus: bool) -> Self {
        debug_assert!(prefix.len() < dim);
        Cut { dim, prefix, end: if plus { CutEnd::PlusInf } else { CutEnd::MinusInf } }
    }

    /// The upper boundary of `{x < threshold}` (or `<=` when not strict).
    pub fn from_threshold(threshold: &[Entry], strict: bool) -> Self {
        let dim = threshold.len();
        let mut prefix = Vec::new();
        for e in threshold {
            match e {
                Entry::Rational(r) => prefix.push(r.clone()),
                Entry::Irrational(theta) => {
                    let end = CutEnd::Irrational {
                        a: Rational::zero(),
                        b: Rational::from_integer(1.into()),
                        theta: theta.clone(),
                        shift: 0,
                    };
                    return Cut { dim, prefix, end };
                }
                Entry::PlusInf => return Cut::infinite(dim, prefix, true),
                Entry::MinusInf => return Cut::infinite(dim, prefix, false),
            }
        }
        let side = if strict { Side::BELOW } else { Side::ABOVE };
        Cut { dim, prefix, end: CutEnd::Point(side) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn prefix(&self) -> &[Rational] {
        &self.prefix
    }

    pub fn end(&self) -> &CutEnd {
        &self.end
    }

    /// The rational point if the cut sits at one.
    pub fn as_point(&self) -> Option<(Point, Side)> {
        match self.end {
            CutEnd::Point(side) => Some((Point(self.prefix.clone()), side)),
            _ => None,
        }
    }

    fn irrational_is_last(&self) -> bool {
        self.prefix.len() + 1 == self.dim
    }

    pub fn neg(&self) -> Cut {
        self.affine(&Rational::from_integer((-1).into()), &Point::zero(self.dim))
    }

    /// Image under `x -> lambda * x + w`, `lambda != 0`.
    pub fn affine(&self, lambda: &Rational, w: &Point) -> Cut {
        assert!(!lambda.is_zero(), "affine image under a constant map");
        let flip = lambda.is_negative();
        let prefix: Vec<Rational> = self.prefix.iter().zip(&w.0).map(|(x, wi)| lambda * x + wi).collect();
        let j = prefix.len();
        let end = match &self.end {
            CutEnd::Point(side) => CutEnd::Point(if flip { side.flipped() } else { *side }),
            CutEnd::Irrational { a, b, theta, shift } => CutEnd::Irrational {
                a: lambda * a + &w.0[j],
                b: lambda * b,
                theta: theta.clone(),
                shift: if flip { -shift } else { *shift },
            },
            CutEnd::PlusInf if flip => CutEnd::MinusInf,
            CutEnd::MinusInf if flip => CutEnd::PlusInf,
            inf => inf.clone(),
        };
        Cut { dim: self.dim, prefix, end }
    }

    pub fn translate(&self, w: &Point) -> Cut {
        self.affine(&Rational::from_integer(1.into()), w)
    }

    /// Moves by `sign * delta * e_n` for an infinitesimal `delta > 0`; absorbed
    /// when the cut is decided before the last coordinate.
    pub fn shifted(&self, sign: i8) -> Cut {
        let mut out = self.clone();
        match &mut out.end {
            CutEnd::Point(side) => side.shift = (side.shift + sign).clamp(-1, 1),
            CutEnd::Irrational { shift, .. } if self.irrational_is_last() => *shift = (*shift + sign).clamp(-1, 1),
            _ => {}
        }
        out
    }

    /// Whether `p` lies strictly below this position.
    pub fn is_above(&self, p: &Point) -> bool {
        Cut::point(p, Side::AT) < *self
    }

    /// A sequence of points below the cut, cofinal in `{x : x < cut}` as `k`
    /// grows. `None` for `-inf` at the first coordinate.
    pub fn approach_from_below(&self, k: u32) -> Option<Point> {
        let mut coords = self.prefix.clone();
        match &self.end {
            CutEnd::Point(side) => {
                let mut p = Point(coords);
                if *side <= Side::AT {
                    let last = self.dim - 1;
                    p.0[last] -= pow2(-(k as i64));
                }
                return Some(p);
            }
            CutEnd::Irrational { a, b, theta, .. } => {
                // a + b*theta from below
                let iv = theta.refine(k.max(1));
                let lo = if b.is_positive() { a + b * &iv.lo } else { a + b * &iv.hi };
                coords.push(lo);
            }
            CutEnd::PlusInf => coords.push(pow2(k as i64)),
            CutEnd::MinusInf => {
                let last = coords.last_mut()?;
                *last -= pow2(-(k as i64));
            }
        }
        coords.resize(self.dim, Rational::zero());
        Some(Point(coords))
    }

    /// Mirror of [`Self::approach_from_below`].
    pub fn approach_from_above(&self, k: u32) -> Option<Point> {
        self.neg().approach_from_below(k).map(|p| -&p)
    }
}

/// Entry of a cut at a coordinate, for lexicographic comparison.
enum Slot<'a> {
    Rat(&'a Rational),
    Irr(&'a Rational, &'a Rational, &'a Irrational),
    Plus,
    Minus,
}

impl Cut {
    fn slot(&self, i: usize) -> Option<Slot<'_>> {
        if i < self.prefix.len() {
            return Some(Slot::Rat(&self.prefix[i]));
        }
        if i > self.prefix.len() {
            return None;
        }
        match &self.end {
            CutEnd::Point(_) => None,
            CutEnd::Irrational { a, b, theta, .. } => Some(Slot::Irr(a, b, theta)),
            CutEnd::PlusInf => Some(Slot::Plus),
            CutEnd::MinusInf => Some(Slot::Minus),
        }
    }

    fn side(&self) -> Side {
        match &self.end {
            CutEnd::Point(s) => *s,
            CutEnd::Irrational { shift, .. } => Side { shift: *shift, edge: 0 },
            _ => Side::AT,
        }
    }
}

fn cmp_irr_rat(a: &Rational, b: &Rational, theta: &Irrational, r: &Rational) -> Ordering {
    theta.sign_of_affine(b, &(a - r), DEFAULT_BUDGET_BITS).expect("irrational oracle refinement exhausted").0
}

impl Ord for Cut {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.dim, other.dim);
        for i in 0..self.dim {
            let (x, y) = (self.slot(i), other.slot(i));
            let o = match (x, y) {
                (Some(Slot::Rat(p)), Some(Slot::Rat(q))) => p.cmp(q),
                (Some(Slot::Plus), Some(Slot::Plus)) | (Some(Slot::Minus), Some(Slot::Minus)) => {
                    return Ordering::Equal
                }
                (Some(Slot::Plus), _) | (_, Some(Slot::Minus)) => return Ordering::Greater,
                (Some(Slot::Minus), _) | (_, Some(Slot::Plus)) => return Ordering::Less,
                (Some(Slot::Irr(a, b, t)), Some(Slot::Rat(r))) => cmp_irr_rat(a, b, t, r),
                (Some(Slot::Rat(r)), Some(Slot::Irr(a, b, t))) => cmp_irr_rat(a, b, t, r).reverse(),
                (Some(Slot::Irr(a1, b1, t1)), Some(Slot::Irr(a2, b2, t2))) => {
                    assert_eq!(t1, t2, "cuts over different irrationals");
                    let (da, db) = (a1 - a2, b1 - b2);
                    if db.is_zero() {
                        match da.cmp(&Rational::zero()) {
                            // Equal irrational entries decide the cut; only shifts remain.
                            Ordering::Equal => return self.side().cmp(&other.side()),
                            o => o,
                        }
                    } else {
                        t1.sign_of_affine(&db, &da, DEFAULT_BUDGET_BITS)
                            .expect("irrational oracle refinement exhausted")
                            .0
                    }
                }
                (None, None) => return self.side().cmp(&other.side()),
                (None, _) | (_, None) => unreachable!("cuts of different dimension"),
            };
            if o != Ordering::Equal {
                return o;
            }
        }
        self.side().cmp(&other.side())
    }
}

impl PartialOrd for Cut {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl core::fmt::Display for Cut {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.prefix.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        let sep = if self.prefix.is_empty() { "" } else { ", " };
        match &self.end {
            CutEnd::Point(s) => {
                f.write_str(")")?;
                match s.edge {
                    -1 => f.write_str("-")?,
                    1 => f.write_str("+")?,
                    _ => {}
                }
                if s.shift != 0 {
                    write!(f, " {} delta*e_n", if s.shift > 0 { "+" } else { "-" })?;
                }
                Ok(())
            }
            CutEnd::Irrational { a, b, theta, .. } => write!(f, "{sep}{a} + {b}*{theta})"),
            CutEnd::PlusInf => write!(f, "{sep}+inf)"),
            CutEnd::MinusInf => write!(f, "{sep}-inf)"),
        }
    }
}
