//! Continuous piecewise-linear functions with rational data.
//!
//! A unary function has breakpoints `b_1 < ... < b_m` (multiples of the unit)
//! and one affine piece `x -> slope * x + intercept` per interval; the
//! intercept is a closed term, so it may mention `e_in` and `e_out`. A binary
//! function is affine on parallel strips `b_(i-1) <= a*x + b*y <= b_i`.

use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::model::{eval_term, Assignment, EvalError, ModelDescriptor, Point};
use crate::rational::Rational;
use crate::syntax::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlError {
    #[error("{pieces} pieces need {} breakpoints, got {breakpoints}", pieces - 1)]
    PieceCount { pieces: usize, breakpoints: usize },
    #[error("breakpoints must be strictly increasing")]
    Unsorted,
    #[error("intercepts must be closed terms")]
    OpenIntercept,
    #[error("pieces {left} and {right} disagree at their common breakpoint")]
    Discontinuous { left: usize, right: usize },
    #[error("the strip direction must be nonzero")]
    ZeroDirection,
}

/// `x -> slope * x + intercept`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Piece {
    pub slope: Rational,
    pub intercept: Term,
}

impl Piece {
    pub fn new(slope: Rational, intercept: Term) -> Self {
        Self { slope, intercept }
    }

    /// The value at `x * 1`, a closed term.
    pub fn at(&self, x: &Rational) -> Term {
        &Term::constant(&self.slope * x) + &self.intercept
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlUnary {
    breakpoints: Vec<Rational>,
    pieces: Vec<Piece>,
}

fn check_breakpoints(breakpoints: &[Rational], pieces: usize) -> Result<(), PlError> {
    if pieces != breakpoints.len() + 1 {
        return Err(PlError::PieceCount { pieces, breakpoints: breakpoints.len() });
    }
    if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(PlError::Unsorted);
    }
    Ok(())
}

impl PlUnary {
    pub fn new(breakpoints: Vec<Rational>, pieces: Vec<Piece>) -> Result<Self, PlError> {
        check_breakpoints(&breakpoints, pieces.len())?;
        if pieces.iter().any(|p| !p.intercept.is_closed()) {
            return Err(PlError::OpenIntercept);
        }
        for (i, b) in breakpoints.iter().enumerate() {
            if pieces[i].at(b) != pieces[i + 1].at(b) {
                return Err(PlError::Discontinuous { left: i, right: i + 1 });
            }
        }
        Ok(Self { breakpoints, pieces })
    }

    pub fn affine(slope: Rational, intercept: Term) -> Self {
        Self::new(Vec::new(), alloc::vec![Piece::new(slope, intercept)]).expect("a single affine piece")
    }

    pub fn identity() -> Self {
        Self::affine(Rational::one(), Term::zero())
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// The interval of piece `i`: `(lower, upper)` breakpoints, `None` when
    /// unbounded.
    pub fn interval(&self, i: usize) -> (Option<&Rational>, Option<&Rational>) {
        let lo = if i == 0 { None } else { self.breakpoints.get(i - 1) };
        (lo, self.breakpoints.get(i))
    }

    /// Index of a piece whose closed interval contains `x * 1`.
    pub fn piece_at_rational(&self, x: &Rational) -> usize {
        self.breakpoints.iter().take_while(|b| *b < x).count()
    }

    /// Index of a piece whose closed interval contains the point `x`.
    pub fn piece_at(&self, x: &Point) -> usize {
        let dim = x.dim();
        self.breakpoints.iter().take_while(|b| Point::unit(dim, 0).scaled(b) < *x).count()
    }

    /// The value at `x * 1` as a closed term.
    pub fn at_rational(&self, x: &Rational) -> Term {
        self.pieces[self.piece_at_rational(x)].at(x)
    }

    /// The value at a point of the model.
    pub fn eval(&self, m: &ModelDescriptor, x: &Point) -> Result<Point, EvalError> {
        let piece = &self.pieces[self.piece_at(x)];
        let c = eval_term(m, &piece.intercept, &Assignment::new())?;
        Ok(x.scaled(&piece.slope).add_scaled(&Rational::one(), &c))
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.pieces.iter().all(|p| p.slope.is_positive())
    }

    pub fn has_constant_piece(&self) -> bool {
        self.pieces.iter().any(|p| p.slope.is_zero())
    }

    /// `x -> -f(x)`.
    pub fn negated(&self) -> Self {
        let pieces = self.pieces.iter().map(|p| Piece::new(-&p.slope, -&p.intercept)).collect();
        Self { breakpoints: self.breakpoints.clone(), pieces }
    }

    /// `x -> f(-x)`.
    pub fn reflected(&self) -> Self {
        let breakpoints = self.breakpoints.iter().rev().map(|b| -b).collect();
        let pieces = self.pieces.iter().rev().map(|p| Piece::new(-&p.slope, p.intercept.clone())).collect();
        Self { breakpoints, pieces }
    }

    /// Drops breakpoints between identical pieces.
    pub fn merged(&self) -> Self {
        let mut breakpoints = Vec::new();
        let mut pieces = alloc::vec![self.pieces[0].clone()];
        for (b, p) in self.breakpoints.iter().zip(&self.pieces[1..]) {
            if pieces.last() != Some(p) {
                breakpoints.push(b.clone());
                pieces.push(p.clone());
            }
        }
        Self { breakpoints, pieces }
    }

    /// Builds without the continuity check; for transformations that
    /// preserve it.
    pub(crate) fn from_parts(breakpoints: Vec<Rational>, pieces: Vec<Piece>) -> Self {
        debug_assert!(check_breakpoints(&breakpoints, pieces.len()).is_ok());
        Self { breakpoints, pieces }
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = &Term::var_scaled("x", self.slope.clone()) + &self.intercept;
        write!(f, "{t}")
    }
}

impl fmt::Display for PlUnary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            let (lo, hi) = self.interval(i);
            write!(f, "{p} on ")?;
            match lo {
                Some(b) => write!(f, "({b}, ")?,
                None => f.write_str("(-inf, ")?,
            }
            match hi {
                Some(b) => write!(f, "{b}]")?,
                None => f.write_str("inf)")?,
            }
        }
        Ok(())
    }
}

/// `(x, y) -> dx * x + dy * y + intercept`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryPiece {
    pub dx: Rational,
    pub dy: Rational,
    pub intercept: Term,
}

impl BinaryPiece {
    pub fn new(dx: Rational, dy: Rational, intercept: Term) -> Self {
        Self { dx, dy, intercept }
    }

    /// The value at `(x * 1, y * 1)`.
    pub fn at(&self, x: &Rational, y: &Rational) -> Term {
        &Term::constant(&self.dx * x + &self.dy * y) + &self.intercept
    }
}

/// A binary function, affine on the strips cut out by the lines
/// `a*x + b*y = b_i` for the direction `(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlBinary {
    direction: (Rational, Rational),
    breakpoints: Vec<Rational>,
    pieces: Vec<BinaryPiece>,
}

impl PlBinary {
    /// Continuity is not required here; see `check_pluslike`.
    pub fn new(
        direction: (Rational, Rational),
        breakpoints: Vec<Rational>,
        pieces: Vec<BinaryPiece>,
    ) -> Result<Self, PlError> {
        if direction.0.is_zero() && direction.1.is_zero() {
            return Err(PlError::ZeroDirection);
        }
        check_breakpoints(&breakpoints, pieces.len())?;
        if pieces.iter().any(|p| !p.intercept.is_closed()) {
            return Err(PlError::OpenIntercept);
        }
        Ok(Self { direction, breakpoints, pieces })
    }

    /// `(x, y) -> dx * x + dy * y + intercept` everywhere.
    pub fn affine(dx: Rational, dy: Rational, intercept: Term) -> Self {
        let one = (Rational::one(), Rational::one());
        Self::new(one, Vec::new(), alloc::vec![BinaryPiece::new(dx, dy, intercept)]).expect("one piece")
    }

    pub fn direction(&self) -> &(Rational, Rational) {
        &self.direction
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[BinaryPiece] {
        &self.pieces
    }

    pub fn interval(&self, i: usize) -> (Option<&Rational>, Option<&Rational>) {
        let lo = if i == 0 { None } else { self.breakpoints.get(i - 1) };
        (lo, self.breakpoints.get(i))
    }

    /// Index of a strip containing `a*x + b*y` for points of the model.
    pub fn piece_at(&self, x: &Point, y: &Point) -> usize {
        let s = x.scaled(&self.direction.0).add_scaled(&self.direction.1, y);
        let unit = Point::unit(s.dim(), 0);
        self.breakpoints.iter().take_while(|b| unit.scaled(b) < s).count()
    }

    pub fn piece_at_rational(&self, x: &Rational, y: &Rational) -> usize {
        let s = &self.direction.0 * x + &self.direction.1 * y;
        self.breakpoints.iter().take_while(|b| **b < s).count()
    }

    pub fn at_rational(&self, x: &Rational, y: &Rational) -> Term {
        self.pieces[self.piece_at_rational(x, y)].at(x, y)
    }

    pub fn eval(&self, m: &ModelDescriptor, x: &Point, y: &Point) -> Result<Point, EvalError> {
        let p = &self.pieces[self.piece_at(x, y)];
        let c = eval_term(m, &p.intercept, &Assignment::new())?;
        Ok(x.scaled(&p.dx).add_scaled(&p.dy, y).add_scaled(&Rational::one(), &c))
    }
}

impl fmt::Display for PlBinary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            let t = &(&Term::var_scaled("x", p.dx.clone()) + &Term::var_scaled("y", p.dy.clone())) + &p.intercept;
            write!(f, "{t}")?;
            if !self.breakpoints.is_empty() {
                let s =
                    &Term::var_scaled("x", self.direction.0.clone()) + &Term::var_scaled("y", self.direction.1.clone());
                let (lo, hi) = self.interval(i);
                match (lo, hi) {
                    (Some(l), Some(h)) => write!(f, " where {l} <= {s} <= {h}")?,
                    (Some(l), None) => write!(f, " where {l} <= {s}")?,
                    (None, Some(h)) => write!(f, " where {s} <= {h}")?,
                    (None, None) => {}
                }
            }
        }
        Ok(())
    }
}
