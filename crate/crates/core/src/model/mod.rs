//! Concrete models `LEX(n)` with an interpretation of `U`, exact evaluation,
//! the completion of `LEX(n)` and an independent truth oracle.

mod completion;
mod eval;
mod irrational;
mod point;
pub mod sample;
mod truth;

use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

pub use completion::{Cut, CutEnd, Side};
pub use eval::{eval_formula, eval_term, Assignment, EvalError};
pub use irrational::{Interval, Irrational, DEFAULT_BUDGET_BITS, START_BITS};
pub use point::Point;
pub use truth::{oracle_truth, OracleError, TruthOracle};

use crate::rational::Rational;

/// One entry of a cut threshold.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Entry {
    Rational(Rational),
    Irrational(Irrational),
    PlusInf,
    MinusInf,
}

impl Entry {
    pub fn is_rational(&self) -> bool {
        matches!(self, Entry::Rational(_))
    }
}

/// Interpretation of the predicate `U`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum UInterp {
    /// `{x : x_1 = ... = x_k = 0}`.
    Subgroup { level: usize },
    /// `C = {x : x < threshold}` (or `<=` when `strict` is false), lexicographically.
    DownwardCut { threshold: Vec<Entry>, strict: bool },
    /// `{x : x in C and -x in C}` for the downward cut `C` with this threshold.
    Symmetric { threshold: Vec<Entry>, strict: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("subgroup level {level} must lie strictly between 0 and {dim}")]
    SubgroupLevel { level: usize, dim: usize },
    #[error("threshold has {got} entries, expected {dim}")]
    ThresholdLength { got: usize, dim: usize },
    #[error("malformed threshold: {0}")]
    MalformedThreshold(&'static str),
    #[error("point has {got} coordinates, expected {dim}")]
    PointLength { got: usize, dim: usize },
    #[error("constant {name} violates: {reason}")]
    Constant { name: &'static str, reason: &'static str },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Position of a point relative to a cut threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThresholdOrder {
    Below,
    Equal,
    Above,
}

/// A computable model `(Q^n lexicographic, U)` with designated constants.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModelDescriptor {
    dim: usize,
    u: UInterp,
    e_in: Point,
    e_out: Point,
}

/// Index of the first non-rational entry, if any.
pub fn deciding_index(threshold: &[Entry]) -> Option<usize> {
    threshold.iter().position(|e| !e.is_rational())
}

fn validate_threshold(threshold: &[Entry], dim: usize) -> Result<(), ModelError> {
    if threshold.len() != dim {
        return Err(ModelError::ThresholdLength { got: threshold.len(), dim });
    }
    if let Some(j) = deciding_index(threshold) {
        match &threshold[j] {
            Entry::PlusInf | Entry::MinusInf if j == 0 => {
                return Err(ModelError::MalformedThreshold("an infinite first entry makes U empty or everything"))
            }
            inf @ (Entry::PlusInf | Entry::MinusInf) if threshold[j..].iter().any(|e| e != inf) => {
                return Err(ModelError::MalformedThreshold("infinite entries must form a trailing block of one sign"))
            }
            _ => {}
        }
    }
    Ok(())
}

impl ModelDescriptor {
    pub fn new(dim: usize, u: UInterp, e_in: Point, e_out: Point) -> Result<Self, ModelError> {
        if dim == 0 {
            return Err(ModelError::ZeroDimension);
        }
        match &u {
            UInterp::Subgroup { level } => {
                if *level == 0 || *level >= dim {
                    return Err(ModelError::SubgroupLevel { level: *level, dim });
                }
            }
            UInterp::DownwardCut { threshold, .. } | UInterp::Symmetric { threshold, .. } => {
                validate_threshold(threshold, dim)?
            }
        }
        for p in [&e_in, &e_out] {
            if p.dim() != dim {
                return Err(ModelError::PointLength { got: p.dim(), dim });
            }
        }
        let m = Self { dim, u, e_in, e_out };
        m.check_constants()?;
        Ok(m)
    }

    /// Builds without checking the constants; used for intermediate descriptors.
    pub fn new_unchecked(dim: usize, u: UInterp, e_in: Point, e_out: Point) -> Self {
        Self { dim, u, e_in, e_out }
    }

    fn check_constants(&self) -> Result<(), ModelError> {
        let bad = |name, reason| Err(ModelError::Constant { name, reason });
        if !self.e_in.is_positive() {
            return bad("e_in", "must be positive");
        }
        let level = self.stabilizer_level();
        if level < self.dim && !self.e_in.in_level(level) {
            return bad("e_in", "must lie in the stabilizer subgroup");
        }
        if self.u_has_positive() && !self.in_u(&self.e_in)? {
            return bad("e_in", "must lie in U");
        }
        if !self.e_out.is_positive() || self.in_u(&self.e_out)? {
            return bad("e_out", "must be positive and outside U");
        }
        if level < self.dim && self.e_out.in_level(level) {
            return bad("e_out", "must lie outside the stabilizer subgroup");
        }
        // Above U: for a downward cut outside-and-positive already means above;
        // for the symmetric case likewise since V is symmetric.
        Ok(())
    }

    /// Whether some positive element lies in `U`.
    pub fn u_has_positive(&self) -> bool {
        let just_above_zero = Cut::point(&Point::zero(self.dim), Side::ABOVE);
        self.upper_boundary() > just_above_zero
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn u(&self) -> &UInterp {
        &self.u
    }

    pub fn e_in(&self) -> &Point {
        &self.e_in
    }

    pub fn e_out(&self) -> &Point {
        &self.e_out
    }

    /// The unit `(1, 0, ..., 0)` that rational literals are multiples of.
    pub fn unit(&self) -> Point {
        Point::unit(self.dim, 0)
    }

    pub fn threshold(&self) -> Option<(&[Entry], bool)> {
        match &self.u {
            UInterp::DownwardCut { threshold, strict } | UInterp::Symmetric { threshold, strict } => {
                Some((threshold, *strict))
            }
            UInterp::Subgroup { .. } => None,
        }
    }

    /// Level `k` of the stabilizer `I = {x : x_1 = ... = x_k = 0}` by the closed
    /// form on the threshold; `k = dim` means `I` is trivial.
    pub fn stabilizer_level(&self) -> usize {
        match &self.u {
            UInterp::Subgroup { level } => *level,
            UInterp::DownwardCut { threshold, .. } | UInterp::Symmetric { threshold, .. } => {
                match deciding_index(threshold) {
                    None => self.dim,
                    Some(j) => match threshold[j] {
                        Entry::Irrational(_) => (j + 1).min(self.dim),
                        _ => j,
                    },
                }
            }
        }
    }

    /// Lexicographic comparison of `p` against the threshold.
    pub fn compare_to_threshold(&self, p: &Point) -> Result<ThresholdOrder, EvalError> {
        self.compare_to_threshold_with(p, DEFAULT_BUDGET_BITS).map(|(o, _)| o)
    }

    /// As [`Self::compare_to_threshold`], also returning the oracle interval
    /// that decided an irrational entry.
    pub fn compare_to_threshold_with(
        &self,
        p: &Point,
        budget_bits: u32,
    ) -> Result<(ThresholdOrder, Option<Interval>), EvalError> {
        let Some((threshold, _)) = self.threshold() else {
            return Err(EvalError::NotACut);
        };
        compare_lex(threshold, p, budget_bits)
    }

    pub fn in_u(&self, p: &Point) -> Result<bool, EvalError> {
        self.in_u_with(p, DEFAULT_BUDGET_BITS)
    }

    pub fn in_u_with(&self, p: &Point, budget_bits: u32) -> Result<bool, EvalError> {
        match &self.u {
            UInterp::Subgroup { level } => Ok(p.in_level(*level)),
            UInterp::DownwardCut { threshold, strict } => in_cut(threshold, *strict, p, budget_bits),
            UInterp::Symmetric { threshold, strict } => {
                Ok(in_cut(threshold, *strict, p, budget_bits)? && in_cut(threshold, *strict, &-p, budget_bits)?)
            }
        }
    }

    pub fn in_i(&self, p: &Point) -> bool {
        p.in_level(self.stabilizer_level())
    }

    /// The boundary of `U` from above, as a cut of the completion.
    pub fn upper_boundary(&self) -> Cut {
        match &self.u {
            UInterp::Subgroup { level } => Cut::infinite(self.dim, Point::zero(*level).0, true),
            UInterp::DownwardCut { threshold, strict } | UInterp::Symmetric { threshold, strict } => {
                Cut::from_threshold(threshold, *strict)
            }
        }
    }

    /// The boundary of `U` from below.
    pub fn lower_boundary(&self) -> Cut {
        match &self.u {
            UInterp::Subgroup { level } => Cut::infinite(self.dim, Point::zero(*level).0, false),
            UInterp::DownwardCut { .. } => Cut::infinite(self.dim, Vec::new(), false),
            UInterp::Symmetric { threshold, strict } => Cut::from_threshold(threshold, *strict).neg(),
        }
    }

    pub fn with_u(&self, u: UInterp) -> Self {
        Self { u, ..self.clone() }
    }
}

fn in_cut(threshold: &[Entry], strict: bool, p: &Point, budget: u32) -> Result<bool, EvalError> {
    Ok(match compare_lex(threshold, p, budget)?.0 {
        ThresholdOrder::Below => true,
        ThresholdOrder::Equal => !strict,
        ThresholdOrder::Above => false,
    })
}

fn compare_lex(threshold: &[Entry], p: &Point, budget: u32) -> Result<(ThresholdOrder, Option<Interval>), EvalError> {
    if threshold.len() != p.dim() {
        return Err(EvalError::DimensionMismatch);
    }
    for (e, x) in threshold.iter().zip(&p.0) {
        match e {
            Entry::Rational(r) => match x.cmp(r) {
                Ordering::Less => return Ok((ThresholdOrder::Below, None)),
                Ordering::Greater => return Ok((ThresholdOrder::Above, None)),
                Ordering::Equal => {}
            },
            Entry::Irrational(irr) => {
                let (o, iv) = irr.cmp_rational(x, budget).ok_or(EvalError::PrecisionExhausted)?;
                // o orders the irrational against x.
                let order = if o == Ordering::Greater { ThresholdOrder::Below } else { ThresholdOrder::Above };
                return Ok((order, Some(iv)));
            }
            Entry::PlusInf => return Ok((ThresholdOrder::Below, None)),
            Entry::MinusInf => return Ok((ThresholdOrder::Above, None)),
        }
    }
    Ok((ThresholdOrder::Equal, None))
}

#[cfg(test)]
mod tests;
