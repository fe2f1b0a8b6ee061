//! Classification of cuts: rational, valuational or nonvaluational, the
//! stabilizer subgroup, pluslike functions and the reductions to a symmetric
//! convex set containing `0`.

mod monotone;
mod pluslike;

use alloc::vec::Vec;

use thiserror::Error;

pub use monotone::{arrange_violation, normalize_monotone, MonotoneError};
pub use pluslike::{
    check_pluslike, f_valuational, pluslike_from_unary, FValuational, FValuationalError, Pluslike, PluslikeFailure,
};

use crate::model::{deciding_index, Cut, Entry, ModelDescriptor, ModelError, Point, Side, UInterp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CutKind {
    RationalCut,
    IrrationalValuational,
    IrrationalNonvaluational,
}

/// For a nonvaluational cut: given `eps > 0`, finds `a` in `C` with
/// `a + eps` above `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Falsifier {
    cut: Cut,
}

/// How many points of a cofinal sequence to try.
const APPROACH_STEPS: u32 = 512;

impl Falsifier {
    pub fn new(cut: Cut) -> Self {
        Self { cut }
    }

    pub fn find(&self, eps: &Point) -> Option<Point> {
        (0..APPROACH_STEPS).find_map(|k| {
            let a = self.cut.approach_from_below(k)?;
            (self.cut.is_above(&a) && !self.cut.is_above(&(&a + eps))).then_some(a)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub cut_kind: CutKind,
    /// `eps > 0` with `C + eps = C`, for valuational cuts.
    pub epsilon_witness: Option<Point>,
    /// For nonvaluational cuts.
    pub falsifier: Option<Falsifier>,
    /// `I = {x : x_1 = ... = x_k = 0}`; `k = dim` means `I` is trivial.
    pub stabilizer_level: usize,
    /// The cut is realized by a unique type exactly when nonvaluational.
    pub uniquely_realizable: bool,
}

/// Classifies the cut `C` of `U` (for a subgroup, its downward closure) by
/// the first non-rational threshold entry.
pub fn classify(m: &ModelDescriptor) -> ClassificationReport {
    let n = m.dim();
    let (kind, level) = match m.u() {
        UInterp::Subgroup { level } => (CutKind::IrrationalValuational, *level),
        UInterp::DownwardCut { threshold, .. } | UInterp::Symmetric { threshold, .. } => {
            match deciding_index(threshold) {
                None => (CutKind::RationalCut, n),
                Some(j) => match threshold[j] {
                    Entry::Irrational(_) if j + 1 == n => (CutKind::IrrationalNonvaluational, n),
                    Entry::Irrational(_) => (CutKind::IrrationalValuational, j + 1),
                    _ => (CutKind::IrrationalValuational, j),
                },
            }
        }
    };
    let valuational = kind == CutKind::IrrationalValuational;
    let nonvaluational = kind == CutKind::IrrationalNonvaluational;
    ClassificationReport {
        cut_kind: kind,
        epsilon_witness: valuational.then(|| Point::unit(n, level)),
        falsifier: nonvaluational.then(|| Falsifier::new(m.upper_boundary())),
        stabilizer_level: level,
        uniquely_realizable: nonvaluational,
    }
}

/// The stabilizer level computed from the completion: `e_i` lies in
/// `I = {eps : C + eps = C}` exactly when translating the boundary of `C` by
/// `e_i` leaves it in place, and `I` is the span of the trailing unit vectors
/// it contains.
pub fn stabilizer(m: &ModelDescriptor) -> usize {
    let c = m.upper_boundary();
    let n = m.dim();
    (0..n).find(|&i| c.translate(&Point::unit(n, i)) == c).unwrap_or(n)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonicalizeError {
    #[error("the cut is not valuational")]
    NonvaluationalInterpretation,
    #[error("reflecting the irrational threshold entry {0} is not representable")]
    UnrepresentableReflection(crate::model::Irrational),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// What [`canonicalize_cut`] did, to transport definitions back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalRecord {
    /// `U` was replaced by `{a : -a not in U}` to put `0` inside.
    pub reflected: bool,
    /// The translation applied afterwards.
    pub translation: Point,
    /// Level of the stabilizer `I`, unchanged by every step.
    pub stabilizer_level: usize,
}

/// Reflects a valuational cut so that `0` lies in `U`, translates (by `0`:
/// the definable closure of the empty set is `{0}`), and replaces `U` by its
/// symmetric part `{a : a in U and -a in U}`. Subgroups are returned as is.
pub fn canonicalize_cut(m: &ModelDescriptor) -> Result<(ModelDescriptor, CanonicalRecord), CanonicalizeError> {
    let report = classify(m);
    let mut record = CanonicalRecord {
        reflected: false,
        translation: Point::zero(m.dim()),
        stabilizer_level: report.stabilizer_level,
    };
    let (threshold, strict) = match m.u() {
        UInterp::Subgroup { .. } => return Ok((m.clone(), record)),
        UInterp::DownwardCut { threshold, strict } | UInterp::Symmetric { threshold, strict } => {
            (threshold.clone(), *strict)
        }
    };
    if report.cut_kind != CutKind::IrrationalValuational {
        return Err(CanonicalizeError::NonvaluationalInterpretation);
    }
    let zero_inside = Cut::point(&Point::zero(m.dim()), Side::AT) < m.upper_boundary();
    let (threshold, strict) = if zero_inside {
        (threshold, strict)
    } else {
        record.reflected = true;
        (reflect(&threshold)?, !strict)
    };
    let symmetric =
        ModelDescriptor::new(m.dim(), UInterp::Symmetric { threshold, strict }, m.e_in().clone(), m.e_out().clone())?;
    Ok((symmetric, record))
}

/// `-threshold`: `{a : -a not in {x < t}} = {a <= -t}`.
fn reflect(threshold: &[Entry]) -> Result<Vec<Entry>, CanonicalizeError> {
    threshold
        .iter()
        .map(|e| match e {
            Entry::Rational(q) => Ok(Entry::Rational(-q)),
            Entry::PlusInf => Ok(Entry::MinusInf),
            Entry::MinusInf => Ok(Entry::PlusInf),
            Entry::Irrational(theta) => Err(CanonicalizeError::UnrepresentableReflection(theta.clone())),
        })
        .collect()
}
