use alloc::collections::BTreeMap;
use alloc::string::String;

use thiserror::Error;

use super::point::Point;
use super::ModelDescriptor;
use crate::syntax::{Atom, AtomKind, Formula, Term};

/// Values of the free variables.
pub type Assignment = BTreeMap<String, Point>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable `{0}` is not assigned")]
    Unassigned(String),
    #[error("evaluation needs a quantifier-free formula")]
    Quantified,
    #[error("irrational oracle did not decide within the precision budget")]
    PrecisionExhausted,
    #[error("point dimension does not match the model")]
    DimensionMismatch,
    #[error("U is not interpreted by a cut")]
    NotACut,
}

pub fn eval_term(m: &ModelDescriptor, t: &Term, asgn: &Assignment) -> Result<Point, EvalError> {
    let mut acc = m.unit().scaled(t.offset());
    acc = acc.add_scaled(t.e_in_coeff(), m.e_in());
    acc = acc.add_scaled(t.e_out_coeff(), m.e_out());
    for (v, c) in t.coeffs() {
        let p = asgn.get(v).ok_or_else(|| EvalError::Unassigned(v.into()))?;
        if p.dim() != m.dim() {
            return Err(EvalError::DimensionMismatch);
        }
        acc = acc.add_scaled(c, p);
    }
    Ok(acc)
}

pub fn eval_atom(m: &ModelDescriptor, a: &Atom, asgn: &Assignment, budget_bits: u32) -> Result<bool, EvalError> {
    let v = eval_term(m, &a.arg, asgn)?;
    let zero = Point::zero(m.dim());
    Ok(match a.kind {
        AtomKind::Lt => v < zero,
        AtomKind::Le => v <= zero,
        AtomKind::Eq => v.is_zero(),
        AtomKind::Ne => !v.is_zero(),
        AtomKind::InU => m.in_u_with(&v, budget_bits)?,
        AtomKind::InI => m.in_i(&v),
    })
}

/// Truth of a quantifier-free formula under `asgn`.
pub fn eval_formula(m: &ModelDescriptor, f: &Formula, asgn: &Assignment, budget_bits: u32) -> Result<bool, EvalError> {
    Ok(match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a) => eval_atom(m, a, asgn, budget_bits)?,
        Formula::Not(g) => !eval_formula(m, g, asgn, budget_bits)?,
        Formula::And(gs) => {
            for g in gs {
                if !eval_formula(m, g, asgn, budget_bits)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Or(gs) => {
            for g in gs {
                if eval_formula(m, g, asgn, budget_bits)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Implies(a, b) => !eval_formula(m, a, asgn, budget_bits)? || eval_formula(m, b, asgn, budget_bits)?,
        Formula::Exists(..) | Formula::Forall(..) => return Err(EvalError::Quantified),
    })
}
