//! Light-weight, model-independent simplification.

use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use super::formula::{Atom, AtomKind, Formula};

/// Canonical scaling of an atom's argument. Order atoms are scaled by a
/// positive factor, sign-insensitive atoms to a monic argument. `U` atoms are
/// left alone since `U` need not be closed under scaling.
pub fn canonical_atom(a: &Atom) -> Atom {
    match a.kind {
        AtomKind::Lt | AtomKind::Le => Atom::new(a.kind, a.arg.positive_normal()),
        AtomKind::Eq | AtomKind::Ne | AtomKind::InI => Atom::new(a.kind, a.arg.monic()),
        AtomKind::InU => a.clone(),
    }
}

/// Truth value of an atom whose argument is a rational multiple of the
/// (positive) unit, if decidable without a model.
pub fn decide_atom(a: &Atom) -> Option<bool> {
    let q = a.arg.as_rational()?;
    match a.kind {
        AtomKind::Lt => Some(q.is_negative()),
        AtomKind::Le => Some(!q.is_positive()),
        AtomKind::Eq => Some(q.is_zero()),
        AtomKind::Ne => Some(!q.is_zero()),
        AtomKind::InI | AtomKind::InU if q.is_zero() => Some(true),
        _ => None,
    }
}

/// Simplifies with a caller-supplied atom decision procedure.
pub fn simplify_with(f: &Formula, decide: &impl Fn(&Atom) -> Option<bool>) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(a) => {
            let a = canonical_atom(a);
            match decide(&a) {
                Some(true) => Formula::True,
                Some(false) => Formula::False,
                None => Formula::Atom(a),
            }
        }
        Formula::Not(g) => simplify_with(g, decide).negated(),
        Formula::And(gs) | Formula::Or(gs) => {
            let is_and = matches!(f, Formula::And(_));
            let parts: Vec<Formula> = gs.iter().map(|g| simplify_with(g, decide)).collect();
            let combined = if is_and { Formula::and(parts) } else { Formula::or(parts) };
            match combined {
                Formula::And(ps) => dedupe(ps, true),
                Formula::Or(ps) => dedupe(ps, false),
                other => other,
            }
        }
        Formula::Implies(a, b) => {
            let a = simplify_with(a, decide);
            let b = simplify_with(b, decide);
            match (&a, &b) {
                (Formula::False, _) | (_, Formula::True) => Formula::True,
                (Formula::True, _) => b,
                (_, Formula::False) => a.negated(),
                _ => Formula::implies(a, b),
            }
        }
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let body = simplify_with(g, decide);
            if !body.free_vars().contains(v) {
                return body;
            }
            if matches!(f, Formula::Exists(..)) {
                Formula::exists(v, body)
            } else {
                Formula::forall(v, body)
            }
        }
    }
}

/// Removes duplicate children and detects complementary pairs.
fn dedupe(parts: Vec<Formula>, is_and: bool) -> Formula {
    let mut out: Vec<Formula> = Vec::with_capacity(parts.len());
    for p in parts {
        if out.contains(&p) {
            continue;
        }
        let complement = p.clone().negated();
        if out.contains(&complement) {
            return if is_and { Formula::False } else { Formula::True };
        }
        out.push(p);
    }
    if is_and {
        Formula::and(out)
    } else {
        Formula::or(out)
    }
}

/// Simplification valid in every model.
pub fn simplify(f: &Formula) -> Formula {
    simplify_with(f, &decide_atom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    #[test]
    fn folds_constants() {
        let f = parse_formula("(0 < 1 & x < y) | (1 < 0)").unwrap();
        assert_eq!(simplify(&f), parse_formula("x < y").unwrap());
        let g = parse_formula("U(x) & ~U(x)").unwrap();
        assert_eq!(simplify(&g), Formula::False);
        let h = parse_formula("2 * x < 4 * y").unwrap();
        assert_eq!(simplify(&h), parse_formula("x < 2 * y").unwrap());
    }
}
