use core::fmt::{self, Display, Formatter, Write};

use num_traits::{One, Signed, Zero};

use super::formula::{Atom, AtomKind, Formula, Literal};
use super::term::Term;
use crate::rational::Rational;

/// Writes `c * name` for `c > 0`, eliding a unit coefficient.
fn write_component(f: &mut Formatter<'_>, c: &Rational, name: &str) -> fmt::Result {
    if c.is_one() {
        f.write_str(name)
    } else {
        write!(f, "{c} * {name}")
    }
}

/// Components of a term as `(coefficient, symbol)`; the offset uses an empty symbol.
fn components(t: &Term) -> impl Iterator<Item = (&Rational, &str)> {
    t.coeffs()
        .map(|(v, c)| (c, v))
        .chain([(t.e_in_coeff(), "e_in"), (t.e_out_coeff(), "e_out"), (t.offset(), "")])
        .filter(|(c, _)| !c.is_zero())
}

fn write_signed_sum<'a>(f: &mut Formatter<'_>, parts: impl Iterator<Item = (&'a Rational, &'a str)>) -> fmt::Result {
    let mut first = true;
    for (c, name) in parts {
        let magnitude = c.abs();
        match (first, c.is_negative()) {
            (true, true) => f.write_char('-')?,
            (true, false) => {}
            (false, true) => f.write_str(" - ")?,
            (false, false) => f.write_str(" + ")?,
        }
        if name.is_empty() {
            write!(f, "{magnitude}")?;
        } else {
            write_component(f, &magnitude, name)?;
        }
        first = false;
    }
    if first {
        f.write_char('0')?;
    }
    Ok(())
}

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_signed_sum(f, components(self))
    }
}

/// Prints `arg op 0` as `positive part op negative part`.
fn write_relation(f: &mut Formatter<'_>, arg: &Term, op: &str) -> fmt::Result {
    write_signed_sum(f, components(arg).filter(|(c, _)| c.is_positive()))?;
    write!(f, " {op} ")?;
    let negated: alloc::vec::Vec<(Rational, &str)> =
        components(arg).filter(|(c, _)| c.is_negative()).map(|(c, n)| (-c, n)).collect();
    write_signed_sum(f, negated.iter().map(|(c, n)| (c, *n)))
}

impl Display for Atom {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self.kind {
            AtomKind::Lt => write_relation(f, &self.arg, "<"),
            AtomKind::Le => write_relation(f, &self.arg, "<="),
            AtomKind::Eq => write_relation(f, &self.arg, "="),
            AtomKind::Ne => write_relation(f, &self.arg, "!="),
            AtomKind::InU => write!(f, "U({})", self.arg),
            AtomKind::InI => write!(f, "I({})", self.arg),
        }
    }
}

/// Children are parenthesized unless they are atoms or constants.
fn write_child(f: &mut Formatter<'_>, child: &Formula) -> fmt::Result {
    if matches!(child, Formula::Atom(_) | Formula::True | Formula::False) {
        write!(f, "{child}")
    } else {
        write!(f, "({child})")
    }
}

fn write_chain(f: &mut Formatter<'_>, parts: &[Formula], sep: &str) -> fmt::Result {
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write_child(f, p)?;
    }
    Ok(())
}

impl Display for Formula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(g) => {
                f.write_char('~')?;
                match &**g {
                    Formula::Atom(a) if !matches!(a.kind, AtomKind::InU | AtomKind::InI) => {
                        write!(f, "({a})")
                    }
                    _ => write_child(f, g),
                }
            }
            Formula::And(gs) if gs.is_empty() => f.write_str("true"),
            Formula::Or(gs) if gs.is_empty() => f.write_str("false"),
            Formula::And(gs) if gs.len() == 1 => write!(f, "{}", gs[0]),
            Formula::Or(gs) if gs.len() == 1 => write!(f, "{}", gs[0]),
            Formula::And(gs) => write_chain(f, gs, " & "),
            Formula::Or(gs) => write_chain(f, gs, " | "),
            Formula::Implies(a, b) => {
                write_child(f, a)?;
                f.write_str(" -> ")?;
                write_child(f, b)
            }
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                let q = if matches!(self, Formula::Exists(..)) { 'E' } else { 'A' };
                write!(f, "{q} {v}. ")?;
                match **body {
                    Formula::And(_) | Formula::Or(_) | Formula::Implies(..) => write!(f, "({body})"),
                    _ => write!(f, "{body}"),
                }
            }
        }
    }
}

impl Display for Literal {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}
