//! Terms, formulas, parsing, printing and normal forms.

mod formula;
mod normal;
mod parse;
mod print;
mod simplify;
mod term;

pub use formula::{Atom, AtomKind, Formula, Literal};
pub use normal::{dnf_clauses, dnf_to_formula, nnf, normalize_atoms, substitute, to_dnf, Dnf, DnfOverflow};
pub use parse::{parse_formula, parse_term, rename_bound_apart, ParseError};
pub use simplify::{canonical_atom, decide_atom, simplify, simplify_with};
pub use term::Term;
