//! Exact quantifier elimination, cut classification and Skolem-function
//! experiments for divisible ordered abelian groups with a convex predicate.
//!
//! Models are lexicographic powers of the rationals (`LEX(n)`), with the
//! predicate `U` interpreted as a convex subgroup or a downward-closed cut.

#![no_std]
extern crate alloc;

pub mod classify;
pub mod convex;
pub mod fixtures;
pub mod gen;
pub mod lab;
pub mod model;
pub mod pl;
pub mod qe;
pub mod rational;
pub mod syntax;

#[cfg(test)]
mod testutil;
