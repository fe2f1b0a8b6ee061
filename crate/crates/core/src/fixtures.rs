//! The standard models: the archimedean cut at pi, the lexicographic
//! examples in dimension 2 and 3, and subgroup models.

use alloc::string::String;
use alloc::vec::Vec;

use crate::model::{Entry, Irrational, ModelDescriptor, Point, UInterp};
use crate::rational::{int, ratio, Rational};

fn pt(xs: &[Rational]) -> Point {
    Point(xs.to_vec())
}

fn r(k: i64) -> Entry {
    Entry::Rational(int(k))
}

fn cut(threshold: Vec<Entry>, strict: bool) -> UInterp {
    UInterp::DownwardCut { threshold, strict }
}

/// `Q` with `U = (-inf, pi)`.
pub fn q1_pi() -> ModelDescriptor {
    ModelDescriptor::new(1, cut([Entry::Irrational(Irrational::Pi)].into(), true), pt(&[int(1)]), pt(&[int(4)]))
        .expect("fixture")
}

/// `LEX(3)` cut at `(1, 1, pi)`.
pub fn q3_11pi() -> ModelDescriptor {
    ModelDescriptor::new(
        3,
        cut([r(1), r(1), Entry::Irrational(Irrational::Pi)].into(), true),
        pt(&[int(0), int(0), int(1)]),
        pt(&[int(2), int(0), int(0)]),
    )
    .expect("fixture")
}

/// `LEX(2)` cut at `(1, +inf)`.
pub fn lex2_1inf() -> ModelDescriptor {
    ModelDescriptor::new(2, cut([r(1), Entry::PlusInf].into(), true), pt(&[int(0), int(1)]), pt(&[int(2), int(0)]))
        .expect("fixture")
}

/// `LEX(2)` with the rational cut `x <= (1, 1)`.
pub fn lex2_11() -> ModelDescriptor {
    ModelDescriptor::new(2, cut([r(1), r(1)].into(), false), pt(&[int(0), int(1)]), pt(&[int(2), int(0)]))
        .expect("fixture")
}

/// `LEX(2)` with `U = {0} x Q`.
pub fn lex2_sub1() -> ModelDescriptor {
    ModelDescriptor::new(2, UInterp::Subgroup { level: 1 }, pt(&[int(0), int(1)]), pt(&[int(1), int(0)]))
        .expect("fixture")
}

/// `LEX(3)` with `U = {0} x {0} x Q`.
pub fn lex3_sub2() -> ModelDescriptor {
    ModelDescriptor::new(
        3,
        UInterp::Subgroup { level: 2 },
        pt(&[int(0), int(0), int(1)]),
        pt(&[int(0), int(1), int(0)]),
    )
    .expect("fixture")
}

/// `LEX(3)` cut at `(1, pi, 0)`: valuational, but the quotient cut is irrational.
pub fn lex3_1pi0() -> ModelDescriptor {
    ModelDescriptor::new(
        3,
        cut([r(1), Entry::Irrational(Irrational::Pi), r(0)].into(), true),
        pt(&[int(0), int(0), int(1)]),
        pt(&[int(2), int(0), int(0)]),
    )
    .expect("fixture")
}

/// `LEX(3)` cut at `(1/2, 0, +inf)`.
pub fn lex3_half0inf() -> ModelDescriptor {
    ModelDescriptor::new(
        3,
        cut([Entry::Rational(ratio(1, 2)), r(0), Entry::PlusInf].into(), true),
        pt(&[int(0), int(0), int(1)]),
        pt(&[int(1), int(0), int(0)]),
    )
    .expect("fixture")
}

/// `LEX(2)` cut at `(-1, +inf)`: zero is not in `U`.
pub fn lex2_m1inf() -> ModelDescriptor {
    ModelDescriptor::new(2, cut([r(-1), Entry::PlusInf].into(), true), pt(&[int(0), int(1)]), pt(&[int(1), int(0)]))
        .expect("fixture")
}

/// All fixtures by name.
pub fn all() -> Vec<(String, ModelDescriptor)> {
    [
        ("q1_pi", q1_pi()),
        ("q3_11pi", q3_11pi()),
        ("lex2_1inf", lex2_1inf()),
        ("lex2_11", lex2_11()),
        ("lex2_sub1", lex2_sub1()),
        ("lex3_sub2", lex3_sub2()),
        ("lex3_1pi0", lex3_1pi0()),
        ("lex3_half0inf", lex3_half0inf()),
        ("lex2_m1inf", lex2_m1inf()),
    ]
    .into_iter()
    .map(|(n, m)| (String::from(n), m))
    .collect()
}
