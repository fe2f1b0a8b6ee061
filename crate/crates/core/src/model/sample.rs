//! Seeded sampling of points that exercise thresholds, cosets and ties.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use super::eval::Assignment;
use super::point::Point;
use super::{Entry, ModelDescriptor};
use crate::rational::{int, ratio, Rational};

/// Draws points of a model from a pool biased towards interesting values:
/// threshold entries and their neighbours, the constants, small rationals,
/// and combinations of earlier draws (to create equalities and coset ties).
pub struct PointSampler<'m> {
    m: &'m ModelDescriptor,
    pool: Vec<Rational>,
}

impl<'m> PointSampler<'m> {
    pub fn new(m: &'m ModelDescriptor) -> Self {
        let mut pool: Vec<Rational> = [0, 1, -1, 2, -2, 3, -3].iter().map(|&k| int(k)).collect();
        pool.extend([ratio(1, 2), ratio(-1, 2), ratio(3, 2), ratio(-3, 2), ratio(1, 3), ratio(7, 2)]);
        if let Some((threshold, _)) = m.threshold() {
            for e in threshold {
                match e {
                    Entry::Rational(r) => {
                        pool.extend([r.clone(), r + int(1), r - int(1), r + ratio(1, 2), -r]);
                    }
                    Entry::Irrational(theta) => {
                        let iv = theta.refine(8);
                        pool.extend([iv.lo.clone(), iv.hi.clone(), -iv.lo, -iv.hi]);
                        pool.extend([theta.refine(2).lo, theta.refine(2).hi]);
                    }
                    _ => {}
                }
            }
        }
        for p in [m.e_in(), m.e_out()] {
            pool.extend(p.0.iter().filter(|c| !c.is_zero()).cloned());
        }
        pool.sort();
        pool.dedup();
        Self { m, pool }
    }

    fn coord<R: Rng>(&self, rng: &mut R) -> Rational {
        if rng.gen_bool(0.35) {
            Rational::zero()
        } else {
            self.pool.choose(rng).unwrap().clone()
        }
    }

    pub fn point<R: Rng>(&self, rng: &mut R) -> Point {
        let n = self.m.dim();
        match rng.gen_range(0..10) {
            0 => self.m.e_in().scaled(&self.coord(rng)),
            1 => self.m.e_out().scaled(&self.coord(rng)),
            2 => {
                // Close to the upper boundary of U, where membership flips.
                let k = rng.gen_range(0..8);
                let b = self.m.upper_boundary();
                let p = if rng.gen_bool(0.5) { b.approach_from_below(k) } else { b.approach_from_above(k) };
                p.unwrap_or_else(|| Point::zero(n))
            }
            _ => Point((0..n).map(|_| self.coord(rng)).collect()),
        }
    }

    /// An assignment of `vars`; later variables sometimes reuse or perturb
    /// earlier values so that equalities and same-coset pairs occur.
    pub fn assignment<R: Rng>(&self, rng: &mut R, vars: &[String]) -> Assignment {
        let mut out = Assignment::new();
        let mut seen: Vec<Point> = Vec::new();
        for v in vars {
            let p = if !seen.is_empty() && rng.gen_bool(0.3) {
                let base = seen.choose(rng).unwrap().clone();
                match rng.gen_range(0..4) {
                    0 => base,
                    1 => &base + &self.small_in_stabilizer(rng),
                    2 => -&base,
                    _ => base.scaled(&ratio(1, 2)),
                }
            } else {
                self.point(rng)
            };
            seen.push(p.clone());
            out.insert(v.clone(), p);
        }
        out
    }

    /// A point of the stabilizer subgroup, possibly zero.
    pub fn small_in_stabilizer<R: Rng>(&self, rng: &mut R) -> Point {
        let n = self.m.dim();
        let k = self.m.stabilizer_level();
        let mut p = Point::zero(n);
        for c in p.0.iter_mut().skip(k) {
            *c = self.coord(rng);
        }
        p
    }
}
