//! Interval oracles for the irrational constants allowed in thresholds.

use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// An irrational real number given by a refinable rational interval.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Irrational {
    Pi,
    /// Square root of a positive rational that is not a square.
    Sqrt(Rational),
}

/// A closed rational interval known to contain a value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

/// Bits of precision tried first when deciding a comparison.
pub const START_BITS: u32 = 16;

/// Default cap on refinement; never reached by admissible oracles in practice.
pub const DEFAULT_BUDGET_BITS: u32 = 1 << 14;

impl Irrational {
    /// `Sqrt(q)` if `q` is a positive non-square rational.
    pub fn sqrt(q: Rational) -> Option<Self> {
        if !q.is_positive() {
            return None;
        }
        let is_square = |n: &BigInt| {
            let r = n.sqrt();
            &(&r * &r) == n
        };
        if is_square(q.numer()) && is_square(q.denom()) {
            return None;
        }
        Some(Irrational::Sqrt(q))
    }

    /// An interval of width at most `2^-bits` containing the value.
    pub fn refine(&self, bits: u32) -> Interval {
        match self {
            Irrational::Pi => pi_interval(bits),
            Irrational::Sqrt(q) => sqrt_interval(q, bits),
        }
    }

    /// Compares `value` with a rational, refining from [`START_BITS`] and
    /// doubling. Returns the ordering of `self` relative to `q` and the
    /// deciding interval. Never `Equal` for an admissible oracle.
    pub fn cmp_rational(&self, q: &Rational, budget_bits: u32) -> Option<(Ordering, Interval)> {
        self.sign_of_affine(&Rational::one(), &-q, budget_bits)
    }

    /// Sign of `b * value + a` for `b != 0`, as an ordering against zero.
    pub fn sign_of_affine(&self, b: &Rational, a: &Rational, budget_bits: u32) -> Option<(Ordering, Interval)> {
        debug_assert!(!b.is_zero());
        let mut bits = START_BITS;
        loop {
            let iv = self.refine(bits);
            let x = b * &iv.lo + a;
            let y = b * &iv.hi + a;
            if x.is_positive() && y.is_positive() {
                return Some((Ordering::Greater, iv));
            }
            if x.is_negative() && y.is_negative() {
                return Some((Ordering::Less, iv));
            }
            if bits >= budget_bits {
                return None;
            }
            bits = bits.saturating_mul(2).min(budget_bits);
        }
    }

    /// A rational lower approximation that increases towards the value as `k` grows.
    pub fn approx_below(&self, k: u32) -> Rational {
        self.refine(k).lo
    }

    pub fn approx_above(&self, k: u32) -> Rational {
        self.refine(k).hi
    }
}

impl fmt::Display for Irrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Irrational::Pi => f.write_str("pi"),
            Irrational::Sqrt(q) => write!(f, "sqrt({q})"),
        }
    }
}

/// `floor(2^scale / (k * x^power))` style fixed-point arctan(1/x) with an error count.
fn arctan_inv_fixed(x: u32, scale: &BigInt) -> (BigInt, BigInt) {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = scale / &x; // scale / x^(2k+1), truncated
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    let mut terms = BigInt::zero();
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += &term;
        } else {
            sum -= &term;
        }
        terms += 1;
        power /= &x2;
        k += 1;
    }
    // Each truncation loses less than one unit (power and term); the tail is below one unit.
    (sum, terms * 2 + 2)
}

fn pi_interval(bits: u32) -> Interval {
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239).
    let guard = 32;
    let scale = BigInt::one() << (bits + guard);
    let (a, ea) = arctan_inv_fixed(5, &scale);
    let (b, eb) = arctan_inv_fixed(239, &scale);
    let centre = a * 16 - b * 4;
    let err = ea * 16 + eb * 4;
    let den = Rational::from_integer(scale);
    Interval { lo: Rational::from_integer(&centre - &err) / &den, hi: Rational::from_integer(&centre + &err) / &den }
}

fn sqrt_interval(q: &Rational, bits: u32) -> Interval {
    // sqrt(a/b) = sqrt(a*b)/b; s = isqrt(a*b*4^B) gives s <= sqrt(ab) 2^B < s+1.
    let (a, b) = (q.numer(), q.denom());
    let shift = BigInt::one() << (2 * bits as usize);
    let s = (a * b * shift).sqrt();
    let den = b * (BigInt::one() << bits as usize);
    Interval { lo: Rational::new(s.clone(), den.clone()), hi: Rational::new(s + 1, den) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, pow2, ratio};

    #[test]
    fn pi_interval_is_tight_and_correct() {
        for bits in [8, 16, 64, 200] {
            let iv = Irrational::Pi.refine(bits);
            assert!(&iv.hi - &iv.lo <= pow2(-(bits as i64)));
            // 3.14159265358979 < pi < 3.14159265358980
            assert!(iv.lo < ratio(314159265358980, 100000000000000));
            assert!(iv.hi > ratio(314159265358979, 100000000000000));
        }
    }

    #[test]
    fn refinement_is_nested_enough() {
        let coarse = Irrational::Pi.refine(16);
        let fine = Irrational::Pi.refine(32);
        // Both contain pi, so they overlap; the finer lies within the coarse one widened by its width.
        assert!(fine.lo >= &coarse.lo - (&coarse.hi - &coarse.lo));
        assert!(fine.hi <= &coarse.hi + (&coarse.hi - &coarse.lo));
    }

    #[test]
    fn sqrt_intervals() {
        let r2 = Irrational::sqrt(int(2)).unwrap();
        let iv = r2.refine(40);
        assert!(&iv.lo * &iv.lo < int(2) && &iv.hi * &iv.hi > int(2));
        assert!(Irrational::sqrt(int(4)).is_none());
        assert!(Irrational::sqrt(ratio(9, 4)).is_none());
        assert!(Irrational::sqrt(ratio(1, 2)).is_some());
        assert!(Irrational::sqrt(int(-2)).is_none());
    }

    #[test]
    fn comparisons_terminate() {
        let (o, iv) = Irrational::Pi.cmp_rational(&ratio(31416, 10000), DEFAULT_BUDGET_BITS).unwrap();
        assert_eq!(o, Ordering::Less);
        assert!(iv.hi <= ratio(31416, 10000));
        let (o, _) = Irrational::Pi.cmp_rational(&ratio(314159, 100000), DEFAULT_BUDGET_BITS).unwrap();
        assert_eq!(o, Ordering::Greater);
        // 2 * sqrt(2) - 3 < 0
        let r2 = Irrational::sqrt(int(2)).unwrap();
        assert_eq!(r2.sign_of_affine(&int(2), &int(-3), 64).unwrap().0, Ordering::Less);
    }
}
