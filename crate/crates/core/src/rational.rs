//! Helpers around exact rationals.

use alloc::string::{String, ToString};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number used throughout the crate.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn half() -> Rational {
    ratio(1, 2)
}

/// Parses `p`, `-p` or `p/q` with decimal integers.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).ok()?;
    let den = BigInt::from_str(den).ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Formats as `p` or `p/q`.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

/// Power of two as a rational, negative exponents allowed.
pub fn pow2(e: i64) -> Rational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// Least common multiple of the denominators.
pub fn lcm_denominators<'a>(qs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    qs.into_iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// A rational strictly between `lo` and `hi` with a small denominator.
pub fn simple_between(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo < hi);
    // Stern-Brocot style: try denominators 1, 2, 4, ... until a fitting numerator exists.
    let mut den = BigInt::one();
    loop {
        let scaled = lo * Rational::from_integer(den.clone());
        let candidate = Rational::new(scaled.floor().to_integer() + BigInt::one(), den.clone());
        if &candidate > lo && &candidate < hi {
            return candidate;
        }
        den <<= 1;
    }
}

pub fn sign(q: &Rational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6"), Some(ratio(1, 2)));
        assert_eq!(parse_rational("-4"), Some(int(-4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(format_rational(&ratio(-6, 4)), "-3/2");
    }

    #[test]
    fn between_is_strict() {
        let lo = ratio(314, 100);
        let hi = ratio(315, 100);
        let m = simple_between(&lo, &hi);
        assert!(m > lo && m < hi);
        assert_eq!(simple_between(&int(0), &int(5)), int(1));
    }
}
