use alloc::collections::BTreeMap;
use alloc::string::String;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// A linear term `sum c_v * v + a * e_in + b * e_out + q * 1` in canonical sparse form.
///
/// `1` is the designated unit of the model, so a rational literal `q` denotes `q * 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Term {
    coeffs: BTreeMap<String, Rational>,
    e_in: Rational,
    e_out: Rational,
    offset: Rational,
}

fn insert_nonzero(map: &mut BTreeMap<String, Rational>, v: &str, c: Rational) {
    if c.is_zero() {
        map.remove(v);
    } else {
        map.insert(v.into(), c);
    }
}

impl Term {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn var(name: &str) -> Self {
        Self::var_scaled(name, Rational::one())
    }

    pub fn var_scaled(name: &str, c: Rational) -> Self {
        let mut t = Self::zero();
        insert_nonzero(&mut t.coeffs, name, c);
        t
    }

    /// The rational literal `q`, i.e. `q * 1`.
    pub fn constant(q: Rational) -> Self {
        Self { offset: q, ..Self::zero() }
    }

    pub fn e_in() -> Self {
        Self { e_in: Rational::one(), ..Self::zero() }
    }

    pub fn e_out() -> Self {
        Self { e_out: Rational::one(), ..Self::zero() }
    }

    pub fn from_parts(
        coeffs: impl IntoIterator<Item = (String, Rational)>,
        e_in: Rational,
        e_out: Rational,
        offset: Rational,
    ) -> Self {
        let mut t = Self { e_in, e_out, offset, ..Self::zero() };
        for (v, c) in coeffs {
            let sum = t.coeff(&v) + c;
            insert_nonzero(&mut t.coeffs, &v, sum);
        }
        t
    }

    pub fn coeff(&self, v: &str) -> Rational {
        self.coeffs.get(v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.coeffs.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn e_in_coeff(&self) -> &Rational {
        &self.e_in
    }

    pub fn e_out_coeff(&self) -> &Rational {
        &self.e_out
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn has_var(&self, v: &str) -> bool {
        self.coeffs.contains_key(v)
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.coeffs.keys().map(String::as_str)
    }

    /// No variables at all (a closed term).
    pub fn is_closed(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Closed and free of `e_in`/`e_out`: a rational multiple of the unit.
    pub fn as_rational(&self) -> Option<&Rational> {
        (self.is_closed() && self.e_in.is_zero() && self.e_out.is_zero()).then_some(&self.offset)
    }

    pub fn is_zero(&self) -> bool {
        self.as_rational().is_some_and(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
            e_in: &self.e_in * c,
            e_out: &self.e_out * c,
            offset: &self.offset * c,
        }
    }

    /// Splits off `v`: returns `(c, rest)` with `self = c * v + rest`.
    pub fn split(&self, v: &str) -> (Rational, Term) {
        let mut rest = self.clone();
        let c = rest.coeffs.remove(v).unwrap_or_else(Rational::zero);
        (c, rest)
    }

    /// Replaces `v` by `t`.
    pub fn substitute(&self, v: &str, t: &Term) -> Term {
        match self.coeffs.get(v) {
            None => self.clone(),
            Some(c) => {
                let (c, rest) = (c.clone(), self.split(v).1);
                rest + t.scale(&c)
            }
        }
    }

    pub fn rename(&self, from: &str, to: &str) -> Term {
        self.substitute(from, &Term::var(to))
    }

    /// First nonzero coefficient in a fixed order (variables, e_in, e_out, offset).
    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs
            .values()
            .next()
            .or_else(|| [&self.e_in, &self.e_out, &self.offset].into_iter().find(|c| !c.is_zero()))
    }

    /// Scales so the leading coefficient is `1` (for sign-insensitive atoms).
    pub fn monic(&self) -> Term {
        match self.leading_coeff() {
            Some(c) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// Scales by a positive factor so the leading coefficient is `±1`.
    pub fn positive_normal(&self) -> Term {
        match self.leading_coeff() {
            Some(c) => self.scale(&c.abs().recip()),
            None => self.clone(),
        }
    }
}

impl Add for Term {
    type Output = Term;
    fn add(self, rhs: Term) -> Term {
        &self + &rhs
    }
}

impl Add for &Term {
    type Output = Term;
    fn add(self, rhs: &Term) -> Term {
        let mut out = self.clone();
        for (v, c) in &rhs.coeffs {
            let sum = out.coeff(v) + c;
            insert_nonzero(&mut out.coeffs, v, sum);
        }
        out.e_in += &rhs.e_in;
        out.e_out += &rhs.e_out;
        out.offset += &rhs.offset;
        out
    }
}

impl Neg for Term {
    type Output = Term;
    fn neg(self) -> Term {
        -&self
    }
}

impl Neg for &Term {
    type Output = Term;
    fn neg(self) -> Term {
        self.scale(&-Rational::one())
    }
}

impl Sub for Term {
    type Output = Term;
    fn sub(self, rhs: Term) -> Term {
        &self - &rhs
    }
}

impl Sub for &Term {
    type Output = Term;
    fn sub(self, rhs: &Term) -> Term {
        self + &-rhs
    }
}

impl Mul<&Rational> for &Term {
    type Output = Term;
    fn mul(self, rhs: &Rational) -> Term {
        self.scale(rhs)
    }
}

impl Mul<&Rational> for Term {
    type Output = Term;
    fn mul(self, rhs: &Rational) -> Term {
        self.scale(rhs)
    }
}
