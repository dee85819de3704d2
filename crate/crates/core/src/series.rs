//! Truncated bigraded power series.
//!
//! A [`BigradedSeries`] stands for `sum c(d, k) e^{d y1} y2^k`, known exactly
//! for every `d <= truncation`. The `y1` direction is exponential, so `d/dy1`
//! multiplies a term by `d` and never changes its key.

use alloc::collections::BTreeMap;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Key of a term: `(d, k)` for `e^{d y1} y2^k`.
pub type Key = (u32, u32);

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BigradedSeries {
    terms: BTreeMap<Key, Rational>,
    truncation: u32,
}

impl BigradedSeries {
    pub fn zero(truncation: u32) -> Self {
        BigradedSeries {
            terms: BTreeMap::new(),
            truncation,
        }
    }

    pub fn one(truncation: u32) -> Self {
        Self::constant(Rational::one(), truncation)
    }

    pub fn constant(c: Rational, truncation: u32) -> Self {
        let mut s = Self::zero(truncation);
        s.insert((0, 0), c);
        s
    }

    /// `c e^{d y1} y2^k`, or the empty series when `c == 0`.
    pub fn monomial(d: u32, k: u32, c: Rational, truncation: u32) -> Result<Self> {
        if d > truncation {
            return Err(Error::DegreeOutOfRange { d, truncation });
        }
        let mut s = Self::zero(truncation);
        s.insert((d, k), c);
        Ok(s)
    }

    /// Builds a series from `(d, k, c)` triples, summing repeated keys and
    /// silently dropping terms beyond the truncation.
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, u32, Rational)>, truncation: u32) -> Self {
        let mut s = Self::zero(truncation);
        for (d, k, c) in terms {
            if d <= truncation {
                s.accumulate((d, k), c);
            }
        }
        s
    }

    /// The power `y2^k` as a series of degree zero.
    pub fn y2_power(k: u32, truncation: u32) -> Self {
        let mut s = Self::zero(truncation);
        s.insert((0, k), Rational::one());
        s
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms in increasing `(d, k)` order.
    pub fn terms(&self) -> impl Iterator<Item = (Key, &Rational)> + '_ {
        self.terms.iter().map(|(&key, c)| (key, c))
    }

    /// Coefficient at `(d, k)`; asking past the truncation is an error since
    /// that coefficient is unknown, not zero.
    pub fn coefficient(&self, d: u32, k: u32) -> Result<Rational> {
        if d > self.truncation {
            return Err(Error::DegreeOutOfRange {
                d,
                truncation: self.truncation,
            });
        }
        Ok(self.terms.get(&(d, k)).cloned().unwrap_or_else(Rational::zero))
    }

    /// Drops all terms of degree above `truncation` (which may only shrink).
    pub fn truncate(&self, truncation: u32) -> Self {
        let truncation = truncation.min(self.truncation);
        BigradedSeries {
            terms: self
                .terms
                .range(..=(truncation, u32::MAX))
                .map(|(&key, c)| (key, c.clone()))
                .collect(),
            truncation,
        }
    }

    /// The terms of exactly degree `d`.
    pub fn degree_part(&self, d: u32) -> impl Iterator<Item = (u32, &Rational)> + '_ {
        self.terms.range((d, 0)..=(d, u32::MAX)).map(|(&(_, k), c)| (k, c))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.truncation);
        }
        BigradedSeries {
            terms: self.terms.iter().map(|(&key, v)| (key, v * c)).collect(),
            truncation: self.truncation,
        }
    }

    /// Multiplication by `y2^shift`.
    pub fn shift_y2(&self, shift: u32) -> Self {
        BigradedSeries {
            terms: self
                .terms
                .iter()
                .map(|(&(d, k), v)| ((d, k + shift), v.clone()))
                .collect(),
            truncation: self.truncation,
        }
    }

    /// `d/dy1`: the term at `(d, k)` is multiplied by `d`.
    pub fn d1(&self) -> Self {
        BigradedSeries {
            terms: self
                .terms
                .iter()
                .filter(|(&(d, _), _)| d > 0)
                .map(|(&(d, k), c)| ((d, k), c * BigInt::from(d)))
                .collect(),
            truncation: self.truncation,
        }
    }

    /// `d/dy2` by the power rule.
    pub fn d2(&self) -> Self {
        BigradedSeries {
            terms: self
                .terms
                .iter()
                .filter(|(&(_, k), _)| k > 0)
                .map(|(&(d, k), c)| ((d, k - 1), c * BigInt::from(k)))
                .collect(),
            truncation: self.truncation,
        }
    }

    /// `d1^a d2^b` applied to `self`.
    pub fn partial(&self, a: u32, b: u32) -> Self {
        let mut s = self.clone();
        for _ in 0..a {
            s = s.d1();
        }
        for _ in 0..b {
            s = s.d2();
        }
        s
    }

    /// Antiderivative in `y2` whose value at `y2 = 0` vanishes in every degree.
    pub fn integrate_y2(&self) -> Self {
        BigradedSeries {
            terms: self
                .terms
                .iter()
                .map(|(&(d, k), c)| ((d, k + 1), c / BigInt::from(k + 1)))
                .collect(),
            truncation: self.truncation,
        }
    }

    /// Multiplicative inverse of `1 + g` where `g` has only terms of positive
    /// degree, by summing `(-g)^n` until the powers leave the truncation.
    pub fn invert_unit(&self) -> Result<Self> {
        if self.terms.get(&(0, 0)) != Some(&Rational::one())
            || self.terms.keys().any(|&(d, k)| d == 0 && k != 0)
        {
            return Err(Error::NotAUnit);
        }
        let mut neg_tail = self.clone();
        neg_tail.terms.remove(&(0, 0));
        let neg_tail = -neg_tail;

        let mut sum = Self::one(self.truncation);
        let mut power = Self::one(self.truncation);
        // Every factor raises the degree by at least one.
        for _ in 0..self.truncation {
            power = &power * &neg_tail;
            if power.is_zero() {
                break;
            }
            sum = &sum + &power;
        }
        Ok(sum)
    }

    /// Exact power by repeated multiplication.
    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(self.truncation), |acc, _| &acc * self)
    }

    fn insert(&mut self, key: Key, c: Rational) {
        if !c.is_zero() {
            self.terms.insert(key, c);
        }
    }

    fn accumulate(&mut self, key: Key, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }
}

impl Add for &BigradedSeries {
    type Output = BigradedSeries;

    fn add(self, rhs: &BigradedSeries) -> BigradedSeries {
        let truncation = self.truncation.min(rhs.truncation);
        let mut out = self.truncate(truncation);
        for (&key, c) in rhs.terms.range(..=(truncation, u32::MAX)) {
            out.accumulate(key, c.clone());
        }
        out
    }
}

impl Sub for &BigradedSeries {
    type Output = BigradedSeries;

    fn sub(self, rhs: &BigradedSeries) -> BigradedSeries {
        self + &(-rhs)
    }
}

impl Neg for &BigradedSeries {
    type Output = BigradedSeries;

    fn neg(self) -> BigradedSeries {
        BigradedSeries {
            terms: self.terms.iter().map(|(&key, c)| (key, -c)).collect(),
            truncation: self.truncation,
        }
    }
}

impl Neg for BigradedSeries {
    type Output = BigradedSeries;

    fn neg(self) -> BigradedSeries {
        -&self
    }
}

impl Mul for &BigradedSeries {
    type Output = BigradedSeries;

    fn mul(self, rhs: &BigradedSeries) -> BigradedSeries {
        let truncation = self.truncation.min(rhs.truncation);
        let mut out = BigradedSeries::zero(truncation);
        for (&(d1, k1), a) in &self.terms {
            if d1 > truncation {
                break;
            }
            for (&(d2, k2), b) in rhs.terms.range(..=(truncation - d1, u32::MAX)) {
                out.accumulate((d1 + d2, k1 + k2), a * b);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $method:ident),*) => {$(
        impl $tr for BigradedSeries {
            type Output = BigradedSeries;
            fn $method(self, rhs: BigradedSeries) -> BigradedSeries {
                (&self).$method(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

/// Renders as `c*e^{d y1}*y2^k + ... + O(e^{(T+1) y1})`.
impl fmt::Display for BigradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (&(d, k), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            if d > 0 {
                write!(f, "*e^({d}y1)")?;
            }
            if k > 0 {
                write!(f, "*y2^{k}")?;
            }
        }
        if !self.terms.is_empty() {
            f.write_str(" + ")?;
        }
        write!(f, "O(e^({}y1))", self.truncation + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use alloc::string::ToString;

    fn mono(d: u32, k: u32, c: Rational, t: u32) -> BigradedSeries {
        BigradedSeries::monomial(d, k, c, t).unwrap()
    }

    #[test]
    fn monomial_construction() {
        let s = mono(1, 2, ratio(1, 2), 10);
        assert_eq!(s.len(), 1);
        assert_eq!(s.coefficient(1, 2).unwrap(), ratio(1, 2));
        assert!(mono(0, 0, int(0), 5).is_empty());
        let c3 = ratio(12, 40320);
        assert_eq!(mono(3, 8, c3.clone(), 10).coefficient(3, 8).unwrap(), c3);
        assert_eq!(
            BigradedSeries::monomial(4, 0, int(1), 3),
            Err(Error::DegreeOutOfRange { d: 4, truncation: 3 })
        );
    }

    #[test]
    fn add_identity_cancellation_and_disjoint() {
        let f = mono(1, 2, ratio(1, 2), 10);
        assert_eq!(&f + &BigradedSeries::zero(10), f);
        assert!((&f + &mono(1, 2, ratio(-1, 2), 10)).is_empty());
        let g = &mono(1, 2, int(1), 10) + &mono(2, 5, int(1), 10);
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn add_takes_min_truncation() {
        let f = mono(3, 0, int(1), 5);
        let g = mono(1, 0, int(1), 2);
        let s = &f + &g;
        assert_eq!(s.truncation(), 2);
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn mul_cases() {
        let f = mono(1, 2, ratio(1, 2), 10);
        assert!((&f * &BigradedSeries::zero(10)).is_empty());
        assert_eq!(&f * &f, mono(2, 4, ratio(1, 4), 10));
        // Products past the truncation are discarded.
        let g = mono(2, 0, int(1), 3);
        assert!((&g * &g).is_empty());
        assert_eq!((&g * &g).truncation(), 3);
    }

    #[test]
    fn derivatives() {
        assert!(mono(0, 0, int(5), 3).d1().is_empty());
        let f = mono(3, 8, ratio(12, 40320), 10);
        assert_eq!(f.d1().coefficient(3, 8).unwrap(), ratio(36, 40320));
        assert_eq!(f.d1().d1().coefficient(3, 8).unwrap(), ratio(108, 40320));
        assert!(mono(1, 0, int(7), 3).d2().is_empty());
        assert_eq!(mono(1, 2, ratio(1, 2), 3).d2(), mono(1, 1, int(1), 3));
        assert!(mono(1, 2, ratio(1, 2), 3).d2().d2().d2().is_empty());
    }

    #[test]
    fn integrate_power_rule() {
        assert!(BigradedSeries::zero(4).integrate_y2().is_empty());
        assert_eq!(mono(1, 1, int(1), 4).integrate_y2(), mono(1, 2, ratio(1, 2), 4));
    }

    #[test]
    fn invert_unit_cases() {
        let one = BigradedSeries::one(6);
        assert_eq!(one.invert_unit().unwrap(), one);
        let a = ratio(3, 7);
        let f = &one + &mono(1, 3, a.clone(), 6);
        let inv = f.invert_unit().unwrap();
        assert_eq!(inv.coefficient(2, 6).unwrap(), &a * &a);
        assert_eq!(inv.coefficient(1, 3).unwrap(), -a);
        assert_eq!(&f * &inv, one);
    }

    #[test]
    fn invert_rejects_non_units() {
        assert_eq!(BigradedSeries::zero(3).invert_unit(), Err(Error::NotAUnit));
        assert_eq!(BigradedSeries::constant(int(2), 3).invert_unit(), Err(Error::NotAUnit));
        let f = &BigradedSeries::one(3) + &mono(0, 1, int(1), 3);
        assert_eq!(f.invert_unit(), Err(Error::NotAUnit));
    }

    #[test]
    fn coefficient_out_of_range() {
        assert_eq!(BigradedSeries::zero(4).coefficient(2, 4).unwrap(), int(0));
        assert_eq!(
            mono(1, 2, ratio(1, 2), 1).coefficient(2, 4),
            Err(Error::DegreeOutOfRange { d: 2, truncation: 1 })
        );
    }

    #[test]
    fn display_is_stable() {
        let s = &mono(0, 0, int(-1), 2) + &mono(1, 2, ratio(1, 2), 2);
        assert_eq!(s.to_string(), "(-1) + (1/2)*e^(1y1)*y2^2 + O(e^(3y1))");
    }
}
