//! Differential polynomials in `y2` and the jets of the rational potential.
//!
//! A jet `G[a,b]` stands for `d1^a d2^b Gamma`. A [`DiffPoly`] is a finite
//! `Q`-linear combination of monomials `y2^p * G[a1,b1]^e1 * ...`.
//!
//! Text form, used by `Display` and in mismatch reports:
//!
//! ```text
//! poly     := "0" | term ((" + " | " - ") term)*
//! term     := [coeff "*"] factor ("*" factor)* | coeff
//! factor   := "y2" ["^" int] | "G[" int "," int "]" ["^" int]
//! coeff    := int | int "/" int
//! ```
//!
//! Terms are printed in the canonical monomial order (graded, then by the
//! power of `y2`, then lexicographically by jets).

mod identity;

pub use identity::{
    build_fform_rhs, build_required_pde, random_point_check, random_point_check_with,
    verify_fform, verify_identity, wdvv_psi, Arrangement, FformCoefficients, IdentityMatch,
    IdentityReport, PointCheckReport, PointWitness, RationalExpr, MAX_CLEARING_POWER,
};

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::{format_rational, ratio, Rational};
use crate::series::BigradedSeries;

/// `d1^a d2^b Gamma`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JetVar {
    pub a: u32,
    pub b: u32,
}

impl JetVar {
    pub const fn new(a: u32, b: u32) -> Self {
        JetVar { a, b }
    }

    /// Jet for a subscript string such as `"1122"` (`""` is `Gamma` itself).
    pub fn from_subscript(s: &str) -> Self {
        let a = s.bytes().filter(|&c| c == b'1').count() as u32;
        let b = s.bytes().filter(|&c| c == b'2').count() as u32;
        debug_assert_eq!((a + b) as usize, s.len());
        JetVar { a, b }
    }

    pub fn order(self) -> u32 {
        self.a + self.b
    }
}

impl fmt::Display for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G[{},{}]", self.a, self.b)
    }
}

/// `y2^y2 * prod jet^e`, jets sorted and exponents positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    y2: u32,
    jets: Vec<(JetVar, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn new(y2: u32, jets: impl IntoIterator<Item = (JetVar, u32)>) -> Self {
        let mut m = Monomial { y2, jets: Vec::new() };
        for (j, e) in jets {
            m.mul_jet(j, e);
        }
        m
    }

    pub fn y2_power(&self) -> u32 {
        self.y2
    }

    pub fn jets(&self) -> &[(JetVar, u32)] {
        &self.jets
    }

    pub fn degree(&self) -> u32 {
        self.y2 + self.jets.iter().map(|&(_, e)| e).sum::<u32>()
    }

    fn mul_jet(&mut self, jet: JetVar, e: u32) {
        if e == 0 {
            return;
        }
        match self.jets.binary_search_by(|(j, _)| j.cmp(&jet)) {
            Ok(i) => self.jets[i].1 += e,
            Err(i) => self.jets.insert(i, (jet, e)),
        }
    }

    /// Removes one factor `jet`; the jet must be present.
    fn div_jet(&mut self, jet: JetVar) {
        let i = self
            .jets
            .binary_search_by(|(j, _)| j.cmp(&jet))
            .expect("jet present in monomial");
        self.jets[i].1 -= 1;
        if self.jets[i].1 == 0 {
            self.jets.remove(i);
        }
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = self.clone();
        m.y2 += other.y2;
        for &(j, e) in &other.jets {
            m.mul_jet(j, e);
        }
        m
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.y2.cmp(&other.y2))
            .then_with(|| self.jets.cmp(&other.jets))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| {
            if !core::mem::take(&mut first) {
                f.write_str("*")?;
            }
            Ok::<(), fmt::Error>(())
        };
        if self.y2 > 0 {
            sep(f)?;
            f.write_str("y2")?;
            if self.y2 > 1 {
                write!(f, "^{}", self.y2)?;
            }
        }
        for &(j, e) in &self.jets {
            sep(f)?;
            write!(f, "{j}")?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.accumulate(m, c);
        p
    }

    pub fn y2() -> Self {
        Self::term(Rational::one(), Monomial::new(1, []))
    }

    pub fn y2_pow(n: u32) -> Self {
        Self::term(Rational::one(), Monomial::new(n, []))
    }

    pub fn jet(a: u32, b: u32) -> Self {
        Self::term(Rational::one(), Monomial::new(0, [(JetVar::new(a, b), 1)]))
    }

    /// `Gamma` differentiated by the given subscripts, e.g. `g("122")`.
    pub fn g(subscript: &str) -> Self {
        let j = JetVar::from_subscript(subscript);
        Self::jet(j.a, j.b)
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// First term in canonical order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        DiffPoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Highest `a + b` over all jets, or `None` when no jet occurs.
    pub fn max_jet_order(&self) -> Option<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.jets.iter().map(|(j, _)| j.order()))
            .max()
    }

    /// Whether every jet has `a = 0`.
    pub fn is_normalized(&self) -> bool {
        self.terms.keys().all(|m| m.jets.iter().all(|(j, _)| j.a == 0))
    }

    /// Total derivative in `y2`: `y2 -> 1`, `G[a,b] -> G[a,b+1]`, by Leibniz.
    pub fn derive_y2(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m.y2 > 0 {
                let mut dm = m.clone();
                dm.y2 -= 1;
                out.accumulate(dm, c * BigInt::from(m.y2));
            }
            for &(j, e) in &m.jets {
                let mut dm = m.clone();
                dm.div_jet(j);
                dm.mul_jet(JetVar::new(j.a, j.b + 1), 1);
                out.accumulate(dm, c * BigInt::from(e));
            }
        }
        out
    }

    /// Eliminates every jet with `a >= 1` using the scaling relation
    /// `Gamma_1 = (y2/3) Gamma_2 + Gamma/3`. Differentiating it `b` times in
    /// `y2` and `a - 1` times in `y1` (which does not touch `y2`) gives
    ///
    /// ```text
    /// G[a,b] = (y2/3) G[a-1,b+1] + ((b+1)/3) G[a-1,b]
    /// ```
    ///
    /// and each step lowers `a`, so the rewriting terminates.
    pub fn normalize_ll(&self) -> Self {
        let mut cache = BTreeMap::new();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut acc = Self::term(c.clone(), Monomial::new(m.y2, []));
            for &(j, e) in &m.jets {
                let nf = normal_jet(j, &mut cache);
                for _ in 0..e {
                    acc = &acc * &nf;
                }
            }
            out = &out + &acc;
        }
        out
    }

    /// Evaluates in any commutative ring, given images of the constants,
    /// `y2` and the jets.
    pub fn evaluate<V>(
        &self,
        constant: impl Fn(&Rational) -> V,
        y2: &V,
        mut jet: impl FnMut(JetVar) -> V,
    ) -> V
    where
        for<'a> &'a V: Add<&'a V, Output = V> + Mul<&'a V, Output = V>,
    {
        let mut jets: BTreeMap<JetVar, V> = BTreeMap::new();
        let mut total = constant(&Rational::zero());
        for (m, c) in &self.terms {
            let mut value = constant(c);
            for _ in 0..m.y2 {
                value = &value * y2;
            }
            for &(j, e) in &m.jets {
                let v = jets.entry(j).or_insert_with(|| jet(j));
                for _ in 0..e {
                    value = &value * &*v;
                }
            }
            total = &total + &value;
        }
        total
    }

    /// Evaluation at rational values of `y2` and the jets.
    pub fn evaluate_rational(&self, y2: &Rational, jet: impl FnMut(JetVar) -> Rational) -> Rational {
        self.evaluate(|c| c.clone(), y2, jet)
    }

    /// Substitutes the series `d1^a d2^b gamma` for each jet.
    pub fn evaluate_series(&self, gamma: &BigradedSeries) -> BigradedSeries {
        let t = gamma.truncation();
        self.evaluate(
            |c| BigradedSeries::constant(c.clone(), t),
            &BigradedSeries::y2_power(1, t),
            |j| gamma.partial(j.a, j.b),
        )
    }

    fn accumulate(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }
}

fn normal_jet(j: JetVar, cache: &mut BTreeMap<JetVar, DiffPoly>) -> DiffPoly {
    if j.a == 0 {
        return DiffPoly::jet(0, j.b);
    }
    if let Some(p) = cache.get(&j) {
        return p.clone();
    }
    let up = normal_jet(JetVar::new(j.a - 1, j.b + 1), cache);
    let same = normal_jet(JetVar::new(j.a - 1, j.b), cache);
    let p = &(&DiffPoly::y2() * &up).scale(&ratio(1, 3)) + &same.scale(&ratio(j.b as i64 + 1, 3));
    cache.insert(j, p.clone());
    p
}

impl Add for &DiffPoly {
    type Output = DiffPoly;

    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.accumulate(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &DiffPoly {
    type Output = DiffPoly;

    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.accumulate(m.clone(), -c);
        }
        out
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;

    fn neg(self) -> DiffPoly {
        DiffPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &DiffPoly {
    type Output = DiffPoly;

    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.accumulate(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $method:ident),*) => {$(
        impl $tr for DiffPoly {
            type Output = DiffPoly;
            fn $method(self, rhs: DiffPoly) -> DiffPoly {
                (&self).$method(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for DiffPoly {
    type Output = DiffPoly;

    fn neg(self) -> DiffPoly {
        -&self
    }
}

impl From<Rational> for DiffPoly {
    fn from(c: Rational) -> Self {
        DiffPoly::constant(c)
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let abs = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let is_one = *m == Monomial::one();
            if is_one {
                f.write_str(&format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_rational(&abs))?;
            }
        }
        Ok(())
    }
}
