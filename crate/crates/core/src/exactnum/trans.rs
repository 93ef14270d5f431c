use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::BigRat;
use crate::error::{Error, Result};

/// A formal generator of the scalar ring: Euler's constant or a zeta value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Gamma,
    /// `zeta(k)` for `k >= 2`.
    Zeta(u32),
}

impl Generator {
    pub fn weight(self) -> i64 {
        match self {
            Generator::Gamma => 1,
            Generator::Zeta(k) => k as i64,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Gamma => write!(f, "gamma"),
            Generator::Zeta(k) => write!(f, "zeta{k}"),
        }
    }
}

/// Monomial in the generators. Exponents may be negative so that a single
/// generator power can be divided out exactly; zero exponents are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TransMonomial(BTreeMap<Generator, i32>);

impl TransMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn generator(g: Generator, exp: i32) -> Self {
        let mut m = BTreeMap::new();
        if exp != 0 {
            m.insert(g, exp);
        }
        Self(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> i64 {
        self.0.iter().map(|(g, &e)| g.weight() * e as i64).sum()
    }

    pub fn exponent(&self, g: Generator) -> i32 {
        self.0.get(&g).copied().unwrap_or(0)
    }

    pub fn factors(&self) -> impl Iterator<Item = (Generator, i32)> + '_ {
        self.0.iter().map(|(&g, &e)| (g, e))
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = self.0.clone();
        for (&g, &e) in &other.0 {
            let slot = out.entry(g).or_insert(0);
            *slot += e;
            if *slot == 0 {
                out.remove(&g);
            }
        }
        Self(out)
    }

    fn inverse(&self) -> Self {
        Self(self.0.iter().map(|(&g, &e)| (g, -e)).collect())
    }
}

// Graded by weight, then lexicographic on (gamma, zeta2, zeta3, ...) exponents,
// a larger exponent on an earlier generator sorting first.
impl Ord for TransMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight().cmp(&other.weight()).then_with(|| {
            let mut gens: Vec<Generator> = self.0.keys().chain(other.0.keys()).copied().collect();
            gens.sort();
            gens.dedup();
            for g in gens {
                match other.exponent(g).cmp(&self.exponent(g)) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for TransMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TransMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (g, e) in self.factors() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Element of the Laurent polynomial ring `Q[gamma^±, zeta2^±, zeta3^±, ...]`.
///
/// No relations among the generators are imposed, so `zeta4` and `zeta2^2`
/// are independent. Terms with zero coefficient are never stored, which makes
/// structural equality the same as ring equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TransScalar {
    terms: BTreeMap<TransMonomial, BigRat>,
}

impl TransScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(BigRat::one())
    }

    pub fn from_rational(r: BigRat) -> Self {
        Self::term(TransMonomial::one(), r)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRat::from_integer(BigInt::from(n)))
    }

    pub fn term(m: TransMonomial, c: BigRat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn gamma() -> Self {
        Self::term(TransMonomial::generator(Generator::Gamma, 1), BigRat::one())
    }

    /// The formal generator `zeta(k)`. Panics for `k < 2`, where zeta has a pole.
    pub fn zeta(k: u32) -> Self {
        assert!(k >= 2, "zeta({k}) is not a generator");
        Self::term(TransMonomial::generator(Generator::Zeta(k), 1), BigRat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TransMonomial, &BigRat)> {
        self.terms.iter()
    }

    /// The value as a rational number when no generator occurs.
    pub fn as_rational(&self) -> Option<BigRat> {
        match self.terms.len() {
            0 => Some(BigRat::zero()),
            1 => self.terms.get(&TransMonomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn coefficient(&self, m: &TransMonomial) -> BigRat {
        self.terms.get(m).cloned().unwrap_or_else(BigRat::zero)
    }

    /// Largest monomial weight, `None` for zero.
    pub fn max_weight(&self) -> Option<i64> {
        self.terms.keys().map(TransMonomial::weight).max()
    }

    pub fn min_weight(&self) -> Option<i64> {
        self.terms.keys().map(TransMonomial::weight).min()
    }

    /// Part of weight exactly `w`.
    pub fn weight_part(&self, w: i64) -> Self {
        Self {
            terms: self.terms.iter().filter(|(m, _)| m.weight() == w).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn contains(&self, g: Generator) -> bool {
        self.terms.keys().any(|m| m.exponent(g) != 0)
    }

    pub fn scale(&self, r: &BigRat) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * r)).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Inverse of a single nonzero term; the ring has no other units.
    pub fn inverse(&self) -> Result<Self> {
        if self.terms.len() != 1 {
            return Err(Error::NonInvertible(format!("{self} is not a single term of the Laurent ring")));
        }
        let (m, c) = self.terms.iter().next().unwrap();
        Ok(Self::term(m.inverse(), c.recip()))
    }

    pub fn checked_div(&self, divisor: &Self) -> Result<Self> {
        Ok(self * &divisor.inverse()?)
    }

    fn add_term(&mut self, m: &TransMonomial, c: &BigRat) {
        if c.is_zero() {
            return;
        }
        if let Some(slot) = self.terms.get_mut(m) {
            *slot += c;
            if slot.is_zero() {
                self.terms.remove(m);
            }
        } else {
            self.terms.insert(m.clone(), c.clone());
        }
    }
}

impl From<BigRat> for TransScalar {
    fn from(r: BigRat) -> Self {
        Self::from_rational(r)
    }
}

impl From<BigInt> for TransScalar {
    fn from(n: BigInt) -> Self {
        Self::from_rational(BigRat::from_integer(n))
    }
}

impl From<i64> for TransScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl AddAssign<&TransScalar> for TransScalar {
    fn add_assign(&mut self, rhs: &TransScalar) {
        for (m, c) in &rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl SubAssign<&TransScalar> for TransScalar {
    fn sub_assign(&mut self, rhs: &TransScalar) {
        for (m, c) in &rhs.terms {
            self.add_term(m, &-c);
        }
    }
}

impl Add for &TransScalar {
    type Output = TransScalar;
    fn add(self, rhs: &TransScalar) -> TransScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &TransScalar {
    type Output = TransScalar;
    fn sub(self, rhs: &TransScalar) -> TransScalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &TransScalar {
    type Output = TransScalar;
    fn mul(self, rhs: &TransScalar) -> TransScalar {
        let mut out = TransScalar::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(&ma.mul(mb), &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &TransScalar {
    type Output = TransScalar;
    fn neg(self) -> TransScalar {
        TransScalar { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for TransScalar {
            type Output = TransScalar;
            fn $method(self, rhs: TransScalar) -> TransScalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&TransScalar> for TransScalar {
            type Output = TransScalar;
            fn $method(self, rhs: &TransScalar) -> TransScalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for TransScalar {
    type Output = TransScalar;
    fn neg(self) -> TransScalar {
        -&self
    }
}

impl std::iter::Sum for TransScalar {
    fn sum<I: Iterator<Item = TransScalar>>(iter: I) -> Self {
        iter.fold(TransScalar::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

impl fmt::Display for TransScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for TransScalar {
    type Err = Error;

    /// Parses the `Display` form, e.g. `1/2*zeta2^2 - 1/2*zeta4 + gamma^-1`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let mut out = TransScalar::zero();
        for (sign, body) in split_signed_terms(&compact)? {
            let mut coeff = BigRat::from_integer(BigInt::from(sign));
            let mut mono = TransMonomial::one();
            for factor in body.split('*') {
                if factor.is_empty() {
                    return Err(Error::Parse(format!("empty factor in {s:?}")));
                }
                if factor.starts_with(|c: char| c.is_ascii_digit()) {
                    coeff *= parse_rational(factor)?;
                } else {
                    let (name, exp) = match factor.split_once('^') {
                        Some((n, e)) => {
                            (n, e.parse::<i32>().map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?)
                        }
                        None => (factor, 1),
                    };
                    let g = parse_generator(name)?;
                    mono = mono.mul(&TransMonomial::generator(g, exp));
                }
            }
            out.add_term(&mono, &coeff);
        }
        Ok(out)
    }
}

fn split_signed_terms(s: &str) -> Result<Vec<(i64, &str)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut start = 0;
    let mut sign = 1;
    let mut i = 0;
    if bytes[0] == b'-' || bytes[0] == b'+' {
        sign = if bytes[0] == b'-' { -1 } else { 1 };
        start = 1;
        i = 1;
    }
    while i < bytes.len() {
        let b = bytes[i];
        if (b == b'+' || b == b'-') && i > start && bytes[i - 1] != b'^' {
            out.push((sign, &s[start..i]));
            sign = if b == b'-' { -1 } else { 1 };
            start = i + 1;
        }
        i += 1;
    }
    if start >= s.len() {
        return Err(Error::Parse(format!("dangling sign in {s:?}")));
    }
    out.push((sign, &s[start..]));
    Ok(out)
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRat> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRat::new(n, d))
        }
        None => Ok(BigRat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn parse_generator(name: &str) -> Result<Generator> {
    if name == "gamma" {
        return Ok(Generator::Gamma);
    }
    if let Some(k) = name.strip_prefix("zeta") {
        let k: u32 = k.parse().map_err(|_| Error::Parse(format!("bad generator {name:?}")))?;
        if k >= 2 {
            return Ok(Generator::Zeta(k));
        }
    }
    Err(Error::Parse(format!("unknown generator {name:?}")))
}
