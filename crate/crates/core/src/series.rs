//! Truncated multivariate power series over an exact coefficient ring.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{BigRat, TransScalar};

/// Exact commutative coefficient ring usable inside a [`TruncSeries`].
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, r: &BigRat) -> Self;
    fn from_rational(r: BigRat) -> Self;
    fn parse_coeff(s: &str) -> Result<Self>;
}

impl Coeff for BigRat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, r: &BigRat) -> Self {
        self * r
    }
    fn from_rational(r: BigRat) -> Self {
        r
    }
    fn parse_coeff(s: &str) -> Result<Self> {
        crate::exactnum::parse_rational(s.trim())
    }
}

impl Coeff for TransScalar {
    fn zero() -> Self {
        TransScalar::zero()
    }
    fn one() -> Self {
        TransScalar::one()
    }
    fn is_zero(&self) -> bool {
        TransScalar::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, r: &BigRat) -> Self {
        TransScalar::scale(self, r)
    }
    fn from_rational(r: BigRat) -> Self {
        TransScalar::from_rational(r)
    }
    fn parse_coeff(s: &str) -> Result<Self> {
        s.parse()
    }
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exponents(pub Vec<u32>);

impl Exponents {
    pub fn zero(nvars: usize) -> Self {
        Self(vec![0; nvars])
    }

    pub fn unit(nvars: usize, var: usize) -> Self {
        let mut e = vec![0; nvars];
        e[var] = 1;
        Self(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Integer linear form `sum a_k rho_k` without constant term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinForm(pub Vec<i64>);

impl LinForm {
    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }
}

/// Multivariate power series truncated at total degree `order`.
///
/// Every series carries its truncation order and variable count; binary
/// operations on series of different shape are errors rather than an
/// implicit truncation to the smaller order.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<C> {
    nvars: usize,
    order: u32,
    terms: BTreeMap<Exponents, C>,
}

impl<C: Coeff> TruncSeries<C> {
    pub fn zero(nvars: usize, order: u32) -> Self {
        Self { nvars, order, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, order: u32, c: C) -> Self {
        let mut s = Self::zero(nvars, order);
        s.add_term(Exponents::zero(nvars), c);
        s
    }

    pub fn one(nvars: usize, order: u32) -> Self {
        Self::constant(nvars, order, C::one())
    }

    pub fn var(nvars: usize, order: u32, var: usize) -> Self {
        let mut s = Self::zero(nvars, order);
        s.add_term(Exponents::unit(nvars, var), C::one());
        s
    }

    /// Builds a series from `(exponents, coefficient)` pairs; terms above the
    /// order are dropped and repeated exponents are summed.
    pub fn from_terms<I>(nvars: usize, order: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
    {
        let mut s = Self::zero(nvars, order);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::Precondition(format!(
                    "exponent vector {e:?} has length {} for a series in {nvars} variables",
                    e.len()
                )));
            }
            s.add_term(Exponents(e), c);
        }
        Ok(s)
    }

    /// Univariate series from coefficients `c_0, c_1, ...`.
    pub fn univariate(order: u32, coeffs: impl IntoIterator<Item = C>) -> Self {
        let mut s = Self::zero(1, order);
        for (i, c) in coeffs.into_iter().enumerate() {
            s.add_term(Exponents(vec![i as u32]), c);
        }
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
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

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> C {
        self.terms.get(&Exponents(e.to_vec())).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn add_term(&mut self, e: Exponents, c: C) {
        debug_assert_eq!(e.0.len(), self.nvars);
        if e.degree() > self.order || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(slot) => {
                let sum = slot.add(&c);
                if sum.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *slot = sum;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars || self.order != other.order {
            return Err(Error::SeriesMismatch(self.nvars, self.order, other.nvars, other.order));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = Self::zero(self.nvars, self.order);
        for (ea, ca) in &self.terms {
            let room = self.order - ea.degree();
            for (eb, cb) in other.terms.iter().take_while(|(e, _)| e.degree() <= room) {
                out.add_term(ea.add(eb), ca.mul(cb));
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn scale(&self, r: &BigRat) -> Self {
        self.map_coeffs(|c| c.scale(r))
    }

    pub fn mul_scalar(&self, s: &C) -> Self {
        self.map_coeffs(|c| c.mul(s))
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> TruncSeries<D> {
        let mut out = TruncSeries::zero(self.nvars, self.order);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(self.nvars, self.order);
        for _ in 0..n {
            out = out.try_mul(self).expect("same shape");
        }
        out
    }

    /// Homogeneous component of total degree `deg`.
    pub fn homogeneous(&self, deg: u32) -> Self {
        let mut out = Self::zero(self.nvars, self.order);
        for (e, c) in self.terms.iter().filter(|(e, _)| e.degree() == deg) {
            out.terms.insert(e.clone(), c.clone());
        }
        out
    }

    /// Drops terms above `order` and lowers the carried order.
    pub fn truncate(&self, order: u32) -> Self {
        let mut out = Self::zero(self.nvars, order.min(self.order));
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    /// Same terms, carried at a different order (terms above it dropped).
    pub fn with_order(&self, order: u32) -> Self {
        let mut out = Self::zero(self.nvars, order);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    /// Exponential of a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::Precondition("exp needs a zero constant term".into()));
        }
        // Euler operator E = sum x_i d/dx_i: E(g) = g E(a) gives
        // n g_n = sum_{j=1..n} j a_j g_{n-j} on homogeneous parts.
        let parts: Vec<Self> = (0..=self.order).map(|d| self.homogeneous(d)).collect();
        let mut g: Vec<Self> = vec![Self::one(self.nvars, self.order)];
        for n in 1..=self.order {
            let mut acc = Self::zero(self.nvars, self.order);
            for j in 1..=n {
                if parts[j as usize].is_zero() {
                    continue;
                }
                let t = parts[j as usize].try_mul(&g[(n - j) as usize])?;
                acc = acc.try_add(&t.scale(&BigRat::from_integer(BigInt::from(j))))?;
            }
            g.push(acc.scale(&BigRat::new(BigInt::one(), BigInt::from(n))));
        }
        let mut out = Self::zero(self.nvars, self.order);
        for part in g {
            out = out.try_add(&part)?;
        }
        Ok(out)
    }

    /// Logarithm of a series with constant term one.
    pub fn log(&self) -> Result<Self> {
        if self.constant_term() != C::one() {
            return Err(Error::Precondition("log needs constant term 1".into()));
        }
        // f E(L) = E(f): L_n = f_n - (1/n) sum_{j=1..n-1} (n-j) f_j L_{n-j}
        let f: Vec<Self> = (0..=self.order).map(|d| self.homogeneous(d)).collect();
        let mut l: Vec<Self> = vec![Self::zero(self.nvars, self.order)];
        for n in 1..=self.order {
            let mut acc = Self::zero(self.nvars, self.order);
            for j in 1..n {
                if f[j as usize].is_zero() {
                    continue;
                }
                let t = f[j as usize].try_mul(&l[(n - j) as usize])?;
                acc = acc.try_add(&t.scale(&BigRat::from_integer(BigInt::from(n - j))))?;
            }
            let ln = f[n as usize].try_sub(&acc.scale(&BigRat::new(BigInt::one(), BigInt::from(n))))?;
            l.push(ln);
        }
        let mut out = Self::zero(self.nvars, self.order);
        for part in l {
            out = out.try_add(&part)?;
        }
        Ok(out)
    }

    /// Formal partial derivative; the result is carried at order `order - 1`.
    pub fn derive(&self, var: usize) -> Result<Self> {
        if var >= self.nvars {
            return Err(Error::IndexOutOfRange { index: var, limit: self.nvars });
        }
        let mut out = Self::zero(self.nvars, self.order.saturating_sub(1));
        for (e, c) in &self.terms {
            let k = e.0[var];
            if k == 0 {
                continue;
            }
            let mut f = e.0.clone();
            f[var] -= 1;
            out.add_term(Exponents(f), c.scale(&BigRat::from_integer(BigInt::from(k))));
        }
        Ok(out)
    }

    /// Substitutes `z -> sum a_k rho_k` into a univariate series.
    pub fn compose_linform(&self, form: &LinForm, nvars: usize) -> Result<Self> {
        if self.nvars != 1 {
            return Err(Error::Precondition(format!(
                "compose_linform needs a univariate series, got {} variables",
                self.nvars
            )));
        }
        if form.nvars() != nvars {
            return Err(Error::Precondition(format!(
                "linear form has {} coefficients for {nvars} variables",
                form.nvars()
            )));
        }
        let mut lin = TruncSeries::<C>::zero(nvars, self.order);
        for (k, &a) in form.0.iter().enumerate() {
            lin.add_term(Exponents::unit(nvars, k), C::from_rational(BigRat::from_integer(BigInt::from(a))));
        }
        let mut out = TruncSeries::zero(nvars, self.order);
        let mut power = TruncSeries::one(nvars, self.order);
        for d in 0..=self.order {
            let c = self.coeff(&[d]);
            if !c.is_zero() {
                out = out.try_add(&power.mul_scalar(&c))?;
            }
            if d < self.order {
                power = power.try_mul(&lin)?;
                if power.is_zero() {
                    break;
                }
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(e, c)| TermJson { exponents: e.0.clone(), coeff: c.to_string() }).collect(),
        }
    }

    pub fn from_json(json: &SeriesJson) -> Result<Self> {
        let mut s = Self::zero(json.nvars, json.order);
        for t in &json.terms {
            if t.exponents.len() != json.nvars {
                return Err(Error::Parse(format!("exponent vector {:?} has wrong length", t.exponents)));
            }
            let e = Exponents(t.exponents.clone());
            if e.degree() > json.order {
                return Err(Error::Parse(format!("term {:?} exceeds order {}", t.exponents, json.order)));
            }
            s.add_term(e, C::parse_coeff(&t.coeff)?);
        }
        Ok(s)
    }
}

impl<C: Coeff> fmt::Display for TruncSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names: Vec<String> =
            if self.nvars == 1 { vec!["x".into()] } else { (1..=self.nvars).map(|i| format!("x{i}")).collect() };
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let mono: Vec<String> =
                e.0.iter()
                    .zip(&names)
                    .filter(|(k, _)| **k > 0)
                    .map(|(k, n)| if *k == 1 { n.clone() } else { format!("{n}^{k}") })
                    .collect();
            if mono.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: Vec<u32>,
    pub coeff: String,
}

/// Wire form `{nvars, order, terms: [{exponents, coeff}]}` with exact string coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub nvars: usize,
    pub order: u32,
    pub terms: Vec<TermJson>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    type RatSeries = TruncSeries<BigRat>;

    fn uni(order: u32, cs: &[i64]) -> RatSeries {
        TruncSeries::univariate(order, cs.iter().map(|&c| int(c)))
    }

    #[test]
    fn one_plus_x_times_one_minus_x() {
        let a = uni(2, &[1, 1]);
        let b = uni(2, &[1, -1]);
        assert_eq!(a.try_mul(&b).unwrap(), uni(2, &[1, 0, -1]));
    }

    #[test]
    fn square_of_trinomial() {
        let x = RatSeries::var(2, 2, 0);
        let y = RatSeries::var(2, 2, 1);
        let s = RatSeries::one(2, 2).try_add(&x).unwrap().try_add(&y).unwrap();
        let sq = s.try_mul(&s).unwrap();
        // hand expansion of (1 + x + y)^2
        let expected = RatSeries::from_terms(
            2,
            2,
            vec![
                (vec![0, 0], int(1)),
                (vec![1, 0], int(2)),
                (vec![0, 1], int(2)),
                (vec![2, 0], int(1)),
                (vec![1, 1], int(2)),
                (vec![0, 2], int(1)),
            ],
        )
        .unwrap();
        assert_eq!(sq, expected);
    }

    #[test]
    fn product_with_zero() {
        let a = uni(3, &[1, 2, 3, 4]);
        assert!(a.try_mul(&RatSeries::zero(1, 3)).unwrap().is_zero());
    }

    #[test]
    fn mismatched_shapes_are_errors() {
        let a = uni(2, &[1, 1]);
        let b = uni(3, &[1, 1]);
        assert!(matches!(a.try_mul(&b), Err(Error::SeriesMismatch(..))));
        assert!(a.try_add(&RatSeries::one(2, 2)).is_err());
    }

    #[test]
    fn exp_log_basics() {
        assert_eq!(RatSeries::zero(1, 4).exp().unwrap(), RatSeries::one(1, 4));
        // Mercator: log(1 + x) = x - x^2/2 + x^3/3
        let log = uni(3, &[1, 1]).log().unwrap();
        let expected = TruncSeries::univariate(3, vec![int(0), int(1), rat(-1, 2), rat(1, 3)]);
        assert_eq!(log, expected);
        let p = uni(5, &[1, 1, 1]);
        assert_eq!(p.log().unwrap().exp().unwrap(), p);
    }

    #[test]
    fn exp_log_preconditions() {
        assert!(uni(3, &[1, 1]).exp().is_err());
        assert!(uni(3, &[2, 1]).log().is_err());
    }

    #[test]
    fn derivatives() {
        let x2y = RatSeries::from_terms(2, 3, vec![(vec![2, 1], int(1))]).unwrap();
        let d = x2y.derive(0).unwrap();
        assert_eq!(d, RatSeries::from_terms(2, 2, vec![(vec![1, 1], int(2))]).unwrap());
        assert_eq!(d.order(), 2);
        assert!(RatSeries::constant(2, 3, int(7)).derive(0).unwrap().is_zero());
        assert!(matches!(x2y.derive(2), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn compose_examples() {
        let z2 = uni(2, &[0, 0, 1]);
        let c = z2.compose_linform(&LinForm(vec![1, 1]), 2).unwrap();
        let expected =
            RatSeries::from_terms(2, 2, vec![(vec![2, 0], int(1)), (vec![1, 1], int(2)), (vec![0, 2], int(1))])
                .unwrap();
        assert_eq!(c, expected);
        let c = uni(2, &[1, 1]).compose_linform(&LinForm(vec![3]), 1).unwrap();
        assert_eq!(c, uni(2, &[1, 3]));
        assert!(c.compose_linform(&LinForm(vec![1, 1]), 1).is_err());
    }

    #[test]
    fn compose_log_gamma() {
        // -gamma z + zeta2 z^2 / 2 at z = 5 rho
        let lg = TruncSeries::univariate(
            2,
            vec![TransScalar::zero(), -TransScalar::gamma(), TransScalar::zeta(2).scale(&rat(1, 2))],
        );
        let c = lg.compose_linform(&LinForm(vec![5]), 1).unwrap();
        let expected = TruncSeries::univariate(
            2,
            vec![TransScalar::zero(), TransScalar::gamma().scale(&int(-5)), TransScalar::zeta(2).scale(&rat(25, 2))],
        );
        assert_eq!(c, expected);
    }

    #[test]
    fn json_round_trip() {
        let s = TruncSeries::univariate(
            2,
            vec![TransScalar::one(), TransScalar::zero(), TransScalar::zeta(2).scale(&int(10))],
        );
        let json = s.to_json();
        assert_eq!(json.terms[1].coeff, "10*zeta2");
        let text = serde_json::to_string(&json).unwrap();
        let back: SeriesJson = serde_json::from_str(&text).unwrap();
        assert_eq!(TruncSeries::<TransScalar>::from_json(&back).unwrap(), s);
        let bad = SeriesJson { nvars: 1, order: 1, terms: vec![TermJson { exponents: vec![3], coeff: "1".into() }] };
        assert!(TruncSeries::<BigRat>::from_json(&bad).is_err());
    }

    #[test]
    fn graded_lex_iteration() {
        let s = RatSeries::from_terms(2, 3, vec![(vec![0, 2], int(1)), (vec![1, 0], int(1)), (vec![2, 0], int(1))])
            .unwrap();
        let order: Vec<Vec<u32>> = s.terms().map(|(e, _)| e.0.clone()).collect();
        assert_eq!(order, vec![vec![1, 0], vec![0, 2], vec![2, 0]]);
    }
}
