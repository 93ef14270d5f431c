//! Hirzebruch multiplicative sequences, with the Gamma series as the main case.
//!
//! `Q_k(c_1..c_k)` is obtained from `k` formal Chern roots: the degree-`k`
//! part of `prod Q(x_i)` is written in the monomial symmetric basis, then
//! rewritten in elementary symmetric polynomials `e_j = c_j` by repeatedly
//! cancelling the lexicographically leading partition.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{BigRat, TransScalar};
use crate::series::{Exponents, TruncSeries};

/// `log Gamma(1+z) = -gamma z + sum_{i>=2} (-1)^i zeta(i) z^i / i`, univariate.
pub fn log_gamma_series(order: u32) -> TruncSeries<TransScalar> {
    let mut coeffs = vec![TransScalar::zero()];
    for i in 1..=order {
        let c = if i == 1 {
            -TransScalar::gamma()
        } else {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            TransScalar::zeta(i).scale(&BigRat::new(BigInt::from(sign), BigInt::from(i)))
        };
        coeffs.push(c);
    }
    TruncSeries::univariate(order, coeffs)
}

/// `1 / Gamma(1+z)` as a univariate series.
pub fn inverse_gamma_series(order: u32) -> TruncSeries<TransScalar> {
    log_gamma_series(order).neg().exp().expect("zero constant term")
}

fn check_characteristic(q: &TruncSeries<TransScalar>, n: u32) -> Result<()> {
    if q.nvars() != 1 {
        return Err(Error::Precondition(format!(
            "characteristic series must be univariate, got {} variables",
            q.nvars()
        )));
    }
    if q.order() < n {
        return Err(Error::Precondition(format!("characteristic series known to order {}, need {n}", q.order())));
    }
    if !q.constant_term().is_one() {
        return Err(Error::Precondition(format!(
            "characteristic series must have Q(0) = 1, got {}",
            q.constant_term()
        )));
    }
    Ok(())
}

/// `s_0..s_n` defined by `1 - z d/dz log Q(z) = sum (-1)^i s_i z^i`.
pub fn s_sequence(q: &TruncSeries<TransScalar>, n: u32) -> Result<Vec<TransScalar>> {
    check_characteristic(q, n)?;
    let log = q.truncate(n).log()?;
    let mut out = vec![TransScalar::one()];
    for i in 1..=n {
        let sign = if i % 2 == 0 { -1 } else { 1 };
        out.push(log.coeff(&[i]).scale(&BigRat::from_integer(BigInt::from(sign * i as i64))));
    }
    Ok(out)
}

/// Weighted-homogeneous polynomial of degree `degree` in `c_1..c_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultSeqPolynomial {
    degree: usize,
    /// exponents of `(c_1, ..., c_degree)`
    terms: BTreeMap<Vec<u32>, TransScalar>,
}

impl MultSeqPolynomial {
    pub fn zero(degree: usize) -> Self {
        Self { degree, terms: BTreeMap::new() }
    }

    /// Builds from `(exponents of c_1.., coefficient)` pairs, rejecting
    /// monomials of the wrong weighted degree.
    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (Vec<u32>, TransScalar)>) -> Result<Self> {
        let mut p = Self::zero(degree);
        for (mut e, c) in terms {
            if e.len() > degree && e[degree..].iter().any(|&x| x > 0) {
                return Err(Error::Precondition(format!("monomial {e:?} uses c_i with i > {degree}")));
            }
            e.resize(degree, 0);
            let w = weighted_degree(&e);
            if w != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: w });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Vec<u32>, c: TransScalar) {
        let slot = self.terms.entry(e.clone()).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &TransScalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the monomial with the given exponents of `c_1, c_2, ...`.
    pub fn coefficient(&self, exps: &[u32]) -> TransScalar {
        let mut e = exps.to_vec();
        e.resize(self.degree, 0);
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    /// Coefficient of the linear monomial `c_degree`.
    pub fn leading_coefficient(&self) -> TransScalar {
        if self.degree == 0 {
            return self.coefficient(&[]);
        }
        let mut e = vec![0; self.degree];
        e[self.degree - 1] = 1;
        self.coefficient(&e)
    }

    /// Drops every monomial containing `c_1`.
    pub fn without_c1(&self) -> Self {
        Self {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.first().is_none_or(|&x| x == 0))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Substitutes classes for the symbols `c_1..c_degree`.
    pub fn evaluate<A: ClassAlgebra>(&self, chern: &ChernVector<A>) -> Result<A> {
        if self.degree > chern.dimension() {
            return Err(Error::DegreeMismatch { expected: chern.dimension(), found: self.degree });
        }
        let unit = chern.unit();
        let mut total = unit.zero_like();
        for (e, c) in &self.terms {
            let mut m = unit.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    m = m.mul(chern.c(i + 1));
                }
            }
            total = total.add(&m.scale(c));
        }
        Ok(total)
    }

    pub fn to_json(&self) -> MultSeqJson {
        MultSeqJson {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| MultSeqTermJson { exponents: e.clone(), coeff: c.to_string() })
                .collect(),
        }
    }
}

fn weighted_degree(e: &[u32]) -> usize {
    e.iter().enumerate().map(|(i, &k)| (i + 1) * k as usize).sum()
}

impl fmt::Display for MultSeqPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("c{}", i + 1) } else { format!("c{}^{k}", i + 1) })
                .collect();
            let coeff = if c.is_one() && !mono.is_empty() {
                String::new()
            } else if c.len() == 1 {
                format!("{c}")
            } else {
                format!("({c})")
            };
            match (coeff.is_empty(), mono.is_empty()) {
                (true, _) => write!(f, "{}", mono.join("*"))?,
                (false, true) => write!(f, "{coeff}")?,
                (false, false) => write!(f, "{coeff}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultSeqTermJson {
    pub exponents: Vec<u32>,
    pub coeff: String,
}

/// `{degree, terms: [{exponents over (c_1..c_k), coeff}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultSeqJson {
    pub degree: usize,
    pub terms: Vec<MultSeqTermJson>,
}

/// Graded commutative algebra into which Chern symbols can be substituted.
pub trait ClassAlgebra: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, s: &TransScalar) -> Self;
}

impl ClassAlgebra for TransScalar {
    fn zero_like(&self) -> Self {
        TransScalar::zero()
    }
    fn one_like(&self) -> Self {
        TransScalar::one()
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
    fn scale(&self, s: &TransScalar) -> Self {
        self * s
    }
}

/// Polynomials in formal symbols; panics on shape mismatch, which cannot
/// happen for classes built from one `ChernVector`.
impl ClassAlgebra for TruncSeries<TransScalar> {
    fn zero_like(&self) -> Self {
        TruncSeries::zero(self.nvars(), self.order())
    }
    fn one_like(&self) -> Self {
        TruncSeries::one(self.nvars(), self.order())
    }
    fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("classes of one ring")
    }
    fn sub(&self, other: &Self) -> Self {
        self.try_sub(other).expect("classes of one ring")
    }
    fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("classes of one ring")
    }
    fn scale(&self, s: &TransScalar) -> Self {
        self.mul_scalar(s)
    }
}

/// Chern classes `c_1..c_d`, `c_i` of degree `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChernVector<A> {
    classes: Vec<A>,
}

impl<A: ClassAlgebra> ChernVector<A> {
    pub fn new(classes: Vec<A>) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::Precondition("a Chern vector needs dimension >= 1".into()));
        }
        Ok(Self { classes })
    }

    pub fn dimension(&self) -> usize {
        self.classes.len()
    }

    /// `c_i` for `1 <= i <= dimension`.
    pub fn c(&self, i: usize) -> &A {
        &self.classes[i - 1]
    }

    pub fn classes(&self) -> &[A] {
        &self.classes
    }

    fn unit(&self) -> A {
        self.classes[0].one_like()
    }
}

/// Partitions of `n` as nonincreasing vectors padded with zeros to length `len`.
fn partitions(n: u32, len: usize) -> Vec<Vec<u32>> {
    fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, len: usize, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            let mut p = cur.clone();
            p.resize(len, 0);
            out.push(p);
            return;
        }
        if cur.len() == len {
            return;
        }
        for part in (1..=max.min(rest)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, len, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), len, &mut out);
    out
}

/// `prod_j e_j^{b_j}` in `k` variables, read off at partition exponents.
fn elementary_product_in_m_basis(b: &[u32], k: usize) -> BTreeMap<Vec<u32>, BigRat> {
    let order = k as u32;
    let mut prod = TruncSeries::<BigRat>::one(k, order);
    for (j, &power) in b.iter().enumerate() {
        if power == 0 {
            continue;
        }
        let ej = elementary(j + 1, k);
        for _ in 0..power {
            prod = prod.try_mul(&ej).expect("same ring");
        }
    }
    prod.terms().filter(|(e, _)| e.0.windows(2).all(|w| w[0] >= w[1])).map(|(e, c)| (e.0.clone(), c.clone())).collect()
}

fn elementary(j: usize, k: usize) -> TruncSeries<BigRat> {
    let mut s = TruncSeries::zero(k, k as u32);
    for subset in combinations(k, j) {
        let mut e = vec![0; k];
        for i in subset {
            e[i] = 1;
        }
        s.add_term(Exponents(e), <BigRat as One>::one());
    }
    s
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Degree-`k` polynomial of the multiplicative sequence of `q`.
pub fn mult_seq(q: &TruncSeries<TransScalar>, k: usize) -> Result<MultSeqPolynomial> {
    check_characteristic(q, k as u32)?;
    if k == 0 {
        return MultSeqPolynomial::from_terms(0, [(vec![], TransScalar::one())]);
    }
    let qc: Vec<TransScalar> = (0..=k as u32).map(|i| q.coeff(&[i])).collect();

    // degree-k part of prod Q(x_i): coefficient of m_lambda is prod q_{lambda_i}
    let mut sym: BTreeMap<Vec<u32>, TransScalar> = BTreeMap::new();
    for lambda in partitions(k as u32, k) {
        let c = lambda.iter().fold(TransScalar::one(), |acc, &part| &acc * &qc[part as usize]);
        if !c.is_zero() {
            sym.insert(lambda, c);
        }
    }

    let mut out = MultSeqPolynomial::zero(k);
    while let Some((lambda, c)) = sym.iter().next_back().map(|(l, c)| (l.clone(), c.clone())) {
        // e_1^{l1-l2} e_2^{l2-l3} ... has leading monomial x^lambda
        let b: Vec<u32> = (0..k).map(|j| lambda[j] - lambda.get(j + 1).copied().unwrap_or(0)).collect();
        for (mu, m) in elementary_product_in_m_basis(&b, k) {
            let slot = sym.entry(mu.clone()).or_default();
            *slot -= &c.scale(&m);
            if slot.is_zero() {
                sym.remove(&mu);
            }
        }
        out.add_term(b, c);
    }
    Ok(out)
}

/// `Q_k` of the Gamma sequence, the multiplicative sequence of `1/Gamma(1+z)`.
pub fn gamma_mult_seq(k: usize) -> Result<MultSeqPolynomial> {
    mult_seq(&inverse_gamma_series(k as u32), k)
}

/// Gamma-sequence polynomial with `c_1 = 0`.
pub fn gamma_seq_calabi_yau(k: usize) -> Result<MultSeqPolynomial> {
    if k < 2 {
        return Err(Error::Precondition(format!("Calabi-Yau specialization needs k >= 2, got {k}")));
    }
    Ok(gamma_mult_seq(k)?.without_c1())
}

/// Substitutes actual classes into `Q_k`.
pub fn apply_mult_seq<A: ClassAlgebra>(qk: &MultSeqPolynomial, chern: &ChernVector<A>) -> Result<A> {
    qk.evaluate(chern)
}

/// Recovers `c_1..c_d` from the values `Q_1(c)..Q_d(c)`.
///
/// `polys[i]` must be `Q_{i+1}`. Each step solves `Q_i = s_i c_i + P(c_1..c_{i-1})`
/// for `c_i`, so every `s_i` has to be a unit of the scalar ring (a single term).
pub fn chern_from_mult_seq<A: ClassAlgebra>(polys: &[MultSeqPolynomial], values: &[A]) -> Result<Vec<A>> {
    if polys.len() != values.len() || polys.is_empty() {
        return Err(Error::Precondition(format!(
            "need matching nonempty lists, got {} polynomials and {} values",
            polys.len(),
            values.len()
        )));
    }
    let mut recovered: Vec<A> = Vec::with_capacity(values.len());
    for (i, (q, value)) in polys.iter().zip(values).enumerate() {
        let degree = i + 1;
        if q.degree() != degree {
            return Err(Error::DegreeMismatch { expected: degree, found: q.degree() });
        }
        let s = q.leading_coefficient();
        if s.is_zero() {
            return Err(Error::NonInvertible(format!("non-invertible sequence: s_{degree} = 0")));
        }
        let s_inv = s.inverse()?;
        let unit = value.one_like();
        let mut rest = value.zero_like();
        for (e, c) in q.terms() {
            if e[degree - 1] == 1 {
                continue;
            }
            let mut m = unit.clone();
            for (j, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    m = m.mul(&recovered[j]);
                }
            }
            rest = rest.add(&m.scale(c));
        }
        recovered.push(value.sub(&rest).scale(&s_inv));
    }
    Ok(recovered)
}

/// A monomial coefficient where a published table disagrees with [`gamma_mult_seq`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableDiscrepancy {
    pub degree: usize,
    pub monomial: String,
    pub printed: String,
    pub computed: String,
}

/// Transcription of the commonly printed low-degree Gamma-sequence table.
pub fn printed_gamma_table() -> Vec<MultSeqPolynomial> {
    let p = |s: &str| s.parse::<TransScalar>().expect("static table");
    vec![
        MultSeqPolynomial::from_terms(1, [(vec![1], p("gamma"))]).unwrap(),
        MultSeqPolynomial::from_terms(2, [(vec![0, 1], p("zeta2")), (vec![2, 0], p("gamma^2 - 1/2*zeta2"))]).unwrap(),
        MultSeqPolynomial::from_terms(
            3,
            [
                (vec![0, 0, 1], p("zeta3")),
                (vec![1, 1, 0], p("gamma*zeta2 - zeta3")),
                (vec![3, 0, 0], p("1/6*gamma^3 + 1/3*zeta3")),
            ],
        )
        .unwrap(),
        MultSeqPolynomial::from_terms(
            4,
            [
                (vec![0, 0, 0, 1], p("zeta4")),
                (vec![0, 2, 0, 0], p("1/2*zeta2^2 - 1/2*zeta4")),
                (vec![1, 0, 1, 0], p("gamma*zeta3 - zeta4")),
                (vec![2, 1, 0, 0], p("1/2*gamma^2*zeta2 - gamma*zeta3 + zeta4 - 1/2*zeta2^2")),
                (vec![4, 0, 0, 0], p("1/24*gamma^4 - 1/4*gamma^2*zeta2 + 1/3*gamma*zeta3 + 1/8*zeta2^2 - 1/4*zeta4")),
            ],
        )
        .unwrap(),
    ]
}

/// Compares [`printed_gamma_table`] against the Chern-root computation.
pub fn printed_table_discrepancies() -> Result<Vec<TableDiscrepancy>> {
    let mut out = Vec::new();
    for printed in printed_gamma_table() {
        let k = printed.degree();
        let computed = gamma_mult_seq(k)?;
        let mut monomials: Vec<&Vec<u32>> = printed.terms.keys().chain(computed.terms.keys()).collect();
        monomials.sort();
        monomials.dedup();
        for e in monomials {
            let (a, b) = (printed.coefficient(e), computed.coefficient(e));
            if a != b {
                let single = MultSeqPolynomial { degree: k, terms: [(e.clone(), TransScalar::one())].into() };
                out.push(TableDiscrepancy {
                    degree: k,
                    monomial: single.to_string(),
                    printed: a.to_string(),
                    computed: b.to_string(),
                });
            }
        }
    }
    Ok(out)
}
