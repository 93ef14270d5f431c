//! Mirror-side series: the holomorphic period at the maximal degeneracy
//! point, its Gamma-function deformation in `rho_1..rho_r`, the box-operator
//! annihilation check and the normalized couplings.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{factorial, multinomial, BigRat, TransScalar};
use crate::gammaseq::log_gamma_series;
use crate::series::{Exponents, LinForm, TruncSeries};
use crate::toric::{FanData, MoriBasis, ToricModel};

/// `a_0 * Pi` as a series in the canonical coordinates `x_1..x_r`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodSeries {
    series: TruncSeries<BigRat>,
    mori: MoriBasis,
}

impl PeriodSeries {
    /// Wraps an arbitrary series, e.g. a deliberately altered one.
    pub fn from_parts(series: TruncSeries<BigRat>, mori: MoriBasis) -> Result<Self> {
        if series.nvars() != mori.rank() {
            return Err(Error::Precondition(format!(
                "series in {} variables for a Mori basis of rank {}",
                series.nvars(),
                mori.rank()
            )));
        }
        Ok(Self { series, mori })
    }

    pub fn series(&self) -> &TruncSeries<BigRat> {
        &self.series
    }

    pub fn mori(&self) -> &MoriBasis {
        &self.mori
    }

    pub fn order(&self) -> u32 {
        self.series.order()
    }

    pub fn coefficient(&self, m: &[u32]) -> BigRat {
        self.series.coeff(m)
    }

    /// Copy with the coefficient of `x^m` replaced.
    pub fn with_coefficient(&self, m: &[u32], value: BigRat) -> Self {
        let mut s = self.series.clone();
        let old = s.coeff(m);
        s.add_term(Exponents(m.to_vec()), value - old);
        Self { series: s, mori: self.mori.clone() }
    }
}

/// The Gamma-deformed coefficient `c(rho)` expanded at `rho = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaCoeffSeries {
    series: TruncSeries<TransScalar>,
    mori: MoriBasis,
}

impl GammaCoeffSeries {
    pub fn series(&self) -> &TruncSeries<TransScalar> {
        &self.series
    }

    pub fn mori(&self) -> &MoriBasis {
        &self.mori
    }

    pub fn order(&self) -> u32 {
        self.series.order()
    }
}

/// Exponent vectors `m` in `N^r` with `|m| <= order`, in graded order.
pub fn exponent_vectors(r: usize, order: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for total in 0..=order {
        let mut cur = vec![0u32; r];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(cur.clone());
                return;
            }
            for a in (0..=left).rev() {
                cur[i] = a;
                rec(i + 1, left - a, cur, out);
            }
        }
        if r == 0 {
            if total == 0 {
                out.push(vec![]);
            }
            continue;
        }
        rec(0, total, &mut cur, &mut out);
    }
    out
}

fn m_as_i64(m: &[u32]) -> Vec<i64> {
    m.iter().map(|&x| i64::from(x)).collect()
}

/// Coefficient of `x^m`: `(-L_0)! / prod_{i>=1} L_i!` with `L = sum_k m_k l^(k)`,
/// zero as soon as some `L_i` is negative.
pub fn period_coefficient(mb: &MoriBasis, m: &[u32]) -> BigRat {
    let l = mb.combine(&m_as_i64(m));
    if l[0] > 0 || l[1..].iter().any(|&x| x < 0) {
        return BigRat::zero();
    }
    let mut den = BigInt::one();
    for &x in &l[1..] {
        den *= factorial(x as u64);
    }
    BigRat::new(factorial((-l[0]) as u64), den)
}

/// The same coefficient read off the relation-lattice expansion
/// `sum (l_1 + ... + l_p)! / (l_1! ... l_p!)`, restricted to nonnegative relations.
pub fn period_coefficient_from_relation(mb: &MoriBasis, m: &[u32]) -> BigRat {
    let l = mb.combine(&m_as_i64(m));
    if l[1..].iter().any(|&x| x < 0) {
        return BigRat::zero();
    }
    let parts: Vec<u64> = l[1..].iter().map(|&x| x as u64).collect();
    BigRat::from_integer(multinomial(&parts))
}

pub fn period_series(mb: &MoriBasis, order: u32) -> PeriodSeries {
    let r = mb.rank();
    let mut s = TruncSeries::zero(r, order);
    for m in exponent_vectors(r, order) {
        let c = period_coefficient(mb, &m);
        s.add_term(Exponents(m), c);
    }
    PeriodSeries { series: s, mori: mb.clone() }
}

/// `exp( logGamma(1 - sum rho_k l_0^(k)) - sum_{i>=1} logGamma(1 + sum rho_k l_i^(k)) )`.
pub fn gamma_coeff_series(mb: &MoriBasis, order: u32) -> Result<GammaCoeffSeries> {
    let r = mb.rank();
    let lg = log_gamma_series(order);
    let origin = LinForm(mb.slot_form(0).iter().map(|x| -x).collect());
    let mut log = lg.compose_linform(&origin, r)?;
    for i in 1..=mb.num_rays() {
        let form = LinForm(mb.slot_form(i));
        if form.is_zero() {
            continue;
        }
        log = log.try_sub(&lg.compose_linform(&form, r)?)?;
    }
    Ok(GammaCoeffSeries { series: log.exp()?, mori: mb.clone() })
}

/// Mixed partial derivative `d^k c / d rho_{j_1} ... d rho_{j_k}` at the origin
/// for 1-based indices.
pub fn derivative_at_origin(g: &GammaCoeffSeries, multi_index: &[usize]) -> Result<TransScalar> {
    let r = g.series.nvars();
    if multi_index.len() > g.order() as usize {
        return Err(Error::InsufficientOrder(format!(
            "derivative of order {} needs a series of order at least {}, have {}",
            multi_index.len(),
            multi_index.len(),
            g.order()
        )));
    }
    let mut e = vec![0u32; r];
    for &j in multi_index {
        if j == 0 || j > r {
            return Err(Error::IndexOutOfRange { index: j, limit: r });
        }
        e[j - 1] += 1;
    }
    let mut mult = BigInt::one();
    for &a in &e {
        mult *= factorial(u64::from(a));
    }
    Ok(g.series.coeff(&e).scale(&BigRat::from_integer(mult)))
}

/// `Gamma(n)` at an integer, as `Some` value, or `None` at a pole.
fn gamma_at_integer(n: i64) -> Option<BigInt> {
    (n >= 1).then(|| factorial((n - 1) as u64))
}

/// The closed Gamma ratio `Gamma(1 - L_0(rho)) / prod Gamma(1 + L_i(rho))` at
/// an integer point `rho = m`, with `1/Gamma` vanishing at nonpositive integers.
pub fn gamma_ratio_at_integer(mb: &MoriBasis, m: &[i64]) -> Result<BigRat> {
    if m.len() != mb.rank() {
        return Err(Error::Precondition(format!("point has {} coordinates, rank is {}", m.len(), mb.rank())));
    }
    let l = mb.combine(m);
    let num = gamma_at_integer(1 - l[0])
        .ok_or_else(|| Error::Precondition(format!("numerator Gamma has a pole at rho = {m:?}")))?;
    let mut den = BigInt::one();
    for &x in &l[1..] {
        match gamma_at_integer(1 + x) {
            Some(g) => den *= g,
            None => return Ok(BigRat::zero()),
        }
    }
    Ok(BigRat::new(num, den))
}

pub fn coupling_at_mdp(model: &ToricModel, indices: &[usize]) -> Result<BigRat> {
    model.coupling(indices)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoxResidue {
    /// exponent of `a_0, a_1, ..., a_p`
    pub exponent: Vec<i64>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoxCheckReport {
    pub relation: Vec<i64>,
    pub mori_coordinates: Vec<i64>,
    pub order: u32,
    /// all terms coming from `x^m` with `|m|` up to this bound are certified
    pub certified_order: u32,
    pub certified_terms: usize,
    pub residues: Vec<BoxResidue>,
    pub annihilated: bool,
}

fn falling(e: i64, k: i64) -> BigInt {
    (0..k).map(|j| BigInt::from(e - j)).product()
}

/// Applies the box operator of `l` to the `a`-variable series
/// `Pi = sum_m c(m) (-1)^{L_0(m)} a^{L(m) - e_0}` and checks that every
/// coefficient unaffected by truncation vanishes.
pub fn gkz_box_check(p: &PeriodSeries, l: &[i64]) -> Result<BoxCheckReport> {
    let mb = &p.mori;
    if l.len() != mb.num_rays() + 1 {
        return Err(Error::Precondition(format!("relation {l:?} needs {} entries", mb.num_rays() + 1)));
    }
    let n = mb
        .coordinates(l)
        .ok_or_else(|| Error::Precondition(format!("{l:?} is not in the lattice spanned by the Mori basis")))?;
    let n_norm: i64 = n.iter().map(|x| x.abs()).sum();
    let order = p.order();
    if i64::from(order) < n_norm {
        return Err(Error::InsufficientOrder(format!(
            "box operator of {l:?} shifts the x-degree by up to {n_norm}, series order is {order}"
        )));
    }
    let certified_order = (i64::from(order) - n_norm) as u32;
    let pos: Vec<i64> = l.iter().map(|&x| x.max(0)).collect();
    let neg: Vec<i64> = l.iter().map(|&x| (-x).max(0)).collect();

    // keyed by the m of the second-operator partner
    let mut acc: HashMap<Vec<i64>, (Vec<i64>, BigRat)> = HashMap::new();
    for (e, c) in p.series.terms() {
        let m = m_as_i64(&e.0);
        let mut exp = mb.combine(&m);
        let sign = if exp[0].rem_euclid(2) == 0 { BigRat::one() } else { -BigRat::one() };
        let coeff = c * sign;
        exp[0] -= 1;
        let first: BigInt = (0..l.len()).map(|mu| falling(exp[mu], pos[mu])).product();
        let second: BigInt = (0..l.len()).map(|mu| falling(exp[mu], neg[mu])).product();
        if !first.is_zero() {
            let key: Vec<i64> = m.iter().zip(&n).map(|(a, b)| a - b).collect();
            let target: Vec<i64> = exp.iter().zip(&pos).map(|(a, b)| a - b).collect();
            let slot = acc.entry(key).or_insert_with(|| (target, BigRat::zero()));
            slot.1 += &coeff * BigRat::from_integer(first);
        }
        if !second.is_zero() {
            let target: Vec<i64> = exp.iter().zip(&neg).map(|(a, b)| a - b).collect();
            let slot = acc.entry(m).or_insert_with(|| (target, BigRat::zero()));
            slot.1 -= &coeff * BigRat::from_integer(second);
        }
    }
    let in_range = |m: &[i64]| m.iter().any(|&x| x < 0) || m.iter().sum::<i64>() <= i64::from(order);
    let mut residues = Vec::new();
    let mut certified_terms = 0;
    let mut keys: Vec<&Vec<i64>> = acc.keys().collect();
    keys.sort();
    for key in keys {
        let partner: Vec<i64> = key.iter().zip(&n).map(|(a, b)| a + b).collect();
        if !(in_range(key) && in_range(&partner)) {
            continue;
        }
        certified_terms += 1;
        let (target, value) = &acc[key];
        if !value.is_zero() {
            residues.push(BoxResidue { exponent: target.clone(), value: value.to_string() });
        }
    }
    Ok(BoxCheckReport {
        relation: l.to_vec(),
        mori_coordinates: n,
        order,
        certified_order,
        certified_terms,
        annihilated: residues.is_empty(),
        residues,
    })
}

/// The torus operators `sum_mu <u, mu_bar_mu> a_mu d/da_mu - <u, beta>` with
/// `beta = -mu_bar_0`, for `u` running over a basis of the dual of `Z^{d+1}`;
/// returns whether every term of `Pi` is annihilated.
pub fn u_operator_check(p: &PeriodSeries, fan: &FanData) -> bool {
    let d = fan.dim();
    let lifted = |mu: usize| -> Vec<i64> {
        let mut v = vec![1i64];
        if mu == 0 {
            v.extend(std::iter::repeat_n(0, d));
        } else {
            v.extend(fan.ray(mu - 1).iter().copied());
        }
        v
    };
    let beta: Vec<i64> = lifted(0).iter().map(|x| -x).collect();
    for (e, c) in p.series.terms() {
        if c.is_zero() {
            continue;
        }
        let mut exp = p.mori.combine(&m_as_i64(&e.0));
        exp[0] -= 1;
        for u in 0..=d {
            let euler: i64 = (0..exp.len()).map(|mu| lifted(mu)[u] * exp[mu]).sum();
            if euler - beta[u] != 0 {
                return false;
            }
        }
    }
    true
}

/// Coefficient weights present in each total degree of `g`, for the grading check.
pub fn max_weight_by_degree(g: &GammaCoeffSeries) -> Vec<Option<i64>> {
    let mut out: Vec<Option<i64>> = vec![None; g.order() as usize + 1];
    for (e, c) in g.series.terms() {
        let slot = &mut out[e.degree() as usize];
        let w = c.max_weight();
        *slot = match (*slot, w) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
    }
    out
}

/// Whether some Gamma-argument form has a negative coefficient, so that
/// period coefficients can vanish inside the positive orthant.
pub fn has_signed_forms(mb: &MoriBasis) -> bool {
    (1..=mb.num_rays()).any(|i| mb.slot_form(i).iter().any(|x| x.is_negative()))
}
