//! Numeric values of the formal generators, in fixed point over `BigInt`.
//!
//! Euler's constant uses the Brent-McMillan series, zeta values the
//! Borwein alternating-series acceleration. Everything is computed at
//! `digits + GUARD` decimal places and cached per precision.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::trans::{Generator, TransScalar};
use crate::error::{Error, Result};

/// Largest supported number of significant digits.
pub const MAX_DIGITS: u32 = 200;
/// Largest `k` for which `zeta(k)` can be evaluated.
pub const MAX_ZETA: u32 = 64;

const GUARD: u32 = 20;
const EXTRA_LIMIT: u32 = 80;

fn pow10(n: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), n as usize)
}

/// ln 2 = sum 2 / ((2k+1) 3^(2k+1)), scaled by `one`.
fn ln2_fixed(one: &BigInt) -> BigInt {
    let mut sum = BigInt::zero();
    let mut power = BigInt::from(3);
    let mut k = 0u64;
    loop {
        let term = (one * 2u32) / (&power * (2 * k + 1));
        if term.is_zero() {
            break;
        }
        sum += term;
        power *= 9u32;
        k += 1;
    }
    sum
}

fn euler_gamma_fixed(places: u32) -> BigInt {
    let one = pow10(places);
    // error of the truncated Brent-McMillan quotient is below pi * exp(-4n)
    let need = (places as f64 * std::f64::consts::LN_10 / 4.0).ceil() as u64 + 2;
    let log2n = 64 - need.leading_zeros() as u64;
    let n = 1u64 << log2n;
    let n2 = BigInt::from(n) * BigInt::from(n);
    let ln_n = ln2_fixed(&one) * log2n;

    let mut a = -ln_n;
    let mut b = one.clone();
    let mut u = a.clone();
    let mut v = b.clone();
    let mut k = 1u64;
    loop {
        let kk = BigInt::from(k);
        b = &b * &n2 / (&kk * &kk);
        a = (&a * &n2 / &kk + &b) / &kk;
        if a.is_zero() && b.is_zero() && k > n {
            break;
        }
        u += &a;
        v += &b;
        k += 1;
    }
    u * &one / v
}

fn zeta_fixed(s: u32, places: u32) -> BigInt {
    let one = pow10(places);
    // Borwein: error below 3 / (3 + sqrt 8)^n relative to 1 - 2^(1-s)
    let n = (places as f64 * std::f64::consts::LN_10 / (3.0 + 8f64.sqrt()).ln()).ceil() as u64 + 4;

    // d_k = n * sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!), all integers
    let mut d = Vec::with_capacity(n as usize + 1);
    let mut term = BigInt::one(); // i = 0 term: (n-1)!/n! * n = 1 after the leading n
    let mut acc = BigInt::zero();
    for i in 0..=n {
        if i > 0 {
            // ratio of consecutive terms: (n+i-1)(n-i+1) * 4 / ((2i-1)(2i))
            term = term * BigInt::from((n + i - 1) * (n - i + 1) * 4) / BigInt::from((2 * i - 1) * (2 * i));
        }
        acc += &term;
        d.push(acc.clone());
    }
    let dn = d[n as usize].clone();
    let mut sum = BigInt::zero();
    for k in 0..n {
        let denom = num_traits::pow(BigInt::from(k + 1), s as usize);
        let t = (&d[k as usize] - &dn) * &one / denom;
        if k % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
    }
    // zeta(s) = -2^(s-1) * sum / (d_n (2^(s-1) - 1))
    let p = BigInt::one() << (s - 1) as usize;
    -(sum * &p) / (dn * (p - 1u32))
}

fn cache() -> &'static Mutex<HashMap<(Generator, u32), BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<(Generator, u32), BigInt>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Value of `g` scaled by `10^places`, truncated.
pub fn eval_generator(g: Generator, places: u32) -> Result<BigInt> {
    if let Generator::Zeta(k) = g {
        if k > MAX_ZETA {
            return Err(Error::UnsupportedGenerator(g.to_string()));
        }
    }
    if let Some(v) = cache().lock().unwrap().get(&(g, places)) {
        return Ok(v.clone());
    }
    let v = match g {
        Generator::Gamma => euler_gamma_fixed(places + 5) / pow10(5),
        Generator::Zeta(k) => zeta_fixed(k, places + 5) / pow10(5),
    };
    cache().lock().unwrap().insert((g, places), v.clone());
    Ok(v)
}

/// Decimal `mantissa * 10^exponent` with at most the requested number of
/// significant digits and no trailing zeros in the mantissa.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecimalApprox {
    pub mantissa: BigInt,
    pub exponent: i64,
}

impl DecimalApprox {
    pub fn zero() -> Self {
        Self { mantissa: BigInt::zero(), exponent: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    fn from_fixed(v: &BigInt, places: u32, digits: u32) -> Self {
        if v.is_zero() {
            return Self::zero();
        }
        let len = v.abs().to_string().len() as i64;
        let drop = len - digits as i64;
        let (mut mantissa, mut exponent) = if drop > 0 {
            let unit = pow10(drop as u32);
            let (q, r) = v.abs().div_rem(&unit);
            let q = if r * 2u32 >= unit { q + 1u32 } else { q };
            (q, drop - places as i64)
        } else {
            (v.abs(), -(places as i64))
        };
        let ten = BigInt::from(10);
        while !mantissa.is_zero() && (&mantissa % &ten).is_zero() {
            mantissa /= &ten;
            exponent += 1;
        }
        if v.sign() == Sign::Minus {
            mantissa = -mantissa;
        }
        Self { mantissa, exponent }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_string().parse().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for DecimalApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mantissa.is_zero() {
            return write!(f, "0.0");
        }
        let sign = if self.mantissa.is_negative() { "-" } else { "" };
        let digits = self.mantissa.abs().to_string();
        let len = digits.len() as i64;
        let point = len + self.exponent; // position of the decimal point
        if !(-30..=60).contains(&point) {
            let (head, tail) = digits.split_at(1);
            let tail = if tail.is_empty() { "0" } else { tail };
            return write!(f, "{sign}{head}.{tail}e{}", point - 1);
        }
        if self.exponent >= 0 {
            write!(f, "{sign}{digits}{}.0", "0".repeat(self.exponent as usize))
        } else if point > 0 {
            let (int, frac) = digits.split_at(point as usize);
            write!(f, "{sign}{int}.{frac}")
        } else {
            write!(f, "{sign}0.{}{digits}", "0".repeat((-point) as usize))
        }
    }
}

impl TransScalar {
    /// Numeric value with `digits` significant digits (`1..=MAX_DIGITS`).
    pub fn eval(&self, digits: u32) -> Result<DecimalApprox> {
        if digits == 0 || digits > MAX_DIGITS {
            return Err(Error::PrecisionOutOfRange { requested: digits, cap: MAX_DIGITS });
        }
        let mut places = digits + GUARD;
        loop {
            let v = self.eval_fixed(places)?;
            let len = if v.is_zero() { 0 } else { v.abs().to_string().len() as u32 };
            // retry with more places when cancellation ate the significant digits
            if len >= digits + GUARD / 2 || places >= digits + GUARD + EXTRA_LIMIT {
                return Ok(DecimalApprox::from_fixed(&v, places, digits));
            }
            places = (places + digits + GUARD / 2 - len).min(digits + GUARD + EXTRA_LIMIT);
        }
    }

    /// Value scaled by `10^places`.
    pub fn eval_fixed(&self, places: u32) -> Result<BigInt> {
        let one = pow10(places);
        let mut total = BigInt::zero();
        for (m, c) in self.terms() {
            let mut v = one.clone();
            for (g, e) in m.factors() {
                let x = eval_generator(g, places)?;
                for _ in 0..e.unsigned_abs() {
                    v = if e > 0 { v * &x / &one } else { v * &one / &x };
                }
            }
            total += v * c.numer() / c.denom();
        }
        Ok(total)
    }
}
