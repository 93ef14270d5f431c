//! Exact integers, rationals and the formal transcendental scalar ring.

mod consts;
mod trans;

pub use consts::{eval_generator, DecimalApprox, MAX_DIGITS, MAX_ZETA};
pub(crate) use trans::parse_rational;
pub use trans::{Generator, TransMonomial, TransScalar};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Exact rational number, always stored in lowest terms with a positive denominator.
pub type BigRat = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Binomial coefficient, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    // the running product stays integral: it is binomial(n - k + i, i) after step i
    (1..=k).fold(BigInt::one(), |acc, i| acc * (n - k + i) / i)
}

/// Multinomial coefficient `(sum parts)! / prod(parts!)`.
pub fn multinomial(parts: &[u64]) -> BigInt {
    let mut total = 0u64;
    let mut acc = BigInt::one();
    for &p in parts {
        total += p;
        acc *= binomial(total, p);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_values() {
        let direct: u64 = (1..=10).product();
        assert_eq!(factorial(10), BigInt::from(direct));
        assert_eq!(factorial(10), BigInt::from(3628800));
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(1), BigInt::one());
    }

    #[test]
    fn binomial_matches_pascal() {
        let mut row = vec![BigInt::one()];
        for n in 1..=50u64 {
            let mut next = vec![BigInt::one(); n as usize + 1];
            for k in 1..n as usize {
                next[k] = &row[k - 1] + &row[k];
            }
            row = next;
            for k in 0..=n {
                assert_eq!(binomial(n, k), row[k as usize]);
            }
        }
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 5), BigInt::zero());
    }

    #[test]
    fn binomial_is_factorial_ratio() {
        for n in 0..=50u64 {
            for k in 0..=n {
                assert_eq!(binomial(n, k) * factorial(k) * factorial(n - k), factorial(n));
            }
        }
    }

    #[test]
    fn multinomial_small() {
        assert_eq!(multinomial(&[1, 1, 1, 1, 1]), BigInt::from(120));
        assert_eq!(multinomial(&[2, 2, 2, 2, 2]), BigInt::from(113400));
        assert_eq!(multinomial(&[]), BigInt::one());
    }
}
