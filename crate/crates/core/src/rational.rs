//! Exact rational scalars.
//!
//! Every coefficient in this crate is a [`Rational`]: an arbitrary precision
//! fraction kept in lowest terms with a positive denominator. The text form is
//! `p/q`, or just `p` when the denominator is one. Decimals are not accepted.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p/q` or `p`. Signs are only allowed on the numerator.
pub fn parse(s: &str) -> Result<Rational> {
    let bad = || Error::malformed(None, format!("invalid rational `{s}` (expected p/q or p)"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let unsigned = num.strip_prefix('-').or_else(|| num.strip_prefix('+')).unwrap_or(num);
    if !digits(unsigned) {
        return Err(bad());
    }
    let p: BigInt = num.parse().map_err(|_| bad())?;
    let q: BigInt = match den {
        Some(d) if digits(d) => d.parse().map_err(|_| bad())?,
        Some(_) => return Err(bad()),
        None => BigInt::one(),
    };
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

pub fn is_integral(r: &Rational) -> bool {
    r.is_integer()
}

/// Fractional part in `[0, 1)`.
pub fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

pub fn is_positive(r: &Rational) -> bool {
    r.is_positive()
}
