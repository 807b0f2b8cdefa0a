//! Exact rationals in the `p/q` text form, and reduction modulo `(1/n)Z`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::supernat::Supernatural;

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `r` reduced into `[0, 1/n)`.
pub fn mod_inverse_level(r: &BigRational, n: u64) -> BigRational {
    let scaled = r * BigInt::from(n);
    let frac = &scaled - scaled.floor();
    frac / BigInt::from(n)
}

/// True when `a - b` lies in `(1/n)Z`.
pub fn congruent_mod_inverse_level(a: &BigRational, b: &BigRational, n: u64) -> bool {
    ((a - b) * BigInt::from(n)).is_integer()
}

/// The reduced denominator as a machine integer, if it fits.
pub fn denominator_u64(r: &BigRational) -> Option<u64> {
    r.denom().to_u64()
}

/// True when `r` lies in `(1/N)Z`, i.e. its denominator is a finite divisor of `N`.
pub fn in_lattice(r: &BigRational, ambient: &Supernatural) -> bool {
    r.is_zero() || denominator_u64(r).is_some_and(|d| ambient.has_divisor(d))
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p
        .parse()
        .map_err(|_| Error::parse(format!("bad rational numerator in {s:?}")))?;
    let q: BigInt = q
        .parse()
        .map_err(|_| Error::parse(format!("bad rational denominator in {s:?}")))?;
    if q.is_zero() {
        return Err(Error::parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(p, q))
}

/// `p/q` in lowest terms, or just `p` for integers.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(rs: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    rs.into_iter()
        .fold(BigInt::from(1), |acc, r| acc.lcm(r.denom()))
}
