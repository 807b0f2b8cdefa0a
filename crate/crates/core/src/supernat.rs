//! Supernatural numbers: formal products of prime powers with exponents in `N ∪ {∞}`.
//!
//! A supernatural number `N` fixes the ambient group `C_N = (1/N)Z/Z`; its finite divisors
//! form the nest that indexes every level in this crate.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith;
use crate::error::{Error, Result};

/// An element of `N ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtNat {
    Finite(u64),
    Infinite,
}

impl ExtNat {
    pub fn is_infinite(self) -> bool {
        matches!(self, ExtNat::Infinite)
    }

    fn add(self, other: ExtNat) -> ExtNat {
        match (self, other) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => ExtNat::Finite(a + b),
            _ => ExtNat::Infinite,
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(v) => write!(f, "{v}"),
            ExtNat::Infinite => f.write_str("inf"),
        }
    }
}

/// A supernatural number.
///
/// The top element `∞` (every valuation infinite) is a flag; otherwise only primes with a
/// nonzero valuation are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Supernatural {
    top: bool,
    valuations: BTreeMap<u64, ExtNat>,
}

impl Supernatural {
    pub fn one() -> Self {
        Supernatural {
            top: false,
            valuations: BTreeMap::new(),
        }
    }

    pub fn infinity() -> Self {
        Supernatural {
            top: true,
            valuations: BTreeMap::new(),
        }
    }

    /// `p^∞`.
    pub fn prime_power_infinite(p: u64) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Supernatural {
            top: false,
            valuations: BTreeMap::from([(p, ExtNat::Infinite)]),
        })
    }

    pub fn from_u64(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::parse("supernatural numbers are positive"));
        }
        let valuations = arith::factorize(n)
            .into_iter()
            .map(|(p, e)| (p, ExtNat::Finite(e as u64)))
            .collect();
        Ok(Supernatural {
            top: false,
            valuations,
        })
    }

    /// Factor a positive big integer by trial division (desk-scale inputs only).
    pub fn from_biguint(n: &BigUint) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::parse("supernatural numbers are positive"));
        }
        if let Some(small) = n.to_u64() {
            return Self::from_u64(small);
        }
        let mut rest = n.clone();
        let mut valuations = BTreeMap::new();
        let mut p = 2u64;
        while BigUint::from(p) * BigUint::from(p) <= rest {
            let bp = BigUint::from(p);
            let mut e = 0u64;
            loop {
                let (q, r) = rest.div_rem(&bp);
                if !r.is_zero() {
                    break;
                }
                rest = q;
                e += 1;
            }
            if e > 0 {
                valuations.insert(p, ExtNat::Finite(e));
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if !rest.is_one() {
            let q = rest
                .to_u64()
                .ok_or_else(|| Error::parse("prime factor exceeds 64 bits"))?;
            valuations.insert(q, ExtNat::Finite(1));
        }
        Ok(Supernatural {
            top: false,
            valuations,
        })
    }

    /// Build from explicit `(prime, valuation)` pairs; zero valuations are dropped.
    pub fn from_valuations(pairs: impl IntoIterator<Item = (u64, ExtNat)>) -> Result<Self> {
        let mut valuations = BTreeMap::new();
        for (p, v) in pairs {
            if !arith::is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            let entry = valuations.entry(p).or_insert(ExtNat::Finite(0));
            *entry = entry.add(v);
        }
        valuations.retain(|_, v| *v != ExtNat::Finite(0));
        Ok(Supernatural {
            top: false,
            valuations,
        })
    }

    pub fn is_top(&self) -> bool {
        self.top
    }

    pub fn is_finite(&self) -> bool {
        !self.top && self.valuations.values().all(|v| !v.is_infinite())
    }

    /// `v_p(N)`; `p` must be prime.
    pub fn valuation(&self, p: u64) -> ExtNat {
        debug_assert!(arith::is_prime(p), "valuation at a non-prime {p}");
        if self.top {
            return ExtNat::Infinite;
        }
        self.valuations
            .get(&p)
            .copied()
            .unwrap_or(ExtNat::Finite(0))
    }

    /// Stored `(prime, valuation)` pairs; empty for `1` and for `∞`.
    pub fn stored_valuations(&self) -> impl Iterator<Item = (u64, ExtNat)> + '_ {
        self.valuations.iter().map(|(&p, &v)| (p, v))
    }

    pub fn divides(&self, other: &Supernatural) -> bool {
        if other.top {
            return true;
        }
        if self.top {
            return false;
        }
        self.valuations
            .iter()
            .all(|(&p, &v)| v <= other.valuation(p))
    }

    /// Whether the finite number `n` divides `self`.
    pub fn has_divisor(&self, n: u64) -> bool {
        if n == 0 {
            return false;
        }
        if self.top {
            return true;
        }
        arith::factorize(n)
            .into_iter()
            .all(|(p, e)| ExtNat::Finite(e as u64) <= self.valuation(p))
    }

    pub fn mul(&self, other: &Supernatural) -> Supernatural {
        if self.top || other.top {
            return Supernatural::infinity();
        }
        let mut valuations = self.valuations.clone();
        for (&p, &v) in &other.valuations {
            let entry = valuations.entry(p).or_insert(ExtNat::Finite(0));
            *entry = entry.add(v);
        }
        Supernatural {
            top: false,
            valuations,
        }
    }

    /// Greatest common divisor (pointwise minimum of valuations).
    pub fn meet(&self, other: &Supernatural) -> Supernatural {
        match (self.top, other.top) {
            (true, _) => return other.clone(),
            (_, true) => return self.clone(),
            _ => {}
        }
        let valuations = self
            .valuations
            .iter()
            .filter_map(|(&p, &v)| {
                let w = other.valuation(p);
                let m = v.min(w);
                (m != ExtNat::Finite(0)).then_some((p, m))
            })
            .collect();
        Supernatural {
            top: false,
            valuations,
        }
    }

    /// Least common multiple (pointwise maximum of valuations).
    pub fn join(&self, other: &Supernatural) -> Supernatural {
        if self.top || other.top {
            return Supernatural::infinity();
        }
        let mut valuations = self.valuations.clone();
        for (&p, &v) in &other.valuations {
            let entry = valuations.entry(p).or_insert(ExtNat::Finite(0));
            *entry = (*entry).max(v);
        }
        Supernatural {
            top: false,
            valuations,
        }
    }

    /// The finite divisors of `self` that are at most `bound`, ascending.
    pub fn nest(&self, bound: u64) -> Vec<u64> {
        if bound == 0 {
            return Vec::new();
        }
        if self.top {
            return (1..=bound).collect();
        }
        let mut out = vec![1u64];
        for (&p, &v) in &self.valuations {
            let cap = match v {
                ExtNat::Finite(e) => e,
                ExtNat::Infinite => u64::MAX,
            };
            let len = out.len();
            for i in 0..len {
                let mut x = out[i];
                let mut e = 0;
                while e < cap {
                    match x.checked_mul(p) {
                        Some(y) if y <= bound => {
                            x = y;
                            out.push(x);
                            e += 1;
                        }
                        _ => break,
                    }
                }
            }
        }
        out.retain(|&d| d <= bound);
        out.sort_unstable();
        out
    }

    /// The exact value of a finite supernatural number.
    pub fn to_biguint(&self) -> Option<BigUint> {
        if !self.is_finite() {
            return None;
        }
        let mut acc = BigUint::one();
        for (&p, &v) in &self.valuations {
            if let ExtNat::Finite(e) = v {
                acc *= BigUint::from(p).pow(e as u32);
            }
        }
        Some(acc)
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.to_biguint().and_then(|n| n.to_u64())
    }

    /// The divisible part `N_d`: `v_p(N_d) = ∞` where `v_p(N) = ∞`, else `0`.
    pub fn divisible_part(&self) -> Supernatural {
        if self.top {
            return self.clone();
        }
        let valuations = self
            .valuations
            .iter()
            .filter(|(_, v)| v.is_infinite())
            .map(|(&p, &v)| (p, v))
            .collect();
        Supernatural {
            top: false,
            valuations,
        }
    }

    /// The prime-to-`p` part `N(p')`. `None` for `∞`, whose prime-to-`p` part has infinitely
    /// many infinite valuations and no finite representation here.
    pub fn prime_to(&self, p: u64) -> Option<Supernatural> {
        if self.top {
            return None;
        }
        let mut out = self.clone();
        out.valuations.remove(&p);
        Some(out)
    }
}

impl PartialOrd for Supernatural {
    /// The divisibility order.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self.divides(other), other.divides(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }
}

impl From<u64> for Supernatural {
    fn from(n: u64) -> Self {
        Supernatural::from_u64(n.max(1)).expect("positive")
    }
}

impl fmt::Display for Supernatural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.top {
            return f.write_str("inf");
        }
        let mut parts = Vec::new();
        let mut finite = BigUint::one();
        for (&p, &v) in &self.valuations {
            match v {
                ExtNat::Infinite => parts.push(format!("{p}^inf")),
                ExtNat::Finite(e) => finite *= BigUint::from(p).pow(e as u32),
            }
        }
        if !finite.is_one() || parts.is_empty() {
            parts.push(finite.to_string());
        }
        f.write_str(&parts.join("*"))
    }
}

impl FromStr for Supernatural {
    type Err = Error;

    /// Accepts `inf`, decimal integers, `p^inf` and `p^k`, joined by `*`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(Supernatural::infinity());
        }
        let mut acc = Supernatural::one();
        for factor in s.split('*') {
            let factor = factor.trim();
            let piece = if let Some((base, exp)) = factor.split_once('^') {
                let base: u64 = base
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(format!("bad base in factor '{factor}'")))?;
                let exp = exp.trim();
                if exp.eq_ignore_ascii_case("inf") {
                    Supernatural::prime_power_infinite(base)?
                } else {
                    let e: u32 = exp
                        .parse()
                        .map_err(|_| Error::parse(format!("bad exponent in factor '{factor}'")))?;
                    Supernatural::from_biguint(&BigUint::from(base).pow(e))?
                }
            } else {
                let n: BigUint = factor
                    .parse()
                    .map_err(|_| Error::parse(format!("bad supernatural factor '{factor}'")))?;
                Supernatural::from_biguint(&n)?
            };
            acc = acc.mul(&piece);
        }
        Ok(acc)
    }
}
