//! Universal integral polynomials for Witt vector operations, computed once and cached.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::ring::{ExactRing, Integers, Poly, Polynomials, Rationals};
use super::vector::{ghost, ghost_solve, GhostVector, WittVector};
use crate::arith::{divides, divisors};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WittOp {
    Sum,
    Product,
    Negation,
    /// Frobenius from level `source` to the requested level.
    Frobenius {
        source: u64,
    },
}

impl fmt::Display for WittOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WittOp::Sum => f.write_str("sum"),
            WittOp::Product => f.write_str("product"),
            WittOp::Negation => f.write_str("negation"),
            WittOp::Frobenius { source } => write!(f, "frobenius from {source}"),
        }
    }
}

/// One polynomial per component `k ∈ N_level`, in the variables `x_d` (and `y_d` for binary ops).
#[derive(Debug)]
pub struct UniversalPolys {
    op: WittOp,
    level: u64,
    ring: Polynomials<Integers>,
    polys: Vec<Poly<BigInt>>,
}

impl UniversalPolys {
    pub fn op(&self) -> WittOp {
        self.op
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    /// The polynomial ring, with variables `x1, x2, ...` then `y1, y2, ...`.
    pub fn ring(&self) -> &Polynomials<Integers> {
        &self.ring
    }

    pub fn polys(&self) -> &[Poly<BigInt>] {
        &self.polys
    }

    /// The polynomial of component `k`.
    pub fn component(&self, k: u64) -> Option<&Poly<BigInt>> {
        divisors(self.level)
            .binary_search(&k)
            .ok()
            .map(|i| &self.polys[i])
    }

    pub fn format_component(&self, k: u64) -> Option<String> {
        self.component(k).map(|p| self.ring.format_poly(p))
    }
}

type Cache = RwLock<HashMap<(WittOp, u64), Arc<UniversalPolys>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Cache::default)
}

/// Cached; concurrent readers share one computed table per `(op, level)`.
pub fn universal_polys(level: u64, op: WittOp) -> Result<Arc<UniversalPolys>> {
    if let Some(p) = cache().read().expect("cache lock").get(&(op, level)) {
        return Ok(p.clone());
    }
    let computed = Arc::new(compute(level, op)?);
    Ok(cache()
        .write()
        .expect("cache lock")
        .entry((op, level))
        .or_insert(computed)
        .clone())
}

fn variable_names(prefix: &str, level: u64) -> Vec<String> {
    divisors(level)
        .iter()
        .map(|d| format!("{prefix}{d}"))
        .collect()
}

fn compute(level: u64, op: WittOp) -> Result<UniversalPolys> {
    if level == 0 {
        return Err(Error::parse("level must be positive"));
    }
    let input_level = match op {
        WittOp::Frobenius { source } => {
            if !divides(level, source) {
                return Err(Error::not_divisor(level, source));
            }
            source
        }
        _ => level,
    };
    let mut names = variable_names("x", input_level);
    if matches!(op, WittOp::Sum | WittOp::Product) {
        names.extend(variable_names("y", level));
    }
    let qring = Polynomials::new(Rationals, names.clone());
    let tau_in = divisors(input_level).len();
    let generic = |offset: usize, lvl: u64| {
        let n = divisors(lvl).len();
        WittVector::new(
            qring.clone(),
            lvl,
            (0..n).map(|i| qring.var(offset + i)).collect(),
        )
        .expect("one variable per divisor")
    };
    let x = ghost(&generic(0, input_level));
    let z = match op {
        WittOp::Sum => x.add(&ghost(&generic(tau_in, level)))?,
        WittOp::Product => x.mul(&ghost(&generic(tau_in, level)))?,
        WittOp::Negation => x.neg(),
        WittOp::Frobenius { source } => GhostVector::from_fn(qring.clone(), level, |k| {
            x.value(k * source / level).expect("kn/m divides n").clone()
        }),
    };
    let w = ghost_solve(&z)?;
    let zring = Polynomials::new(Integers, names);
    let mut polys = Vec::with_capacity(w.components().len());
    for (&k, p) in w.index().iter().zip(w.components()) {
        let integral = qring.map_coeffs(p, &zring, |c: &BigRational| {
            if c.is_integer() {
                Ok(c.to_integer())
            } else {
                Err(Error::IntegralityFailure {
                    index: k,
                    coefficient: Rationals.format_elem(c),
                })
            }
        })?;
        polys.push(integral);
    }
    Ok(UniversalPolys {
        op,
        level,
        ring: zring,
        polys,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_polynomials() {
        let s = universal_polys(2, WittOp::Sum).unwrap();
        assert_eq!(s.format_component(1).unwrap(), "x1 + y1");
        assert_eq!(s.format_component(2).unwrap(), "x2 + y2 - x1*y1");
        let p = universal_polys(2, WittOp::Product).unwrap();
        assert_eq!(p.format_component(1).unwrap(), "x1*y1");
    }

    #[test]
    fn frobenius_polynomials() {
        let f = universal_polys(1, WittOp::Frobenius { source: 2 }).unwrap();
        assert_eq!(f.format_component(1).unwrap(), "2*x2 + x1^2");
        let f = universal_polys(1, WittOp::Frobenius { source: 5 }).unwrap();
        assert_eq!(f.format_component(1).unwrap(), "5*x5 + x1^5");
        assert!(universal_polys(2, WittOp::Frobenius { source: 3 }).is_err());
    }

    #[test]
    fn cache_returns_shared_tables() {
        let a = universal_polys(4, WittOp::Negation).unwrap();
        let b = universal_polys(4, WittOp::Negation).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        // negation is not componentwise at level 2
        assert_eq!(a.format_component(2).unwrap(), "-x2 - x1^2");
    }
}
