//! Small-integer number theory used to index truncation sets and levels.

use num_integer::Integer;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn divides(a: u64, b: u64) -> bool {
    a != 0 && b.is_multiple_of(a)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as ascending `(prime, exponent)` pairs. `factorize(1)` is empty.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize expects a positive integer");
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// The primes of `n` with multiplicity, ascending.
pub fn prime_factors_with_multiplicity(n: u64) -> Vec<u64> {
    factorize(n)
        .into_iter()
        .flat_map(|(p, e)| std::iter::repeat_n(p, e as usize))
        .collect()
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let len = out.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn valuation(p: u64, mut n: u64) -> u32 {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// The largest divisor of `n` coprime to `p`.
pub fn prime_to_part(n: u64, p: u64) -> u64 {
    let mut n = n;
    while n.is_multiple_of(p) {
        n /= p;
    }
    n
}

pub fn is_power_of(n: u64, p: u64) -> bool {
    prime_to_part(n, p) == 1
}

/// All distinct orderings of a multiset of primes, used to audit factorization-order independence.
pub fn distinct_orderings(items: &[u64]) -> Vec<Vec<u64>> {
    let mut sorted = items.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    let mut used = vec![false; sorted.len()];
    let mut current = Vec::with_capacity(sorted.len());
    fn rec(sorted: &[u64], used: &mut [bool], current: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if current.len() == sorted.len() {
            out.push(current.clone());
            return;
        }
        for i in 0..sorted.len() {
            if used[i] || (i > 0 && sorted[i] == sorted[i - 1] && !used[i - 1]) {
                continue;
            }
            used[i] = true;
            current.push(sorted[i]);
            rec(sorted, used, current, out);
            current.pop();
            used[i] = false;
        }
    }
    rec(&sorted, &mut used, &mut current, &mut out);
    out
}
