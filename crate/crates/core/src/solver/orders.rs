//! Admissible orders of roots of unity in an irreducible K-relation.

use std::collections::BTreeSet;

use num_integer::Integer;

use crate::exactmath::cyclo::divisors;

/// How the gcd in the prime-size bound is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GcdReading {
    /// `(p-1)/gcd(p-1, d) - 1`, as printed.
    Literal,
    /// `(p-1)/gcd(p-1, 2d) - 1`.
    Doubled,
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|q| q * q <= n).all(|q| n % q != 0)
}

/// Orders allowed by the Dvornicich-Zannier bound for a relation of length
/// `k` over a field of degree `d`, under one reading of the gcd.
///
/// Exponents: `p^(a+1) | N` forces `p^a | 2d`.  Sizes: the sum over primes
/// `p | N` of `(p-1)/gcd(p-1, d') - 1` is at most `k - 2`.  The set is closed
/// under taking divisors.
pub fn admissible_orders_with(k: u64, d: u64, reading: GcdReading) -> BTreeSet<u64> {
    assert!(k >= 2 && d >= 1);
    let dd = match reading {
        GcdReading::Literal => d,
        GcdReading::Doubled => 2 * d,
    };
    let budget = k - 2;
    let pmax = (k - 1) * dd + 1;
    let primes: Vec<u64> = (2..=pmax).filter(|&p| is_prime(p)).collect();
    let cost = |p: u64| (p - 1) / (p - 1).gcd(&dd) - 1;
    let max_exp = |p: u64| {
        let mut a = 0u32;
        while (2 * d) % p.pow(a + 1) == 0 {
            a += 1;
        }
        a + 1
    };

    let mut out = BTreeSet::new();
    let mut stack = vec![(0usize, 1u64, 0u64)];
    while let Some((i, n, used)) = stack.pop() {
        out.insert(n);
        for (j, &p) in primes.iter().enumerate().skip(i) {
            let c = cost(p);
            if used + c > budget {
                continue;
            }
            let mut pe = 1;
            for _ in 0..max_exp(p) {
                pe *= p;
                stack.push((j + 1, n * pe, used + c));
            }
        }
    }
    out
}

/// Union of both gcd readings; the two sets are logged when they differ.
pub fn admissible_orders(k: u64, d: u64) -> BTreeSet<u64> {
    let lit = admissible_orders_with(k, d, GcdReading::Literal);
    let dbl = admissible_orders_with(k, d, GcdReading::Doubled);
    if lit != dbl {
        log::debug!(
            "N({k}) for d={d}: literal reading has {} orders (max {}), doubled reading {} (max {})",
            lit.len(),
            lit.iter().max().unwrap_or(&1),
            dbl.len(),
            dbl.iter().max().unwrap_or(&1)
        );
    }
    lit.union(&dbl).copied().collect()
}

/// Closure of a set under taking divisors.
pub fn divisor_closure(set: &BTreeSet<u64>) -> BTreeSet<u64> {
    set.iter().flat_map(|&n| divisors(n)).collect()
}
