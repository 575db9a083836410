//! Prime fields `F_p` for word-sized primes, and the number theory needed to
//! pick primes that split completely in a cyclotomic field.

use super::field::{Field, Ring};

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `p >= lower` with `p = 1 mod n`.
pub fn prime_one_mod(n: u64, lower: u64) -> u64 {
    let mut k = lower.div_ceil(n).max(1);
    loop {
        let p = k * n + 1;
        if is_prime_u64(p) {
            return p;
        }
        k += 1;
    }
}

/// An element of exact multiplicative order `n` in `F_p` (requires `n | p - 1`).
pub fn root_of_unity(n: u64, p: u64) -> u64 {
    assert_eq!((p - 1) % n, 0);
    let qs = super::cyclo::prime_factors(n);
    for g in 2..p {
        let w = pow_mod(g, (p - 1) / n, p);
        if qs.iter().all(|q| pow_mod(w, n / q, p) != 1) {
            return w;
        }
    }
    unreachable!("F_p^* is cyclic")
}

/// Square root modulo an odd prime (Tonelli-Shanks); `None` for non-residues.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Element of a prime field.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Fp {
    pub v: u64,
    pub p: u64,
}

impl Fp {
    pub fn new(v: i64, p: u64) -> Self {
        Fp { v: v.rem_euclid(p as i64) as u64, p }
    }
}

impl Ring for Fp {
    type Ctx = u64;

    fn ctx(&self) -> u64 {
        self.p
    }
    fn zero_in(p: &u64) -> Self {
        Fp { v: 0, p: *p }
    }
    fn one_in(p: &u64) -> Self {
        Fp { v: 1 % *p, p: *p }
    }
    fn from_int_in(p: &u64, n: i64) -> Self {
        Fp::new(n, *p)
    }
    fn is_zero_elt(&self) -> bool {
        self.v == 0
    }
    fn plus(&self, o: &Self) -> Self {
        Fp { v: ((self.v as u128 + o.v as u128) % self.p as u128) as u64, p: self.p }
    }
    fn minus(&self, o: &Self) -> Self {
        Fp { v: ((self.v as u128 + self.p as u128 - o.v as u128) % self.p as u128) as u64, p: self.p }
    }
    fn times(&self, o: &Self) -> Self {
        Fp { v: mul_mod(self.v, o.v, self.p), p: self.p }
    }
    fn negated(&self) -> Self {
        Fp { v: (self.p - self.v) % self.p, p: self.p }
    }
}

impl Field for Fp {
    fn inverse(&self) -> Option<Self> {
        if self.v == 0 {
            None
        } else {
            Some(Fp { v: pow_mod(self.v, self.p - 2, self.p), p: self.p })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_roots() {
        assert!(is_prime_u64(2_305_843_009_213_693_951));
        assert!(!is_prime_u64(2_305_843_009_213_693_953));
        let p = prime_one_mod(26520, 1 << 61);
        assert_eq!((p - 1) % 26520, 0);
        let w = root_of_unity(26520, p);
        assert_eq!(pow_mod(w, 26520, p), 1);
        assert_ne!(pow_mod(w, 13260, p), 1);
    }

    #[test]
    fn tonelli_shanks() {
        let p = prime_one_mod(1 << 10, 1 << 40);
        for a in 1..200u64 {
            if let Some(r) = sqrt_mod(a, p) {
                assert_eq!(mul_mod(r, r, p), a);
            }
        }
    }
}
