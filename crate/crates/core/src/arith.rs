//! Small-number arithmetic on determinants and orders.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Prime factorisation of `|n|` by trial division, primes increasing.
pub fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut k = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            k += 1;
        }
        if k > 0 {
            out.push((p.clone(), k));
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// Every `p^k` with `k >= 1` dividing `n`.
pub fn prime_power_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    for (p, k) in factorize(n) {
        let mut q = BigInt::one();
        for _ in 0..k {
            q *= &p;
            out.push(q.clone());
        }
    }
    out
}

/// `1` counts as `p^0`.
pub fn is_prime_power(n: &BigInt) -> bool {
    n.is_positive() && factorize(n).len() <= 1
}

pub fn divides(a: &BigInt, b: &BigInt) -> bool {
    b.is_multiple_of(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        n.into()
    }

    #[test]
    fn factors() {
        assert_eq!(factorize(&b(360)), vec![(b(2), 3), (b(3), 2), (b(5), 1)]);
        assert_eq!(factorize(&b(97)), vec![(b(97), 1)]);
        assert!(factorize(&b(1)).is_empty());
        assert_eq!(prime_power_divisors(&b(12)), vec![b(2), b(4), b(3)]);
        assert!(is_prime_power(&b(1)) && is_prime_power(&b(8)) && !is_prime_power(&b(6)));
    }
}
