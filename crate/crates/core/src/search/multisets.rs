//! Determinant multisets `d_1 <= ... <= d_n` with `sum 1/d_i = 1`.

use num_integer::Integer;
use num_rational::Ratio;

use crate::arith::{divides, prime_power_divisors};
use num_bigint::BigInt;

pub(crate) type Q = Ratio<u128>;

/// Options for [`enumerate_multisets`].
#[derive(Clone, Debug)]
pub(crate) struct MultisetRules {
    pub det_bound: u64,
    pub max_len: Option<usize>,
    /// Tail bound on partial sums; without it branches are cut only on overshoot.
    pub density_tail: bool,
    /// Per-determinant cap on multiplicity (e.g. number of distinct lattices).
    pub cap: Vec<u64>,
}

/// All multisets in increasing lexicographic order.
pub(crate) fn enumerate_multisets(rules: &MultisetRules) -> (Vec<Vec<u64>>, u64) {
    let mut out = Vec::new();
    let mut cut = 0u64;
    let mut cur = Vec::new();
    let max_len = rules.max_len.unwrap_or(rules.det_bound as usize).min(rules.det_bound as usize);
    walk(rules, max_len, 2, Q::from_integer(0), &mut cur, &mut out, &mut cut);
    (out, cut)
}

fn walk(
    rules: &MultisetRules,
    max_len: usize,
    min: u64,
    sum: Q,
    cur: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
    cut: &mut u64,
) {
    if sum == Q::from_integer(1) {
        out.push(cur.clone());
        return;
    }
    if cur.len() == max_len {
        return;
    }
    let gap = Q::from_integer(1) - sum;
    for d in min..=rules.det_bound {
        let part = Q::new(1, d as u128);
        if part > gap {
            continue;
        }
        let used = cur.iter().filter(|&&x| x == d).count() as u64;
        if used >= rules.cap[d as usize] {
            continue;
        }
        if rules.density_tail {
            // all later parts are at most 1/d
            let slots = (max_len - cur.len()) as u128;
            if part * Q::from_integer(slots) < gap {
                *cut += 1;
                break;
            }
        }
        cur.push(d);
        walk(rules, max_len, d, sum + part, cur, out, cut);
        cur.pop();
    }
}

/// Some pair of determinants is coprime.
pub(crate) fn has_coprime_pair(dets: &[u64]) -> bool {
    (0..dets.len()).any(|i| (i + 1..dets.len()).any(|j| dets[i].gcd(&dets[j]) == 1))
}

/// Some prime power divides exactly one determinant.
pub(crate) fn has_lonely_prime_power(dets: &[u64]) -> bool {
    let big: Vec<BigInt> = dets.iter().map(|&d| BigInt::from(d)).collect();
    big.iter().enumerate().any(|(i, d)| {
        prime_power_divisors(d)
            .iter()
            .any(|q| !big.iter().enumerate().any(|(j, e)| j != i && divides(q, e)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(bound: u64, max_len: usize) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        fn rec(bound: u64, max_len: usize, min: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
            let s: Q = cur.iter().map(|&d| Q::new(1, d as u128)).sum();
            if s == Q::from_integer(1) {
                out.push(cur.clone());
            }
            if cur.len() == max_len || s >= Q::from_integer(1) {
                return;
            }
            for d in min..=bound {
                cur.push(d);
                rec(bound, max_len, d, cur, out);
                cur.pop();
            }
        }
        rec(bound, max_len, 2, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn tail_bound_loses_nothing() {
        for bound in 2..=9u64 {
            let mk = |tail| MultisetRules {
                det_bound: bound,
                max_len: None,
                density_tail: tail,
                cap: vec![u64::MAX; bound as usize + 1],
            };
            let (with, _) = enumerate_multisets(&mk(true));
            let (without, _) = enumerate_multisets(&mk(false));
            assert_eq!(with, without);
            assert_eq!(with, brute(bound, bound as usize));
        }
    }

    #[test]
    fn examples() {
        let rules = MultisetRules { det_bound: 4, max_len: None, density_tail: true, cap: vec![u64::MAX; 5] };
        let (m, _) = enumerate_multisets(&rules);
        assert_eq!(
            m,
            vec![vec![2, 2], vec![2, 4, 4], vec![3, 3, 3], vec![4, 4, 4, 4]]
        );
        assert!(has_coprime_pair(&[2, 3, 6]));
        assert!(!has_coprime_pair(&[2, 4, 4]));
        assert!(!has_lonely_prime_power(&[2, 4, 4, 8, 8]));
        assert!(!has_lonely_prime_power(&[2, 3, 6]));
        assert!(has_lonely_prime_power(&[2, 4, 4, 8]));
    }
}
