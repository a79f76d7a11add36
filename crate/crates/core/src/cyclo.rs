//! Exact sums of roots of unity.
//!
//! A [`CycloSum`] of order `N` is `sum_r c_r * zeta_N^r` with rational
//! coefficients, `zeta_N = exp(2 pi i / N)`. Its value is zero exactly when the
//! polynomial `sum_r c_r x^r` is divisible by the `N`-th cyclotomic polynomial,
//! which is how [`CycloSum::is_zero`] decides.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Dense integer polynomial, coefficients from the constant term upwards.
/// The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly(Vec<BigInt>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn one() -> Self {
        IntPoly(vec![BigInt::one()])
    }

    /// `x^n - 1`
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[0] = -BigInt::one();
        c[n] = BigInt::one();
        IntPoly(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// Quotient and remainder by a monic divisor.
    pub fn div_rem_monic(&self, divisor: &IntPoly) -> (IntPoly, IntPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        assert!(divisor.0[dd].is_one(), "divisor must be monic");
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (IntPoly(Vec::new()), IntPoly::new(rem));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = std::mem::take(&mut rem[i]);
            if c.is_zero() {
                continue;
            }
            for k in 0..dd {
                let t = &c * &divisor.0[k];
                rem[i - dd + k] -= t;
            }
            quot[i - dd] = c;
        }
        rem.truncate(dd);
        (IntPoly::new(quot), IntPoly::new(rem))
    }

    /// Exact quotient by a monic divisor; panics if the division leaves a remainder.
    pub fn div_exact_monic(&self, divisor: &IntPoly) -> IntPoly {
        let (q, r) = self.div_rem_monic(divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{a}x^{k}")?,
            }
        }
        Ok(())
    }
}

pub(crate) fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn cache() -> &'static Mutex<HashMap<u64, Arc<IntPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<IntPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The `n`-th cyclotomic polynomial, `(x^n - 1) / prod_{d | n, d < n} Phi_d`.
pub fn cyclotomic_poly(n: u64) -> Arc<IntPoly> {
    assert!(n >= 1, "cyclotomic polynomial index must be positive");
    if let Some(p) = cache().lock().expect("cache poisoned").get(&n) {
        return Arc::clone(p);
    }
    let mut p = IntPoly::x_pow_minus_one(n as usize);
    for d in divisors(n) {
        if d < n {
            p = p.div_exact_monic(&cyclotomic_poly(d));
        }
    }
    let p = Arc::new(p);
    cache().lock().expect("cache poisoned").insert(n, Arc::clone(&p));
    p
}

/// Finite rational combination of `N`-th roots of unity.
#[derive(Clone, PartialEq, Eq)]
pub struct CycloSum {
    order: u64,
    terms: BTreeMap<u64, BigRational>,
}

impl CycloSum {
    pub fn zero(order: u64) -> Self {
        assert!(order >= 1, "order must be positive");
        CycloSum { order, terms: BTreeMap::new() }
    }

    /// `coeff * zeta_order^exponent`
    pub fn term(order: u64, exponent: u64, coeff: BigRational) -> Self {
        let mut s = Self::zero(order);
        s.add_term(exponent, coeff);
        s
    }

    pub fn rational(value: BigRational) -> Self {
        Self::term(1, 0, value)
    }

    /// `exp(2 pi i * e)` for a rational `e`.
    pub fn root_from_exponent(e: &BigRational) -> Self {
        Self::term_at_exponent(e, BigRational::one())
    }

    /// `coeff * exp(2 pi i * e)` for a rational `e`.
    pub fn term_at_exponent(e: &BigRational, coeff: BigRational) -> Self {
        let n = e.denom().to_u64().expect("root of unity order fits in u64");
        let r = e.numer().mod_floor(e.denom()).to_u64().expect("residue fits in u64");
        Self::term(n, r, coeff)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<u64, BigRational> {
        &self.terms
    }

    /// Adds `coeff * zeta^exponent` in place.
    pub fn add_term(&mut self, exponent: u64, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let r = exponent % self.order;
        let entry = self.terms.entry(r).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&r);
        }
    }

    /// Re-expresses the sum over a multiple of its order.
    pub fn lift(&self, order: u64) -> CycloSum {
        assert!(order.is_multiple_of(self.order), "lift target must be a multiple of the order");
        let k = order / self.order;
        CycloSum {
            order,
            terms: self.terms.iter().map(|(r, c)| (r * k, c.clone())).collect(),
        }
    }

    pub fn add(&self, other: &CycloSum) -> CycloSum {
        let n = self.order.lcm(&other.order);
        let mut out = self.lift(n);
        for (r, c) in other.lift(n).terms {
            out.add_term(r, c);
        }
        out
    }

    pub fn scale(&self, k: &BigRational) -> CycloSum {
        if k.is_zero() {
            return Self::zero(self.order);
        }
        CycloSum {
            order: self.order,
            terms: self.terms.iter().map(|(r, c)| (*r, c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &CycloSum) -> CycloSum {
        let n = self.order.lcm(&other.order);
        let (a, b) = (self.lift(n), other.lift(n));
        let mut out = Self::zero(n);
        for (ra, ca) in &a.terms {
            for (rb, cb) in &b.terms {
                out.add_term((ra + rb) % n, ca * cb);
            }
        }
        out
    }

    /// Coefficients of the unique representative of degree below `phi(N)`
    /// in `Q[x] / Phi_N`, scaled by the common denominator `den`.
    fn reduced_integer(&self) -> (Vec<BigInt>, BigInt) {
        let den = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut coeffs = vec![BigInt::zero(); self.order as usize];
        for (r, c) in &self.terms {
            coeffs[*r as usize] = c.numer() * (&den / c.denom());
        }
        let phi = cyclotomic_poly(self.order);
        let (_, rem) = IntPoly::new(coeffs).div_rem_monic(&phi);
        (rem.0, den)
    }

    /// Exact zero test by reduction modulo the cyclotomic polynomial.
    pub fn is_zero(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        self.reduced_integer().0.is_empty()
    }

    /// The value as a rational number, if it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        let (rem, den) = self.reduced_integer();
        match rem.len() {
            0 => Some(BigRational::zero()),
            1 => Some(BigRational::new(rem[0].clone(), den)),
            _ => None,
        }
    }

    pub fn equals(&self, other: &CycloSum) -> bool {
        self.add(&other.scale(&-BigRational::one())).is_zero()
    }

    /// Double-precision value, for display only.
    pub fn approx(&self) -> (f64, f64) {
        let n = self.order as f64;
        self.terms.iter().fold((0.0, 0.0), |(re, im), (r, c)| {
            let w = c.to_f64().unwrap_or(f64::NAN);
            let a = std::f64::consts::TAU * (*r as f64) / n;
            (re + w * a.cos(), im + w * a.sin())
        })
    }
}

/// Free-function form of [`CycloSum::is_zero`].
pub fn cyclo_is_zero(s: &CycloSum) -> bool {
    s.is_zero()
}

impl fmt::Debug for CycloSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for CycloSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(r, c)| if *r == 0 { format!("{c}") } else { format!("({c})z{}^{r}", self.order) })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(*cyclotomic_poly(1), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(*cyclotomic_poly(2), IntPoly::from_i64(&[1, 1]));
        assert_eq!(*cyclotomic_poly(12), IntPoly::from_i64(&[1, 0, -1, 0, 1]));
        assert_eq!(*cyclotomic_poly(5), IntPoly::from_i64(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn zero_test_examples() {
        let mut s = CycloSum::zero(2);
        s.add_term(0, q(1, 1));
        s.add_term(1, q(1, 1));
        assert!(s.is_zero());

        let mut orbit = CycloSum::zero(5);
        for k in 0..5 {
            orbit.add_term(k, q(1, 1));
        }
        assert!(orbit.is_zero());

        let mut quarter = CycloSum::zero(2);
        quarter.add_term(0, q(1, 4));
        quarter.add_term(1, q(1, 4));
        assert!(quarter.is_zero());

        assert!(!CycloSum::term(3, 1, q(1, 2)).is_zero());
        // 1 + i is not zero
        let mut s = CycloSum::zero(4);
        s.add_term(0, q(1, 1));
        s.add_term(1, q(1, 1));
        assert!(!s.is_zero());
    }

    #[test]
    fn arithmetic_across_orders() {
        // zeta_4^2 == zeta_2 == -1
        let a = CycloSum::term(4, 2, q(1, 1));
        let b = CycloSum::term(2, 1, q(1, 1));
        assert!(a.equals(&b));
        assert_eq!(a.as_rational(), Some(q(-1, 1)));
        // zeta_3 * zeta_6^4 = zeta_6^6 = 1
        let p = CycloSum::term(3, 1, q(1, 1)).mul(&CycloSum::term(6, 4, q(1, 1)));
        assert_eq!(p.as_rational(), Some(q(1, 1)));
        assert_eq!(CycloSum::term(5, 1, q(1, 1)).as_rational(), None);
    }

    #[test]
    fn exponent_constructor_reduces() {
        let s = CycloSum::root_from_exponent(&q(-3, 4));
        assert_eq!(s, CycloSum::term(4, 1, q(1, 1)));
    }

    #[test]
    fn division_round_trip() {
        let a = IntPoly::from_i64(&[3, -1, 4, 1, -5]);
        let b = IntPoly::from_i64(&[2, 0, 1]);
        let (qt, r) = a.mul(&b).div_rem_monic(&b);
        assert_eq!(qt, a);
        assert!(r.is_zero());
    }
}
