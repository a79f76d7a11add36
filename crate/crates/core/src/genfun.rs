//! Generating functions of lattice translates.
//!
//! The generating function of `v + L` over the non-negative orthant is
//! `R^v(z) / prod_k (1 - z_k^{t_k})`, where `t` are the polar values of `L`
//! and `R^v` is the monomial sum over `(v + L)` inside the box
//! `S = prod_k [0, t_k)`. A family tiles `Z^d` iff these add up to
//! `1 / prod_k (1 - z_k)`; [`verify_fund_identity`] decides that identity
//! by evaluation on the root grid and [`verify_fund_identity_symbolic`] by
//! clearing denominators.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::characters::{char_eval, is_dual_point, DualPoint};
use crate::cyclo::{cyclotomic_poly, divisors, CycloSum, IntPoly};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeTranslate};
use crate::tiling::{PeriodBox, TilingInstance};

/// Sparse integer polynomial in `dim` variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticePolynomial {
    dim: usize,
    terms: BTreeMap<Vec<u64>, BigInt>,
}

impl LatticePolynomial {
    pub fn zero(dim: usize) -> Self {
        LatticePolynomial { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(vec![0; dim], BigInt::one());
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u64>, BigInt> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exponent: Vec<u64>, coeff: BigInt) {
        assert_eq!(exponent.len(), self.dim, "exponent arity");
        let c = self.terms.entry(exponent).or_insert_with(BigInt::zero);
        *c += coeff;
        if c.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn add(&self, other: &LatticePolynomial) -> LatticePolynomial {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LatticePolynomial) -> LatticePolynomial {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    /// Degree in variable `k`; `None` for the zero polynomial.
    pub fn degree_in(&self, k: usize) -> Option<u64> {
        self.terms.keys().map(|e| e[k]).max()
    }

    /// Product with a polynomial in the single variable `k`.
    pub fn mul_univariate(&self, k: usize, p: &IntPoly) -> LatticePolynomial {
        let mut acc: BTreeMap<Vec<u64>, BigInt> = BTreeMap::new();
        for (e, c) in &self.terms {
            for (i, a) in p.coeffs().iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let mut f = e.clone();
                f[k] += i as u64;
                *acc.entry(f).or_insert_with(BigInt::zero) += c * a;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        LatticePolynomial { dim: self.dim, terms: acc }
    }

    /// Exact value at a torus point of finite order.
    pub fn eval(&self, z: &DualPoint) -> Result<CycloSum> {
        let mut acc = CycloSum::zero(1);
        for (e, c) in &self.terms {
            let w: Vec<BigInt> = e.iter().map(|&x| BigInt::from(x)).collect();
            acc = acc.add(&CycloSum::term_at_exponent(&char_eval(z, &w)?, BigRational::from_integer(c.clone())));
        }
        Ok(acc)
    }
}

fn var_names(dim: usize) -> Vec<String> {
    if dim <= 3 {
        ["x", "y", "z"][..dim].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=dim).map(|i| format!("x{i}")).collect()
    }
}

fn monomial(names: &[String], e: &[u64]) -> String {
    let parts: Vec<String> = e
        .iter()
        .zip(names)
        .filter(|(&k, _)| k > 0)
        .map(|(&k, n)| if k == 1 { n.clone() } else { format!("{n}^{k}") })
        .collect();
    parts.join("*")
}

impl fmt::Display for LatticePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let names = var_names(self.dim);
        let mut first = true;
        for (e, c) in &self.terms {
            let m = monomial(&names, e);
            let a = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match (m.is_empty(), a.is_one()) {
                (true, _) => write!(f, "{a}")?,
                (false, true) => f.write_str(&m)?,
                (false, false) => write!(f, "{a}*{m}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LatticePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `R^v`: one monomial per point of `v + L` in the polar box.
pub fn numerator(t: &LatticeTranslate) -> Result<LatticePolynomial> {
    let exps = numerator_exponents(t)?;
    let mut p = LatticePolynomial::zero(t.dim());
    for e in exps {
        p.add_term(e, BigInt::one());
    }
    Ok(p)
}

/// `R` of the lattice itself.
pub fn lattice_numerator(l: &Lattice) -> Result<LatticePolynomial> {
    numerator(&LatticeTranslate::new(l.clone(), &vec![BigInt::zero(); l.dim()])?)
}

fn numerator_exponents(t: &LatticeTranslate) -> Result<Vec<Vec<u64>>> {
    let bx = PeriodBox::from_periods(t.lattice().polar_values_u64()?);
    let mut out = Vec::new();
    bx.for_each_point(t, |i| out.push(bx.point_of(i).iter().map(|&x| x as u64).collect()))?;
    Ok(out)
}

fn check_polar_roots(l: &Lattice, z: &DualPoint) -> Result<()> {
    if z.dim() != l.dim() {
        return Err(Error::DimensionMismatch { expected: l.dim(), got: z.dim() });
    }
    for (a, t) in z.exponents().iter().zip(l.polar_values()) {
        if !(a * BigRational::from_integer(t.clone())).is_integer() {
            return Err(Error::Precondition(format!("{z} is not a root point for polar values")));
        }
    }
    Ok(())
}

/// `R^v(z) = chi_z(v) R(z)` for `z` with `z_k^{t_k} = 1`.
pub fn translate_numerator_identity_check(t: &LatticeTranslate, z: &DualPoint) -> Result<bool> {
    check_polar_roots(t.lattice(), z)?;
    let lhs = numerator(t)?.eval(z)?;
    let r = lattice_numerator(t.lattice())?.eval(z)?;
    let rhs = CycloSum::root_from_exponent(&char_eval(z, t.offset())?).mul(&r);
    Ok(lhs.equals(&rhs))
}

/// `R(z)` is `t_1...t_d / det L` at dual points and zero at the other root points.
pub fn r_vanishing_check(l: &Lattice, z: &DualPoint) -> Result<bool> {
    check_polar_roots(l, z)?;
    let r = lattice_numerator(l)?.eval(z)?;
    if is_dual_point(l, z)? {
        let count: BigInt = l.polar_values().iter().product::<BigInt>() / l.determinant();
        Ok(r.as_rational() == Some(BigRational::from_integer(count)))
    } else {
        Ok(r.is_zero())
    }
}

/// Per-coordinate lcm of the polar values of all members.
fn coordinate_periods(t: &TilingInstance) -> Result<Vec<Vec<u64>>> {
    t.translates().iter().map(|x| x.lattice().polar_values_u64()).collect()
}

/// Evaluation route: the cleared numerator has degree below `deg Q_k` in every
/// variable and `Q_k` is square free, so it vanishes iff it vanishes on the
/// grid of roots of `Q_1, ..., Q_d`. At a grid point `u` only members with
/// `u_k^{t_k} = 1` for all `k` survive, each contributing
/// `R_j(u) / prod_k t_{jk}`; the total must be `[u = 1]`.
pub fn verify_fund_identity(t: &TilingInstance) -> Result<bool> {
    let d = t.dim();
    let polar = coordinate_periods(t)?;
    let periods: Vec<u64> = (0..d).map(|k| polar.iter().fold(1u64, |a, p| a.lcm(&p[k]))).collect();
    let numerators: Vec<Vec<Vec<u64>>> =
        t.translates().iter().map(numerator_exponents).collect::<Result<_>>()?;
    let overflow = || Error::Overflow("fundamental identity weights".into());
    let prods: Vec<i128> = polar.iter().map(|p| p.iter().map(|&x| x as i128).product()).collect();
    let denom = prods.iter().try_fold(1i128, |a, &p| {
        let g = a.gcd(&p);
        (a / g).checked_mul(p)
    });
    let denom = denom.ok_or_else(overflow)?;
    let weights: Vec<i128> = prods.iter().map(|p| denom / p).collect();
    let big_n = periods.iter().fold(1u64, |a, p| a.lcm(p));
    let scale: Vec<u64> = periods.iter().map(|p| big_n / p).collect();

    // exponents b_k in [0, P_k) whose root is a root of Q_k
    let roots: Vec<Vec<u64>> = (0..d)
        .map(|k| {
            (0..periods[k])
                .filter(|&b| polar.iter().any(|p| (b * p[k]) % periods[k] == 0))
                .collect()
        })
        .collect();
    let mut pos = vec![0usize; d];
    let mut acc = vec![0i128; big_n as usize];
    loop {
        let b: Vec<u64> = (0..d).map(|k| roots[k][pos[k]]).collect();
        acc.iter_mut().for_each(|c| *c = 0);
        for (j, p) in polar.iter().enumerate() {
            if (0..d).any(|k| !(b[k] * p[k]).is_multiple_of(periods[k])) {
                continue;
            }
            for w in &numerators[j] {
                let e = (0..d).fold(0u64, |s, k| (s + b[k] * scale[k] % big_n * w[k]) % big_n);
                acc[e as usize] += weights[j];
            }
        }
        if b.iter().all(|&x| x == 0) {
            acc[0] -= denom;
        }
        let order = (0..d).fold(1u64, |a, k| a.lcm(&(periods[k] / periods[k].gcd(&b[k]))));
        if !vanishes_at_primitive_root(&acc, big_n, order).ok_or_else(overflow)? {
            return Ok(false);
        }
        let mut k = 0;
        loop {
            if k == d {
                return Ok(true);
            }
            pos[k] += 1;
            if pos[k] < roots[k].len() {
                break;
            }
            pos[k] = 0;
            k += 1;
        }
    }
}

/// Whether `sum_e c_e zeta_n^e = 0`, all exponents being multiples of `n / order`.
fn vanishes_at_primitive_root(c: &[i128], n: u64, order: u64) -> Option<bool> {
    let step = (n / order) as usize;
    let mut r: Vec<i128> = (0..order as usize).map(|i| c[i * step]).collect();
    debug_assert!(c.iter().enumerate().all(|(i, &x)| i % step == 0 || x == 0));
    let phi = cyclotomic_poly(order);
    let phi: Vec<i128> = phi.coeffs().iter().map(|x| x.to_i128()).collect::<Option<_>>()?;
    let deg = phi.len() - 1;
    for i in (deg..r.len()).rev() {
        let q = r[i];
        if q == 0 {
            continue;
        }
        for (j, a) in phi.iter().enumerate() {
            let idx = i - deg + j;
            r[idx] = r[idx].checked_sub(q.checked_mul(*a)?)?;
        }
    }
    Some(r[..deg].iter().all(|&x| x == 0))
}

/// `Q_k / (x^t - 1)` as a product of cyclotomic factors.
fn cofactor(orders: &BTreeSet<u64>, t: u64) -> IntPoly {
    let skip: BTreeSet<u64> = divisors(t).into_iter().collect();
    orders.iter().filter(|d| !skip.contains(d)).fold(IntPoly::one(), |p, &d| p.mul(&cyclotomic_poly(d)))
}

/// The numerator obtained by multiplying the difference of both sides of the
/// identity by `prod_k Q_k`, `Q_k = lcm_j (x_k^{t_{jk}} - 1)`. The common sign
/// `(-1)^d` from writing `1 - x^t = -(x^t - 1)` is dropped.
pub fn cleared_numerator(t: &TilingInstance) -> Result<LatticePolynomial> {
    let d = t.dim();
    let polar = coordinate_periods(t)?;
    let orders: Vec<BTreeSet<u64>> = (0..d)
        .map(|k| polar.iter().flat_map(|p| divisors(p[k])).collect())
        .collect();
    let mut cache: HashMap<(usize, u64), IntPoly> = HashMap::new();
    let mut factor = |k: usize, t: u64| cache.entry((k, t)).or_insert_with(|| cofactor(&orders[k], t)).clone();
    let mut total = LatticePolynomial::zero(d);
    for (tr, p) in t.translates().iter().zip(&polar) {
        let mut term = numerator(tr)?;
        for k in 0..d {
            term = term.mul_univariate(k, &factor(k, p[k]));
        }
        total = total.add(&term);
    }
    let mut rhs = LatticePolynomial::one(d);
    for k in 0..d {
        rhs = rhs.mul_univariate(k, &factor(k, 1));
    }
    Ok(total.sub(&rhs))
}

/// Symbolic route: the cleared numerator is identically zero.
pub fn verify_fund_identity_symbolic(t: &TilingInstance) -> Result<bool> {
    Ok(cleared_numerator(t)?.is_zero())
}

fn denominator_string(names: &[String], t: &[u64]) -> String {
    let parts: Vec<String> = t
        .iter()
        .zip(names)
        .map(|(&k, n)| if k == 1 { format!("(1 - {n})") } else { format!("(1 - {n}^{k})") })
        .collect();
    parts.join("*")
}

/// `R^v(z) / prod_k (1 - z_k^{t_k})` as text.
pub fn theta_string(t: &LatticeTranslate) -> Result<String> {
    let names = var_names(t.dim());
    Ok(format!(
        "({}) / ({})",
        numerator(t)?,
        denominator_string(&names, &t.lattice().polar_values_u64()?)
    ))
}

/// The tiling identity written out, one generating function per line.
pub fn fund_identity_dump(t: &TilingInstance) -> Result<String> {
    let names = var_names(t.dim());
    let mut out = String::new();
    for (i, tr) in t.translates().iter().enumerate() {
        let lead = if i == 0 { "  " } else { "+ " };
        out.push_str(&format!("{lead}{}\n", theta_string(tr)?));
    }
    out.push_str(&format!("= 1 / ({})\n", denominator_string(&names, &vec![1; t.dim()])));
    Ok(out)
}
