//! Dual groups and finite-order characters.
//!
//! A torus point of finite order `z = (exp(2 pi i a_1), ..., exp(2 pi i a_d))`
//! is stored as its rational exponent vector `(a_1, ..., a_d)` reduced into
//! `[0, 1)`. The character `chi_z(v) = z_1^{v_1} ... z_d^{v_d}` is then the
//! rational `sum a_k v_k mod 1`, so all comparisons are exact.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::cyclo::CycloSum;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::linalg::{self, IntMatrix};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualPoint {
    exponents: Vec<BigRational>,
}

pub(crate) fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

impl DualPoint {
    pub fn new(exponents: Vec<BigRational>) -> Self {
        DualPoint { exponents: exponents.iter().map(frac).collect() }
    }

    /// Point with exponents `num_k / den`.
    pub fn from_fractions(nums: &[i64], den: i64) -> Self {
        Self::new(nums.iter().map(|&n| BigRational::new(n.into(), den.into())).collect())
    }

    /// Point with coordinates `+1` / `-1`.
    pub fn from_signs(signs: &[i8]) -> Self {
        Self::new(
            signs
                .iter()
                .map(|&s| if s < 0 { BigRational::new(1.into(), 2.into()) } else { BigRational::zero() })
                .collect(),
        )
    }

    pub fn identity(dim: usize) -> Self {
        DualPoint { exponents: vec![BigRational::zero(); dim] }
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[BigRational] {
        &self.exponents
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.iter().all(Zero::is_zero)
    }

    /// lcm of the exponent denominators.
    pub fn order(&self) -> BigInt {
        self.exponents.iter().fold(BigInt::one(), |acc, e| acc.lcm(e.denom()))
    }

    /// Group operation (coordinatewise product of torus points).
    pub fn add(&self, other: &DualPoint) -> DualPoint {
        DualPoint::new(self.exponents.iter().zip(&other.exponents).map(|(a, b)| a + b).collect())
    }

    /// `k`-fold power.
    pub fn power(&self, k: &BigInt) -> DualPoint {
        let k = BigRational::from_integer(k.clone());
        DualPoint::new(self.exponents.iter().map(|a| a * &k).collect())
    }

    /// `Some(signs)` when every coordinate is `+1` or `-1`.
    pub fn as_signs(&self) -> Option<Vec<i8>> {
        let half = BigRational::new(1.into(), 2.into());
        self.exponents
            .iter()
            .map(|e| {
                if e.is_zero() {
                    Some(1)
                } else if *e == half {
                    Some(-1)
                } else {
                    None
                }
            })
            .collect()
    }
}

impl fmt::Debug for DualPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for DualPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exponents.iter().map(ToString::to_string).collect();
        write!(f, "e({})", parts.join(", "))
    }
}

/// Exponent `e` with `chi_z(v) = exp(2 pi i e)`, reduced into `[0, 1)`.
pub fn char_eval(z: &DualPoint, v: &[BigInt]) -> Result<BigRational> {
    if z.dim() != v.len() {
        return Err(Error::DimensionMismatch { expected: z.dim(), got: v.len() });
    }
    let s: BigRational = z
        .exponents
        .iter()
        .zip(v)
        .map(|(a, x)| a * BigRational::from_integer(x.clone()))
        .sum();
    Ok(frac(&s))
}

pub fn is_dual_point(l: &Lattice, z: &DualPoint) -> Result<bool> {
    if z.dim() != l.dim() {
        return Err(Error::DimensionMismatch { expected: l.dim(), got: z.dim() });
    }
    for b in l.basis().columns() {
        if !char_eval(z, &b)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Free-function form of [`DualPoint::order`].
pub fn order(z: &DualPoint) -> BigInt {
    z.order()
}

/// Cyclic generators of the dual group from the Smith decomposition
/// `U1 N U2 = diag(a)`: row `i` of `U1` divided by `a_i`, paired with its order.
pub fn dual_generators(l: &Lattice) -> Vec<(DualPoint, BigInt)> {
    let s = l.smith();
    s.diag
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_one())
        .map(|(i, a)| {
            let row = s.left.row(i);
            let g = DualPoint::new(row.into_iter().map(|u| BigRational::new(u, a.clone())).collect());
            (g, a.clone())
        })
        .collect()
}

/// All `det L` dual points, sorted.
pub fn dual_group(l: &Lattice) -> Vec<DualPoint> {
    let gens = dual_generators(l);
    let mut points = vec![DualPoint::identity(l.dim())];
    for (g, a) in gens {
        let a = a.to_usize().expect("invariant factor fits in usize");
        let mut next = Vec::with_capacity(points.len() * a);
        for p in &points {
            let mut cur = p.clone();
            for _ in 0..a {
                next.push(cur.clone());
                cur = cur.add(&g);
            }
        }
        points = next;
    }
    points.sort();
    debug_assert_eq!(BigInt::from(points.len()), *l.determinant());
    points
}

/// Dual group through the cofactor parametrisation
/// `z_k = exp(2 pi i / D * sum_j l_j M_{k,j})`, `l` ranging over `[0, D)^d`.
/// Enumerates `D^d` parameter vectors; meant for cross-checks on small lattices.
pub fn dual_group_by_adjugate(l: &Lattice) -> Vec<DualPoint> {
    let d = l.dim();
    let m = linalg::adjugate(l.basis()).expect("basis is square");
    let delta = l.determinant().clone();
    let dd = delta.to_usize().expect("determinant fits in usize");
    let mut seen = BTreeSet::new();
    let mut params = vec![0usize; d];
    loop {
        let exps: Vec<BigRational> = (0..d)
            .map(|k| {
                let s: BigInt = (0..d).map(|j| m.get(k, j) * BigInt::from(params[j])).sum();
                BigRational::new(s, delta.clone())
            })
            .collect();
        seen.insert(DualPoint::new(exps));
        let mut i = 0;
        loop {
            if i == d {
                return seen.into_iter().collect();
            }
            params[i] += 1;
            if params[i] < dd {
                break;
            }
            params[i] = 0;
            i += 1;
        }
    }
}

/// The `det L` integer points of the half-open fundamental parallelepiped
/// spanned by the columns of `basis`, one per coset of the lattice.
pub fn parallelepiped_points(basis: &IntMatrix) -> Result<Vec<Vec<BigInt>>> {
    let l = Lattice::from_basis_matrix(basis)?;
    let d = l.dim();
    let inv = linalg::rational_inverse(basis)?;
    let h = l.basis();
    let diag: Vec<BigInt> = (0..d).map(|k| h.get(k, k).clone()).collect();
    let mut out = Vec::new();
    let mut rep = vec![BigInt::zero(); d];
    loop {
        // lambda = N^{-1} rep, keep the fractional part, map back.
        let fl: Vec<BigRational> = inv
            .iter()
            .map(|row| {
                let s: BigRational =
                    row.iter().zip(&rep).map(|(a, x)| a * BigRational::from_integer(x.clone())).sum();
                frac(&s)
            })
            .collect();
        let p: Vec<BigInt> = (0..d)
            .map(|i| {
                let s: BigRational =
                    (0..d).map(|j| BigRational::from_integer(basis.get(i, j).clone()) * &fl[j]).sum();
                debug_assert!(s.is_integer());
                s.to_integer()
            })
            .collect();
        out.push(p);
        let mut i = 0;
        loop {
            if i == d {
                return Ok(out);
            }
            rep[i] += 1;
            if rep[i] < diag[i] {
                break;
            }
            rep[i] = BigInt::zero();
            i += 1;
        }
    }
}

/// `sum_{v in P cap Z^d} chi_z(v)` over the fundamental parallelepiped `P`.
pub fn orthogonality_sum(l: &Lattice, z: &DualPoint) -> Result<CycloSum> {
    if !is_dual_point(l, z)? {
        return Err(Error::NotDual);
    }
    let mut acc = CycloSum::zero(1);
    for p in parallelepiped_points(l.basis())? {
        acc = acc.add(&CycloSum::root_from_exponent(&char_eval(z, &p)?));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::to_big;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn fig() -> Lattice {
        Lattice::from_generators_i64(2, &[vec![4, 1], vec![2, 3]]).unwrap()
    }

    fn checker() -> Lattice {
        Lattice::from_generators_i64(2, &[vec![2, 0], vec![0, 2], vec![1, 1]]).unwrap()
    }

    #[test]
    fn char_eval_examples() {
        let z = DualPoint::from_fractions(&[1, 1], 2);
        assert_eq!(char_eval(&z, &to_big(&[1, 1])).unwrap(), q(0, 1));
        let z = DualPoint::from_fractions(&[1, 1], 5);
        assert_eq!(char_eval(&z, &to_big(&[1, 1])).unwrap(), q(2, 5));
        let z = DualPoint::from_fractions(&[3, 7], 11);
        assert_eq!(char_eval(&z, &to_big(&[0, 0])).unwrap(), q(0, 1));
        assert!(char_eval(&z, &to_big(&[0])).is_err());
    }

    #[test]
    fn dual_group_of_trivial_and_diagonal() {
        assert_eq!(dual_group(&Lattice::integer_lattice(3)), vec![DualPoint::identity(3)]);
        let g = dual_group(&Lattice::diagonal(&[2, 2, 1]));
        let signs: BTreeSet<Vec<i8>> = g.iter().map(|z| z.as_signs().unwrap()).collect();
        let expected: BTreeSet<Vec<i8>> =
            [vec![1, 1, 1], vec![1, -1, 1], vec![-1, 1, 1], vec![-1, -1, 1]].into_iter().collect();
        assert_eq!(signs, expected);
    }

    #[test]
    fn dual_group_of_example_lattice_matches_brute_force() {
        let l = fig();
        let mut brute = Vec::new();
        for i in 0..10 {
            for j in 0..10 {
                let z = DualPoint::from_fractions(&[i, j], 10);
                if is_dual_point(&l, &z).unwrap() {
                    brute.push(z);
                }
            }
        }
        brute.sort();
        let g = dual_group(&l);
        assert_eq!(g, brute);
        assert_eq!(g.iter().map(DualPoint::order).max().unwrap(), BigInt::from(10));
        assert_eq!(dual_group_by_adjugate(&l), g);
    }

    #[test]
    fn is_dual_point_examples() {
        let l4 = Lattice::from_generators_i64(3, &[vec![2, 0, 0], vec![0, 2, 0], vec![1, 1, 1]]).unwrap();
        assert!(is_dual_point(&l4, &DualPoint::identity(3)).unwrap());
        assert!(!is_dual_point(&l4, &DualPoint::from_signs(&[-1, -1, -1])).unwrap());
        assert!(is_dual_point(&l4, &DualPoint::from_signs(&[1, -1, -1])).unwrap());
        let z = DualPoint::from_fractions(&[0, 1], 2);
        assert!(!is_dual_point(&Lattice::diagonal(&[2, 1]), &z).unwrap());
        assert!(is_dual_point(&Lattice::diagonal(&[1, 2]), &z).unwrap());
    }

    #[test]
    fn order_examples() {
        assert_eq!(DualPoint::identity(2).order(), BigInt::one());
        assert_eq!(DualPoint::from_fractions(&[1, 1], 2).order(), BigInt::from(2));
    }

    #[test]
    fn parallelepiped_points_of_example_lattice() {
        let basis = IntMatrix::from_rows(&[vec![4, 2], vec![1, 3]]).unwrap();
        let mut pts = parallelepiped_points(&basis).unwrap();
        pts.sort();
        let mut expected: Vec<Vec<BigInt>> = [
            [0, 0], [1, 1], [2, 1], [3, 1], [2, 2], [3, 2], [4, 2], [3, 3], [4, 3], [5, 3],
        ]
        .iter()
        .map(|p| to_big(p))
        .collect();
        expected.sort();
        assert_eq!(pts, expected);
    }

    #[test]
    fn orthogonality_examples() {
        let l = fig();
        let id = orthogonality_sum(&l, &DualPoint::identity(2)).unwrap();
        assert_eq!(id.as_rational(), Some(q(10, 1)));
        let z = DualPoint::from_fractions(&[1, 1], 5);
        assert!(orthogonality_sum(&l, &z).unwrap().is_zero());
        let z = DualPoint::from_fractions(&[1, 1], 2);
        assert!(orthogonality_sum(&checker(), &z).unwrap().is_zero());
        assert_eq!(
            orthogonality_sum(&checker(), &DualPoint::from_fractions(&[1, 0], 2)),
            Err(Error::NotDual)
        );
    }
}
