//! Full-rank sublattices of `Z^d` and their translates.
//!
//! A [`Lattice`] always carries its basis in the canonical lower-triangular
//! Hermite form, so two lattices are equal exactly when their bases are.
//! Derived data (polar values, Smith decomposition) is computed on first use
//! and cached.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix, SmithDecomposition};

#[derive(Clone)]
pub struct Lattice {
    basis: IntMatrix,
    determinant: BigInt,
    polar: OnceLock<Vec<BigInt>>,
    smith: OnceLock<SmithDecomposition>,
}

impl Lattice {
    /// Canonical lattice spanned by `generators` (each of length `dim`).
    pub fn from_generators(dim: usize, generators: &[Vec<BigInt>]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if let Some(bad) = generators.iter().find(|g| g.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: bad.len() });
        }
        if generators.len() < dim {
            return Err(Error::RankDeficient { dim });
        }
        let m = IntMatrix::from_columns(generators)?;
        Self::from_hnf_unchecked(linalg::hermite_normal_form(&m)?)
    }

    pub fn from_generators_i64(dim: usize, generators: &[Vec<i64>]) -> Result<Self> {
        let gens: Vec<Vec<BigInt>> =
            generators.iter().map(|g| g.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_generators(dim, &gens)
    }

    /// Lattice whose basis vectors are the columns of `m`.
    pub fn from_basis_matrix(m: &IntMatrix) -> Result<Self> {
        Self::from_hnf_unchecked(linalg::hermite_normal_form(m)?)
    }

    fn from_hnf_unchecked(basis: IntMatrix) -> Result<Self> {
        let determinant = linalg::det(&basis)?.abs();
        Ok(Lattice { basis, determinant, polar: OnceLock::new(), smith: OnceLock::new() })
    }

    /// `Z^d` itself.
    pub fn integer_lattice(dim: usize) -> Self {
        Self::diagonal(&vec![1; dim])
    }

    /// `s_1 Z x ... x s_d Z`; every scale must be positive.
    pub fn diagonal(scales: &[i64]) -> Self {
        assert!(!scales.is_empty() && scales.iter().all(|&s| s > 0), "scales must be positive");
        let d = scales.len();
        let mut m = IntMatrix::zeros(d, d);
        for (i, &s) in scales.iter().enumerate() {
            m.set(i, i, BigInt::from(s));
        }
        Self::from_hnf_unchecked(m).expect("diagonal matrix is nonsingular")
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Canonical basis; columns are the basis vectors.
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn determinant(&self) -> &BigInt {
        &self.determinant
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got });
        }
        Ok(())
    }

    pub fn contains(&self, v: &[BigInt]) -> Result<bool> {
        self.check_dim(v.len())?;
        let d = self.dim();
        let mut r = v.to_vec();
        for k in 0..d {
            let diag = self.basis.get(k, k);
            let (q, rem) = r[k].div_rem(diag);
            if !rem.is_zero() {
                return Ok(false);
            }
            if !q.is_zero() {
                for (i, ri) in r.iter_mut().enumerate().skip(k) {
                    *ri -= &q * self.basis.get(i, k);
                }
            }
        }
        Ok(true)
    }

    /// Canonical coset representative: `0 <= r_k < h[k][k]` for every `k`.
    pub fn reduce(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        self.check_dim(v.len())?;
        let d = self.dim();
        let mut r = v.to_vec();
        for k in 0..d {
            let q = r[k].div_floor(self.basis.get(k, k));
            if !q.is_zero() {
                for (i, ri) in r.iter_mut().enumerate().skip(k) {
                    *ri -= &q * self.basis.get(i, k);
                }
            }
        }
        Ok(r)
    }

    /// `t_j = min { t > 0 : t e_j in L }` for every coordinate `j`.
    pub fn polar_values(&self) -> &[BigInt] {
        self.polar.get_or_init(|| {
            let d = self.dim();
            (0..d)
                .map(|j| {
                    let mut e = vec![BigInt::zero(); d];
                    e[j] = BigInt::one();
                    linalg::solve_lower_triangular(&self.basis, &e)
                        .iter()
                        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
                })
                .collect()
        })
    }

    pub fn smith(&self) -> &SmithDecomposition {
        self.smith.get_or_init(|| {
            linalg::smith_normal_form(&self.basis).expect("lattice basis is nonsingular")
        })
    }

    /// Invariant factors of `Z^d / L`, increasing under divisibility.
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.smith().diag
    }

    /// Maximal element order of the dual group (the largest invariant factor).
    pub fn exponent(&self) -> &BigInt {
        self.invariant_factors().last().expect("dimension is positive")
    }

    /// Determinant divided by the maximal element order of the dual group.
    pub fn multiplicity(&self) -> BigInt {
        &self.determinant / self.exponent()
    }

    /// gcd of the basis entries; agrees with [`Lattice::multiplicity`] in
    /// dimension 2.
    pub fn entry_gcd(&self) -> BigInt {
        linalg::content(&self.basis)
    }

    pub fn is_cyclic(&self) -> bool {
        let by_smith = self.cyclic_by_smith();
        debug_assert_eq!(by_smith, self.cyclic_by_adjugate(), "cyclicity tests disagree for {self}");
        by_smith
    }

    /// All invariant factors except the largest equal one.
    pub fn cyclic_by_smith(&self) -> bool {
        let f = self.invariant_factors();
        f[..f.len() - 1].iter().all(One::is_one)
    }

    /// gcd of the cofactor entries of the basis equals one.
    pub fn cyclic_by_adjugate(&self) -> bool {
        let adj = linalg::adjugate(&self.basis).expect("basis is square");
        linalg::content(&adj).is_one()
    }

    /// Smallest lattice containing both.
    pub fn sum(&self, other: &Lattice) -> Result<Lattice> {
        self.check_dim(other.dim())?;
        let mut cols = self.basis.columns();
        cols.extend(other.basis.columns());
        Lattice::from_generators(self.dim(), &cols)
    }

    /// Lattice generated by `self` together with extra vectors.
    pub fn extend(&self, vectors: &[Vec<BigInt>]) -> Result<Lattice> {
        let mut cols = self.basis.columns();
        for v in vectors {
            self.check_dim(v.len())?;
            cols.push(v.clone());
        }
        Lattice::from_generators(self.dim(), &cols)
    }

    /// Largest lattice contained in both, computed through dual lattices:
    /// `(A ∩ B)* = A* + B*`.
    pub fn intersection(&self, other: &Lattice) -> Result<Lattice> {
        self.check_dim(other.dim())?;
        let m = self.determinant.lcm(&other.determinant);
        // m * L* is integral with basis (m / det) * cofactor(basis).
        let scaled_dual = |l: &Lattice| -> Result<Vec<Vec<BigInt>>> {
            let adj = linalg::adjugate(&l.basis)?;
            let k = &m / &l.determinant;
            Ok(adj.columns().into_iter().map(|c| c.into_iter().map(|x| x * &k).collect()).collect())
        };
        let mut gens = scaled_dual(self)?;
        gens.extend(scaled_dual(other)?);
        let dual_sum = Lattice::from_generators(self.dim(), &gens)?;
        // A ∩ B = (K / m)* with basis m * K^{-T} = (m / det K) * cofactor(K).
        let adj = linalg::adjugate(&dual_sum.basis)?;
        let cols: Vec<Vec<BigInt>> = adj
            .columns()
            .into_iter()
            .map(|c| {
                c.into_iter()
                    .map(|x| {
                        let num = x * &m;
                        debug_assert!(num.is_multiple_of(&dual_sum.determinant));
                        num / &dual_sum.determinant
                    })
                    .collect()
            })
            .collect();
        Lattice::from_generators(self.dim(), &cols)
    }

    pub fn is_sublattice_of(&self, other: &Lattice) -> Result<bool> {
        self.check_dim(other.dim())?;
        for c in self.basis.columns() {
            if !other.contains(&c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Basis entries as machine words, for box enumeration.
    pub(crate) fn basis_i64(&self) -> Result<Vec<Vec<i64>>> {
        let d = self.dim();
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let x = self.basis.get(i, j);
                        x.to_i64().ok_or_else(|| Error::Overflow(x.to_string()))
                    })
                    .collect()
            })
            .collect()
    }

    pub(crate) fn determinant_u64(&self) -> Result<u64> {
        self.determinant.to_u64().ok_or_else(|| Error::Overflow(self.determinant.to_string()))
    }

    pub(crate) fn polar_values_u64(&self) -> Result<Vec<u64>> {
        self.polar_values()
            .iter()
            .map(|t| t.to_u64().ok_or_else(|| Error::Overflow(t.to_string())))
            .collect()
    }
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
    }
}

impl Eq for Lattice {}

impl Hash for Lattice {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.basis.hash(state);
    }
}

impl PartialOrd for Lattice {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by determinant, then canonical basis.
impl Ord for Lattice {
    fn cmp(&self, other: &Self) -> Ordering {
        self.determinant
            .cmp(&other.determinant)
            .then_with(|| self.basis.cmp(&other.basis))
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice{}", self)
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (j, c) in self.basis.columns().iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", fmt_vec(c))?;
        }
        write!(f, ">")
    }
}

pub fn fmt_vec(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

/// `offset + L`, with the offset stored in canonical reduced form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeTranslate {
    lattice: Lattice,
    offset: Vec<BigInt>,
}

impl LatticeTranslate {
    pub fn new(lattice: Lattice, offset: &[BigInt]) -> Result<Self> {
        let offset = lattice.reduce(offset)?;
        Ok(LatticeTranslate { lattice, offset })
    }

    pub fn from_i64(lattice: Lattice, offset: &[i64]) -> Result<Self> {
        let v: Vec<BigInt> = offset.iter().map(|&x| BigInt::from(x)).collect();
        Self::new(lattice, &v)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn offset(&self) -> &[BigInt] {
        &self.offset
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn contains(&self, p: &[BigInt]) -> Result<bool> {
        self.lattice.check_dim(p.len())?;
        let diff: Vec<BigInt> = p.iter().zip(&self.offset).map(|(a, b)| a - b).collect();
        self.lattice.contains(&diff)
    }
}

impl PartialOrd for LatticeTranslate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by (determinant, canonical basis, offset).
impl Ord for LatticeTranslate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lattice.cmp(&other.lattice).then_with(|| self.offset.cmp(&other.offset))
    }
}

impl fmt::Debug for LatticeTranslate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}", fmt_vec(&self.offset), self.lattice)
    }
}

impl fmt::Display for LatticeTranslate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Free-function form of [`Lattice::from_generators`].
pub fn lattice_from_generators(dim: usize, generators: &[Vec<BigInt>]) -> Result<Lattice> {
    Lattice::from_generators(dim, generators)
}

pub fn translate(l: &Lattice, v: &[BigInt]) -> Result<LatticeTranslate> {
    LatticeTranslate::new(l.clone(), v)
}

pub(crate) fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
