//! Tiling instances and everything that inspects them.
//!
//! A [`TilingInstance`] is an ordered family of distinct lattice translates
//! in a common dimension. Whether it actually tiles `Z^d` is decided by the
//! routines in [`verify`]; [`theorems`] evaluates necessary conditions that
//! every tiling must satisfy, and [`split`] finds and performs coarsenings.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeTranslate};

pub mod split;
pub mod theorems;
pub mod verify;

pub use split::{coset_refinement, find_split, split_translate, Split, SPLIT_SUBSET_BUDGET};
pub use theorems::{check_theorems, CheckOutcome, TheoremReport};
pub use verify::{
    character_sum, dual_union, is_tiling_box_oracle, is_tiling_box_oracle_capped, is_tiling_fast,
    verify_character_formula, Method, VerificationReport,
    Witness,
};

/// Default cap on the number of points a period box may contain.
pub const DEFAULT_BOX_CAP: u64 = 1 << 24;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TilingInstance {
    dim: usize,
    translates: Vec<LatticeTranslate>,
}

impl TilingInstance {
    /// Rejects empty families, mixed dimensions and repeated translates.
    pub fn new(translates: Vec<LatticeTranslate>) -> Result<Self> {
        let dim = translates.first().ok_or(Error::EmptyInstance)?.dim();
        for t in &translates {
            if t.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: t.dim() });
            }
        }
        for i in 0..translates.len() {
            for j in i + 1..translates.len() {
                if translates[i] == translates[j] {
                    return Err(Error::DuplicateTranslate { first: i, second: j });
                }
            }
        }
        Ok(TilingInstance { dim, translates })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn translates(&self) -> &[LatticeTranslate] {
        &self.translates
    }

    pub fn len(&self) -> usize {
        self.translates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.translates.is_empty()
    }

    /// Same family, ordered by (determinant, canonical basis, offset).
    pub fn sorted(&self) -> TilingInstance {
        let mut translates = self.translates.clone();
        translates.sort();
        TilingInstance { dim: self.dim, translates }
    }

    pub fn determinants(&self) -> Vec<BigInt> {
        self.translates.iter().map(|t| t.lattice().determinant().clone()).collect()
    }
}

impl fmt::Debug for TilingInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.translates).finish()
    }
}

/// Cosets `a` and `b` meet iff `v_b - v_a` lies in `L_a + L_b`.
pub fn cosets_disjoint(a: &LatticeTranslate, b: &LatticeTranslate) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    let sum = a.lattice().sum(b.lattice())?;
    let diff: Vec<BigInt> = b.offset().iter().zip(a.offset()).map(|(x, y)| x - y).collect();
    Ok(!sum.contains(&diff)?)
}

/// `sum_i 1 / det L_i`
pub fn density_sum(t: &TilingInstance) -> BigRational {
    t.translates
        .iter()
        .map(|x| BigRational::new(BigInt::one(), x.lattice().determinant().clone()))
        .sum()
}

/// All pairs `(i, j)`, `i < j`, whose translates share the same lattice.
pub fn translation_pairs(t: &TilingInstance) -> Vec<(usize, usize)> {
    let n = t.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if t.translates[i].lattice() == t.translates[j].lattice() {
                out.push((i, j));
            }
        }
    }
    out
}

/// Axis-aligned box `prod_k [0, P_k)` that is a period of every coset involved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodBox {
    periods: Vec<u64>,
    volume: u64,
}

impl PeriodBox {
    /// Coordinatewise lcm of the polar values of `lattices`.
    pub fn for_lattices<'a>(
        dim: usize,
        lattices: impl IntoIterator<Item = &'a Lattice>,
        cap: u64,
    ) -> Result<Self> {
        let mut periods = vec![BigInt::one(); dim];
        for l in lattices {
            for (p, t) in periods.iter_mut().zip(l.polar_values()) {
                *p = p.lcm(t);
            }
        }
        let volume: BigInt = periods.iter().product();
        let too_large = || Error::BoxTooLarge { volume: volume.to_u128().unwrap_or(u128::MAX), cap };
        if volume > BigInt::from(cap) {
            return Err(too_large());
        }
        let periods: Vec<u64> = periods.iter().map(|p| p.to_u64().expect("bounded by cap")).collect();
        Ok(PeriodBox { volume: periods.iter().product(), periods })
    }

    pub fn from_periods(periods: Vec<u64>) -> Self {
        PeriodBox { volume: periods.iter().product(), periods }
    }

    pub fn periods(&self) -> &[u64] {
        &self.periods
    }

    pub fn volume(&self) -> u64 {
        self.volume
    }

    pub fn index_of(&self, p: &[i64]) -> usize {
        p.iter().zip(&self.periods).fold(0usize, |acc, (&x, &m)| acc * m as usize + x as usize)
    }

    pub fn point_of(&self, mut idx: usize) -> Vec<i64> {
        let mut p = vec![0i64; self.periods.len()];
        for k in (0..self.periods.len()).rev() {
            let m = self.periods[k] as usize;
            p[k] = (idx % m) as i64;
            idx /= m;
        }
        p
    }

    /// Calls `f` with the box index of every point of `t` inside the box.
    /// Every period must be a multiple of the matching polar value of `t`.
    pub fn for_each_point(&self, t: &LatticeTranslate, mut f: impl FnMut(usize)) -> Result<()> {
        let h = t.lattice().basis_i64()?;
        let off: Vec<i64> = t
            .offset()
            .iter()
            .map(|x| x.to_i64().ok_or_else(|| Error::Overflow(x.to_string())))
            .collect::<Result<_>>()?;
        let d = self.periods.len();
        let mut coeffs = vec![0i64; d];
        self.walk(&h, &off, 0, 0, &mut coeffs, &mut f);
        Ok(())
    }

    fn walk(
        &self,
        h: &[Vec<i64>],
        off: &[i64],
        k: usize,
        idx: usize,
        coeffs: &mut [i64],
        f: &mut impl FnMut(usize),
    ) {
        let d = self.periods.len();
        if k == d {
            f(idx);
            return;
        }
        let step = h[k][k];
        let base: i64 = off[k] + (0..k).map(|j| h[k][j] * coeffs[j]).sum::<i64>();
        let m = self.periods[k] as i64;
        let mut x = base.rem_euclid(step);
        while x < m {
            coeffs[k] = (x - base) / step;
            self.walk(h, off, k + 1, idx * m as usize + x as usize, coeffs, f);
            x += step;
        }
    }
}

/// Expresses `t`, which must lie inside the coset `base + frame`, in the
/// coordinates given by the canonical basis of `frame`.
pub(crate) fn to_local(
    frame: &Lattice,
    base: &[BigInt],
    t: &LatticeTranslate,
) -> Result<Option<LatticeTranslate>> {
    let h = frame.basis();
    let inv = crate::linalg::rational_inverse(h)?;
    let map = |v: &[BigInt]| -> Option<Vec<BigInt>> {
        let out: Vec<BigRational> = inv
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, x)| a * BigRational::from_integer(x.clone())).sum())
            .collect();
        out.iter().all(|x| x.is_integer()).then(|| out.iter().map(|x| x.to_integer()).collect())
    };
    let mut gens = Vec::with_capacity(frame.dim());
    for c in t.lattice().basis().columns() {
        match map(&c) {
            Some(g) => gens.push(g),
            None => return Ok(None),
        }
    }
    let shift: Vec<BigInt> = t.offset().iter().zip(base).map(|(a, b)| a - b).collect();
    let Some(local_offset) = map(&shift) else { return Ok(None) };
    let l = Lattice::from_generators(frame.dim(), &gens)?;
    Ok(Some(LatticeTranslate::new(l, &local_offset)?))
}

/// Inverse of [`to_local`].
pub(crate) fn from_local(
    frame: &Lattice,
    base: &[BigInt],
    t: &LatticeTranslate,
) -> Result<LatticeTranslate> {
    let h = frame.basis();
    let gens: Vec<Vec<BigInt>> =
        t.lattice().basis().columns().iter().map(|c| h.apply(c)).collect::<Result<_>>()?;
    let l = Lattice::from_generators(frame.dim(), &gens)?;
    let off: Vec<BigInt> = h.apply(t.offset())?.iter().zip(base).map(|(a, b)| a + b).collect();
    LatticeTranslate::new(l, &off)
}
