//! Coarsening (finding a sub-family that fills a single coset) and its inverse.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::verify::covers_box_exactly;
use super::{from_local, to_local, PeriodBox, TilingInstance, DEFAULT_BOX_CAP};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeTranslate};

/// Largest number of candidate subsets [`find_split`] will examine.
pub const SPLIT_SUBSET_BUDGET: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    /// Indices into the instance, increasing.
    pub subset: Vec<usize>,
    /// The coset filled exactly by the subset.
    pub coset: LatticeTranslate,
}

/// Smallest proper sub-family of at least two translates whose union is a
/// single lattice translate; ties broken lexicographically.
pub fn find_split(t: &TilingInstance, max_subset_size: usize) -> Result<Option<Split>> {
    let n = t.len();
    let top = max_subset_size.min(n.saturating_sub(1));
    let needed: u128 = (2..=top).map(|k| binomial(n, k)).sum();
    if needed > SPLIT_SUBSET_BUDGET as u128 {
        return Err(Error::SubsetBudget { needed, budget: SPLIT_SUBSET_BUDGET });
    }
    for k in 2..=top {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            if let Some(coset) = union_coset(t, &idx)? {
                return Ok(Some(Split { subset: idx, coset }));
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
    Ok(None)
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The coset `w + T` the members in `subset` fill exactly, if any.
fn union_coset(t: &TilingInstance, subset: &[usize]) -> Result<Option<LatticeTranslate>> {
    let members: Vec<&LatticeTranslate> = subset.iter().map(|&i| &t.translates()[i]).collect();
    let w = members[0].offset().to_vec();
    let mut gens = Vec::new();
    for m in &members {
        gens.extend(m.lattice().basis().columns());
        gens.push(m.offset().iter().zip(&w).map(|(a, b)| a - b).collect());
    }
    let frame = Lattice::from_generators(t.dim(), &gens)?;
    let density: BigRational = members
        .iter()
        .map(|m| BigRational::new(BigInt::one(), m.lattice().determinant().clone()))
        .sum();
    if density != BigRational::new(BigInt::one(), frame.determinant().clone()) {
        return Ok(None);
    }
    let mut local = Vec::with_capacity(members.len());
    for m in &members {
        local.push(to_local(&frame, &w, m)?.expect("member lies in the generated coset"));
    }
    if !tiles_unit_lattice(&local)? {
        return Ok(None);
    }
    Ok(Some(LatticeTranslate::new(frame, &w)?))
}

fn tiles_unit_lattice(local: &[LatticeTranslate]) -> Result<bool> {
    let dim = local[0].dim();
    let bx = PeriodBox::for_lattices(dim, local.iter().map(|x| x.lattice()), DEFAULT_BOX_CAP)?;
    covers_box_exactly(&bx, local)
}

/// Replaces translate `index` by `refinement`, which must tile it exactly.
pub fn split_translate(
    t: &TilingInstance,
    index: usize,
    refinement: &[LatticeTranslate],
) -> Result<TilingInstance> {
    let target = t
        .translates()
        .get(index)
        .ok_or(Error::IndexOutOfRange { index, len: t.len() })?;
    if refinement.is_empty() {
        return Err(Error::BadRefinement);
    }
    let mut local = Vec::with_capacity(refinement.len());
    for r in refinement {
        if r.dim() != t.dim() {
            return Err(Error::DimensionMismatch { expected: t.dim(), got: r.dim() });
        }
        match to_local(target.lattice(), target.offset(), r)? {
            Some(x) => local.push(x),
            None => return Err(Error::BadRefinement),
        }
    }
    if !tiles_unit_lattice(&local)? {
        return Err(Error::BadRefinement);
    }
    let mut out = t.translates()[..index].to_vec();
    out.extend_from_slice(refinement);
    out.extend_from_slice(&t.translates()[index + 1..]);
    TilingInstance::new(out)
}

/// The cosets of `local` (a sublattice of `Z^d`, read in the coordinates of
/// `c`'s lattice) as translates of `Z^d`, in the order of their reduced offsets.
pub fn coset_refinement(c: &LatticeTranslate, local: &Lattice) -> Result<Vec<LatticeTranslate>> {
    if local.dim() != c.dim() {
        return Err(Error::DimensionMismatch { expected: c.dim(), got: local.dim() });
    }
    let d = local.dim();
    let diag: Vec<u64> = (0..d)
        .map(|k| {
            let h = local.basis().get(k, k);
            h.to_u64().ok_or_else(|| Error::Overflow(h.to_string()))
        })
        .collect::<Result<_>>()?;
    let mut rep = vec![0u64; d];
    let mut out = Vec::new();
    loop {
        let off: Vec<BigInt> = rep.iter().map(|&x| BigInt::from(x)).collect();
        let piece = LatticeTranslate::new(local.clone(), &off)?;
        out.push(from_local(c.lattice(), c.offset(), &piece)?);
        let mut k = 0;
        loop {
            if k == d {
                return Ok(out);
            }
            rep[k] += 1;
            if rep[k] < diag[k] {
                break;
            }
            rep[k] = 0;
            k += 1;
        }
    }
}
