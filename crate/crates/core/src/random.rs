//! Random lattices and tilings for property and acceptance tests.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::arith::factorize;
use crate::error::Error;
use crate::lattice::{Lattice, LatticeTranslate};
use crate::tiling::{coset_refinement, split_translate, TilingInstance};

/// A uniformly shaped random sublattice of `Z^dim` of the given index:
/// prime factors are dealt to random diagonal slots, entries below the
/// diagonal are drawn from their reduced range.
pub fn random_sublattice<R: Rng + ?Sized>(rng: &mut R, dim: usize, index: u64) -> Lattice {
    assert!(dim >= 1 && index >= 1);
    let mut diag = vec![1i64; dim];
    for (p, k) in factorize(&BigInt::from(index)) {
        let p: i64 = p.try_into().expect("small prime");
        for _ in 0..k {
            diag[rng.gen_range(0..dim)] *= p;
        }
    }
    let cols: Vec<Vec<i64>> = (0..dim)
        .map(|j| {
            (0..dim)
                .map(|i| match i.cmp(&j) {
                    std::cmp::Ordering::Less => 0,
                    std::cmp::Ordering::Equal => diag[i],
                    std::cmp::Ordering::Greater => rng.gen_range(0..diag[i]),
                })
                .collect()
        })
        .collect();
    Lattice::from_generators_i64(dim, &cols).expect("full rank by construction")
}

/// A tiling obtained from `{Z^dim}` by up to `splits` random refinements,
/// keeping every determinant at most `max_det`.
pub fn random_tiling<R: Rng + ?Sized>(rng: &mut R, dim: usize, max_det: u64, splits: usize) -> TilingInstance {
    let zero = vec![0i64; dim];
    let mut t = TilingInstance::new(vec![LatticeTranslate::from_i64(Lattice::integer_lattice(dim), &zero)
        .expect("dimension matches")])
    .expect("single translate");
    for _ in 0..splits {
        let dets: Vec<u64> = t.translates().iter().map(|x| x.lattice().determinant_u64().unwrap_or(u64::MAX)).collect();
        let open: Vec<usize> = (0..t.len()).filter(|&i| dets[i].saturating_mul(2) <= max_det).collect();
        let Some(&i) = open.choose(rng) else { break };
        let room = (max_det / dets[i]).min(6);
        let m = rng.gen_range(2..=room);
        let local = random_sublattice(rng, dim, m);
        let parts = coset_refinement(&t.translates()[i], &local).expect("small refinement");
        t = split_translate(&t, i, &parts).expect("cosets of a sublattice tile");
    }
    t
}

/// Moves one translate to a different coset of its own lattice. The result
/// never tiles. `None` if every attempt produced a repeated translate.
pub fn mutate_offset<R: Rng + ?Sized>(rng: &mut R, t: &TilingInstance) -> Option<TilingInstance> {
    for _ in 0..64 {
        let i = rng.gen_range(0..t.len());
        let tr = &t.translates()[i];
        let shift: Vec<BigInt> = (0..t.dim()).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect();
        if tr.lattice().contains(&shift).expect("dimension matches") {
            continue;
        }
        let off: Vec<BigInt> = tr.offset().iter().zip(&shift).map(|(a, b)| a + b).collect();
        let moved = LatticeTranslate::new(tr.lattice().clone(), &off).expect("dimension matches");
        let mut all = t.translates().to_vec();
        all[i] = moved;
        match TilingInstance::new(all) {
            Ok(m) => return Some(m),
            Err(Error::DuplicateTranslate { .. }) => continue,
            Err(e) => panic!("unexpected error {e}"),
        }
    }
    None
}

/// Replaces one lattice by another of the same index; may or may not tile.
pub fn mutate_basis<R: Rng + ?Sized>(rng: &mut R, t: &TilingInstance) -> Option<TilingInstance> {
    for _ in 0..64 {
        let i = rng.gen_range(0..t.len());
        let tr = &t.translates()[i];
        let det = tr.lattice().determinant_u64().ok()?;
        let l = random_sublattice(rng, t.dim(), det);
        if &l == tr.lattice() {
            continue;
        }
        let mut all = t.translates().to_vec();
        all[i] = LatticeTranslate::new(l, tr.offset()).expect("dimension matches");
        if let Ok(m) = TilingInstance::new(all) {
            return Some(m);
        }
    }
    None
}
