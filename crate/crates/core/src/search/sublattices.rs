//! Complete enumeration of sublattices of given index via canonical bases.

use num_bigint::BigInt;

use crate::cyclo::divisors;
use crate::lattice::Lattice;

/// Every sublattice of `Z^dim` of index `det`, each exactly once, ordered
/// by canonical basis.
pub fn enumerate_sublattices(dim: usize, det: u64) -> Vec<Lattice> {
    assert!(dim >= 1 && det >= 1);
    let mut out = Vec::new();
    let mut diag = vec![0u64; dim];
    diagonals(det, 0, &mut diag, &mut |d| fill(d, &mut out));
    out.sort();
    out
}

fn diagonals(rest: u64, k: usize, diag: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
    if k + 1 == diag.len() {
        diag[k] = rest;
        f(diag);
        return;
    }
    for q in divisors(rest) {
        diag[k] = q;
        diagonals(rest / q, k + 1, diag, f);
    }
}

/// All lower triangular bases with this diagonal and reduced entries below it.
fn fill(diag: &[u64], out: &mut Vec<Lattice>) {
    let d = diag.len();
    let slots: Vec<(usize, usize)> = (0..d).flat_map(|i| (0..i).map(move |j| (i, j))).collect();
    let mut vals = vec![0u64; slots.len()];
    loop {
        let mut cols = vec![vec![BigInt::from(0); d]; d];
        for j in 0..d {
            cols[j][j] = BigInt::from(diag[j]);
        }
        for (s, &(i, j)) in slots.iter().enumerate() {
            cols[j][i] = BigInt::from(vals[s]);
        }
        let l = Lattice::from_generators(d, &cols).expect("full rank");
        debug_assert!((0..d).all(|j| l.basis().column(j) == cols[j]));
        out.push(l);
        let mut s = 0;
        loop {
            if s == slots.len() {
                return;
            }
            vals[s] += 1;
            if vals[s] < diag[slots[s].0] {
                break;
            }
            vals[s] = 0;
            s += 1;
        }
    }
}

/// Number of sublattices of index `det`, `sum prod_i h_i^i` over ordered
/// factorisations `h_0 ... h_{d-1}` of `det`.
pub fn count_sublattices(dim: usize, det: u64) -> u64 {
    let mut total = 0;
    let mut diag = vec![0u64; dim];
    diagonals(det, 0, &mut diag, &mut |d| {
        total += d.iter().enumerate().map(|(i, &h)| h.pow(i as u32)).product::<u64>();
    });
    total
}
