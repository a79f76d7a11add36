//! Exact cover of the box `(Z/M)^d` by cosets drawn from a fixed
//! determinant multiset. Branches on the first uncovered point and, at each
//! node, on the (lattice, coset) pair covering it, so every cover is met once.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{PruneRule, SearchStats};
use crate::arith::is_prime_power;
use crate::characters::dual_group;
use crate::lattice::{Lattice, LatticeTranslate};
use crate::tiling::{PeriodBox, TilingInstance};

pub(crate) struct Candidate {
    lattice: Lattice,
    /// box index -> coset number
    coset_of: Vec<u32>,
    cosets: Vec<Vec<u64>>,
    /// non-identity dual points as (box-encoded id, order)
    dual: Vec<(u32, u64)>,
    exponent: u64,
    det: u64,
    prime_power_multiplicity: bool,
}

impl Candidate {
    pub(crate) fn new(lattice: Lattice, m: u64, dim: usize) -> Candidate {
        let bx = PeriodBox::from_periods(vec![m; dim]);
        let vol = bx.volume() as usize;
        let words = vol.div_ceil(64);
        let det = lattice.determinant().to_u64().expect("small determinant");
        let diag: Vec<u64> = (0..dim).map(|k| lattice.basis().get(k, k).to_u64().expect("small")).collect();
        let mut coset_of = vec![u32::MAX; vol];
        let mut cosets = Vec::with_capacity(det as usize);
        let mut rep = vec![0u64; dim];
        'reps: loop {
            let off: Vec<BigInt> = rep.iter().map(|&x| BigInt::from(x)).collect();
            let t = LatticeTranslate::new(lattice.clone(), &off).expect("dimension");
            let id = cosets.len() as u32;
            let mut bits = vec![0u64; words];
            bx.for_each_point(&t, |i| {
                coset_of[i] = id;
                bits[i / 64] |= 1 << (i % 64);
            })
            .expect("box is a period");
            cosets.push(bits);
            let mut k = 0;
            loop {
                if k == dim {
                    break 'reps;
                }
                rep[k] += 1;
                if rep[k] < diag[k] {
                    break;
                }
                rep[k] = 0;
                k += 1;
            }
        }
        debug_assert!(coset_of.iter().all(|&c| c != u32::MAX));
        let mut dual = Vec::new();
        for z in dual_group(&lattice) {
            if z.is_identity() {
                continue;
            }
            let id = z.exponents().iter().rev().fold(0u64, |acc, a| {
                let c = (a * BigInt::from(m)).to_integer().to_u64().expect("dual point lies on the 1/M grid");
                acc * m + c
            });
            dual.push((id as u32, z.order().to_u64().expect("small order")));
        }
        let exponent = lattice.exponent().to_u64().expect("small");
        Candidate {
            prime_power_multiplicity: is_prime_power(&BigInt::from(det / exponent)),
            lattice,
            coset_of,
            cosets,
            dual,
            exponent,
            det,
        }
    }
}

pub(crate) struct Group {
    pub det: u64,
    pub count: u32,
    pub candidates: Vec<Candidate>,
}

pub(crate) struct Cover<'a> {
    pub dim: usize,
    pub m: u64,
    pub groups: Vec<Group>,
    pub translation_free: bool,
    pub comeinpairs: bool,
    pub planar_rule: bool,
    pub deadline: Option<Instant>,
    pub stats: &'a mut SearchStats,
    pub found: Vec<TilingInstance>,
    covered: Vec<u64>,
    vol: usize,
    used: Vec<Vec<bool>>,
    placed: Vec<(usize, usize, usize)>,
    dual_count: Vec<u8>,
    pub timed_out: bool,
}

impl<'a> Cover<'a> {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn new(
        dim: usize,
        m: u64,
        groups: Vec<Group>,
        translation_free: bool,
        comeinpairs: bool,
        planar_rule: bool,
        deadline: Option<Instant>,
        stats: &'a mut SearchStats,
    ) -> Self {
        let vol = (m as usize).pow(dim as u32);
        let used = groups.iter().map(|g| vec![false; g.candidates.len()]).collect();
        Cover {
            dim,
            m,
            translation_free,
            comeinpairs,
            planar_rule,
            deadline,
            stats,
            found: Vec::new(),
            covered: vec![0; vol.div_ceil(64)],
            vol,
            used,
            placed: Vec::new(),
            dual_count: vec![0; vol],
            timed_out: false,
            groups,
        }
    }

    pub(crate) fn run(&mut self) {
        self.dfs(0);
    }

    fn first_uncovered(&self, from: usize) -> Option<usize> {
        let mut w = from / 64;
        let mut word = self.covered.get(w)? | ((1u64 << (from % 64)) - 1);
        loop {
            if word != u64::MAX {
                let i = w * 64 + (!word).trailing_zeros() as usize;
                return (i < self.vol).then_some(i);
            }
            w += 1;
            word = *self.covered.get(w)?;
        }
    }

    fn dfs(&mut self, from: usize) {
        self.stats.nodes += 1;
        if self.stats.nodes.is_multiple_of(4096) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                }
            }
        }
        if self.timed_out {
            return;
        }
        if self.groups.iter().all(|g| g.count == 0) {
            debug_assert!(self.first_uncovered(0).is_none());
            self.record();
            return;
        }
        let Some(p) = self.first_uncovered(from) else { return };
        for g in 0..self.groups.len() {
            if self.groups[g].count == 0 {
                continue;
            }
            for c in 0..self.groups[g].candidates.len() {
                if self.translation_free && self.used[g][c] {
                    continue;
                }
                let cand = &self.groups[g].candidates[c];
                let coset = cand.coset_of[p] as usize;
                let bits = &cand.cosets[coset];
                if bits.iter().zip(&self.covered).any(|(a, b)| a & b != 0) {
                    continue;
                }
                self.place(g, c, coset, true);
                if !self.pruned() {
                    self.dfs(p + 1);
                }
                self.place(g, c, coset, false);
                if self.timed_out {
                    return;
                }
            }
        }
    }

    fn place(&mut self, g: usize, c: usize, coset: usize, on: bool) {
        let cand = &self.groups[g].candidates[c];
        for (w, b) in self.covered.iter_mut().zip(&cand.cosets[coset]) {
            *w ^= b;
        }
        if self.comeinpairs {
            for &(id, _) in &cand.dual {
                if on {
                    self.dual_count[id as usize] += 1;
                } else {
                    self.dual_count[id as usize] -= 1;
                }
            }
        }
        if on {
            self.groups[g].count -= 1;
            self.used[g][c] = true;
            self.placed.push((g, c, coset));
        } else {
            self.groups[g].count += 1;
            self.used[g][c] = false;
            self.placed.pop();
        }
    }

    fn pruned(&mut self) -> bool {
        if self.comeinpairs && self.lonely_dual_point() {
            *self.stats.prunes.entry(PruneRule::ComeInPairs).or_default() += 1;
            return true;
        }
        if self.planar_rule && self.dim == 2 && self.translation_free && self.planar_blocked() {
            *self.stats.prunes.entry(PruneRule::MultiplicityPrimePower2d).or_default() += 1;
            return true;
        }
        false
    }

    /// A dual point seen once whose order divides no determinant still to come.
    fn lonely_dual_point(&self) -> bool {
        for &(g, c, _) in &self.placed {
            for &(id, ord) in &self.groups[g].candidates[c].dual {
                if self.dual_count[id as usize] == 1
                    && !self.groups.iter().any(|h| h.count > 0 && h.det % ord == 0)
                {
                    return true;
                }
            }
        }
        false
    }

    /// The leading translate in (exponent, determinant) order is already
    /// placed and has prime-power multiplicity.
    fn planar_blocked(&self) -> bool {
        let best = self
            .placed
            .iter()
            .map(|&(g, c, _)| &self.groups[g].candidates[c])
            .max_by_key(|x| (x.exponent, x.det))
            .expect("nonempty");
        best.prime_power_multiplicity && self.groups.iter().all(|h| h.count == 0 || h.det <= best.exponent)
    }

    fn record(&mut self) {
        let bx = PeriodBox::from_periods(vec![self.m; self.dim]);
        let mut translates = Vec::with_capacity(self.placed.len());
        for &(g, c, coset) in &self.placed {
            let cand = &self.groups[g].candidates[c];
            let idx = cand.coset_of.iter().position(|&x| x as usize == coset).expect("coset is nonempty");
            let off: Vec<BigInt> = bx.point_of(idx).into_iter().map(BigInt::from).collect();
            translates.push(LatticeTranslate::new(cand.lattice.clone(), &off).expect("dimension"));
        }
        let t = TilingInstance::new(translates).expect("disjoint cosets are distinct").sorted();
        self.found.push(t);
    }
}
