//! Grouping tilings by which dual points lie in which members' dual groups.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use crate::tiling::{dual_union, TilingInstance};

/// Largest family for which member labels are canonicalised over all permutations.
pub const MAX_PERMUTED: usize = 7;

/// Determinants and, per non-identity dual point of the union, its order and
/// the set of members containing it; minimised over relabellings of members.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IncidenceInvariant {
    pub dets: Vec<u64>,
    pub pattern: Vec<(u64, Vec<usize>)>,
    /// False when the family was too large for full relabelling; members are
    /// then identified only through their determinants.
    pub exact_labels: bool,
}

pub fn incidence_invariant(t: &TilingInstance) -> IncidenceInvariant {
    let dets: Vec<u64> = t.determinants().iter().map(|d| d.to_u64().unwrap_or(u64::MAX)).collect();
    let points: Vec<(u64, Vec<usize>)> = dual_union(t)
        .into_iter()
        .filter(|(z, _)| !z.is_identity())
        .map(|(z, m)| (z.order().to_u64().unwrap_or(u64::MAX), m))
        .collect();
    let n = t.len();
    if n > MAX_PERMUTED {
        let mut pattern: Vec<(u64, Vec<usize>)> = points
            .iter()
            .map(|(o, m)| {
                let mut ds: Vec<usize> = m.iter().map(|&j| dets[j] as usize).collect();
                ds.sort();
                (*o, ds)
            })
            .collect();
        pattern.sort();
        let mut dets = dets;
        dets.sort();
        return IncidenceInvariant { dets, pattern, exact_labels: false };
    }
    let mut best: Option<IncidenceInvariant> = None;
    let mut perm: Vec<usize> = (0..n).collect();
    permutations(&mut perm, 0, &mut |pi| {
        let mut d = vec![0u64; n];
        for j in 0..n {
            d[pi[j]] = dets[j];
        }
        let mut pattern: Vec<(u64, Vec<usize>)> = points
            .iter()
            .map(|(o, m)| {
                let mut s: Vec<usize> = m.iter().map(|&j| pi[j]).collect();
                s.sort();
                (*o, s)
            })
            .collect();
        pattern.sort();
        let cand = IncidenceInvariant { dets: d, pattern, exact_labels: true };
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
    });
    best.expect("at least one permutation")
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Partition of `instances` (as index lists) by [`incidence_invariant`],
/// classes ordered by their first member.
pub fn classify_up_to_structure(instances: &[TilingInstance]) -> Vec<Vec<usize>> {
    let mut by: BTreeMap<IncidenceInvariant, Vec<usize>> = BTreeMap::new();
    for (i, t) in instances.iter().enumerate() {
        by.entry(incidence_invariant(t)).or_default().push(i);
    }
    let mut classes: Vec<Vec<usize>> = by.into_values().collect();
    classes.sort();
    classes
}
