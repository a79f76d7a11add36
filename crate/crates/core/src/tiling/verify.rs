//! Three independent decision procedures for "is this an exact cover of `Z^d`".

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::theorems::CheckOutcome;
use super::{cosets_disjoint, density_sum, PeriodBox, TilingInstance, DEFAULT_BOX_CAP};
use crate::characters::{char_eval, dual_group, DualPoint};
use crate::cyclo::CycloSum;
use crate::error::Result;
use crate::lattice::{fmt_vec, to_big, Lattice, LatticeTranslate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    BoxOracle,
    CharacterFormula,
    DisjointDensity,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::BoxOracle => "box-oracle",
            Method::CharacterFormula => "character-formula",
            Method::DisjointDensity => "disjoint+density",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Uncovered { point: Vec<BigInt> },
    MultiplyCovered { point: Vec<BigInt>, members: Vec<usize> },
    /// Two members meeting at `point`.
    Overlap { first: usize, second: usize, point: Vec<BigInt> },
    Density { value: BigRational },
    /// A dual point at which the character sum differs from its target.
    CharacterSum { point: DualPoint, members: Vec<usize>, value: CycloSum },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Uncovered { point } => write!(f, "point {} is not covered", fmt_vec(point)),
            Witness::MultiplyCovered { point, members } => {
                write!(f, "point {} is covered by translates {:?}", fmt_vec(point), members)
            }
            Witness::Overlap { first, second, point } => {
                write!(f, "translates {first} and {second} meet at {}", fmt_vec(point))
            }
            Witness::Density { value } => write!(f, "density sum is {value}, not 1"),
            Witness::CharacterSum { point, members, value } => {
                write!(f, "character sum at {point} over translates {members:?} is {value}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub is_tiling: bool,
    pub method: Method,
    pub witnesses: Vec<Witness>,
    /// Box points or dual points examined.
    pub points_checked: u64,
    pub theorem_checks: BTreeMap<String, CheckOutcome>,
}

impl VerificationReport {
    fn new(method: Method, witnesses: Vec<Witness>, points_checked: u64) -> Self {
        VerificationReport {
            is_tiling: witnesses.is_empty(),
            method,
            witnesses,
            points_checked,
            theorem_checks: BTreeMap::new(),
        }
    }
}

/// Counts coverage of every point of one period box.
pub fn is_tiling_box_oracle(t: &TilingInstance) -> Result<VerificationReport> {
    is_tiling_box_oracle_capped(t, DEFAULT_BOX_CAP)
}

pub fn is_tiling_box_oracle_capped(t: &TilingInstance, cap: u64) -> Result<VerificationReport> {
    let bx = PeriodBox::for_lattices(t.dim(), t.translates().iter().map(|x| x.lattice()), cap)?;
    let counts = cover_counts(&bx, t.translates())?;
    let mut witnesses = Vec::new();
    if let Some(i) = counts.iter().position(|&c| c == 0) {
        witnesses.push(Witness::Uncovered { point: to_big(&bx.point_of(i)) });
    }
    if let Some(i) = counts.iter().position(|&c| c > 1) {
        let point = to_big(&bx.point_of(i));
        let members = members_at(t.translates(), &point)?;
        witnesses.push(Witness::MultiplyCovered { point, members });
    }
    Ok(VerificationReport::new(Method::BoxOracle, witnesses, bx.volume()))
}

/// True iff the translates cover `bx` exactly once.
pub(crate) fn covers_box_exactly(bx: &PeriodBox, translates: &[LatticeTranslate]) -> Result<bool> {
    Ok(cover_counts(bx, translates)?.iter().all(|&c| c == 1))
}

fn cover_counts(bx: &PeriodBox, translates: &[LatticeTranslate]) -> Result<Vec<u8>> {
    let mut counts = vec![0u8; bx.volume() as usize];
    for tr in translates {
        bx.for_each_point(tr, |i| counts[i] = counts[i].saturating_add(1))?;
    }
    Ok(counts)
}

fn members_at(translates: &[LatticeTranslate], p: &[BigInt]) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, tr) in translates.iter().enumerate() {
        if tr.contains(p)? {
            out.push(i);
        }
    }
    Ok(out)
}

/// Pairwise disjointness plus density one.
pub fn is_tiling_fast(t: &TilingInstance) -> Result<VerificationReport> {
    let tr = t.translates();
    let mut witnesses = Vec::new();
    let density = density_sum(t);
    if !density.is_one() {
        witnesses.push(Witness::Density { value: density });
    }
    let mut checked = 0u64;
    'outer: for i in 0..tr.len() {
        for j in i + 1..tr.len() {
            checked += 1;
            if !cosets_disjoint(&tr[i], &tr[j])? {
                let point = common_point(&tr[i], &tr[j])?;
                witnesses.push(Witness::Overlap { first: i, second: j, point });
                break 'outer;
            }
        }
    }
    Ok(VerificationReport::new(Method::DisjointDensity, witnesses, checked))
}

/// Smallest point (box scan order) of `a` that also lies in `b`; the cosets must meet.
fn common_point(a: &LatticeTranslate, b: &LatticeTranslate) -> Result<Vec<BigInt>> {
    let bx = PeriodBox::for_lattices(a.dim(), [a.lattice(), b.lattice()], u64::MAX)?;
    let mut best: Option<usize> = None;
    let mut err = None;
    bx.for_each_point(a, |i| {
        if best.is_some_and(|b| b <= i) || err.is_some() {
            return;
        }
        match b.contains(&to_big(&bx.point_of(i))) {
            Ok(true) => best = Some(i),
            Ok(false) => {}
            Err(e) => err = Some(e),
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    let i = best.expect("intersecting cosets meet inside a common period box");
    Ok(to_big(&bx.point_of(i)))
}

/// `sum_{j : z in dual group of L_j} chi_z(v_j) / det L_j`
pub fn character_sum(t: &TilingInstance, z: &DualPoint) -> Result<CycloSum> {
    let mut acc = CycloSum::zero(1);
    for tr in t.translates() {
        if crate::characters::is_dual_point(tr.lattice(), z)? {
            acc = acc.add(&term(tr, z)?);
        }
    }
    Ok(acc)
}

fn term(tr: &LatticeTranslate, z: &DualPoint) -> Result<CycloSum> {
    let e = char_eval(z, tr.offset())?;
    let w = BigRational::new(BigInt::one(), tr.lattice().determinant().clone());
    Ok(CycloSum::term_at_exponent(&e, w))
}

/// Every point of the union of the members' dual groups, with the members
/// whose dual group contains it, in increasing order.
pub fn dual_union(t: &TilingInstance) -> BTreeMap<DualPoint, Vec<usize>> {
    let mut groups: BTreeMap<&Lattice, Vec<DualPoint>> = BTreeMap::new();
    let mut union: BTreeMap<DualPoint, Vec<usize>> = BTreeMap::new();
    for (j, tr) in t.translates().iter().enumerate() {
        let g = groups.entry(tr.lattice()).or_insert_with(|| dual_group(tr.lattice()));
        for z in g.iter() {
            union.entry(z.clone()).or_default().push(j);
        }
    }
    union
}

/// Checks the character identity at every point of the dual union.
pub fn verify_character_formula(t: &TilingInstance) -> Result<VerificationReport> {
    let union = dual_union(t);
    let mut checked = 0u64;
    let mut witnesses = Vec::new();
    for (z, members) in &union {
        checked += 1;
        let mut acc = CycloSum::zero(1);
        for &j in members {
            acc = acc.add(&term(&t.translates()[j], z)?);
        }
        let ok = if z.is_identity() {
            acc.as_rational().is_some_and(|r| r.is_one())
        } else {
            acc.is_zero()
        };
        if !ok {
            witnesses.push(Witness::CharacterSum { point: z.clone(), members: members.clone(), value: acc });
            break;
        }
    }
    Ok(VerificationReport::new(Method::CharacterFormula, witnesses, checked))
}



#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    fn verdicts(t: &TilingInstance) -> [bool; 3] {
        [
            is_tiling_box_oracle(t).unwrap().is_tiling,
            is_tiling_fast(t).unwrap().is_tiling,
            verify_character_formula(t).unwrap().is_tiling,
        ]
    }

    #[test]
    fn four_lattice_example_tiles() {
        let t = four_lattice();
        assert_eq!(verdicts(&t), [true; 3]);
        let r = verify_character_formula(&t).unwrap();
        // identity plus the six sign points other than (-1,-1,-1)
        assert_eq!(r.points_checked, 7);
        for (z, members) in dual_union(&t) {
            if !z.is_identity() {
                assert_eq!(members.len(), 2, "{z}");
            }
        }
    }

    #[test]
    fn sign_point_cancels_between_two_members() {
        let t = four_lattice();
        let z = DualPoint::from_signs(&[1, -1, 1]);
        assert_eq!(dual_union(&t)[&z], vec![0, 2]);
        assert!(character_sum(&t, &z).unwrap().is_zero());
        let one = character_sum(&t, &DualPoint::identity(3)).unwrap();
        assert!(one.as_rational().unwrap().is_one());
    }

    #[test]
    fn one_dimensional_examples() {
        assert_eq!(verdicts(&progressions(&[(0, 2), (1, 4), (3, 4)])), [true; 3]);
        assert_eq!(verdicts(&progressions(&[(0, 2), (1, 4)])), [false; 3]);
        assert_eq!(verdicts(&progressions(&[(0, 2), (0, 3)])), [false; 3]);
        let r = is_tiling_box_oracle(&progressions(&[(0, 2), (1, 4)])).unwrap();
        assert_eq!(r.witnesses, vec![Witness::Uncovered { point: to_big(&[3]) }]);
        let r = verify_character_formula(&progressions(&[(0, 2), (0, 3)])).unwrap();
        match &r.witnesses[0] {
            Witness::CharacterSum { point, value, .. } => {
                assert!(point.is_identity());
                assert_eq!(value.as_rational(), Some(BigRational::new(5.into(), 6.into())));
            }
            w => panic!("unexpected witness {w}"),
        }
    }

    #[test]
    fn overlap_witness_is_common_point() {
        let t = progressions(&[(0, 2), (1, 2), (2, 4)]);
        let r = is_tiling_fast(&t).unwrap();
        assert!(!r.is_tiling);
        assert!(r.witnesses.contains(&Witness::Overlap { first: 0, second: 2, point: to_big(&[2]) }));
        let r = is_tiling_box_oracle(&t).unwrap();
        assert_eq!(
            r.witnesses,
            vec![Witness::MultiplyCovered { point: to_big(&[2]), members: vec![0, 2] }]
        );
    }

    #[test]
    fn single_translates() {
        let t = TilingInstance::new(vec![tr(Lattice::integer_lattice(2), &[3, -1])]).unwrap();
        assert_eq!(verdicts(&t), [true; 3]);
        let t = TilingInstance::new(vec![tr(Lattice::diagonal(&[1, 2]), &[0, 0])]).unwrap();
        assert_eq!(verdicts(&t), [false; 3]);
    }

    #[test]
    fn empty_character_sum_is_zero() {
        let t = progressions(&[(0, 2), (1, 2)]);
        let z = DualPoint::from_fractions(&[1], 3);
        assert!(character_sum(&t, &z).unwrap().is_zero());
    }
}
