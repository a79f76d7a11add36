//! Executable forms of the necessary conditions satisfied by every lattice tiling.
//!
//! Each check is evaluated literally on the instance. On a verified tiling a
//! [`CheckOutcome::Fail`] means either a bug here or a counterexample.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::verify::{dual_union, is_tiling_fast};
use super::{density_sum, translation_pairs, TilingInstance};
use crate::arith::{divides, is_prime_power, prime_power_divisors};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass,
    /// The hypothesis never applied.
    VacuousPass,
    Fail(String),
    NotApplicable,
}

impl CheckOutcome {
    pub fn is_fail(&self) -> bool {
        matches!(self, CheckOutcome::Fail(_))
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckOutcome::Pass => f.write_str("pass"),
            CheckOutcome::VacuousPass => f.write_str("vacuous-pass"),
            CheckOutcome::Fail(why) => write!(f, "FAIL: {why}"),
            CheckOutcome::NotApplicable => f.write_str("not-applicable"),
        }
    }
}

pub const COPRIME: &str = "no-coprime-determinants";
pub const PRIME_POWER: &str = "prime-power-pairing";
pub const PAIRS: &str = "dual-points-in-pairs";
pub const TWO_MEMBERS: &str = "two-member-equal-determinants";
pub const DENSITY: &str = "density";
pub const SAME_DET: &str = "repeated-determinant";
pub const MAX_CYCLIC: &str = "max-determinant-cyclic";
pub const PLANAR: &str = "planar-prime-power-multiplicity";
pub const QUOTIENT: &str = "quotient-prime-power-pairing";
pub const AT_MOST_THREE: &str = "at-most-three-translates";
pub const FOUR: &str = "four-translates-determinant-four";

pub const ALL_CHECKS: [&str; 11] = [
    COPRIME, PRIME_POWER, PAIRS, TWO_MEMBERS, DENSITY, SAME_DET, MAX_CYCLIC, PLANAR, QUOTIENT,
    AT_MOST_THREE, FOUR,
];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TheoremReport {
    pub checks: BTreeMap<String, CheckOutcome>,
    pub notes: Vec<String>,
}

impl TheoremReport {
    pub fn get(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.get(name)
    }

    pub fn failures(&self) -> Vec<(&str, &CheckOutcome)> {
        self.checks.iter().filter(|(_, o)| o.is_fail()).map(|(k, o)| (k.as_str(), o)).collect()
    }

    fn set(&mut self, name: &str, outcome: CheckOutcome) {
        self.checks.insert(name.to_string(), outcome);
    }
}

/// Runs every check. Without `assume_tiling` the instance is verified first
/// and all checks are marked not applicable if it does not tile.
pub fn check_theorems(t: &TilingInstance, assume_tiling: bool) -> Result<TheoremReport> {
    let mut r = TheoremReport::default();
    if !assume_tiling && !is_tiling_fast(t)?.is_tiling {
        for name in ALL_CHECKS {
            r.set(name, CheckOutcome::NotApplicable);
        }
        r.notes.push("instance is not a tiling".into());
        return Ok(r);
    }
    let dets = t.determinants();
    let n = t.len();
    let has_pair = !translation_pairs(t).is_empty();
    let union = dual_union(t);

    r.set(COPRIME, coprime(&dets));
    r.set(PRIME_POWER, prime_powers(&dets));
    r.set(DENSITY, if density_sum(t).is_one() {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Fail(format!("density sum {}", density_sum(t)))
    });
    r.set(SAME_DET, if n < 2 {
        CheckOutcome::NotApplicable
    } else if (0..n).any(|i| (i + 1..n).any(|j| dets[i] == dets[j])) {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Fail("all determinants distinct".into())
    });

    let mut pairs = CheckOutcome::VacuousPass;
    let mut two = CheckOutcome::VacuousPass;
    let mut quotient = CheckOutcome::VacuousPass;
    for (z, members) in union.iter().filter(|(z, _)| !z.is_identity()) {
        if members.len() < 2 {
            pairs = CheckOutcome::Fail(format!("{z} belongs only to translate {}", members[0]));
        } else if !pairs.is_fail() {
            pairs = CheckOutcome::Pass;
        }
        if members.len() == 2 {
            let (a, b) = (members[0], members[1]);
            if dets[a] != dets[b] {
                two = CheckOutcome::Fail(format!("{z} shared only by translates {a} and {b}"));
            } else if !two.is_fail() {
                two = CheckOutcome::Pass;
            }
        }
        let ord = z.order();
        let es: Vec<BigInt> = members.iter().map(|&k| &dets[k] / &ord).collect();
        match pairing(&es) {
            Some(q) if !quotient.is_fail() => {
                quotient = CheckOutcome::Fail(format!("{q} divides a single quotient at {z}"));
            }
            None if quotient == CheckOutcome::VacuousPass && es.iter().any(|e| !e.is_one()) => {
                quotient = CheckOutcome::Pass;
            }
            _ => {}
        }
    }
    r.set(PAIRS, pairs);
    r.set(TWO_MEMBERS, two);
    r.set(QUOTIENT, quotient);

    let outcome = max_cyclic(t, &dets, has_pair, &mut r.notes);
    r.set(MAX_CYCLIC, outcome);
    r.set(PLANAR, planar(t, has_pair));
    r.set(AT_MOST_THREE, match n {
        1 => CheckOutcome::NotApplicable,
        2 | 3 if has_pair => CheckOutcome::Pass,
        2 | 3 => CheckOutcome::Fail("translation-free with at most three translates".into()),
        _ => CheckOutcome::NotApplicable,
    });
    r.set(FOUR, match n {
        4 if has_pair => CheckOutcome::VacuousPass,
        4 if dets.iter().all(|d| *d == BigInt::from(4)) => CheckOutcome::Pass,
        4 => CheckOutcome::Fail("translation-free with a determinant other than 4".into()),
        _ => CheckOutcome::NotApplicable,
    });
    Ok(r)
}

fn coprime(dets: &[BigInt]) -> CheckOutcome {
    if dets.len() < 2 {
        return CheckOutcome::VacuousPass;
    }
    for i in 0..dets.len() {
        for j in i + 1..dets.len() {
            if dets[i].gcd(&dets[j]).is_one() {
                return CheckOutcome::Fail(format!("translates {i} and {j} have coprime determinants"));
            }
        }
    }
    CheckOutcome::Pass
}

fn prime_powers(dets: &[BigInt]) -> CheckOutcome {
    match pairing(dets) {
        Some(q) => CheckOutcome::Fail(format!("{q} divides exactly one determinant")),
        None if dets.iter().all(|d| d.is_one()) => CheckOutcome::VacuousPass,
        None => CheckOutcome::Pass,
    }
}

/// A prime power dividing exactly one of `values`, if any.
fn pairing(values: &[BigInt]) -> Option<BigInt> {
    for (i, v) in values.iter().enumerate() {
        for q in prime_power_divisors(v) {
            if !values.iter().enumerate().any(|(j, w)| j != i && divides(&q, w)) {
                return Some(q);
            }
        }
    }
    None
}

/// Hypothesis read as "some translate of maximal determinant is cyclic".
fn max_cyclic(t: &TilingInstance, dets: &[BigInt], has_pair: bool, notes: &mut Vec<String>) -> CheckOutcome {
    if t.len() < 2 {
        return CheckOutcome::NotApplicable;
    }
    let max = dets.iter().max().expect("nonempty");
    let cyclic: Vec<bool> = t
        .translates()
        .iter()
        .zip(dets)
        .filter(|(_, d)| *d == max)
        .map(|(x, _)| x.lattice().is_cyclic())
        .collect();
    if cyclic.iter().any(|&c| c) && cyclic.iter().any(|&c| !c) {
        notes.push(format!("{MAX_CYCLIC}: translates of maximal determinant disagree on cyclicity"));
    }
    match (cyclic.iter().any(|&c| c), has_pair) {
        (false, _) => CheckOutcome::VacuousPass,
        (true, true) => CheckOutcome::Pass,
        (true, false) => CheckOutcome::Fail("a maximal-determinant translate is cyclic".into()),
    }
}

/// Planar case: order by (exponent, determinant) descending; if the first
/// translate's multiplicity is a prime power (1 included) a repeated lattice
/// must exist. All translates with the maximal key share the multiplicity.
fn planar(t: &TilingInstance, has_pair: bool) -> CheckOutcome {
    if t.dim() != 2 || t.len() < 2 {
        return CheckOutcome::NotApplicable;
    }
    let first = t
        .translates()
        .iter()
        .map(|x| x.lattice())
        .max_by(|a, b| (a.exponent(), a.determinant()).cmp(&(b.exponent(), b.determinant())))
        .expect("nonempty");
    match (is_prime_power(&first.multiplicity()), has_pair) {
        (false, _) => CheckOutcome::VacuousPass,
        (true, true) => CheckOutcome::Pass,
        (true, false) => CheckOutcome::Fail(format!("multiplicity {} of {first}", first.multiplicity())),
    }
}
