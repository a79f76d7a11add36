//! Exhaustive search for translation-free lattice tilings.
//!
//! The search runs over determinant multisets `d_1 <= ... <= d_n` with
//! `sum 1/d_i = 1` and all `d_i <= det_bound`. For each multiset it solves an
//! exact cover of `(Z/M)^d`, `M = lcm(d_i)`, whose pieces are the cosets of the
//! sublattices of each required index (every such lattice contains `M Z^d`).
//! The lattice and the offset are chosen together, so any cover is produced
//! exactly once.

mod classify;
mod cover;
mod multisets;
mod sublattices;

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use num_integer::Integer;
use rayon::prelude::*;

pub use classify::{classify_up_to_structure, incidence_invariant, IncidenceInvariant};
pub use sublattices::{count_sublattices, enumerate_sublattices};

use crate::error::{Error, Result};
use crate::tiling::{is_tiling_box_oracle, translation_pairs, verify_character_formula, TilingInstance};
use cover::{Candidate, Cover, Group};
use multisets::{enumerate_multisets, has_coprime_pair, has_lonely_prime_power, MultisetRules};

/// Largest box `(Z/M)^d` a single multiset may need.
pub const MAX_BOX_POINTS: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PruneRule {
    /// Tail bound on partial unit-fraction sums.
    Density,
    /// Two coprime determinants.
    PairGcd,
    /// A prime power dividing a single determinant.
    PrimePower,
    /// Planar rule: the leading lattice has prime-power multiplicity.
    MultiplicityPrimePower2d,
    /// A dual point that no remaining lattice can share.
    ComeInPairs,
}

impl PruneRule {
    pub const ALL: [PruneRule; 5] = [
        PruneRule::Density,
        PruneRule::PairGcd,
        PruneRule::PrimePower,
        PruneRule::MultiplicityPrimePower2d,
        PruneRule::ComeInPairs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PruneRule::Density => "density",
            PruneRule::PairGcd => "pair-gcd",
            PruneRule::PrimePower => "prime-power",
            PruneRule::MultiplicityPrimePower2d => "multiplicity-prime-power-2d",
            PruneRule::ComeInPairs => "comeinpairs",
        }
    }

    pub fn from_name(s: &str) -> Option<PruneRule> {
        PruneRule::ALL.into_iter().find(|r| r.name() == s)
    }
}

impl fmt::Display for PruneRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub dim: usize,
    pub det_bound: u64,
    pub max_translates: Option<usize>,
    pub pruning: Vec<PruneRule>,
    pub time_budget: Option<Duration>,
    pub parallelism: usize,
    /// When false every tiling is reported, not only translation-free ones.
    pub require_translation_free: bool,
}

impl SearchConfig {
    pub fn new(dim: usize, det_bound: u64) -> Self {
        SearchConfig {
            dim,
            det_bound,
            max_translates: None,
            pruning: PruneRule::ALL.to_vec(),
            time_budget: None,
            parallelism: 1,
            require_translation_free: true,
        }
    }

    pub fn without_pruning(mut self) -> Self {
        self.pruning.clear();
        self
    }

    fn has(&self, r: PruneRule) -> bool {
        self.pruning.contains(&r)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.dim) {
            return Err(Error::Config(format!("dimension {} is outside 1..=3", self.dim)));
        }
        if self.det_bound < 2 {
            return Err(Error::Config("determinant bound must be at least 2".into()));
        }
        if self.max_translates.is_some_and(|n| n < 2) {
            return Err(Error::Config("at least two translates are needed".into()));
        }
        if self.parallelism == 0 {
            return Err(Error::Config("parallelism must be positive".into()));
        }
        if self.has(PruneRule::MultiplicityPrimePower2d) && !self.require_translation_free {
            return Err(Error::Config(
                "the planar multiplicity rule only applies to translation-free searches".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub multisets_total: u64,
    pub multisets_searched: u64,
    pub prunes: BTreeMap<PruneRule, u64>,
    /// Found instances rejected by re-verification; always zero unless there is a bug.
    pub verification_failures: u64,
}

impl SearchStats {
    fn merge(&mut self, other: &SearchStats) {
        self.nodes += other.nodes;
        self.multisets_total += other.multisets_total;
        self.multisets_searched += other.multisets_searched;
        self.verification_failures += other.verification_failures;
        for (k, v) in &other.prunes {
            *self.prunes.entry(*k).or_default() += v;
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub exhausted: bool,
    pub found: Vec<TilingInstance>,
    pub stats: SearchStats,
    pub elapsed: Duration,
}

/// Translation-free tilings with every determinant at most `det_bound`.
pub fn search_translation_free(cfg: &SearchConfig) -> Result<SearchOutcome> {
    if !cfg.require_translation_free {
        return Err(Error::Config("require_translation_free must be set".into()));
    }
    search(cfg)
}

/// All tilings (or only translation-free ones) by at least two translates with
/// determinants at most `det_bound`.
pub fn search(cfg: &SearchConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    let start = Instant::now();
    let deadline = cfg.time_budget.map(|b| start + b);
    let bound = cfg.det_bound;
    let cap: Vec<u64> = (0..=bound)
        .map(|d| if cfg.require_translation_free && d >= 1 { count_sublattices(cfg.dim, d) } else { u64::MAX })
        .collect();
    let rules = MultisetRules {
        det_bound: bound,
        max_len: cfg.max_translates,
        density_tail: cfg.has(PruneRule::Density),
        cap,
    };
    let (all, density_cuts) = enumerate_multisets(&rules);
    let mut stats = SearchStats { multisets_total: all.len() as u64, ..SearchStats::default() };
    if density_cuts > 0 {
        stats.prunes.insert(PruneRule::Density, density_cuts);
    }
    let mut todo = Vec::new();
    for ms in all {
        if cfg.has(PruneRule::PairGcd) && has_coprime_pair(&ms) {
            *stats.prunes.entry(PruneRule::PairGcd).or_default() += 1;
        } else if cfg.has(PruneRule::PrimePower) && has_lonely_prime_power(&ms) {
            *stats.prunes.entry(PruneRule::PrimePower).or_default() += 1;
        } else {
            todo.push(ms);
        }
    }
    for ms in &todo {
        let m = ms.iter().fold(1u64, |a, d| a.lcm(d));
        if (m as u128).pow(cfg.dim as u32) > MAX_BOX_POINTS as u128 {
            return Err(Error::BoxTooLarge { volume: (m as u128).pow(cfg.dim as u32), cap: MAX_BOX_POINTS });
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallelism)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let results: Vec<(Vec<TilingInstance>, SearchStats, bool)> =
        pool.install(|| todo.par_iter().map(|ms| solve_multiset(cfg, ms, deadline)).collect());
    let mut found = Vec::new();
    let mut exhausted = true;
    for (f, s, done) in results {
        found.extend(f);
        stats.merge(&s);
        exhausted &= done;
    }
    found.sort_by(|a, b| a.translates().cmp(b.translates()));
    for t in &found {
        let ok = is_tiling_box_oracle(t)?.is_tiling
            && verify_character_formula(t)?.is_tiling
            && (!cfg.require_translation_free || translation_pairs(t).is_empty());
        if !ok {
            stats.verification_failures += 1;
        }
    }
    Ok(SearchOutcome { exhausted, found, stats, elapsed: start.elapsed() })
}

fn solve_multiset(cfg: &SearchConfig, ms: &[u64], deadline: Option<Instant>) -> (Vec<TilingInstance>, SearchStats, bool) {
    let mut stats = SearchStats { multisets_searched: 1, ..SearchStats::default() };
    if deadline.is_some_and(|d| Instant::now() >= d) {
        return (Vec::new(), stats, false);
    }
    let m = ms.iter().fold(1u64, |a, d| a.lcm(d));
    let mut groups: Vec<Group> = Vec::new();
    for &d in ms {
        match groups.last_mut() {
            Some(g) if g.det == d => g.count += 1,
            _ => groups.push(Group {
                det: d,
                count: 1,
                candidates: enumerate_sublattices(cfg.dim, d)
                    .into_iter()
                    .map(|l| Candidate::new(l, m, cfg.dim))
                    .collect(),
            }),
        }
    }
    let mut cover = Cover::new(
        cfg.dim,
        m,
        groups,
        cfg.require_translation_free,
        cfg.has(PruneRule::ComeInPairs),
        cfg.has(PruneRule::MultiplicityPrimePower2d),
        deadline,
        &mut stats,
    );
    cover.run();
    let done = !cover.timed_out;
    let found = std::mem::take(&mut cover.found);
    (found, stats, done)
}
