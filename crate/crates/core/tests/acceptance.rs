//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness; exits nonzero when any criterion fails.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tiling_core::characters::DualPoint;
use tiling_core::cyclo::cyclo_is_zero;
use tiling_core::format::parse_instance;
use tiling_core::genfun::{lattice_numerator, r_vanishing_check, translate_numerator_identity_check, verify_fund_identity};
use tiling_core::linalg::{hermite_normal_form, smith_normal_form};
use tiling_core::random::{mutate_offset, random_sublattice, random_tiling};

use tiling_core::search::{classify_up_to_structure, search_translation_free, SearchConfig};
use tiling_core::tiling::{
    check_theorems, density_sum, dual_union, is_tiling_box_oracle, is_tiling_fast, translation_pairs,
    verify_character_formula,
};
use tiling_core::{CycloSum, IntMatrix, Lattice, LatticeTranslate, TilingInstance};

const SEED: u64 = 0x5eed_0001;
const RANDOM_INSTANCES: usize = 1000;
const NUMERATOR_LATTICES: usize = 500;
const CYCLO_SAMPLES: usize = 1000;
const MATRIX_SAMPLES: usize = 1000;
/// Fixed-point precision of the numerical oracle and the bits demanded for zero.
const ORACLE_BITS: u64 = 240;
const ZERO_BITS: u64 = 200;

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

fn run(name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let in_time = elapsed < limit;
    let ok = out.ok && in_time;
    let timing = if in_time { String::new() } else { format!(" over limit {limit:?}") };
    println!(
        "{} {name} ({:.2}s{timing}): {}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        out.detail
    );
    ok
}

fn jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn load(name: &str) -> TilingInstance {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "instances", name].iter().collect();
    parse_instance(&std::fs::read_to_string(path).unwrap()).unwrap()
}

// ---------------------------------------------------------------- criterion 1

/// Dual points of the four-lattice example as printed, members 0..4 in file order.
const PUBLISHED_DUALS: [[[i8; 3]; 3]; 4] = [
    [[1, -1, 1], [-1, 1, 1], [-1, -1, 1]],
    [[1, 1, -1], [-1, 1, 1], [-1, 1, -1]],
    [[1, 1, -1], [1, -1, 1], [1, -1, -1]],
    [[1, -1, -1], [-1, 1, -1], [-1, -1, 1]],
];

fn criterion_four_lattice() -> Outcome {
    let t = load("four-lattice-3d.tiling");
    let methods = [
        ("box", is_tiling_box_oracle(&t).unwrap().is_tiling),
        ("fast", is_tiling_fast(&t).unwrap().is_tiling),
        ("character", verify_character_formula(&t).unwrap().is_tiling),
    ];
    if let Some((m, _)) = methods.iter().find(|(_, v)| !v) {
        return fail(format!("{m} rejects the instance"));
    }
    if !translation_pairs(&t).is_empty() {
        return fail("translation pairs present");
    }
    let mut expected: BTreeMap<DualPoint, Vec<usize>> = BTreeMap::new();
    expected.insert(DualPoint::identity(3), vec![0, 1, 2, 3]);
    for (j, pts) in PUBLISHED_DUALS.iter().enumerate() {
        for s in pts {
            expected.entry(DualPoint::from_signs(s)).or_default().push(j);
        }
    }
    let got = dual_union(&t);
    if got != expected {
        return fail(format!("incidence table differs: {got:?}"));
    }
    let sign_points: usize = got.keys().filter(|z| !z.is_identity()).count();
    let twice = got.iter().filter(|(z, _)| !z.is_identity()).all(|(_, m)| m.len() == 2);
    let absent = !got.contains_key(&DualPoint::from_signs(&[-1, -1, -1]));
    if sign_points != 6 || !twice || !absent {
        return fail("sign points not paired");
    }
    pass("3 methods agree, no translation pairs, 7 dual points match the published table")
}

// ---------------------------------------------------------------- criterion 2

struct Sample {
    instance: TilingInstance,
    valid: bool,
}

fn samples() -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = Vec::with_capacity(RANDOM_INSTANCES);
    while out.len() < RANDOM_INSTANCES {
        let dim = rng.gen_range(1..=3);
        let splits = rng.gen_range(1..=6);
        let t = random_tiling(&mut rng, dim, 24, splits);
        if out.len() % 2 == 0 {
            out.push(Sample { instance: t, valid: true });
        } else if let Some(m) = mutate_offset(&mut rng, &t) {
            out.push(Sample { instance: m, valid: false });
        }
    }
    out
}

fn criterion_equivalence(samples: &[Sample]) -> Outcome {
    let mut exceptions = Vec::new();
    for (i, s) in samples.iter().enumerate() {
        let b = is_tiling_box_oracle(&s.instance).unwrap().is_tiling;
        let f = is_tiling_fast(&s.instance).unwrap().is_tiling;
        let c = verify_character_formula(&s.instance).unwrap().is_tiling;
        if b != f || f != c || c != s.valid {
            exceptions.push(format!("#{i}: box={b} fast={f} character={c} built={}", s.valid));
        }
    }
    let valid = samples.iter().filter(|s| s.valid).count();
    if exceptions.is_empty() {
        pass(format!("{} instances ({valid} tilings), zero exceptions", samples.len()))
    } else {
        fail(format!("{} exceptions, first {}", exceptions.len(), exceptions[0]))
    }
}

// ---------------------------------------------------------------- criterion 3

fn criterion_theorems(samples: &[Sample]) -> Outcome {
    let mut checked = 0;
    let mut applied: BTreeMap<String, usize> = BTreeMap::new();
    for s in samples.iter().filter(|s| s.valid) {
        if density_sum(&s.instance) != BigRational::one() {
            return fail("density sum differs from 1");
        }
        let r = check_theorems(&s.instance, true).unwrap();
        if let Some((name, o)) = r.failures().first() {
            return fail(format!("{name}: {o:?}"));
        }
        for (name, o) in &r.checks {
            if !matches!(o, tiling_core::tiling::CheckOutcome::NotApplicable) {
                *applied.entry(name.clone()).or_default() += 1;
            }
        }
        checked += 1;
    }
    pass(format!("{checked} tilings, zero failures; applied counts {applied:?}"))
}

// ---------------------------------------------------------------- criterion 4

fn criterion_planar_search() -> Outcome {
    let mut cfg = SearchConfig::new(2, 12).without_pruning();
    cfg.parallelism = jobs();
    let a = search_translation_free(&cfg).unwrap();
    if !a.exhausted || !a.found.is_empty() {
        return fail(format!("bound 12 unpruned: exhausted={} found={}", a.exhausted, a.found.len()));
    }
    let mut cfg = SearchConfig::new(2, 16);
    cfg.parallelism = jobs();
    let b = search_translation_free(&cfg).unwrap();
    if !b.exhausted || !b.found.is_empty() {
        return fail(format!("bound 16 pruned: exhausted={} found={}", b.exhausted, b.found.len()));
    }
    pass(format!(
        "bound 12 unpruned exhausted in {:.1}s ({} nodes), bound 16 pruned exhausted in {:.1}s ({} nodes), none found",
        a.elapsed.as_secs_f64(),
        a.stats.nodes,
        b.elapsed.as_secs_f64(),
        b.stats.nodes
    ))
}

// ---------------------------------------------------------------- criterion 5

fn criterion_four_translates() -> Outcome {
    let mut cfg = SearchConfig::new(3, 4);
    cfg.max_translates = Some(4);
    cfg.parallelism = jobs();
    let out = search_translation_free(&cfg).unwrap();
    if !out.exhausted {
        return fail("search with at most 4 translates did not exhaust");
    }
    let found: Vec<TilingInstance> = out.found.iter().filter(|t| t.len() == 4).cloned().collect();
    if found.is_empty() || found.len() != out.found.len() {
        return fail(format!("{} found, {} with 4 translates", out.found.len(), found.len()));
    }
    let four = BigInt::from(4);
    for t in &found {
        if t.determinants().iter().any(|d| *d != four) {
            return fail(format!("determinants {:?}", t.determinants()));
        }
        if t.translates().iter().any(|x| x.lattice().is_cyclic()) {
            return fail("a member lattice is cyclic");
        }
    }
    let mut all = vec![load("four-lattice-3d.tiling")];
    all.extend(found.iter().cloned());
    let classes = classify_up_to_structure(&all);
    if classes.len() != 1 {
        return fail(format!("{} incidence classes", classes.len()));
    }
    let mut cfg3 = cfg.clone();
    cfg3.max_translates = Some(3);
    let three = search_translation_free(&cfg3).unwrap();
    if !three.exhausted || !three.found.is_empty() {
        return fail(format!("at most 3 translates: exhausted={} found={}", three.exhausted, three.found.len()));
    }
    pass(format!(
        "{} tilings with 4 translates, all determinants 4, non-cyclic, one incidence class with the example; none with at most 3",
        found.len()
    ))
}

// ---------------------------------------------------------------- criterion 6

fn box_count(l: &Lattice) -> usize {
    let t: Vec<i64> = l.polar_values().iter().map(|x| x.to_i64().unwrap()).collect();
    let total: i64 = t.iter().product();
    (0..total)
        .filter(|&i| {
            let mut r = i;
            let p: Vec<BigInt> = t
                .iter()
                .map(|&tk| {
                    let c = r % tk;
                    r /= tk;
                    BigInt::from(c)
                })
                .collect();
            l.contains(&p).unwrap()
        })
        .count()
}

fn root_points(l: &Lattice) -> Vec<DualPoint> {
    let t: Vec<i64> = l.polar_values().iter().map(|x| x.to_i64().unwrap()).collect();
    let total: i64 = t.iter().product();
    (0..total)
        .map(|i| {
            let mut r = i;
            DualPoint::new(
                t.iter()
                    .map(|&tk| {
                        let c = r % tk;
                        r /= tk;
                        BigRational::new(c.into(), tk.into())
                    })
                    .collect(),
            )
        })
        .collect()
}

fn criterion_generating_function(samples: &[Sample]) -> Outcome {
    for (i, s) in samples.iter().enumerate() {
        let g = verify_fund_identity(&s.instance).unwrap();
        if g != s.valid {
            return fail(format!("instance #{i}: identity={g} box={}", s.valid));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    for _ in 0..NUMERATOR_LATTICES {
        let dim = rng.gen_range(1..=3);
        let index = rng.gen_range(1..=24);
        let l = random_sublattice(&mut rng, dim, index);
        let polar: BigInt = l.polar_values().iter().product();
        let want = (polar / l.determinant()).to_usize().unwrap();
        let got = lattice_numerator(&l).unwrap().len();
        if got != want || got != box_count(&l) {
            return fail(format!("numerator of {l:?}: {got} terms, expected {want}"));
        }
    }
    let mut points = 0usize;
    for _ in 0..60 {
        let dim = rng.gen_range(1..=3);
        let index = rng.gen_range(2..=8);
        let l = random_sublattice(&mut rng, dim, index);
        let off: Vec<BigInt> = (0..dim).map(|_| BigInt::from(rng.gen_range(-5..=5))).collect();
        let tr = LatticeTranslate::new(l.clone(), &off).unwrap();
        for z in root_points(&l) {
            if !r_vanishing_check(&l, &z).unwrap() || !translate_numerator_identity_check(&tr, &z).unwrap() {
                return fail(format!("root point {z} of {l:?}"));
            }
            points += 1;
        }
    }
    pass(format!(
        "identity agrees with box on {} instances; {NUMERATOR_LATTICES} numerator counts; {points} root points checked",
        samples.len()
    ))
}

// ---------------------------------------------------------------- criterion 7

struct Fixed {
    one: BigInt,
    pi: BigInt,
}

impl Fixed {
    fn new() -> Self {
        let one = BigInt::one() << ORACLE_BITS;
        let pi = Self::atan_inv(&one, 5) * 16 - Self::atan_inv(&one, 239) * 4;
        Fixed { one, pi }
    }

    fn atan_inv(one: &BigInt, x: i64) -> BigInt {
        let x2 = BigInt::from(x * x);
        let mut power = one / x;
        let mut sum = BigInt::zero();
        let mut k = 0i64;
        while !power.is_zero() {
            let term = &power / (2 * k + 1);
            if k % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
            power /= &x2;
            k += 1;
        }
        sum
    }

    /// `(cos, sin)` of `2 pi a / n` scaled by `one`.
    fn cis(&self, a: i64, n: i64) -> (BigInt, BigInt) {
        let a = if 2 * a > n { a - n } else { a };
        let theta = &self.pi * 2 * a / n;
        let (mut c, mut s) = (BigInt::zero(), BigInt::zero());
        let mut term = self.one.clone();
        let mut k = 0i64;
        while !term.is_zero() {
            match k % 4 {
                0 => c += &term,
                1 => s += &term,
                2 => c -= &term,
                _ => s -= &term,
            }
            k += 1;
            term = term * &theta / &self.one / k;
        }
        (c, s)
    }

    fn is_zero(&self, s: &CycloSum) -> bool {
        let n = s.order() as i64;
        let (mut re, mut im) = (BigInt::zero(), BigInt::zero());
        for (e, coeff) in s.terms() {
            let (c, si) = self.cis(*e as i64, n);
            re += c * coeff.numer() / coeff.denom();
            im += si * coeff.numer() / coeff.denom();
        }
        let eps = BigInt::one() << (ORACLE_BITS - ZERO_BITS);
        re.abs() < eps && im.abs() < eps
    }
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let mut q = BigRational::new(rng.gen_range(-6..=6).into(), rng.gen_range(1..=4).into());
    if q.is_zero() {
        q = BigRational::one();
    }
    q
}

fn random_cyclo(rng: &mut ChaCha8Rng) -> CycloSum {
    let n: u64 = rng.gen_range(1..=60);
    let mut s = CycloSum::zero(n);
    let primes: Vec<u64> = (2..=n).filter(|p| n.is_multiple_of(*p) && (2..*p).all(|q| p % q != 0)).collect();
    if rng.gen_bool(0.6) && !primes.is_empty() {
        // sums of rotated full sets of p-th roots vanish
        for _ in 0..rng.gen_range(1..=4) {
            let p = primes[rng.gen_range(0..primes.len())];
            let r = rng.gen_range(0..n);
            let c = random_rational(rng);
            for k in 0..p {
                s = s.add(&CycloSum::term(n, (r + k * n / p) % n, c.clone()));
            }
        }
        if rng.gen_bool(0.3) {
            s = s.add(&CycloSum::term(n, rng.gen_range(0..n), random_rational(rng)));
        }
    } else {
        for _ in 0..rng.gen_range(1..=8) {
            s = s.add(&CycloSum::term(n, rng.gen_range(0..n), random_rational(rng)));
        }
    }
    s
}

fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| *x).collect()).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det_i128(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect()
}

/// Invariant factors as ratios of gcds of k-minors.
fn invariant_factors_by_minors(m: &[Vec<i128>]) -> Vec<i128> {
    let n = m.len();
    let mut prev = 1i128;
    let mut out = Vec::new();
    for k in 1..=n {
        let mut g = 0i128;
        for rows in subsets(n, k) {
            for cols in subsets(n, k) {
                let sub: Vec<Vec<i128>> = rows.iter().map(|&r| cols.iter().map(|&c| m[r][c]).collect()).collect();
                g = g.gcd(&det_i128(&sub));
            }
        }
        out.push(g / prev);
        prev = g;
    }
    out
}

/// Column `v` lies in the column span of lower-triangular `h`.
fn in_lower_span(h: &IntMatrix, v: &[BigInt]) -> bool {
    let mut r = v.to_vec();
    for i in 0..h.rows() {
        let (q, rem) = r[i].div_rem(h.get(i, i));
        if !rem.is_zero() {
            return false;
        }
        for k in i..h.rows() {
            r[k] -= &q * h.get(k, i);
        }
    }
    true
}

fn criterion_exact_arithmetic() -> Outcome {
    let oracle = Fixed::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let mut zeros = 0;
    for i in 0..CYCLO_SAMPLES {
        let s = random_cyclo(&mut rng);
        let exact = cyclo_is_zero(&s);
        if exact != oracle.is_zero(&s) {
            return fail(format!("sample {i}: exact={exact} numeric disagrees for {:?}", s.terms()));
        }
        zeros += exact as usize;
    }
    if !(CYCLO_SAMPLES / 5..=CYCLO_SAMPLES * 4 / 5).contains(&zeros) {
        return fail(format!("unbalanced sample: {zeros} zeros"));
    }
    for i in 0..MATRIX_SAMPLES {
        let n = rng.gen_range(1..=4);
        let rows: Vec<Vec<i128>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-20..=20)).collect()).collect();
        let d = det_i128(&rows);
        if d == 0 {
            continue;
        }
        let m = IntMatrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect::<Vec<Vec<i64>>>())
            .unwrap();
        let h = hermite_normal_form(&m).unwrap();
        let mut diag = BigInt::one();
        for r in 0..n {
            let hr = h.get(r, r);
            diag *= hr;
            for c in 0..n {
                let x = h.get(r, c);
                let shaped = if c > r { x.is_zero() } else if c < r { !x.is_negative() && x < hr } else { hr.is_positive() };
                if !shaped {
                    return fail(format!("matrix {i}: HNF shape"));
                }
            }
        }
        if diag != BigInt::from(d.abs()) || !m.columns().iter().all(|c| in_lower_span(&h, c)) {
            return fail(format!("matrix {i}: HNF spans a different lattice"));
        }
        let s = smith_normal_form(&m).unwrap();
        let want: Vec<BigInt> = invariant_factors_by_minors(&rows).into_iter().map(|x| BigInt::from(x.abs())).collect();
        if s.diag != want || s.left.mul(&m).unwrap().mul(&s.right).unwrap() != s.diagonal_matrix() {
            return fail(format!("matrix {i}: SNF {:?} vs minors {want:?}", s.diag));
        }
    }
    pass(format!("{CYCLO_SAMPLES} sums ({zeros} zero) match the {ZERO_BITS}-bit oracle; {MATRIX_SAMPLES} matrices"))
}

fn main() {
    let samples = samples();
    let results = [
        run("1 four-lattice example", Duration::from_secs(1), criterion_four_lattice),
        run("2 verification equivalence", Duration::from_secs(120), || criterion_equivalence(&samples)),
        run("3 theorem suite", Duration::from_secs(120), || criterion_theorems(&samples)),
        run("4 planar translation-free search", Duration::from_secs(600), criterion_planar_search),
        run("5 four-translate classification", Duration::from_secs(300), criterion_four_translates),
        run("6 generating-function identities", Duration::from_secs(120), || criterion_generating_function(&samples)),
        run("7 exact arithmetic", Duration::from_secs(60), criterion_exact_arithmetic),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
