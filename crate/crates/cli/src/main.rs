//! `lattice-tiling`: inspect, verify and search lattice tilings of `Z^d`.
//!
//! Exit codes: 0 success (or "is a tiling"), 1 negative verdict, 2 error,
//! 3 verification methods disagree.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use tiling_core::characters::dual_group;
use tiling_core::format::{emit_instance, parse_instance};
use tiling_core::genfun::{fund_identity_dump, lattice_numerator, verify_fund_identity};
use tiling_core::lattice::fmt_vec;
use tiling_core::search::{classify_up_to_structure, search, PruneRule, SearchConfig, SearchOutcome};
use tiling_core::tiling::{
    check_theorems, density_sum, dual_union, find_split, is_tiling_box_oracle, is_tiling_fast,
    translation_pairs, verify_character_formula, VerificationReport,
};
use tiling_core::{Error, TilingInstance};

const EXIT_NO: u8 = 1;
const EXIT_ERROR: u8 = 2;
const EXIT_DISAGREE: u8 = 3;

#[derive(Parser)]
#[command(name = "lattice-tiling", version, about = "Exact tools for lattice tilings of Z^d")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyMethod {
    Box,
    Character,
    Fast,
    Genfun,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Per-translate invariants and an overall verdict.
    Analyze { file: PathBuf },
    /// Decide whether the instance tiles Z^d.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        method: VerifyMethod,
        /// Also evaluate the necessary conditions on tilings.
        #[arg(long)]
        theorems: bool,
    },
    /// Exhaustive search for tilings without a repeated lattice.
    Search {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        det_bound: u64,
        /// Upper bound on the number of translates.
        #[arg(long, alias = "translates")]
        max_translates: Option<usize>,
        /// Comma-separated prune rules, or "none"; all rules by default.
        #[arg(long, value_delimiter = ',')]
        prune: Option<Vec<String>>,
        /// Wall-clock budget in seconds.
        #[arg(long)]
        time_budget: Option<u64>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Report every tiling, not only those without a repeated lattice.
        #[arg(long)]
        all_tilings: bool,
        /// Directory for found instances; printed to stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Look for a proper sub-family filling a single coset.
    SplitCheck {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_subset: usize,
    },
    /// Dual groups of all members and their incidence.
    Dualgroup { file: PathBuf },
    /// Generating functions of all members and the tiling identity.
    GenfunDump { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn load(path: &Path) -> Result<TilingInstance, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_instance(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cmd: Command) -> Result<u8, String> {
    let core = |e: Error| e.to_string();
    match cmd {
        Command::Analyze { file } => {
            let t = load(&file)?;
            print!("{}", analyze(&t).map_err(core)?);
            Ok(0)
        }
        Command::Verify { file, method, theorems } => {
            let t = load(&file)?;
            verify(&t, method, theorems).map_err(core)
        }
        Command::Search { dim, det_bound, max_translates, prune, time_budget, jobs, all_tilings, out } => {
            let mut cfg = SearchConfig::new(dim, det_bound);
            cfg.max_translates = max_translates;
            cfg.parallelism = jobs;
            cfg.time_budget = time_budget.map(Duration::from_secs);
            cfg.require_translation_free = !all_tilings;
            if let Some(names) = prune {
                cfg.pruning = parse_prunes(&names)?;
            } else if all_tilings {
                cfg.pruning.retain(|r| *r != PruneRule::MultiplicityPrimePower2d);
            }
            let outcome = search(&cfg).map_err(core)?;
            report_search(&cfg, &outcome, out.as_deref())?;
            Ok(if outcome.exhausted { 0 } else { EXIT_NO })
        }
        Command::SplitCheck { file, max_subset } => {
            let t = load(&file)?;
            match find_split(&t, max_subset) {
                Ok(Some(s)) => {
                    let idx: Vec<String> = s.subset.iter().map(|i| i.to_string()).collect();
                    println!("split: translates {{{}}} fill {}", idx.join(", "), s.coset);
                    for &i in &s.subset {
                        println!("  [{i}] {}", t.translates()[i]);
                    }
                    Ok(0)
                }
                Ok(None) => {
                    println!("primitive (within budget: subsets of size 2..={})", max_subset.min(t.len().saturating_sub(1)));
                    Ok(0)
                }
                Err(e @ Error::SubsetBudget { .. }) => Err(format!("subset budget exceeded: {e}")),
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Dualgroup { file } => {
            let t = load(&file)?;
            print!("{}", dual_report(&t));
            Ok(0)
        }
        Command::GenfunDump { file } => {
            let t = load(&file)?;
            print!("{}", fund_identity_dump(&t).map_err(core)?);
            let ok = verify_fund_identity(&t).map_err(core)?;
            println!("identity holds: {ok}");
            Ok(0)
        }
    }
}

fn parse_prunes(names: &[String]) -> Result<Vec<PruneRule>, String> {
    if names.len() == 1 && names[0] == "none" {
        return Ok(Vec::new());
    }
    names
        .iter()
        .map(|n| {
            PruneRule::from_name(n).ok_or_else(|| {
                let known: Vec<&str> = PruneRule::ALL.iter().map(|r| r.name()).collect();
                format!("unknown prune rule '{n}' (known: {}, none)", known.join(", "))
            })
        })
        .collect()
}

fn analyze(t: &TilingInstance) -> tiling_core::Result<String> {
    let mut s = String::new();
    writeln!(s, "dimension {}, {} translate(s)", t.dim(), t.len()).unwrap();
    for (i, tr) in t.translates().iter().enumerate() {
        let l = tr.lattice();
        writeln!(s, "[{i}] {tr}").unwrap();
        writeln!(s, "    determinant       {}", l.determinant()).unwrap();
        writeln!(s, "    polar values      {}", fmt_vec(l.polar_values())).unwrap();
        writeln!(s, "    invariant factors {}", fmt_vec(l.invariant_factors())).unwrap();
        writeln!(s, "    exponent          {}", l.exponent()).unwrap();
        writeln!(s, "    multiplicity      {}", l.multiplicity()).unwrap();
        writeln!(s, "    cyclic            {}", if l.is_cyclic() { "yes" } else { "no" }).unwrap();
        writeln!(s, "    box numerator     {} term(s)", lattice_numerator(l)?.len()).unwrap();
    }
    writeln!(s, "density sum {}", density_sum(t)).unwrap();
    let pairs = translation_pairs(t);
    if pairs.is_empty() {
        writeln!(s, "repeated lattices: none").unwrap();
    } else {
        let p: Vec<String> = pairs.iter().map(|(a, b)| format!("({a}, {b})")).collect();
        writeln!(s, "repeated lattices: {}", p.join(" ")).unwrap();
    }
    let fast = is_tiling_fast(t)?;
    writeln!(s, "tiling: {}", if fast.is_tiling { "yes" } else { "no" }).unwrap();
    for w in &fast.witnesses {
        writeln!(s, "  witness: {w}").unwrap();
    }
    if fast.is_tiling {
        let r = check_theorems(t, true)?;
        for (name, outcome) in &r.checks {
            writeln!(s, "  {name:<34} {outcome}").unwrap();
        }
        for n in &r.notes {
            writeln!(s, "  note: {n}").unwrap();
        }
    }
    Ok(s)
}

fn print_report(r: &VerificationReport) {
    println!(
        "{}: {} ({} checked)",
        r.method,
        if r.is_tiling { "tiling" } else { "not a tiling" },
        r.points_checked
    );
    for w in &r.witnesses {
        println!("  witness: {w}");
    }
}

fn verify(t: &TilingInstance, method: VerifyMethod, theorems: bool) -> tiling_core::Result<u8> {
    let mut verdicts = Vec::new();
    let mut run_one = |m: VerifyMethod| -> tiling_core::Result<()> {
        match m {
            VerifyMethod::Box => {
                let r = is_tiling_box_oracle(t)?;
                print_report(&r);
                verdicts.push(r.is_tiling);
            }
            VerifyMethod::Character => {
                let r = verify_character_formula(t)?;
                print_report(&r);
                verdicts.push(r.is_tiling);
            }
            VerifyMethod::Fast => {
                let r = is_tiling_fast(t)?;
                print_report(&r);
                verdicts.push(r.is_tiling);
            }
            VerifyMethod::Genfun => {
                let ok = verify_fund_identity(t)?;
                println!("generating-function: {}", if ok { "tiling" } else { "not a tiling" });
                verdicts.push(ok);
            }
            VerifyMethod::All => unreachable!(),
        }
        Ok(())
    };
    if method == VerifyMethod::All {
        for m in [VerifyMethod::Box, VerifyMethod::Fast, VerifyMethod::Character, VerifyMethod::Genfun] {
            run_one(m)?;
        }
    } else {
        run_one(method)?;
    }
    if verdicts.iter().any(|&v| v != verdicts[0]) {
        println!("methods disagree");
        return Ok(EXIT_DISAGREE);
    }
    let tiles = verdicts[0];
    if theorems {
        let r = check_theorems(t, tiles)?;
        for (name, outcome) in &r.checks {
            println!("  {name:<34} {outcome}");
        }
        for n in &r.notes {
            println!("  note: {n}");
        }
    }
    Ok(if tiles { 0 } else { EXIT_NO })
}

fn dual_report(t: &TilingInstance) -> String {
    let mut s = String::new();
    for (i, tr) in t.translates().iter().enumerate() {
        let g = dual_group(tr.lattice());
        writeln!(s, "[{i}] {} : {} point(s)", tr.lattice(), g.len()).unwrap();
        for z in g {
            let signs = z.as_signs().map(|v| format!("  {v:?}")).unwrap_or_default();
            writeln!(s, "    {z}  order {}{signs}", z.order()).unwrap();
        }
    }
    writeln!(s, "incidence:").unwrap();
    for (z, members) in dual_union(t) {
        let m: Vec<String> = members.iter().map(|j| j.to_string()).collect();
        writeln!(s, "    {z}  in {{{}}}", m.join(", ")).unwrap();
    }
    s
}

fn report_search(cfg: &SearchConfig, out: &SearchOutcome, dir: Option<&Path>) -> Result<(), String> {
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    }
    for (k, t) in out.found.iter().enumerate() {
        let text = emit_instance(t);
        match dir {
            Some(dir) => {
                let path = dir.join(format!("found-{:04}.tiling", k + 1));
                std::fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?;
            }
            None => print!("# found {}\n{text}\n", k + 1),
        }
    }
    let what = if cfg.require_translation_free { "translation-free tiling" } else { "tiling" };
    if out.found.is_empty() {
        println!("no {what} found; {}", if out.exhausted { "exhausted" } else { "NOT exhausted (budget)" });
    } else {
        println!(
            "{} {what}(s) found; {}",
            out.found.len(),
            if out.exhausted { "exhausted" } else { "NOT exhausted (budget)" }
        );
        let classes = classify_up_to_structure(&out.found);
        println!("incidence classes: {}", classes.len());
    }
    let st = &out.stats;
    println!(
        "multisets {} (searched {}), nodes {}, verification failures {}",
        st.multisets_total, st.multisets_searched, st.nodes, st.verification_failures
    );
    for r in PruneRule::ALL {
        let on = cfg.pruning.contains(&r);
        let n = st.prunes.get(&r).copied().unwrap_or(0);
        println!("  prune {:<28} {}", r.name(), if on { n.to_string() } else { "off".into() });
    }
    Ok(())
}
