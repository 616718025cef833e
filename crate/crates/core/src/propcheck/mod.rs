//! Random theories and the property checks that compare Skolemized
//! theories against the brute-force counter.

mod gen;
mod ladder;
mod shrink;

use std::fmt;
use std::ops::Range;

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

pub use gen::{gen_query, gen_theory, GenConfig, GEN_CONSTANT};
pub use ladder::{check_proof_ladder, CaseRow, CaseTable, LadderReport, LadderRow};
pub use shrink::shrink;

use crate::ground::{
    brute_force_cap, ground, ground_tseitin, wmc_bruteforce, wmc_bruteforce_capped, wmc_dpll,
    CountError,
};
use crate::logic::{Domain, Formula, LogicError, Quantifier, Weight, WeightedTheory};
use crate::parse::print_theory;
use crate::transform::{
    innermost_site, internal_quantifiers, skolemize_with, unit_propagate, FreshNamer, SkolemConfig,
    TransformError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// Exact count: brute force within the cap, DPLL above it.
pub fn oracle_count(t: &WeightedTheory, d: &Domain) -> Result<BigRational, CountError> {
    let g = ground(t, d)?;
    if g.base.len() <= brute_force_cap() {
        wmc_bruteforce(&g)
    } else {
        wmc_dpll(&ground_tseitin(&g)?)
    }
}

/// Full elimination for every site, as checked by default.
pub fn full_elimination() -> SkolemConfig {
    SkolemConfig {
        use_shortcut: false,
        ..SkolemConfig::default()
    }
}

/// Full elimination with Skolem predicates weighted `(1, 1)`.
pub fn sabotage_skolem_weight() -> SkolemConfig {
    SkolemConfig {
        skolem_false_weight: Weight::one(),
        ..full_elimination()
    }
}

/// Full elimination that treats `forall` sites as `exists` sites.
pub fn sabotage_forall_rewrite() -> SkolemConfig {
    SkolemConfig {
        rewrite_forall: false,
        ..full_elimination()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub theory: WeightedTheory,
    pub query: Option<Formula>,
    pub size: usize,
    pub expected: BigRational,
    pub got: BigRational,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_theory(&self.theory, None))?;
        if let Some(q) = &self.query {
            writeln!(f, "query: {q}")?;
        }
        write!(
            f,
            "domain size {}: expected {}, got {}",
            self.size, self.expected, self.got
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Pass,
    Fail(Box<Counterexample>),
    /// The original theory exceeds the brute-force cap.
    Skipped(String),
    /// The query mentions predicates outside the original theory.
    Unsupported(String),
}

fn skolemized(t: &WeightedTheory, cfg: &SkolemConfig) -> WeightedTheory {
    let mut namer = FreshNamer::for_theory(t);
    skolemize_with(t, cfg, &mut namer)
        .expect("sites come from the driver")
        .0
}

fn domain(t: &WeightedTheory, extra: Option<&Formula>, n: usize) -> Result<Domain, LogicError> {
    let mut named = t.constants();
    if let Some(f) = extra {
        f.collect_constants(&mut named);
    }
    Domain::with_size(n, &named)
}

/// The original count at size `n` by brute force, or why it was skipped.
fn original_count(t: &WeightedTheory, d: &Domain, cap: usize) -> Result<BigRational, String> {
    let g = ground(t, d).map_err(|e| e.to_string())?;
    if g.base.len() > cap {
        return Err(format!("{} atoms exceed the cap of {cap}", g.base.len()));
    }
    wmc_bruteforce_capped(&g, cap).map_err(|e| e.to_string())
}

fn compare(
    original: &WeightedTheory,
    transformed: &[&WeightedTheory],
    query: Option<&Formula>,
    sizes: &[usize],
    cap: usize,
) -> Outcome {
    let mut sizes = sizes.to_vec();
    sizes.sort_unstable();
    for n in sizes {
        let d = match domain(original, query, n) {
            Ok(d) => d,
            Err(e) => return Outcome::Skipped(e.to_string()),
        };
        let with = |t: &WeightedTheory| match query {
            Some(q) => t.conjoin(q.clone()),
            None => t.clone(),
        };
        let expected = match original_count(&with(original), &d, cap) {
            Ok(c) => c,
            Err(e) => return Outcome::Skipped(e),
        };
        for t in transformed {
            let got = match oracle_count(&with(t), &d) {
                Ok(c) => c,
                Err(e) => return Outcome::Skipped(e.to_string()),
            };
            if got != expected {
                return Outcome::Fail(Box::new(Counterexample {
                    theory: original.clone(),
                    query: query.cloned(),
                    size: n,
                    expected,
                    got,
                }));
            }
        }
    }
    Outcome::Pass
}

/// Compares the count of `t` with that of its Skolemization, before and
/// after unit propagation, at each size in increasing order. A failure
/// reports the smallest failing size.
pub fn check_soundness(t: &WeightedTheory, sizes: &[usize], cfg: &SkolemConfig) -> Outcome {
    soundness(t, sizes, cfg, brute_force_cap())
}

fn soundness(t: &WeightedTheory, sizes: &[usize], cfg: &SkolemConfig, cap: usize) -> Outcome {
    let sk = skolemized(t, cfg);
    let prop = unit_propagate(&sk);
    compare(t, &[&sk, &prop], None, sizes, cap)
}

/// Compares `WFOMC(t & phi)` with `WFOMC(t' & phi)` for the Skolemization
/// `t'` of `t` and every query from `queries` at each size.
pub fn check_modularity(
    t: &WeightedTheory,
    queries: impl Fn(&Domain) -> Vec<Formula>,
    sizes: &[usize],
    cfg: &SkolemConfig,
) -> Outcome {
    modularity(t, queries, sizes, cfg, brute_force_cap())
}

fn modularity(
    t: &WeightedTheory,
    queries: impl Fn(&Domain) -> Vec<Formula>,
    sizes: &[usize],
    cfg: &SkolemConfig,
    cap: usize,
) -> Outcome {
    let sk = skolemized(t, cfg);
    let own = t.predicates();
    let mut sizes = sizes.to_vec();
    sizes.sort_unstable();
    for n in sizes {
        let d = match domain(t, None, n) {
            Ok(d) => d,
            Err(e) => return Outcome::Skipped(e.to_string()),
        };
        for q in queries(&d) {
            if let Some(p) = q.predicates().iter().find(|p| !own.contains(p)) {
                return Outcome::Unsupported(format!(
                    "query mentions {p}, which is not a predicate of the original theory"
                ));
            }
            let out = compare(t, &[&sk], Some(&q), &[n], cap);
            if out != Outcome::Pass {
                return out;
            }
        }
    }
    Outcome::Pass
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    Soundness,
    Modularity,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Soundness => "soundness",
            Property::Modularity => "modularity",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub property: Property,
    pub sizes: Vec<usize>,
    pub passed: usize,
    pub skipped: usize,
    /// Seed and shrunk counterexample of each failure, by seed.
    pub failures: Vec<(u64, Counterexample)>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn checked(&self) -> usize {
        self.passed + self.failures.len()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} at sizes {:?}: {} passed, {} failed, {} skipped",
            self.property,
            self.sizes,
            self.passed,
            self.failures.len(),
            self.skipped
        )?;
        for (seed, c) in &self.failures {
            writeln!(f, "seed {seed}:\n{c}")?;
        }
        Ok(())
    }
}

/// Queries drawn for `seed` at domain `d`.
fn seeded_queries(t: &WeightedTheory, seed: u64, d: &Domain) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15 ^ d.len() as u64);
    (0..3).map(|_| gen_query(t, d, &mut rng)).collect()
}

fn merge(property: Property, sizes: &[usize], outcomes: Vec<(u64, Outcome)>) -> CheckReport {
    let mut r = CheckReport {
        property,
        sizes: sizes.to_vec(),
        passed: 0,
        skipped: 0,
        failures: Vec::new(),
    };
    for (seed, o) in outcomes {
        match o {
            Outcome::Pass => r.passed += 1,
            Outcome::Fail(c) => r.failures.push((seed, *c)),
            Outcome::Skipped(_) | Outcome::Unsupported(_) => r.skipped += 1,
        }
    }
    r
}

/// Soundness over the theories generated for `seeds`, in parallel. Failures
/// are shrunk before they are reported.
pub fn run_soundness(gen: &GenConfig, seeds: Range<u64>, cfg: &SkolemConfig) -> CheckReport {
    let outcomes: Vec<(u64, Outcome)> = seeds
        .into_par_iter()
        .map(|seed| {
            let t = gen_theory(&gen.with_seed(seed));
            let cap = gen.max_atoms;
            let out = match soundness(&t, &gen.sizes, cfg, cap) {
                Outcome::Fail(c) => {
                    let fails = |t: &WeightedTheory, n: usize| {
                        matches!(soundness(t, &[n], cfg, cap), Outcome::Fail(_))
                    };
                    let (t, n) = shrink(&c.theory, c.size, fails);
                    soundness(&t, &[n], cfg, cap)
                }
                o => o,
            };
            (seed, out)
        })
        .collect();
    merge(Property::Soundness, &gen.sizes, outcomes)
}

/// Modularity over the theories generated for `seeds` with three random
/// ground conjunctive queries per size.
pub fn run_modularity(gen: &GenConfig, seeds: Range<u64>, cfg: &SkolemConfig) -> CheckReport {
    let outcomes: Vec<(u64, Outcome)> = seeds
        .into_par_iter()
        .map(|seed| {
            let t = gen_theory(&gen.with_seed(seed));
            let cap = gen.max_atoms;
            let out = match modularity(&t, |d| seeded_queries(&t, seed, d), &gen.sizes, cfg, cap) {
                Outcome::Fail(c) => {
                    let q = c.query.clone().expect("modularity failures carry a query");
                    let fails = |t: &WeightedTheory, n: usize| {
                        matches!(
                            modularity(t, |_| vec![q.clone()], &[n], cfg, cap),
                            Outcome::Fail(_)
                        )
                    };
                    let (t, n) = shrink(&c.theory, c.size, fails);
                    modularity(&t, |_| vec![q.clone()], &[n], cfg, cap)
                }
                o => o,
            };
            (seed, out)
        })
        .collect();
    merge(Property::Modularity, &gen.sizes, outcomes)
}

/// Generated theories whose only internal quantifier is a single `exists`,
/// with the site to eliminate, scanning seeds from `first`.
pub fn single_exists_theories(
    gen: &GenConfig,
    first: u64,
    count: usize,
) -> Vec<(u64, WeightedTheory, crate::transform::ElimSite)> {
    let mut out = Vec::new();
    let mut seed = first;
    while out.len() < count {
        let t = gen_theory(&gen.with_seed(seed));
        let sites: Vec<(usize, Quantifier)> = t
            .sentences
            .iter()
            .enumerate()
            .flat_map(|(i, s)| {
                internal_quantifiers(s)
                    .into_iter()
                    .map(move |(_, q, _)| (i, q))
            })
            .collect();
        if let [(i, Quantifier::Exists)] = sites[..] {
            let site = innermost_site(&t, i).expect("one internal quantifier");
            out.push((seed, t, site));
        }
        seed += 1;
    }
    out
}
