use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::eval::{assignments, holds};
use super::{EncodeError, Literal, LogicProgram, Rule, WfomcEncoding};
use crate::ground::{herbrand_base, HerbrandBase};
use crate::logic::{
    fresh_variable, Atom, Domain, Formula, LogicError, PredicateSig, Term, Weight, WeightFn,
    WeightedTheory,
};

/// Largest number of ground probabilistic facts the oracle enumerates.
pub const MAX_ORACLE_FACTS: usize = 20;

/// A cycle through positive body literals, as predicate names with the
/// first repeated at the end. `None` when the program is tight.
pub fn tightness_check(p: &LogicProgram) -> Option<Vec<String>> {
    let mut edges: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for r in &p.rules {
        let e = edges.entry(r.head.pred().name()).or_default();
        for l in r.body.iter().filter(|l| l.positive) {
            e.insert(l.atom.pred().name());
        }
    }
    // 0 unvisited, 1 on the current path, 2 done.
    let mut state: BTreeMap<&str, u8> = BTreeMap::new();
    fn dfs<'a>(
        v: &'a str,
        edges: &BTreeMap<&'a str, BTreeSet<&'a str>>,
        state: &mut BTreeMap<&'a str, u8>,
        path: &mut Vec<&'a str>,
    ) -> Option<Vec<String>> {
        state.insert(v, 1);
        path.push(v);
        for &w in edges.get(v).into_iter().flatten() {
            match state.get(w).copied().unwrap_or(0) {
                1 => {
                    let start = path.iter().position(|&p| p == w).expect("on path");
                    let mut cycle: Vec<String> =
                        path[start..].iter().map(|s| s.to_string()).collect();
                    cycle.push(w.to_string());
                    return Some(cycle);
                }
                0 => {
                    if let Some(c) = dfs(w, edges, state, path) {
                        return Some(c);
                    }
                }
                _ => {}
            }
        }
        path.pop();
        state.insert(v, 2);
        None
    }
    let starts: Vec<&str> = edges.keys().copied().collect();
    for v in starts {
        if state.get(v).copied().unwrap_or(0) == 0 {
            if let Some(c) = dfs(v, &edges, &mut state, &mut Vec::new()) {
                return Some(c);
            }
        }
    }
    None
}

fn is_general(a: &Atom) -> bool {
    let mut seen = BTreeSet::new();
    a.args()
        .iter()
        .all(|t| t.as_var().is_some_and(|v| seen.insert(v)))
}

fn first_vars(atoms: impl IntoIterator<Item = Atom>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for a in atoms {
        for v in a.vars() {
            if !out.iter().any(|o| o == v) {
                out.push(v.to_string());
            }
        }
    }
    out
}

/// Rules after routing probabilistic facts, plus the weighted fact
/// predicates. A predicate with one fact over distinct variables and no
/// rules carries the fact's weights itself; every other fact `k` on `A`
/// gets a fresh predicate `A_k` holding its weights and a rule
/// `A(args) :- A_k(vars)`.
fn route_facts(
    p: &LogicProgram,
) -> Result<(Vec<Rule>, Vec<(PredicateSig, BigRational)>), EncodeError> {
    let heads: BTreeSet<&PredicateSig> = p.rules.iter().map(|r| r.head.pred()).collect();
    let mut per_pred: BTreeMap<&PredicateSig, usize> = BTreeMap::new();
    for f in &p.facts {
        *per_pred.entry(f.atom.pred()).or_default() += 1;
    }
    let mut taken: BTreeSet<String> = BTreeSet::new();
    for r in &p.rules {
        taken.insert(r.head.pred().name().to_string());
        taken.extend(r.body.iter().map(|l| l.atom.pred().name().to_string()));
    }
    taken.extend(p.facts.iter().map(|f| f.atom.pred().name().to_string()));

    let mut rules = p.rules.clone();
    let mut weighted = Vec::new();
    let mut index: BTreeMap<&PredicateSig, usize> = BTreeMap::new();
    for f in &p.facts {
        let pred = f.atom.pred();
        let direct = per_pred[pred] == 1 && !heads.contains(pred) && is_general(&f.atom);
        if direct {
            weighted.push((pred.clone(), f.prob.clone()));
            continue;
        }
        let k = index.entry(pred).or_insert(0);
        let name = loop {
            *k += 1;
            let name = format!("{}_{}", pred.name(), k);
            if taken.insert(name.clone()) {
                break name;
            }
        };
        let vars = first_vars([f.atom.clone()]);
        let aux = PredicateSig::new(name, vars.len())?;
        let aux_atom = Atom::new(aux.clone(), vars.iter().map(|v| Term::var(v)).collect())?;
        rules.push(Rule {
            head: f.atom.clone(),
            body: vec![Literal {
                positive: true,
                atom: aux_atom,
            }],
        });
        weighted.push((aux, f.prob.clone()));
    }
    Ok((rules, weighted))
}

fn rename_atom(a: &Atom, map: &BTreeMap<String, String>) -> Atom {
    let args = a
        .args()
        .iter()
        .map(|t| match t {
            Term::Var(v) => Term::var(map.get(v).unwrap_or(v)),
            c => c.clone(),
        })
        .collect();
    Atom::new(a.pred().clone(), args).expect("arity unchanged")
}

/// `forall xs (P(xs) <-> body_1 | ... | body_k)` for the rules of one head
/// predicate, each body existentially closed over its own variables.
fn complete(pred: &PredicateSig, rules: &[&Rule]) -> Result<Formula, EncodeError> {
    for r in rules {
        if !is_general(&r.head) {
            return Err(EncodeError::RequiresEquality(r.head.to_string()));
        }
    }
    let xs: Vec<String> = rules[0].head.vars().map(str::to_string).collect();
    let mut disjuncts = Vec::with_capacity(rules.len());
    for r in rules {
        let mut map: BTreeMap<String, String> = r
            .head
            .vars()
            .zip(&xs)
            .map(|(v, x)| (v.to_string(), x.clone()))
            .collect();
        let body_vars = first_vars(r.body.iter().map(|l| l.atom.clone()));
        let mut taken: BTreeSet<String> = xs.iter().cloned().collect();
        taken.extend(body_vars.iter().cloned());
        let mut ys = Vec::new();
        for v in body_vars {
            if map.contains_key(&v) {
                continue;
            }
            let y = if xs.contains(&v) {
                let y = fresh_variable(&v, &taken);
                taken.insert(y.clone());
                y
            } else {
                v.clone()
            };
            map.insert(v, y.clone());
            ys.push(y);
        }
        let body = Formula::conjoin(r.body.iter().map(|l| {
            let a = Formula::Atom(rename_atom(&l.atom, &map));
            if l.positive {
                a
            } else {
                Formula::not(a)
            }
        }));
        disjuncts.push(Formula::exists_many(&ys, body));
    }
    let head = Formula::Atom(Atom::new(
        pred.clone(),
        xs.iter().map(|x| Term::var(x)).collect(),
    )?);
    Ok(Formula::forall_many(
        &xs,
        Formula::iff(head, Formula::disjoin(disjuncts)),
    ))
}

/// Completion sentences, then the weighted fact predicates.
fn completion_parts(
    p: &LogicProgram,
) -> Result<(Vec<Formula>, Vec<(PredicateSig, BigRational)>), EncodeError> {
    if let Some(cycle) = tightness_check(p) {
        return Err(EncodeError::NotTight(cycle));
    }
    let (rules, weighted) = route_facts(p)?;
    let mut order: Vec<&PredicateSig> = Vec::new();
    let mut by_head: BTreeMap<&PredicateSig, Vec<&Rule>> = BTreeMap::new();
    for r in &rules {
        let e = by_head.entry(r.head.pred()).or_default();
        if e.is_empty() {
            order.push(r.head.pred());
        }
        e.push(r);
    }
    let mut sentences = Vec::new();
    for pred in &order {
        sentences.push(complete(pred, &by_head[pred])?);
    }
    let weighted_preds: BTreeSet<&PredicateSig> = weighted.iter().map(|(p, _)| p).collect();
    let mut undefined: Vec<&PredicateSig> = Vec::new();
    for l in rules.iter().flat_map(|r| &r.body) {
        let q = l.atom.pred();
        if !by_head.contains_key(q) && !weighted_preds.contains(q) && !undefined.contains(&q) {
            undefined.push(q);
        }
    }
    for q in undefined {
        let xs: Vec<String> = (0..q.arity()).map(|i| format!("x{}", i + 1)).collect();
        let atom = Atom::new(q.clone(), xs.iter().map(|x| Term::var(x)).collect())?;
        sentences.push(Formula::forall_many(&xs, Formula::not(Formula::Atom(atom))));
    }
    Ok((sentences, weighted))
}

/// Clark's completion of a tight program: one equivalence per derived
/// predicate, and `forall xs ~Q(xs)` for predicates with neither rules nor
/// facts. All predicates are weighted `(1, 1)`.
pub fn clarks_completion(p: &LogicProgram) -> Result<WeightedTheory, EncodeError> {
    let (sentences, weighted) = completion_parts(p)?;
    let mut weights = WeightFn::new();
    for (pred, _) in weighted {
        weights.declare(pred);
    }
    for f in &p.facts {
        weights.declare(f.atom.pred().clone());
    }
    let mut theory = WeightedTheory::new(sentences, weights)?;
    for p in theory.predicates() {
        theory.weights.declare(p);
    }
    Ok(theory)
}

/// The completion with each probabilistic fact predicate weighted
/// `(p, 1 - p)`.
pub fn encode_problog(p: &LogicProgram) -> Result<WfomcEncoding, EncodeError> {
    let (sentences, weighted) = completion_parts(p)?;
    let mut weights = WeightFn::new();
    for f in &p.facts {
        weights.declare(f.atom.pred().clone());
    }
    for (pred, prob) in weighted {
        let neg = BigRational::one() - &prob;
        weights.set(pred, Weight::Rational(prob), Weight::Rational(neg));
    }
    let mut theory = WeightedTheory::new(sentences, weights)?;
    for p in theory.predicates() {
        theory.weights.declare(p);
    }
    Ok(WfomcEncoding::new(theory).closed_world())
}

/// One assignment to the ground probabilistic facts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactWorld {
    /// Ground facts drawn true, e.g. `Attends(A)`.
    pub true_facts: Vec<String>,
    pub weight: BigRational,
    /// True atoms of the program's model in this world.
    pub model: Vec<String>,
}

struct GroundRule {
    head: usize,
    pos: Vec<usize>,
    neg: Vec<usize>,
}

struct Grounded {
    base: HerbrandBase,
    coins: Vec<(usize, BigRational)>,
    strata: Vec<Vec<GroundRule>>,
}

fn ground_atom(a: &Atom, env: &[(String, usize)], d: &Domain, base: &HerbrandBase) -> usize {
    let args: Vec<usize> = a
        .args()
        .iter()
        .map(|t| match t {
            Term::Var(v) => env.iter().find(|(n, _)| n == v).expect("bound").1,
            Term::Const(c) => d.index_of(c).expect("domain covers program"),
        })
        .collect();
    base.index_of(a.pred(), &args).expect("atom in base")
}

/// Stratum of each predicate: at least that of its positive dependencies
/// and above that of its negative ones.
fn strata(p: &LogicProgram) -> Result<BTreeMap<&str, usize>, EncodeError> {
    let mut s: BTreeMap<&str, usize> = BTreeMap::new();
    let preds: BTreeSet<&str> = p
        .rules
        .iter()
        .flat_map(|r| std::iter::once(&r.head).chain(r.body.iter().map(|l| &l.atom)))
        .map(|a| a.pred().name())
        .collect();
    loop {
        let mut changed = false;
        for r in &p.rules {
            let h = r.head.pred().name();
            for l in &r.body {
                let need =
                    s.get(l.atom.pred().name()).copied().unwrap_or(0) + usize::from(!l.positive);
                let cur = s.entry(h).or_insert(0);
                if *cur < need {
                    *cur = need;
                    changed = true;
                    if need > preds.len() {
                        return Err(EncodeError::NotStratified(h.to_string()));
                    }
                }
            }
        }
        if !changed {
            return Ok(s);
        }
    }
}

fn ground_program(p: &LogicProgram, d: &Domain, phi: &Formula) -> Result<Grounded, EncodeError> {
    let free = phi.free_vars_ordered();
    if !free.is_empty() {
        return Err(LogicError::FreeVariables {
            sentence: 0,
            vars: free,
        }
        .into());
    }
    let strata_of = strata(p)?;
    let mut closed = vec![phi.clone()];
    for f in &p.facts {
        let vars = first_vars([f.atom.clone()]);
        closed.push(Formula::forall_many(&vars, Formula::Atom(f.atom.clone())));
    }
    for r in &p.rules {
        let vars = first_vars(
            std::iter::once(r.head.clone()).chain(r.body.iter().map(|l| l.atom.clone())),
        );
        let body = Formula::conjoin(r.body.iter().map(|l| Formula::Atom(l.atom.clone())));
        closed.push(Formula::forall_many(
            &vars,
            Formula::implies(body, Formula::Atom(r.head.clone())),
        ));
    }
    let signature = WeightedTheory::new(closed, WeightFn::new())?;
    let base = herbrand_base(&signature, d)?;

    let mut coins = Vec::new();
    for f in &p.facts {
        for env in assignments(&first_vars([f.atom.clone()]), d.len()) {
            coins.push((ground_atom(&f.atom, &env, d, &base), f.prob.clone()));
            if coins.len() > MAX_ORACLE_FACTS {
                return Err(EncodeError::TooLarge {
                    what: "ground program",
                    found: coins.len(),
                    cap: MAX_ORACLE_FACTS,
                });
            }
        }
    }
    let depth = strata_of.values().copied().max().unwrap_or(0);
    let mut strata: Vec<Vec<GroundRule>> = (0..=depth).map(|_| Vec::new()).collect();
    for r in &p.rules {
        let vars = first_vars(
            std::iter::once(r.head.clone()).chain(r.body.iter().map(|l| l.atom.clone())),
        );
        let level = strata_of[r.head.pred().name()];
        for env in assignments(&vars, d.len()) {
            let mut g = GroundRule {
                head: ground_atom(&r.head, &env, d, &base),
                pos: Vec::new(),
                neg: Vec::new(),
            };
            for l in &r.body {
                let a = ground_atom(&l.atom, &env, d, &base);
                if l.positive {
                    g.pos.push(a);
                } else {
                    g.neg.push(a);
                }
            }
            strata[level].push(g);
        }
    }
    Ok(Grounded {
        base,
        coins,
        strata,
    })
}

/// Enumerates the fact worlds and their models; `visit` receives the coin
/// outcomes, the world weight and the model.
fn for_each_world(g: &Grounded, mut visit: impl FnMut(u64, &BigRational, &[bool])) {
    let n = g.coins.len();
    let mut model = vec![false; g.base.len()];
    for bits in 0u64..1 << n {
        model.iter_mut().for_each(|m| *m = false);
        let mut weight = BigRational::one();
        for (i, (atom, p)) in g.coins.iter().enumerate() {
            if bits >> i & 1 == 1 {
                model[*atom] = true;
                weight *= p;
            } else {
                weight *= BigRational::one() - p;
            }
        }
        for rules in &g.strata {
            loop {
                let mut changed = false;
                for r in rules {
                    if !model[r.head]
                        && r.pos.iter().all(|&a| model[a])
                        && r.neg.iter().all(|&a| !model[a])
                    {
                        model[r.head] = true;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
        }
        visit(bits, &weight, &model);
    }
}

/// Every fact world of the program over `d`, with its weight and model.
/// Requires a stratified program.
pub fn problog_worlds(p: &LogicProgram, d: &Domain) -> Result<Vec<FactWorld>, EncodeError> {
    let g = ground_program(p, d, &Formula::True)?;
    let mut out = Vec::new();
    for_each_world(&g, |bits, w, model| {
        out.push(FactWorld {
            true_facts: g
                .coins
                .iter()
                .enumerate()
                .filter(|(i, _)| bits >> i & 1 == 1)
                .map(|(_, (a, _))| g.base.display(*a))
                .collect(),
            weight: w.clone(),
            model: (0..model.len())
                .filter(|&i| model[i])
                .map(|i| g.base.display(i))
                .collect(),
        });
    });
    Ok(out)
}

/// `Pr(phi)`: the total weight of fact worlds whose model satisfies `phi`.
pub fn problog_oracle(
    p: &LogicProgram,
    d: &Domain,
    phi: &Formula,
) -> Result<BigRational, EncodeError> {
    let g = ground_program(p, d, phi)?;
    let mut total = BigRational::zero();
    for_each_world(&g, |_, w, model| {
        if holds(phi, d, &g.base, model, &mut Vec::new()) {
            total += w;
        }
    });
    Ok(total)
}
