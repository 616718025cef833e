use std::collections::{BTreeMap, BTreeSet};

use super::Clause;
use crate::logic::{Atom, Formula, PredicateSig, ScaleFactor, Term, WeightPair, WeightedTheory};

enum Item {
    Clause(Clause),
    Opaque(Formula),
}

/// Whether `target` is an instance of `pattern`, reading the variables of
/// `pattern` as universally quantified.
fn is_instance(target: &Atom, pattern: &Atom) -> bool {
    if target.pred() != pattern.pred() {
        return false;
    }
    let mut theta: BTreeMap<&str, &Term> = BTreeMap::new();
    pattern
        .args()
        .iter()
        .zip(target.args())
        .all(|(p, t)| match p {
            Term::Const(_) => p == t,
            Term::Var(v) => *theta.entry(v.as_str()).or_insert(t) == t,
        })
}

/// A unit whose atom has pairwise distinct variable arguments fixes every
/// ground atom of its predicate.
fn is_full_unit(a: &Atom) -> bool {
    let mut seen = BTreeSet::new();
    a.args()
        .iter()
        .all(|t| t.as_var().is_some_and(|v| seen.insert(v)))
}

/// Applies unit clause `unit` to `target`. Returns `None` when `target` is
/// satisfied, otherwise the clause with falsified literals removed.
fn apply(unit: &(bool, Atom), target: &Clause) -> Option<Clause> {
    let mut lits = Vec::with_capacity(target.lits.len());
    for (s, a) in &target.lits {
        if is_instance(a, &unit.1) {
            if *s == unit.0 {
                return None;
            }
        } else {
            lits.push((*s, a.clone()));
        }
    }
    Some(Clause {
        vars: target.vars.clone(),
        lits,
    })
}

/// First-order unit propagation to a fixpoint.
///
/// A unit clause deletes every clause containing an instance of its literal
/// and removes every instance of the complementary literal. A unit over
/// distinct variables then covers all atoms of its predicate, so the unit
/// is dropped with the predicate and the forced literal weight is kept as a
/// [`ScaleFactor`]. Deriving the empty clause leaves the single sentence
/// `false`. Sentences that are not clauses are kept and left untouched.
pub fn unit_propagate(t: &WeightedTheory) -> WeightedTheory {
    let before = t.predicates();
    let mut items: Vec<Item> = t
        .sentences
        .iter()
        .map(|s| match Clause::from_sentence(s) {
            Some(c) => Item::Clause(c),
            None => Item::Opaque(s.clone()),
        })
        .collect();
    let mut weights = t.weights.clone();
    let mut scale = t.scale.clone();
    let mut removed: BTreeSet<PredicateSig> = BTreeSet::new();

    'fixpoint: loop {
        let is_empty = |i: &Item| matches!(i, Item::Clause(c) if c.lits.is_empty());
        if items.iter().any(is_empty) {
            let mut out = WeightedTheory {
                sentences: vec![Formula::False],
                weights,
                scale,
            };
            out.retain_signature_of(&before);
            return out;
        }
        for i in 0..items.len() {
            let Item::Clause(u) = &items[i] else { continue };
            if u.lits.len() != 1 {
                continue;
            }
            let unit = u.lits[0].clone();
            for j in 0..items.len() {
                if i == j {
                    continue;
                }
                let Item::Clause(c) = &items[j] else { continue };
                if !c.lits.iter().any(|(_, a)| is_instance(a, &unit.1)) {
                    continue;
                }
                match apply(&unit, c) {
                    None => {
                        items.remove(j);
                    }
                    Some(c) => items[j] = Item::Clause(c),
                }
                continue 'fixpoint;
            }
            if is_full_unit(&unit.1) {
                let pred = unit.1.pred().clone();
                let elsewhere = items.iter().enumerate().any(|(k, item)| {
                    k != i
                        && match item {
                            Item::Clause(c) => c.lits.iter().any(|(_, a)| *a.pred() == pred),
                            Item::Opaque(f) => f.predicates().contains(&pred),
                        }
                });
                if !elsewhere {
                    let w = weights.remove(&pred).unwrap_or_else(WeightPair::ones);
                    let factor = if unit.0 { w.pos } else { w.neg };
                    if !factor.is_one() {
                        scale.push(ScaleFactor {
                            weight: factor,
                            arity: pred.arity(),
                        });
                    }
                    removed.insert(pred);
                    items.remove(i);
                    continue 'fixpoint;
                }
            }
        }
        break;
    }

    let sentences = items
        .into_iter()
        .map(|item| match item {
            Item::Clause(c) => c.to_formula(),
            Item::Opaque(f) => f,
        })
        .collect();
    let mut out = WeightedTheory {
        sentences,
        weights,
        scale,
    };
    let keep: BTreeSet<PredicateSig> = before.difference(&removed).cloned().collect();
    out.retain_signature_of(&keep);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Weight;
    use crate::parse::{parse_theory, print_theory};

    fn run(src: &str) -> String {
        print_theory(&unit_propagate(&parse_theory(src).unwrap().theory), None)
    }

    #[test]
    fn boss_elimination_simplifies() {
        let out = run("weight Sk0 1 1 -1\nweight Z0 1 1 1\n\
             forall x Z0(x)\n\
             forall x forall y (Z0(x) | ~WorksFor(x,y))\n\
             forall x (Z0(x) | ~Boss(x))\n\
             forall x (Sk0(x) | Z0(x))\n\
             forall x forall y (Sk0(x) | ~WorksFor(x,y))\n\
             forall x (Sk0(x) | ~Boss(x))\n");
        assert_eq!(
            out,
            "weight Sk0 1 1 -1\n\
             forall x forall y (Sk0(x) | ~WorksFor(x,y))\n\
             forall x (Sk0(x) | ~Boss(x))\n"
        );
    }

    #[test]
    fn no_units_means_no_change() {
        let src = "forall x (P(x) | Q(x))\nforall x (~P(x) | R(x))\n";
        assert_eq!(run(src), src);
    }

    #[test]
    fn contradictory_units() {
        assert_eq!(run("P(A)\n~P(A)"), "weight P 1 1 1\nfalse\n");
        assert_eq!(run("forall x P(x)\n~P(B)"), "weight P 1 1 1\nfalse\n");
    }

    #[test]
    fn forced_weights_become_scale_factors() {
        let t = parse_theory("weight P 1 3 5\nforall x ~P(x)\nforall x (P(x) | Q(x))")
            .unwrap()
            .theory;
        let out = unit_propagate(&t);
        assert_eq!(print_theory(&out, None), "scale 5 1\n");
        assert_eq!(out.scale[0].weight, Weight::int(5));
    }

    #[test]
    fn partial_units_only_simplify_instances() {
        assert_eq!(
            run("P(A)\nforall x (~P(x) | Q(x))\n~P(A) | R"),
            "P(A)\nforall x (~P(x) | Q(x))\n"
        );
        assert_eq!(
            run("forall x P(x,x)\nforall x forall y (~P(x,y) | Q(x))"),
            "forall x P(x,x)\nforall x forall y (~P(x,y) | Q(x))\n"
        );
    }

    #[test]
    fn chains_reach_a_fixpoint() {
        assert_eq!(
            run("Series\n~Series | Z\nforall x (Z | ~A(x))"),
            "weight A 1 1 1\n"
        );
    }
}
