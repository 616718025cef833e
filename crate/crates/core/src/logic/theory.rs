use std::collections::{BTreeMap, BTreeSet};

use super::syntax::{fresh_variable, is_valid_constant, Formula, PredicateSig, Quantifier};
use super::weight::Weight;
use super::LogicError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightPair {
    pub pos: Weight,
    pub neg: Weight,
}

impl WeightPair {
    pub fn new(pos: Weight, neg: Weight) -> Self {
        WeightPair { pos, neg }
    }

    pub fn ones() -> Self {
        WeightPair::new(Weight::one(), Weight::one())
    }
}

/// Per-predicate weights for true and false literals; unmapped predicates
/// weigh `(1, 1)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightFn {
    map: BTreeMap<PredicateSig, WeightPair>,
}

impl WeightFn {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, pred: PredicateSig, pos: Weight, neg: Weight) {
        self.map.insert(pred, WeightPair::new(pos, neg));
    }

    pub fn get(&self, pred: &PredicateSig) -> WeightPair {
        self.map.get(pred).cloned().unwrap_or_else(WeightPair::ones)
    }

    pub fn w_true(&self, pred: &PredicateSig) -> Weight {
        self.get(pred).pos
    }

    pub fn w_false(&self, pred: &PredicateSig) -> Weight {
        self.get(pred).neg
    }

    pub fn contains(&self, pred: &PredicateSig) -> bool {
        self.map.contains_key(pred)
    }

    pub fn remove(&mut self, pred: &PredicateSig) -> Option<WeightPair> {
        self.map.remove(pred)
    }

    /// Adds an explicit `(1, 1)` entry unless one exists.
    pub fn declare(&mut self, pred: PredicateSig) {
        self.map.entry(pred).or_insert_with(WeightPair::ones);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PredicateSig, &WeightPair)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// A deferred factor `weight^(|D|^arity)`, left behind when unit propagation
/// removes a predicate whose every atom is forced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaleFactor {
    pub weight: Weight,
    pub arity: usize,
}

/// Sentences read as one conjunction, plus weights.
///
/// The Herbrand signature is every predicate used in a sentence together
/// with every predicate that has a weight entry.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightedTheory {
    pub sentences: Vec<Formula>,
    pub weights: WeightFn,
    pub scale: Vec<ScaleFactor>,
}

impl WeightedTheory {
    /// Validates that every sentence is closed and that arities agree.
    pub fn new(sentences: Vec<Formula>, weights: WeightFn) -> Result<Self, LogicError> {
        let t = WeightedTheory {
            sentences,
            weights,
            scale: Vec::new(),
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), LogicError> {
        for (i, s) in self.sentences.iter().enumerate() {
            let free = s.free_vars_ordered();
            if !free.is_empty() {
                return Err(LogicError::FreeVariables {
                    sentence: i,
                    vars: free,
                });
            }
        }
        let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
        let preds = self.predicates();
        for p in &preds {
            if let Some(&other) = seen.get(p.name()) {
                if other != p.arity() {
                    return Err(LogicError::InconsistentArity {
                        name: p.name().to_string(),
                        first: other,
                        second: p.arity(),
                    });
                }
            }
            seen.insert(p.name(), p.arity());
        }
        Ok(())
    }

    /// Sentence predicates plus weighted predicates, in signature order.
    pub fn predicates(&self) -> BTreeSet<PredicateSig> {
        let mut out: BTreeSet<PredicateSig> = self.weights.iter().map(|(p, _)| p.clone()).collect();
        for s in &self.sentences {
            s.collect_predicates(&mut out);
        }
        out
    }

    pub fn sentence_predicates(&self) -> BTreeSet<PredicateSig> {
        let mut out = BTreeSet::new();
        for s in &self.sentences {
            s.collect_predicates(&mut out);
        }
        out
    }

    pub fn constants(&self) -> Vec<String> {
        let mut out = Vec::new();
        for s in &self.sentences {
            s.collect_constants(&mut out);
        }
        out
    }

    /// Appends `phi` as one more sentence.
    pub fn conjoin(&self, phi: Formula) -> WeightedTheory {
        let mut t = self.clone();
        t.sentences.push(phi);
        t
    }

    /// Total node count over all sentences.
    pub fn size(&self) -> usize {
        self.sentences.iter().map(Formula::size).sum()
    }

    pub fn is_unsatisfiable(&self) -> bool {
        self.sentences.contains(&Formula::False)
    }

    /// Keeps predicates that vanished from the sentences in the signature by
    /// giving them explicit weight entries.
    pub fn retain_signature_of(&mut self, before: &BTreeSet<PredicateSig>) {
        let now = self.predicates();
        for p in before {
            if !now.contains(p) {
                self.weights.declare(p.clone());
            }
        }
    }
}

/// Finite, ordered, duplicate-free, non-empty set of constants.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Domain {
    constants: Vec<String>,
}

impl Domain {
    pub fn new<S: Into<String>>(
        constants: impl IntoIterator<Item = S>,
    ) -> Result<Self, LogicError> {
        let constants: Vec<String> = constants.into_iter().map(Into::into).collect();
        if constants.is_empty() {
            return Err(LogicError::EmptyDomain);
        }
        let mut seen = BTreeSet::new();
        for c in &constants {
            if !is_valid_constant(c) {
                return Err(LogicError::InvalidName(c.clone()));
            }
            if !seen.insert(c.as_str()) {
                return Err(LogicError::DuplicateConstant(c.clone()));
            }
        }
        Ok(Domain { constants })
    }

    /// `named` first, then `C1, C2, ...` until the domain has `size` elements.
    pub fn with_size(size: usize, named: &[String]) -> Result<Self, LogicError> {
        let mut constants: Vec<String> = Vec::new();
        for c in named {
            if !constants.contains(c) {
                constants.push(c.clone());
            }
        }
        let mut k = 1;
        while constants.len() < size {
            let c = format!("C{k}");
            if !constants.contains(&c) {
                constants.push(c);
            }
            k += 1;
        }
        Domain::new(constants)
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn len(&self) -> usize {
        self.constants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constants.is_empty()
    }

    pub fn index_of(&self, c: &str) -> Option<usize> {
        self.constants.iter().position(|k| k == c)
    }

    pub fn contains(&self, c: &str) -> bool {
        self.index_of(c).is_some()
    }

    /// Errors with the first constant of `t` missing from this domain.
    pub fn check_covers(&self, t: &WeightedTheory) -> Result<(), LogicError> {
        match t.constants().into_iter().find(|c| !self.contains(c)) {
            Some(c) => Err(LogicError::MissingConstant(c)),
            None => Ok(()),
        }
    }
}

/// Renames quantified variables so no name is bound by two quantifier nodes
/// anywhere in the theory.
pub fn standardize_apart(t: &WeightedTheory) -> WeightedTheory {
    let mut taken = BTreeSet::new();
    for s in &t.sentences {
        s.collect_var_names(&mut taken);
    }
    let mut bound_once = BTreeSet::new();
    let sentences = t
        .sentences
        .iter()
        .map(|s| rename_bound(s, &mut bound_once, &mut taken, &BTreeMap::new()))
        .collect();
    WeightedTheory {
        sentences,
        weights: t.weights.clone(),
        scale: t.scale.clone(),
    }
}

/// Renames quantified variables of one formula so that no name is bound
/// twice or bound while also occurring free.
pub fn standardize_formula(f: &Formula) -> Formula {
    let mut taken = BTreeSet::new();
    f.collect_var_names(&mut taken);
    let mut bound_once: BTreeSet<String> = f.free_vars();
    rename_bound(f, &mut bound_once, &mut taken, &BTreeMap::new())
}

fn rename_bound(
    f: &Formula,
    bound_once: &mut BTreeSet<String>,
    taken: &mut BTreeSet<String>,
    renaming: &BTreeMap<String, String>,
) -> Formula {
    match f {
        Formula::Atom(a) => {
            let mut out = a.clone();
            if a.vars().any(|v| renaming.contains_key(v)) {
                let args = a
                    .args()
                    .iter()
                    .map(|t| match t {
                        super::Term::Var(v) => {
                            super::Term::Var(renaming.get(v).unwrap_or(v).clone())
                        }
                        other => other.clone(),
                    })
                    .collect();
                out = super::Atom::new(a.pred().clone(), args).expect("arity preserved");
            }
            Formula::Atom(out)
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let q = match f {
                Formula::Forall(..) => Quantifier::Forall,
                _ => Quantifier::Exists,
            };
            let mut inner = renaming.clone();
            let name = if bound_once.contains(v) {
                let fresh = fresh_variable(v, taken);
                taken.insert(fresh.clone());
                inner.insert(v.clone(), fresh.clone());
                fresh
            } else {
                inner.remove(v);
                v.clone()
            };
            bound_once.insert(name.clone());
            Formula::quantified(q, name, rename_bound(body, bound_once, taken, &inner))
        }
        Formula::True | Formula::False => f.clone(),
        Formula::Not(a) => Formula::not(rename_bound(a, bound_once, taken, renaming)),
        Formula::And(a, b) => Formula::and(
            rename_bound(a, bound_once, taken, renaming),
            rename_bound(b, bound_once, taken, renaming),
        ),
        Formula::Or(a, b) => Formula::or(
            rename_bound(a, bound_once, taken, renaming),
            rename_bound(b, bound_once, taken, renaming),
        ),
        Formula::Implies(a, b) => Formula::implies(
            rename_bound(a, bound_once, taken, renaming),
            rename_bound(b, bound_once, taken, renaming),
        ),
        Formula::Iff(a, b) => Formula::iff(
            rename_bound(a, bound_once, taken, renaming),
            rename_bound(b, bound_once, taken, renaming),
        ),
    }
}
