use std::collections::{BTreeMap, BTreeSet};

use super::LogicError;

/// Predicate name and arity; `P/1` and `P/2` are distinct signatures.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredicateSig {
    name: String,
    arity: usize,
}

impl PredicateSig {
    pub fn new(name: impl Into<String>, arity: usize) -> Result<Self, LogicError> {
        let name = name.into();
        if !is_identifier(&name) {
            return Err(LogicError::InvalidName(name));
        }
        Ok(PredicateSig { name, arity })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }
}

impl std::fmt::Display for PredicateSig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// `[A-Za-z][A-Za-z0-9_]*`
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn is_variable_name(s: &str) -> bool {
    is_identifier(s) && s.starts_with(|c: char| c.is_ascii_lowercase())
}

/// Constants print bare when they look like `Alice`, quoted otherwise.
pub fn is_bare_constant(s: &str) -> bool {
    is_identifier(s) && s.starts_with(|c: char| c.is_ascii_uppercase())
}

pub fn is_valid_constant(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c == '\'' || c == '"' || c.is_control())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Const(String),
    Var(String),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.to_string())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pred: PredicateSig,
    args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: PredicateSig, args: Vec<Term>) -> Result<Self, LogicError> {
        if args.len() != pred.arity() {
            return Err(LogicError::ArityMismatch {
                pred,
                found: args.len(),
            });
        }
        Ok(Atom { pred, args })
    }

    /// Builds `name(args)` with the arity taken from `args`.
    pub fn build(name: &str, args: Vec<Term>) -> Result<Self, LogicError> {
        let pred = PredicateSig::new(name, args.len())?;
        Ok(Atom { pred, args })
    }

    pub fn pred(&self) -> &PredicateSig {
        &self.pred
    }

    pub fn args(&self) -> &[Term] {
        &self.args
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(Term::as_var)
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(|t| matches!(t, Term::Const(_)))
    }

    fn map_terms(&self, mut f: impl FnMut(&Term) -> Term) -> Atom {
        Atom {
            pred: self.pred.clone(),
            args: self.args.iter().map(&mut f).collect(),
        }
    }
}

/// Function-free first-order formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Formula {
    pub fn atom(a: Atom) -> Formula {
        Formula::Atom(a)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(var.into(), Box::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(var.into(), Box::new(body))
    }

    pub fn quantified(q: Quantifier, var: impl Into<String>, body: Formula) -> Formula {
        match q {
            Quantifier::Forall => Formula::forall(var, body),
            Quantifier::Exists => Formula::exists(var, body),
        }
    }

    /// Wraps `body` in `∀` over `vars`, outermost first.
    pub fn forall_many<S: AsRef<str>>(vars: &[S], body: Formula) -> Formula {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::forall(v.as_ref(), acc))
    }

    pub fn exists_many<S: AsRef<str>>(vars: &[S], body: Formula) -> Formula {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::exists(v.as_ref(), acc))
    }

    /// Right-nested conjunction; `True` when empty.
    pub fn conjoin(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Formula::True;
        };
        while let Some(f) = items.pop() {
            acc = Formula::and(f, acc);
        }
        acc
    }

    /// Right-nested disjunction; `False` when empty.
    pub fn disjoin(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Formula::False;
        };
        while let Some(f) = items.pop() {
            acc = Formula::or(f, acc);
        }
        acc
    }

    /// Negation that cancels an existing negation instead of stacking.
    pub fn negate(f: Formula) -> Formula {
        match f {
            Formula::Not(inner) => *inner,
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            other => Formula::not(other),
        }
    }

    pub fn as_quantifier(&self) -> Option<(Quantifier, &str, &Formula)> {
        match self {
            Formula::Forall(v, b) => Some((Quantifier::Forall, v, b)),
            Formula::Exists(v, b) => Some((Quantifier::Exists, v, b)),
            _ => None,
        }
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => vec![],
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => vec![a],
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                vec![a, b]
            }
        }
    }

    pub fn child_mut(&mut self, i: usize) -> Option<&mut Formula> {
        match (self, i) {
            (Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a), 0) => Some(a),
            (
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Implies(a, b)
                | Formula::Iff(a, b),
                i,
            ) => match i {
                0 => Some(a),
                1 => Some(b),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn at_path(&self, path: &[usize]) -> Option<&Formula> {
        path.iter()
            .try_fold(self, |f, &i| f.children().get(i).copied())
    }

    pub fn at_path_mut(&mut self, path: &[usize]) -> Option<&mut Formula> {
        let mut f = self;
        for &i in path {
            f = f.child_mut(i)?;
        }
        Some(f)
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Forall(..) | Formula::Exists(..) => false,
            _ => self.children().into_iter().all(Formula::is_quantifier_free),
        }
    }

    pub fn is_literal(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Not(a) => matches!(**a, Formula::Atom(_)),
            _ => false,
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(Formula::size)
            .sum::<usize>()
    }

    pub fn quantifier_count(&self) -> usize {
        let own = usize::from(self.as_quantifier().is_some());
        own + self
            .children()
            .into_iter()
            .map(Formula::quantifier_count)
            .sum::<usize>()
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        self.free_vars_ordered().into_iter().collect()
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars_ordered(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut bound = Vec::new();
        collect_free(self, &mut bound, &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars_ordered().is_empty()
    }

    pub fn collect_predicates(&self, out: &mut BTreeSet<PredicateSig>) {
        self.visit_atoms(&mut |a| {
            out.insert(a.pred().clone());
        });
    }

    pub fn predicates(&self) -> BTreeSet<PredicateSig> {
        let mut out = BTreeSet::new();
        self.collect_predicates(&mut out);
        out
    }

    /// Constants in order of first occurrence, appended to `out` without repeats.
    pub fn collect_constants(&self, out: &mut Vec<String>) {
        self.visit_atoms(&mut |a| {
            for t in a.args() {
                if let Term::Const(c) = t {
                    if !out.contains(c) {
                        out.push(c.clone());
                    }
                }
            }
        });
    }

    /// Every variable name appearing anywhere, bound or free.
    pub fn collect_var_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => out.extend(a.vars().map(str::to_string)),
            Formula::Forall(v, b) | Formula::Exists(v, b) => {
                out.insert(v.clone());
                b.collect_var_names(out);
            }
            _ => self
                .children()
                .into_iter()
                .for_each(|c| c.collect_var_names(out)),
        }
    }

    pub fn visit_atoms(&self, f: &mut impl FnMut(&Atom)) {
        match self {
            Formula::Atom(a) => f(a),
            _ => self.children().into_iter().for_each(|c| c.visit_atoms(f)),
        }
    }

    /// Rebuilds the formula with every atom replaced by `f(atom)`.
    pub fn map_atoms(&self, f: &mut impl FnMut(&Atom) -> Formula) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => f(a),
            Formula::Not(a) => Formula::not(a.map_atoms(f)),
            Formula::And(a, b) => Formula::and(a.map_atoms(f), b.map_atoms(f)),
            Formula::Or(a, b) => Formula::or(a.map_atoms(f), b.map_atoms(f)),
            Formula::Implies(a, b) => Formula::implies(a.map_atoms(f), b.map_atoms(f)),
            Formula::Iff(a, b) => Formula::iff(a.map_atoms(f), b.map_atoms(f)),
            Formula::Forall(v, b) => Formula::forall(v.clone(), b.map_atoms(f)),
            Formula::Exists(v, b) => Formula::exists(v.clone(), b.map_atoms(f)),
        }
    }

    /// Capture-avoiding substitution of free variables.
    ///
    /// Binding a variable that occurs only bound in `self` is an error.
    pub fn substitute(&self, binding: &BTreeMap<String, Term>) -> Result<Formula, LogicError> {
        if binding.is_empty() {
            return Ok(self.clone());
        }
        let free = self.free_vars();
        let mut names = BTreeSet::new();
        self.collect_var_names(&mut names);
        for key in binding.keys() {
            if !free.contains(key) && names.contains(key) {
                return Err(LogicError::BindsBoundVariable(key.clone()));
            }
        }
        for t in binding.values() {
            if let Term::Var(v) = t {
                names.insert(v.clone());
            }
        }
        names.extend(binding.keys().cloned());
        Ok(subst(self, binding, &mut names))
    }
}

fn collect_free(f: &Formula, bound: &mut Vec<String>, out: &mut Vec<String>) {
    match f {
        Formula::Atom(a) => {
            for v in a.vars() {
                if !bound.iter().any(|b| b == v) && !out.iter().any(|o| o == v) {
                    out.push(v.to_string());
                }
            }
        }
        Formula::Forall(v, b) | Formula::Exists(v, b) => {
            bound.push(v.clone());
            collect_free(b, bound, out);
            bound.pop();
        }
        _ => {
            for c in f.children() {
                collect_free(c, bound, out);
            }
        }
    }
}

/// `base`, `base_1`, `base_2`, ... whichever is first absent from `taken`.
pub fn fresh_variable(base: &str, taken: &BTreeSet<String>) -> String {
    if !taken.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|k| format!("{base}_{k}"))
        .find(|c| !taken.contains(c))
        .expect("unbounded search")
}

fn subst(f: &Formula, binding: &BTreeMap<String, Term>, names: &mut BTreeSet<String>) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(a) => Formula::Atom(a.map_terms(|t| match t {
            Term::Var(v) => binding.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::Const(_) => t.clone(),
        })),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let q = if matches!(f, Formula::Forall(..)) {
                Quantifier::Forall
            } else {
                Quantifier::Exists
            };
            // the quantifier shadows v inside its body
            let mut inner: BTreeMap<String, Term> = binding
                .iter()
                .filter(|(k, _)| *k != v)
                .map(|(k, t)| (k.clone(), t.clone()))
                .collect();
            if inner.is_empty() {
                return f.clone();
            }
            let body_free = body.free_vars();
            let captures = inner
                .iter()
                .any(|(k, t)| body_free.contains(k) && t.as_var() == Some(v.as_str()));
            if captures {
                let fresh = fresh_variable(v, names);
                names.insert(fresh.clone());
                inner.insert(v.clone(), Term::Var(fresh.clone()));
                Formula::quantified(q, fresh, subst(body, &inner, names))
            } else {
                Formula::quantified(q, v.clone(), subst(body, &inner, names))
            }
        }
        Formula::Not(a) => Formula::not(subst(a, binding, names)),
        Formula::And(a, b) => Formula::and(subst(a, binding, names), subst(b, binding, names)),
        Formula::Or(a, b) => Formula::or(subst(a, binding, names), subst(b, binding, names)),
        Formula::Implies(a, b) => {
            Formula::implies(subst(a, binding, names), subst(b, binding, names))
        }
        Formula::Iff(a, b) => Formula::iff(subst(a, binding, names), subst(b, binding, names)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(name: &str, args: &[&str]) -> Formula {
        let terms = args
            .iter()
            .map(|a| {
                if a.starts_with(|c: char| c.is_ascii_lowercase()) {
                    Term::var(a)
                } else {
                    Term::constant(a)
                }
            })
            .collect();
        Formula::Atom(Atom::build(name, terms).unwrap())
    }

    fn bind(pairs: &[(&str, Term)]) -> BTreeMap<String, Term> {
        pairs
            .iter()
            .map(|(k, t)| (k.to_string(), t.clone()))
            .collect()
    }

    #[test]
    fn free_vars_of_sample_formulas() {
        let stress = Formula::implies(atom("Stress", &["x"]), atom("Smokes", &["x"]));
        assert_eq!(stress.free_vars_ordered(), vec!["x"]);
        assert!(Formula::forall("x", stress).free_vars().is_empty());
        let sub = Formula::exists(
            "y",
            Formula::or(atom("WorksFor", &["x", "y"]), atom("Boss", &["x"])),
        );
        assert_eq!(sub.free_vars_ordered(), vec!["x"]);
    }

    #[test]
    fn arity_is_checked() {
        let p = PredicateSig::new("P", 2).unwrap();
        assert!(Atom::new(p, vec![Term::var("x")]).is_err());
        assert!(PredicateSig::new("1P", 0).is_err());
        assert!(PredicateSig::new("", 0).is_err());
    }

    #[test]
    fn substitution_grounds_free_variables() {
        let f = Formula::implies(atom("Stress", &["x"]), atom("Smokes", &["x"]));
        let g = f.substitute(&bind(&[("x", Term::constant("A"))])).unwrap();
        assert_eq!(
            g,
            Formula::implies(atom("Stress", &["A"]), atom("Smokes", &["A"]))
        );
        assert_eq!(f.substitute(&BTreeMap::new()).unwrap(), f);
    }

    #[test]
    fn substitution_leaves_bound_variables() {
        let f = Formula::exists("y", atom("F", &["x", "y"]));
        let g = f.substitute(&bind(&[("x", Term::constant("A"))])).unwrap();
        assert_eq!(g, Formula::exists("y", atom("F", &["A", "y"])));
        let err = f.substitute(&bind(&[("y", Term::constant("A"))]));
        assert!(matches!(err, Err(LogicError::BindsBoundVariable(v)) if v == "y"));
    }

    #[test]
    fn substitution_avoids_capture() {
        let f = Formula::exists("y", atom("F", &["x", "y"]));
        let g = f.substitute(&bind(&[("x", Term::var("y"))])).unwrap();
        assert_eq!(g, Formula::exists("y_1", atom("F", &["y", "y_1"])));
    }

    #[test]
    fn shadowed_binding_stops_at_quantifier() {
        let f = Formula::and(atom("P", &["x"]), Formula::exists("x", atom("Q", &["x"])));
        let g = f.substitute(&bind(&[("x", Term::constant("A"))])).unwrap();
        assert_eq!(
            g,
            Formula::and(atom("P", &["A"]), Formula::exists("x", atom("Q", &["x"])))
        );
    }

    #[test]
    fn paths_address_subformulas() {
        let f = Formula::forall(
            "x",
            Formula::exists(
                "y",
                Formula::or(atom("WorksFor", &["x", "y"]), atom("Boss", &["x"])),
            ),
        );
        assert!(matches!(f.at_path(&[0]), Some(Formula::Exists(v, _)) if v == "y"));
        assert_eq!(f.at_path(&[0, 0, 1]), Some(&atom("Boss", &["x"])));
        assert_eq!(f.at_path(&[0, 0, 2]), None);
        assert_eq!(f.quantifier_count(), 2);
    }
}
