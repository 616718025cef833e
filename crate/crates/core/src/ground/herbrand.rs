use std::collections::{BTreeMap, HashSet};
use std::fmt;

use super::CountError;
use crate::logic::{Domain, Formula, PredicateSig, Term, Weight, WeightPair, WeightedTheory};

/// Largest Herbrand base that will be materialised.
pub const MAX_HERBRAND_ATOMS: usize = 1 << 20;

/// Largest ground formula, in nodes, that will be built.
pub const MAX_GROUND_NODES: usize = 1 << 22;

/// A ground atom: a predicate applied to domain indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub pred: PredicateSig,
    pub args: Vec<usize>,
}

/// Every ground atom over the theory's signature, ordered by predicate and
/// then lexicographically by argument indices.
#[derive(Clone, Debug)]
pub struct HerbrandBase {
    domain: Domain,
    atoms: Vec<GroundAtom>,
    offsets: BTreeMap<PredicateSig, usize>,
}

impl HerbrandBase {
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[GroundAtom] {
        &self.atoms
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn index_of(&self, pred: &PredicateSig, args: &[usize]) -> Option<usize> {
        let base = *self.offsets.get(pred)?;
        let n = self.domain.len();
        let local = args
            .iter()
            .try_fold(0usize, |acc, &a| (a < n).then_some(acc * n + a))?;
        Some(base + local)
    }

    /// Renders atom `i` as `P(A,B)`.
    pub fn display(&self, i: usize) -> String {
        let a = &self.atoms[i];
        let args: Vec<Term> = a
            .args
            .iter()
            .map(|&k| Term::constant(&self.domain.constants()[k]))
            .collect();
        let atom = crate::logic::Atom::new(a.pred.clone(), args).expect("arity matches");
        atom.to_string()
    }
}

/// Number of ground atoms of `pred` over `n` constants, if it fits.
pub fn groundings(arity: usize, n: usize) -> Option<usize> {
    let mut total = 1usize;
    for _ in 0..arity {
        total = total.checked_mul(n)?;
    }
    Some(total)
}

pub fn herbrand_base(t: &WeightedTheory, d: &Domain) -> Result<HerbrandBase, CountError> {
    d.check_covers(t)?;
    let n = d.len();
    let mut atoms = Vec::new();
    let mut offsets = BTreeMap::new();
    for pred in t.predicates() {
        let count = groundings(pred.arity(), n)
            .filter(|c| atoms.len() + c <= MAX_HERBRAND_ATOMS)
            .ok_or(CountError::TooLarge("Herbrand base"))?;
        offsets.insert(pred.clone(), atoms.len());
        for k in 0..count {
            let mut args = vec![0; pred.arity()];
            let mut rest = k;
            for slot in args.iter_mut().rev() {
                *slot = rest % n;
                rest /= n;
            }
            atoms.push(GroundAtom {
                pred: pred.clone(),
                args,
            });
        }
    }
    Ok(HerbrandBase {
        domain: d.clone(),
        atoms,
        offsets,
    })
}

/// Propositional formula over Herbrand base indices. Conjunctions and
/// disjunctions are n-ary, flattened and free of repeated children; one
/// holding a child and its negation folds to a constant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroundFormula {
    Const(bool),
    Var(usize),
    Not(Box<GroundFormula>),
    And(Vec<GroundFormula>),
    Or(Vec<GroundFormula>),
    Implies(Box<GroundFormula>, Box<GroundFormula>),
    Iff(Box<GroundFormula>, Box<GroundFormula>),
}

impl GroundFormula {
    pub fn not(f: GroundFormula) -> GroundFormula {
        match f {
            GroundFormula::Const(b) => GroundFormula::Const(!b),
            GroundFormula::Not(inner) => *inner,
            other => GroundFormula::Not(Box::new(other)),
        }
    }

    /// `and = true` builds a conjunction, otherwise a disjunction.
    pub fn nary(and: bool, items: impl IntoIterator<Item = GroundFormula>) -> GroundFormula {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        let mut push = |f: GroundFormula, out: &mut Vec<GroundFormula>| {
            if seen.insert(f.clone()) {
                out.push(f);
            }
        };
        for f in items {
            match f {
                GroundFormula::Const(b) if b == and => {}
                GroundFormula::Const(b) => return GroundFormula::Const(b),
                GroundFormula::And(kids) if and => kids.into_iter().for_each(|k| push(k, &mut out)),
                GroundFormula::Or(kids) if !and => kids.into_iter().for_each(|k| push(k, &mut out)),
                other => push(other, &mut out),
            }
        }
        let complementary = out
            .iter()
            .any(|f| matches!(f, GroundFormula::Not(inner) if seen.contains(&**inner)));
        if complementary {
            return GroundFormula::Const(!and);
        }
        match out.len() {
            0 => GroundFormula::Const(and),
            1 => out.pop().expect("one child"),
            _ if and => GroundFormula::And(out),
            _ => GroundFormula::Or(out),
        }
    }

    pub fn implies(a: GroundFormula, b: GroundFormula) -> GroundFormula {
        match (a, b) {
            (GroundFormula::Const(false), _) | (_, GroundFormula::Const(true)) => {
                GroundFormula::Const(true)
            }
            (GroundFormula::Const(true), b) => b,
            (a, GroundFormula::Const(false)) => GroundFormula::not(a),
            (a, b) => GroundFormula::Implies(Box::new(a), Box::new(b)),
        }
    }

    pub fn iff(a: GroundFormula, b: GroundFormula) -> GroundFormula {
        match (a, b) {
            (GroundFormula::Const(x), GroundFormula::Const(y)) => GroundFormula::Const(x == y),
            (GroundFormula::Const(true), f) | (f, GroundFormula::Const(true)) => f,
            (GroundFormula::Const(false), f) | (f, GroundFormula::Const(false)) => {
                GroundFormula::not(f)
            }
            (a, b) => GroundFormula::Iff(Box::new(a), Box::new(b)),
        }
    }

    pub fn eval(&self, assignment: &dyn Fn(usize) -> bool) -> bool {
        match self {
            GroundFormula::Const(b) => *b,
            GroundFormula::Var(i) => assignment(*i),
            GroundFormula::Not(a) => !a.eval(assignment),
            GroundFormula::And(kids) => kids.iter().all(|k| k.eval(assignment)),
            GroundFormula::Or(kids) => kids.iter().any(|k| k.eval(assignment)),
            GroundFormula::Implies(a, b) => !a.eval(assignment) || b.eval(assignment),
            GroundFormula::Iff(a, b) => a.eval(assignment) == b.eval(assignment),
        }
    }

    pub fn size(&self) -> usize {
        1 + match self {
            GroundFormula::Const(_) | GroundFormula::Var(_) => 0,
            GroundFormula::Not(a) => a.size(),
            GroundFormula::And(k) | GroundFormula::Or(k) => k.iter().map(Self::size).sum(),
            GroundFormula::Implies(a, b) | GroundFormula::Iff(a, b) => a.size() + b.size(),
        }
    }

    pub fn collect_vars(&self, out: &mut Vec<bool>) {
        match self {
            GroundFormula::Const(_) => {}
            GroundFormula::Var(i) => out[*i] = true,
            GroundFormula::Not(a) => a.collect_vars(out),
            GroundFormula::And(k) | GroundFormula::Or(k) => {
                k.iter().for_each(|c| c.collect_vars(out))
            }
            GroundFormula::Implies(a, b) | GroundFormula::Iff(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

impl fmt::Display for GroundFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, kids: &[GroundFormula], op: &str| {
            f.write_str("(")?;
            for (i, k) in kids.iter().enumerate() {
                if i > 0 {
                    f.write_str(op)?;
                }
                write!(f, "{k}")?;
            }
            f.write_str(")")
        };
        match self {
            GroundFormula::Const(b) => write!(f, "{b}"),
            GroundFormula::Var(i) => write!(f, "v{i}"),
            GroundFormula::Not(a) => write!(f, "~{a}"),
            GroundFormula::And(k) => join(f, k, " & "),
            GroundFormula::Or(k) => join(f, k, " | "),
            GroundFormula::Implies(a, b) => write!(f, "({a} -> {b})"),
            GroundFormula::Iff(a, b) => write!(f, "({a} <-> {b})"),
        }
    }
}

/// A theory grounded over a domain: one formula over the Herbrand base,
/// per-atom literal weights inherited from the predicates, and the factors
/// left by unit propagation as `(weight, exponent)`.
#[derive(Clone, Debug)]
pub struct GroundProblem {
    pub base: HerbrandBase,
    pub formula: GroundFormula,
    pub weights: Vec<WeightPair>,
    pub scale: Vec<(Weight, u64)>,
}

struct Grounder<'a> {
    base: &'a HerbrandBase,
    n: usize,
    env: Vec<(String, usize)>,
    nodes: usize,
}

impl Grounder<'_> {
    fn ground(&mut self, f: &Formula) -> Result<GroundFormula, CountError> {
        self.nodes += 1;
        if self.nodes > MAX_GROUND_NODES {
            return Err(CountError::TooLarge("ground formula"));
        }
        Ok(match f {
            Formula::True => GroundFormula::Const(true),
            Formula::False => GroundFormula::Const(false),
            Formula::Atom(a) => {
                let mut args = Vec::with_capacity(a.args().len());
                for t in a.args() {
                    args.push(match t {
                        Term::Var(v) => {
                            self.env
                                .iter()
                                .rev()
                                .find(|(name, _)| name == v)
                                .expect("sentences are closed")
                                .1
                        }
                        Term::Const(c) => {
                            self.base.domain.index_of(c).expect("domain covers theory")
                        }
                    });
                }
                GroundFormula::Var(self.base.index_of(a.pred(), &args).expect("atom in base"))
            }
            Formula::Not(a) => GroundFormula::not(self.ground(a)?),
            Formula::And(a, b) => GroundFormula::nary(true, [self.ground(a)?, self.ground(b)?]),
            Formula::Or(a, b) => GroundFormula::nary(false, [self.ground(a)?, self.ground(b)?]),
            Formula::Implies(a, b) => GroundFormula::implies(self.ground(a)?, self.ground(b)?),
            Formula::Iff(a, b) => GroundFormula::iff(self.ground(a)?, self.ground(b)?),
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let and = matches!(f, Formula::Forall(..));
                let mut parts = Vec::with_capacity(self.n);
                for c in 0..self.n {
                    self.env.push((v.clone(), c));
                    let g = self.ground(body);
                    self.env.pop();
                    let g = g?;
                    if g == GroundFormula::Const(!and) {
                        return Ok(g);
                    }
                    parts.push(g);
                }
                GroundFormula::nary(and, parts)
            }
        })
    }
}

/// Expands quantifiers over the domain and conjoins the sentences.
pub fn ground(t: &WeightedTheory, d: &Domain) -> Result<GroundProblem, CountError> {
    let base = herbrand_base(t, d)?;
    let mut g = Grounder {
        base: &base,
        n: d.len(),
        env: Vec::new(),
        nodes: 0,
    };
    let mut parts = Vec::with_capacity(t.sentences.len());
    for s in &t.sentences {
        parts.push(g.ground(s)?);
    }
    let formula = GroundFormula::nary(true, parts);
    let weights = base.atoms.iter().map(|a| t.weights.get(&a.pred)).collect();
    let mut scale = Vec::with_capacity(t.scale.len());
    for s in &t.scale {
        let exp =
            groundings(s.arity, d.len()).ok_or(CountError::TooLarge("scale factor exponent"))?;
        scale.push((s.weight.clone(), exp as u64));
    }
    Ok(GroundProblem {
        base,
        formula,
        weights,
        scale,
    })
}
