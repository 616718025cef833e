use std::collections::HashSet;

use super::{to_nnf, FreshNamer, TransformError};
use crate::logic::{
    classify_normal_form, clause_literals, split_universal_prefix, Atom, Formula, Term, Weight,
    WeightedTheory,
};

/// Most clauses distribution may produce for one theory.
pub const MAX_DISTRIBUTED_CLAUSES: usize = 1 << 16;

/// A universally quantified disjunction of literals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    pub vars: Vec<String>,
    pub lits: Vec<(bool, Atom)>,
}

impl Clause {
    /// Reads `forall vars (l1 | ... | ln)`.
    pub fn from_sentence(f: &Formula) -> Option<Clause> {
        let (vars, matrix) = split_universal_prefix(f);
        let lits = clause_literals(matrix)?;
        Some(Clause {
            vars: vars.into_iter().map(str::to_string).collect(),
            lits: lits.into_iter().map(|(s, a)| (s, a.clone())).collect(),
        })
    }

    /// The clause as a sentence quantifying only the variables it uses.
    pub fn to_formula(&self) -> Formula {
        let used: HashSet<&str> = self.lits.iter().flat_map(|(_, a)| a.vars()).collect();
        let vars: Vec<&str> = self
            .vars
            .iter()
            .map(String::as_str)
            .filter(|v| used.contains(v))
            .collect();
        let body = Formula::disjoin(self.lits.iter().map(|(positive, a)| {
            let atom = Formula::Atom(a.clone());
            if *positive {
                atom
            } else {
                Formula::not(atom)
            }
        }));
        Formula::forall_many(&vars, body)
    }

    /// Removes repeated literals; `None` for a tautology.
    fn normalized(mut self) -> Option<Clause> {
        let mut seen = HashSet::new();
        self.lits.retain(|l| seen.insert(l.clone()));
        let tautology = self
            .lits
            .iter()
            .any(|(s, a)| self.lits.contains(&(!s, a.clone())));
        (!tautology).then_some(self)
    }
}

fn distribute(f: &Formula, budget: usize) -> Result<Vec<Vec<(bool, Atom)>>, TransformError> {
    let too_large = TransformError::TooLarge {
        limit: MAX_DISTRIBUTED_CLAUSES,
    };
    Ok(match f {
        Formula::True => vec![],
        Formula::False => vec![vec![]],
        Formula::Atom(a) => vec![vec![(true, a.clone())]],
        Formula::Not(inner) => match &**inner {
            Formula::Atom(a) => vec![vec![(false, a.clone())]],
            _ => unreachable!("input is in negation normal form"),
        },
        Formula::And(a, b) => {
            let mut out = distribute(a, budget)?;
            out.extend(distribute(b, budget)?);
            if out.len() > budget {
                return Err(too_large);
            }
            out
        }
        Formula::Or(a, b) => {
            let left = distribute(a, budget)?;
            let right = distribute(b, budget)?;
            if left.len().saturating_mul(right.len()) > budget {
                return Err(too_large);
            }
            let mut out = Vec::with_capacity(left.len() * right.len());
            for l in &left {
                for r in &right {
                    let mut c = l.clone();
                    c.extend(r.iter().cloned());
                    out.push(c);
                }
            }
            out
        }
        _ => unreachable!("matrix is quantifier-free and in negation normal form"),
    })
}

fn require_skolem(t: &WeightedTheory) -> Result<(), TransformError> {
    let nf = classify_normal_form(t);
    if nf.is_skolem() {
        Ok(())
    } else {
        Err(TransformError::NotSkolem(nf))
    }
}

/// Emits a clause unless an identical one was emitted already.
fn push_clause(out: &mut Vec<Formula>, seen: &mut HashSet<Formula>, c: Clause) {
    if let Some(c) = c.normalized() {
        let f = c.to_formula();
        if seen.insert(f.clone()) {
            out.push(f);
        }
    }
}

/// First-order CNF by distributing disjunction over conjunction. Every
/// clause quantifies only the variables it uses; repeated literals,
/// tautologies and duplicate clauses are dropped. Weights are unchanged.
pub fn to_cnf_distribute(t: &WeightedTheory) -> Result<WeightedTheory, TransformError> {
    require_skolem(t)?;
    let before = t.predicates();
    let mut sentences = Vec::new();
    let mut seen = HashSet::new();
    for s in &t.sentences {
        let (vars, matrix) = split_universal_prefix(s);
        let vars: Vec<String> = vars.into_iter().map(str::to_string).collect();
        let budget = MAX_DISTRIBUTED_CLAUSES.saturating_sub(sentences.len());
        for lits in distribute(&to_nnf(matrix), budget)? {
            push_clause(
                &mut sentences,
                &mut seen,
                Clause {
                    vars: vars.clone(),
                    lits,
                },
            );
        }
    }
    let mut out = WeightedTheory {
        sentences,
        weights: t.weights.clone(),
        scale: t.scale.clone(),
    };
    out.retain_signature_of(&before);
    Ok(out)
}

/// Flattened negation normal form.
enum Node {
    Lit(bool, Atom),
    Const(bool),
    And(Vec<Node>),
    Or(Vec<Node>),
}

fn flatten(f: &Formula) -> Node {
    fn gather(f: &Formula, and: bool, out: &mut Vec<Node>) {
        match (f, and) {
            (Formula::And(a, b), true) | (Formula::Or(a, b), false) => {
                gather(a, and, out);
                gather(b, and, out);
            }
            _ => out.push(flatten(f)),
        }
    }
    match f {
        Formula::True => Node::Const(true),
        Formula::False => Node::Const(false),
        Formula::Atom(a) => Node::Lit(true, a.clone()),
        Formula::Not(inner) => match &**inner {
            Formula::Atom(a) => Node::Lit(false, a.clone()),
            _ => unreachable!("input is in negation normal form"),
        },
        Formula::And(..) | Formula::Or(..) => {
            let and = matches!(f, Formula::And(..));
            let mut kids = Vec::new();
            gather(f, and, &mut kids);
            simplify(and, kids)
        }
        _ => unreachable!("matrix is quantifier-free and in negation normal form"),
    }
}

/// Drops neutral constants and folds absorbing ones.
fn simplify(and: bool, kids: Vec<Node>) -> Node {
    let mut out = Vec::new();
    for k in kids {
        match k {
            Node::Const(c) if c == and => {}
            Node::Const(c) => return Node::Const(c),
            other => out.push(other),
        }
    }
    match out.len() {
        0 => Node::Const(and),
        1 => out.pop().expect("one element"),
        _ if and => Node::And(out),
        _ => Node::Or(out),
    }
}

struct Tseitin<'a> {
    vars: Vec<String>,
    namer: &'a mut FreshNamer,
    clauses: Vec<Clause>,
    defined: Vec<crate::logic::PredicateSig>,
}

impl Tseitin<'_> {
    fn clause(&mut self, lits: Vec<(bool, Atom)>) {
        self.clauses.push(Clause {
            vars: self.vars.clone(),
            lits,
        });
    }

    /// A literal equivalent to `n`, defining a fresh predicate if needed.
    fn literal(&mut self, n: &Node) -> (bool, Atom) {
        match n {
            Node::Lit(s, a) => (*s, a.clone()),
            Node::Const(_) => unreachable!("constants are simplified away"),
            Node::And(kids) | Node::Or(kids) => {
                let is_and = matches!(n, Node::And(_));
                let lits: Vec<(bool, Atom)> = kids.iter().map(|k| self.literal(k)).collect();
                let mut args: Vec<String> = Vec::new();
                for (_, a) in &lits {
                    for v in a.vars() {
                        if !args.iter().any(|x| x == v) {
                            args.push(v.to_string());
                        }
                    }
                }
                let d = self.namer.fresh("Z", args.len());
                let terms = args.iter().map(|v| Term::var(v)).collect();
                let d_atom = Atom::new(d.clone(), terms).expect("arity matches");
                self.defined.push(d);
                // D <-> and(l): ~D | l_i, and D | ~l_1 | ... | ~l_k.
                // D <-> or(l):  D | ~l_i, and ~D | l_1 | ... | l_k.
                let mut long = vec![(is_and, d_atom.clone())];
                for (s, a) in &lits {
                    let short_sign = if is_and { *s } else { !*s };
                    self.clause(vec![(!is_and, d_atom.clone()), (short_sign, a.clone())]);
                    long.push((if is_and { !*s } else { *s }, a.clone()));
                }
                self.clause(long);
                (true, d_atom)
            }
        }
    }
}

/// First-order CNF by naming every nested connective with a fresh
/// predicate defined by full equivalence. Each model of the input extends
/// to exactly one model of the output, new predicates weigh `(1, 1)`, and
/// the output is linear in the size of the input.
pub fn to_cnf_tseitin(
    t: &WeightedTheory,
    namer: &mut FreshNamer,
) -> Result<WeightedTheory, TransformError> {
    require_skolem(t)?;
    namer.reserve_theory(t);
    let before = t.predicates();
    let mut sentences = Vec::new();
    let mut seen = HashSet::new();
    let mut weights = t.weights.clone();
    for s in &t.sentences {
        let (vars, matrix) = split_universal_prefix(s);
        let mut ts = Tseitin {
            vars: vars.into_iter().map(str::to_string).collect(),
            namer,
            clauses: Vec::new(),
            defined: Vec::new(),
        };
        match flatten(&to_nnf(matrix)) {
            Node::Const(true) => {}
            Node::Const(false) => ts.clause(vec![]),
            Node::And(conjuncts) => {
                for c in &conjuncts {
                    top_clause(&mut ts, c);
                }
            }
            other => top_clause(&mut ts, &other),
        }
        for d in ts.defined {
            weights.set(d, Weight::one(), Weight::one());
        }
        for c in ts.clauses {
            push_clause(&mut sentences, &mut seen, c);
        }
    }
    let mut out = WeightedTheory {
        sentences,
        weights,
        scale: t.scale.clone(),
    };
    out.retain_signature_of(&before);
    Ok(out)
}

fn top_clause(ts: &mut Tseitin<'_>, n: &Node) {
    let lits = match n {
        Node::Or(kids) => kids.iter().map(|k| ts.literal(k)).collect(),
        other => vec![ts.literal(other)],
    };
    ts.clause(lits);
}
