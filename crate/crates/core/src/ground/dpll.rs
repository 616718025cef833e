use std::collections::{BTreeSet, HashMap};

use super::{CountError, GroundCnf};
use crate::logic::Scalar;

/// Cached component counts kept before the cache is flushed.
const MAX_MEMO: usize = 1 << 20;

/// Stack for the counting thread; recursion depth grows with the number of
/// variables.
const STACK_BYTES: usize = 512 << 20;

type Clauses = Vec<Vec<i32>>;

struct Counter<S> {
    pos: Vec<S>,
    neg: Vec<S>,
    memo: HashMap<Clauses, S>,
}

fn var(l: i32) -> usize {
    l.unsigned_abs() as usize
}

/// Sets `lit` true. `None` when a clause becomes empty.
fn assign(clauses: &[Vec<i32>], lit: i32) -> Option<Clauses> {
    let mut out = Vec::with_capacity(clauses.len());
    for c in clauses {
        if c.contains(&lit) {
            continue;
        }
        let reduced: Vec<i32> = c.iter().copied().filter(|&l| l != -lit).collect();
        if reduced.is_empty() {
            return None;
        }
        out.push(reduced);
    }
    Some(out)
}

fn vars_of(clauses: &[Vec<i32>]) -> BTreeSet<usize> {
    clauses.iter().flatten().map(|&l| var(l)).collect()
}

/// Splits clauses into groups that share no variable.
fn components(clauses: Clauses) -> Vec<Clauses> {
    fn find(p: &mut HashMap<usize, usize>, x: usize) -> usize {
        let mut r = x;
        while p[&r] != r {
            r = p[&r];
        }
        let mut y = x;
        while p[&y] != r {
            let next = p[&y];
            p.insert(y, r);
            y = next;
        }
        r
    }
    let mut parent: HashMap<usize, usize> = HashMap::new();
    for c in &clauses {
        for &l in c {
            parent.entry(var(l)).or_insert(var(l));
        }
        for w in c.windows(2) {
            let (a, b) = (find(&mut parent, var(w[0])), find(&mut parent, var(w[1])));
            if a != b {
                parent.insert(a.max(b), a.min(b));
            }
        }
    }
    let mut groups: Vec<(usize, Clauses)> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for c in clauses {
        let root = find(&mut parent, var(c[0]));
        let i = *slot.entry(root).or_insert_with(|| {
            groups.push((root, Vec::new()));
            groups.len() - 1
        });
        groups[i].1.push(c);
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

/// Variable with the most occurrences among the shortest clauses, smallest
/// index on ties.
fn branch_var(clauses: &[Vec<i32>]) -> usize {
    let shortest = clauses.iter().map(Vec::len).min().expect("non-empty");
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for c in clauses.iter().filter(|c| c.len() == shortest) {
        for &l in c {
            *counts.entry(var(l)).or_default() += 1;
        }
    }
    counts
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .expect("non-empty")
        .0
}

fn canonical(mut clauses: Clauses) -> Clauses {
    for c in &mut clauses {
        c.sort_unstable();
    }
    clauses.sort_unstable();
    clauses
}

impl<S: Scalar> Counter<S> {
    fn lit_weight(&self, l: i32) -> S {
        if l > 0 {
            self.pos[var(l)].clone()
        } else {
            self.neg[var(l)].clone()
        }
    }

    fn free(&self, v: usize) -> S {
        self.pos[v].clone() + self.neg[v].clone()
    }

    /// Weighted count over exactly the variables in `scope`, all of which
    /// are unassigned; `clauses` mention only variables of `scope`.
    fn count(&mut self, mut clauses: Clauses, mut scope: BTreeSet<usize>) -> S {
        let mut factor = S::one();
        while let Some(unit) = clauses.iter().find(|c| c.len() == 1).map(|c| c[0]) {
            factor = factor * self.lit_weight(unit);
            scope.remove(&var(unit));
            match assign(&clauses, unit) {
                Some(c) => clauses = c,
                None => return S::zero(),
            }
        }
        let live = vars_of(&clauses);
        for &v in scope.difference(&live) {
            factor = factor * self.free(v);
        }
        for comp in components(clauses) {
            let value = self.component(comp);
            if value.is_zero() {
                return S::zero();
            }
            factor = factor * value;
        }
        factor
    }

    fn component(&mut self, clauses: Clauses) -> S {
        let key = canonical(clauses);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let scope = vars_of(&key);
        let v = branch_var(&key);
        let mut rest = scope.clone();
        rest.remove(&v);
        let mut total = S::zero();
        for lit in [v as i32, -(v as i32)] {
            if let Some(c) = assign(&key, lit) {
                let sub = self.count(c, rest.clone());
                total = total + self.lit_weight(lit) * sub;
            }
        }
        if self.memo.len() >= MAX_MEMO {
            self.memo.clear();
        }
        self.memo.insert(key, total.clone());
        total
    }
}

/// Weighted model count of a CNF by DPLL with unit propagation, connected
/// components and a cache keyed by the sorted clauses of each component.
/// Weights may be negative or zero.
pub fn wmc_dpll<S: Scalar>(cnf: &GroundCnf) -> Result<S, CountError> {
    let mut pos = vec![S::zero()];
    let mut neg = vec![S::zero()];
    for w in &cnf.weights {
        pos.push(S::from_weight(&w.pos)?);
        neg.push(S::from_weight(&w.neg)?);
    }
    let mut scale = S::one();
    for (w, e) in &cnf.scale {
        scale = scale * S::from_weight(w)?.pow_u64(*e);
    }
    if cnf.clauses.iter().any(Vec::is_empty) {
        return Ok(S::zero());
    }
    let clauses = cnf.clauses.clone();
    let scope: BTreeSet<usize> = (1..=cnf.num_vars).collect();
    let run = move || {
        let mut counter = Counter {
            pos,
            neg,
            memo: HashMap::new(),
        };
        counter.count(clauses, scope)
    };
    let value = std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(STACK_BYTES)
            .spawn_scoped(s, run)
            .expect("spawn counting thread")
            .join()
            .expect("counting thread panicked")
    });
    Ok(value * scale)
}
