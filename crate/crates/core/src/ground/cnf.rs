use std::collections::HashMap;
use std::fmt::Write as _;

use super::{CountError, GroundFormula, GroundProblem};
use crate::logic::{Weight, WeightPair};

/// Largest ground CNF, in clauses, that will be built.
const MAX_GROUND_CLAUSES: usize = 1 << 24;

/// Propositional CNF with DIMACS-style literals: variable `v` (1-based) is
/// `v` when true and `-v` when false. Variables past the Herbrand base are
/// Tseitin definitions weighted `(1, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundCnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
    /// Indexed by variable minus one.
    pub weights: Vec<WeightPair>,
    pub scale: Vec<(Weight, u64)>,
}

struct Encoder {
    clauses: Vec<Vec<i32>>,
    weights: Vec<WeightPair>,
    defs: HashMap<GroundFormula, i32>,
}

impl Encoder {
    fn push(&mut self, mut c: Vec<i32>) -> Result<(), CountError> {
        c.sort_unstable_by_key(|l| (l.abs(), *l));
        c.dedup();
        if c.windows(2).any(|w| w[0] == -w[1]) {
            return Ok(());
        }
        if self.clauses.len() >= MAX_GROUND_CLAUSES {
            return Err(CountError::TooLarge("ground CNF"));
        }
        self.clauses.push(c);
        Ok(())
    }

    fn fresh(&mut self) -> i32 {
        self.weights.push(WeightPair::ones());
        self.weights.len() as i32
    }

    /// A literal equivalent to `f`, defining a fresh variable if needed.
    fn literal(&mut self, f: &GroundFormula) -> Result<i32, CountError> {
        match f {
            GroundFormula::Var(i) => return Ok(*i as i32 + 1),
            GroundFormula::Not(a) => return Ok(-self.literal(a)?),
            _ => {}
        }
        if let Some(&d) = self.defs.get(f) {
            return Ok(d);
        }
        let d = match f {
            GroundFormula::Const(b) => {
                let d = self.fresh();
                self.push(vec![if *b { d } else { -d }])?;
                d
            }
            GroundFormula::And(k) | GroundFormula::Or(k) => {
                let and = matches!(f, GroundFormula::And(_));
                let lits = k
                    .iter()
                    .map(|c| self.literal(c))
                    .collect::<Result<Vec<_>, _>>()?;
                let d = self.fresh();
                // And: d -> l for each l, and (all l) -> d. Or is the dual.
                let s = if and { 1 } else { -1 };
                for &l in &lits {
                    self.push(vec![-s * d, s * l])?;
                }
                let mut long: Vec<i32> = lits.iter().map(|&l| -s * l).collect();
                long.push(s * d);
                self.push(long)?;
                d
            }
            GroundFormula::Implies(a, b) => {
                let or = GroundFormula::Or(vec![GroundFormula::not((**a).clone()), (**b).clone()]);
                self.literal(&or)?
            }
            GroundFormula::Iff(a, b) => {
                let (a, b) = (self.literal(a)?, self.literal(b)?);
                let d = self.fresh();
                self.push(vec![-d, -a, b])?;
                self.push(vec![-d, a, -b])?;
                self.push(vec![d, a, b])?;
                self.push(vec![d, -a, -b])?;
                d
            }
            GroundFormula::Var(_) | GroundFormula::Not(_) => unreachable!("handled above"),
        };
        self.defs.insert(f.clone(), d);
        Ok(d)
    }

    /// Adds clauses equivalent to asserting `f`, defining only what is not
    /// already a clause.
    fn assert(&mut self, f: &GroundFormula) -> Result<(), CountError> {
        match f {
            GroundFormula::Const(true) => Ok(()),
            GroundFormula::Const(false) => {
                self.clauses.push(Vec::new());
                Ok(())
            }
            GroundFormula::And(k) => k.iter().try_for_each(|c| self.assert(c)),
            GroundFormula::Or(k) => {
                let c = k
                    .iter()
                    .map(|c| self.literal(c))
                    .collect::<Result<Vec<_>, _>>()?;
                self.push(c)
            }
            GroundFormula::Implies(a, b) => {
                let c = vec![-self.literal(a)?, self.literal(b)?];
                self.push(c)
            }
            GroundFormula::Iff(a, b) => {
                let (a, b) = (self.literal(a)?, self.literal(b)?);
                self.push(vec![-a, b])?;
                self.push(vec![a, -b])
            }
            GroundFormula::Var(_) | GroundFormula::Not(_) => {
                let l = self.literal(f)?;
                self.push(vec![l])
            }
        }
    }
}

/// Tseitin CNF of the ground formula. Every definition is a full
/// equivalence, so each model of the formula extends to exactly one model
/// of the CNF and the weighted count is unchanged.
pub fn ground_tseitin(g: &GroundProblem) -> Result<GroundCnf, CountError> {
    let mut enc = Encoder {
        clauses: Vec::new(),
        weights: g.weights.clone(),
        defs: HashMap::new(),
    };
    enc.assert(&g.formula)?;
    Ok(GroundCnf {
        num_vars: enc.weights.len(),
        clauses: enc.clauses,
        weights: enc.weights,
        scale: g.scale.clone(),
    })
}

fn dimacs_weight(w: &Weight) -> String {
    match w.as_rational() {
        Some(r) if r.is_integer() => r.numer().to_string(),
        Some(r) => format!("{}/{}", r.numer(), r.denom()),
        None => format!("{:e}", w.to_f64().unwrap_or(f64::NAN)),
    }
}

/// DIMACS CNF with one `c wght <lit> <weight>` line per literal and one
/// `c scale <weight> <exponent>` line per factor. Irrational weights are
/// written as floats.
pub fn to_dimacs(cnf: &GroundCnf) -> String {
    let mut out = format!("p cnf {} {}\n", cnf.num_vars, cnf.clauses.len());
    for (i, w) in cnf.weights.iter().enumerate() {
        let v = i + 1;
        let _ = writeln!(out, "c wght {v} {}", dimacs_weight(&w.pos));
        let _ = writeln!(out, "c wght -{v} {}", dimacs_weight(&w.neg));
    }
    for (w, e) in &cnf.scale {
        let _ = writeln!(out, "c scale {} {e}", dimacs_weight(w));
    }
    for c in &cnf.clauses {
        for l in c {
            let _ = write!(out, "{l} ");
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::{ground, wmc_bruteforce};
    use crate::logic::{Domain, Scalar};
    use crate::parse::parse_theory;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    fn problem(src: &str, n: usize) -> GroundProblem {
        let t = parse_theory(src).unwrap().theory;
        ground(&t, &Domain::with_size(n, &t.constants()).unwrap()).unwrap()
    }

    /// Weighted count of a CNF by enumeration, independent of the DPLL code.
    fn enumerate(cnf: &GroundCnf) -> BigRational {
        let mut total = BigRational::zero();
        for bits in 0u64..1 << cnf.num_vars {
            let val = |l: i32| (bits >> (l.unsigned_abs() - 1) & 1 == 1) == (l > 0);
            if !cnf.clauses.iter().all(|c| c.iter().any(|&l| val(l))) {
                continue;
            }
            let mut w = BigRational::one();
            for (i, p) in cnf.weights.iter().enumerate() {
                let v = if val(i as i32 + 1) { &p.pos } else { &p.neg };
                w *= BigRational::from_weight(v).unwrap();
            }
            total += w;
        }
        for (w, e) in &cnf.scale {
            total *= BigRational::from_weight(w).unwrap().pow_u64(*e);
        }
        total
    }

    #[test]
    fn clauses_pass_through() {
        let g = problem("forall x exists y (WorksFor(x,y) | Boss(x))", 2);
        let cnf = ground_tseitin(&g).unwrap();
        assert_eq!(cnf.num_vars, 6);
        assert_eq!(cnf.clauses, vec![vec![1, 3, 4], vec![2, 5, 6]]);
    }

    #[test]
    fn definitions_preserve_the_count() {
        let sources = [
            "weight P 1 2 -1\nforall x (P(x) <-> exists y (Q(x,y) & ~P(y)))",
            "weight A 0 1/2 3\nweight B 0 -2 5\n(A -> B) | (B & ~A)\nA <-> ~B | C",
            "forall x (R(x) | (S(x) & ~T(x)))\nexists x ~(R(x) -> S(x))",
        ];
        for src in sources {
            for n in 1..=2 {
                let g = problem(src, n);
                let cnf = ground_tseitin(&g).unwrap();
                if cnf.num_vars > 16 {
                    continue;
                }
                assert_eq!(
                    enumerate(&cnf),
                    wmc_bruteforce::<BigRational>(&g).unwrap(),
                    "{src} n={n}"
                );
            }
        }
    }

    #[test]
    fn false_formula_gives_empty_clause() {
        let cnf = ground_tseitin(&problem("P(A)\n~P(A)", 1)).unwrap();
        assert!(cnf.clauses.iter().any(Vec::is_empty));
    }

    #[test]
    fn dimacs_lists_weights_and_clauses() {
        let g = problem("weight P 1 3/10 7/10\nforall x (P(x) | Q(x))\nscale 2 1", 1);
        let text = to_dimacs(&ground_tseitin(&g).unwrap());
        assert_eq!(
            text,
            "p cnf 2 1\nc wght 1 3/10\nc wght -1 7/10\nc wght 2 1\nc wght -2 1\nc scale 2 1\n1 2 0\n"
        );
    }
}
