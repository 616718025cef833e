use std::collections::BTreeMap;

use super::gen::GEN_CONSTANT;
use crate::logic::{Formula, Term, Weight, WeightedTheory};

/// Accepted shrink steps before giving up on further minimization.
const MAX_STEPS: usize = 500;

fn paths(f: &Formula, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(prefix.clone());
    for (i, c) in f.children().into_iter().enumerate() {
        prefix.push(i);
        paths(c, prefix, out);
        prefix.pop();
    }
}

/// Formulas to try in place of `f`, each simpler than `f`.
fn replacements(f: &Formula) -> Vec<Formula> {
    let mut out = Vec::new();
    if !matches!(f, Formula::True | Formula::False) {
        out.extend([Formula::True, Formula::False]);
    }
    out.extend(f.children().into_iter().cloned());
    if let Some((_, x, body)) = f.as_quantifier() {
        let binding = BTreeMap::from([(x.to_string(), Term::constant(GEN_CONSTANT))]);
        if let Ok(g) = body.substitute(&binding) {
            out.push(g);
        }
    }
    out
}

/// Smaller neighbours of `(t, n)`: a smaller domain, one sentence fewer, a
/// subformula replaced by something simpler, or one weight pair reset.
fn candidates(t: &WeightedTheory, n: usize) -> Vec<(WeightedTheory, usize)> {
    let mut out = Vec::new();
    if n > 1 {
        out.push((t.clone(), n - 1));
    }
    if t.sentences.len() > 1 {
        for i in 0..t.sentences.len() {
            let mut s = t.clone();
            s.sentences.remove(i);
            out.push((s, n));
        }
    }
    for (i, sentence) in t.sentences.iter().enumerate() {
        let mut ps = Vec::new();
        paths(sentence, &mut Vec::new(), &mut ps);
        for p in ps {
            let sub = sentence.at_path(&p).expect("path from walk");
            for r in replacements(sub) {
                let mut s = t.clone();
                *s.sentences[i].at_path_mut(&p).expect("path from walk") = r;
                if s.sentences[i].is_sentence() && s.validate().is_ok() {
                    out.push((s, n));
                }
            }
        }
    }
    for (p, w) in t.weights.iter() {
        if !(w.pos.is_one() && w.neg.is_one()) {
            let mut s = t.clone();
            s.weights.set(p.clone(), Weight::one(), Weight::one());
            out.push((s, n));
        }
    }
    out
}

/// Greedily minimizes a failing instance: repeatedly moves to the first
/// smaller neighbour that still fails.
pub fn shrink(
    t: &WeightedTheory,
    n: usize,
    fails: impl Fn(&WeightedTheory, usize) -> bool,
) -> (WeightedTheory, usize) {
    let mut cur = (t.clone(), n);
    for _ in 0..MAX_STEPS {
        match candidates(&cur.0, cur.1)
            .into_iter()
            .find(|(s, m)| fails(s, *m))
        {
            Some(next) => cur = next,
            None => break,
        }
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_theory, print_theory};

    #[test]
    fn shrinks_to_the_offending_atom() {
        let t = parse_theory("weight Q 0 2 3\nforall x (P(x) | exists y R(x,y))\nQ & P(A)")
            .unwrap()
            .theory;
        // Fails whenever some sentence mentions Q.
        let fails =
            |t: &WeightedTheory, _: usize| t.sentences.iter().any(|s| s.to_string().contains('Q'));
        let (small, n) = shrink(&t, 3, fails);
        assert_eq!(n, 1);
        assert_eq!(print_theory(&small, None), "weight Q 0 1 1\nQ\n");
    }

    #[test]
    fn quantifiers_shrink_by_instantiation() {
        let t = parse_theory("exists x (P(x) & ~P(x))").unwrap().theory;
        let fails =
            |t: &WeightedTheory, _: usize| t.sentences.iter().any(|s| s.to_string().contains("P("));
        let (small, _) = shrink(&t, 1, fails);
        assert_eq!(small.sentences[0].to_string(), "P(A)");
    }
}
