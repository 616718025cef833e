use std::fmt;

use super::syntax::{Atom, Formula, Quantifier};
use super::theory::WeightedTheory;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalForm {
    Arbitrary,
    Prenex,
    PrenexClausal,
    Skolem,
    FoCnf,
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormalForm::Arbitrary => "arbitrary",
            NormalForm::Prenex => "prenex",
            NormalForm::PrenexClausal => "prenex-clausal",
            NormalForm::Skolem => "skolem",
            NormalForm::FoCnf => "fo-cnf",
        })
    }
}

/// The leading quantifier block and the formula under it.
pub fn split_prefix(f: &Formula) -> (Vec<(Quantifier, &str)>, &Formula) {
    let mut prefix = Vec::new();
    let mut cur = f;
    while let Some((q, v, body)) = cur.as_quantifier() {
        prefix.push((q, v));
        cur = body;
    }
    (prefix, cur)
}

/// Leading `∀` variables and the formula under them.
pub fn split_universal_prefix(f: &Formula) -> (Vec<&str>, &Formula) {
    let mut vars = Vec::new();
    let mut cur = f;
    while let Formula::Forall(v, body) = cur {
        vars.push(v.as_str());
        cur = body;
    }
    (vars, cur)
}

/// Literals of a clause as `(positive, atom)`; `None` if `f` is not a
/// disjunction of literals. `False` is the empty clause.
pub fn clause_literals(f: &Formula) -> Option<Vec<(bool, &Atom)>> {
    fn walk<'a>(f: &'a Formula, out: &mut Vec<(bool, &'a Atom)>) -> bool {
        match f {
            Formula::Atom(a) => {
                out.push((true, a));
                true
            }
            Formula::Not(inner) => match &**inner {
                Formula::Atom(a) => {
                    out.push((false, a));
                    true
                }
                _ => false,
            },
            Formula::Or(a, b) => walk(a, out) && walk(b, out),
            Formula::False => true,
            _ => false,
        }
    }
    let mut out = Vec::new();
    walk(f, &mut out).then_some(out)
}

#[derive(Clone, Copy)]
struct Shape {
    prenex: bool,
    universal: bool,
    clausal: bool,
}

fn shape(f: &Formula) -> Shape {
    let (prefix, matrix) = split_prefix(f);
    Shape {
        prenex: matrix.is_quantifier_free(),
        universal: prefix.iter().all(|(q, _)| *q == Quantifier::Forall),
        clausal: clause_literals(matrix).is_some(),
    }
}

fn label(s: Shape) -> NormalForm {
    match (s.prenex, s.universal, s.clausal) {
        (false, _, _) => NormalForm::Arbitrary,
        (true, true, true) => NormalForm::FoCnf,
        (true, true, false) => NormalForm::Skolem,
        (true, false, true) => NormalForm::PrenexClausal,
        (true, false, false) => NormalForm::Prenex,
    }
}

pub fn classify_sentence(f: &Formula) -> NormalForm {
    label(shape(f))
}

/// Strongest normal form every sentence of the theory satisfies.
pub fn classify_normal_form(t: &WeightedTheory) -> NormalForm {
    let combined = t.sentences.iter().map(shape).fold(
        Shape {
            prenex: true,
            universal: true,
            clausal: true,
        },
        |acc, s| Shape {
            prenex: acc.prenex && s.prenex,
            universal: acc.universal && s.universal,
            clausal: acc.clausal && s.clausal,
        },
    );
    label(combined)
}

impl NormalForm {
    pub fn is_skolem(self) -> bool {
        matches!(self, NormalForm::Skolem | NormalForm::FoCnf)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_theory;

    fn class(src: &str) -> NormalForm {
        classify_normal_form(&parse_theory(src).unwrap().theory)
    }

    #[test]
    fn representative_formulas() {
        assert_eq!(
            class("forall x exists y (WorksFor(x,y) | Boss(x))"),
            NormalForm::PrenexClausal
        );
        assert_eq!(
            class("forall x forall y (~S(x) | ~F(x,y) | S(y))"),
            NormalForm::FoCnf
        );
        assert_eq!(class("P(A) <-> Q(A)"), NormalForm::Skolem);
        assert_eq!(
            class("forall x (P(x) & exists y Q(y))"),
            NormalForm::Arbitrary
        );
        assert_eq!(class("exists x (P(x) & Q(x))"), NormalForm::Prenex);
        assert_eq!(class(""), NormalForm::FoCnf);
    }

    #[test]
    fn theory_label_is_weakest_combination() {
        assert_eq!(class("P(A) <-> Q(A)\nexists x P(x)"), NormalForm::Prenex);
    }
}
