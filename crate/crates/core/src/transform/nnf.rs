use crate::logic::{classify_sentence, standardize_formula, Formula, NormalForm, Quantifier};

/// Negation normal form: `->` and `<->` are expanded and negations sit on
/// atoms only. `true`/`false` are kept as constants.
pub fn to_nnf(f: &Formula) -> Formula {
    nnf(f, true)
}

fn nnf(f: &Formula, positive: bool) -> Formula {
    match f {
        Formula::True | Formula::False => {
            if positive == (*f == Formula::True) {
                Formula::True
            } else {
                Formula::False
            }
        }
        Formula::Atom(_) => {
            if positive {
                f.clone()
            } else {
                Formula::not(f.clone())
            }
        }
        Formula::Not(a) => nnf(a, !positive),
        Formula::And(a, b) if positive => Formula::and(nnf(a, true), nnf(b, true)),
        Formula::And(a, b) => Formula::or(nnf(a, false), nnf(b, false)),
        Formula::Or(a, b) if positive => Formula::or(nnf(a, true), nnf(b, true)),
        Formula::Or(a, b) => Formula::and(nnf(a, false), nnf(b, false)),
        Formula::Implies(a, b) if positive => Formula::or(nnf(a, false), nnf(b, true)),
        Formula::Implies(a, b) => Formula::and(nnf(a, true), nnf(b, false)),
        Formula::Iff(a, b) if positive => Formula::and(
            Formula::or(nnf(a, false), nnf(b, true)),
            Formula::or(nnf(a, true), nnf(b, false)),
        ),
        Formula::Iff(a, b) => Formula::or(
            Formula::and(nnf(a, true), nnf(b, false)),
            Formula::and(nnf(a, false), nnf(b, true)),
        ),
        Formula::Forall(v, b) | Formula::Exists(v, b) => {
            let universal = matches!(f, Formula::Forall(..)) == positive;
            let q = if universal {
                Quantifier::Forall
            } else {
                Quantifier::Exists
            };
            Formula::quantified(q, v.clone(), nnf(b, positive))
        }
    }
}

/// Prenex form `Q1 x1 ... Qn xn matrix` with a quantifier-free matrix.
/// Formulas already in prenex form are returned unchanged. Otherwise the
/// formula is put in negation normal form, its bound variables are made
/// distinct, and quantifiers are pulled out left to right.
pub fn to_prenex(f: &Formula) -> Formula {
    if classify_sentence(f) != NormalForm::Arbitrary {
        return f.clone();
    }
    let g = standardize_formula(&to_nnf(f));
    let mut prefix = Vec::new();
    let matrix = pull(&g, &mut prefix);
    prefix
        .into_iter()
        .rev()
        .fold(matrix, |acc, (q, v)| Formula::quantified(q, v, acc))
}

fn pull(f: &Formula, prefix: &mut Vec<(Quantifier, String)>) -> Formula {
    match f {
        Formula::Forall(v, b) => {
            prefix.push((Quantifier::Forall, v.clone()));
            pull(b, prefix)
        }
        Formula::Exists(v, b) => {
            prefix.push((Quantifier::Exists, v.clone()));
            pull(b, prefix)
        }
        Formula::And(a, b) => {
            let a = pull(a, prefix);
            Formula::and(a, pull(b, prefix))
        }
        Formula::Or(a, b) => {
            let a = pull(a, prefix);
            Formula::or(a, pull(b, prefix))
        }
        _ => f.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_formula;

    fn f(src: &str) -> Formula {
        parse_formula(src).unwrap()
    }

    #[test]
    fn de_morgan_and_duality() {
        assert_eq!(to_nnf(&f("~(P(A) & Q(A))")), f("~P(A) | ~Q(A)"));
        assert_eq!(to_nnf(&f("~exists y F(x,y)")), f("forall y ~F(x,y)"));
        assert_eq!(
            to_nnf(&f("P(A) <-> Q(A)")),
            f("(~P(A) | Q(A)) & (P(A) | ~Q(A))")
        );
        assert_eq!(to_nnf(&f("~~(P -> ~true)")), f("~P | false"));
    }

    #[test]
    fn prenex_pulls_quantifiers() {
        assert_eq!(
            to_prenex(&f("(forall x P(x)) & (exists y Q(y))")),
            f("forall x exists y (P(x) & Q(y))")
        );
        let qf = f("P(A) -> Q(A)");
        assert_eq!(to_prenex(&qf), qf);
        let already = f("forall x exists y (WorksFor(x,y) | Boss(x))");
        assert_eq!(to_prenex(&already), already);
    }

    #[test]
    fn prenex_renames_duplicated_binders() {
        let g = to_prenex(&f("(exists x P(x)) <-> Q"));
        assert_eq!(classify_sentence(&g), NormalForm::Prenex);
        let (prefix, _) = crate::logic::split_prefix(&g);
        let names: std::collections::BTreeSet<_> = prefix.iter().map(|(_, v)| *v).collect();
        assert_eq!(names.len(), 2);
    }
}
