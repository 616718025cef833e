use crate::ground::HerbrandBase;
use crate::logic::{Domain, Formula, Term};

/// Truth of `f` in the interpretation `truth` over `base`, with free
/// variables bound by `env`. Reads the first-order formula directly rather
/// than going through a grounding.
pub(crate) fn holds(
    f: &Formula,
    d: &Domain,
    base: &HerbrandBase,
    truth: &[bool],
    env: &mut Vec<(String, usize)>,
) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a) => {
            let args: Vec<usize> = a
                .args()
                .iter()
                .map(|t| match t {
                    Term::Var(v) => {
                        env.iter()
                            .rev()
                            .find(|(n, _)| n == v)
                            .expect("variable is bound")
                            .1
                    }
                    Term::Const(c) => d.index_of(c).expect("domain covers formula"),
                })
                .collect();
            truth[base.index_of(a.pred(), &args).expect("atom in base")]
        }
        Formula::Not(a) => !holds(a, d, base, truth, env),
        Formula::And(a, b) => holds(a, d, base, truth, env) && holds(b, d, base, truth, env),
        Formula::Or(a, b) => holds(a, d, base, truth, env) || holds(b, d, base, truth, env),
        Formula::Implies(a, b) => !holds(a, d, base, truth, env) || holds(b, d, base, truth, env),
        Formula::Iff(a, b) => holds(a, d, base, truth, env) == holds(b, d, base, truth, env),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let want = matches!(f, Formula::Exists(..));
            for c in 0..d.len() {
                env.push((v.clone(), c));
                let r = holds(body, d, base, truth, env);
                env.pop();
                if r == want {
                    return want;
                }
            }
            !want
        }
    }
}

/// Every assignment of `vars` to domain indices, in lexicographic order.
pub(crate) fn assignments(vars: &[String], n: usize) -> Vec<Vec<(String, usize)>> {
    let mut out = vec![Vec::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<(String, usize)>| {
                (0..n).map(move |c| {
                    let mut p = prefix.clone();
                    p.push((v.clone(), c));
                    p
                })
            })
            .collect();
    }
    out
}
