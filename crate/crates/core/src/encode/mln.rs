use super::eval::{assignments, holds};
use super::{EncodeError, MlnModel, MlnWeight, WfomcEncoding};
use crate::ground::herbrand_base;
use crate::logic::{Domain, Formula, LogicError, Weight, WeightFn, WeightedTheory};
use crate::transform::FreshNamer;

/// Largest ground MLN the oracle enumerates.
pub const MAX_ORACLE_ATOMS: usize = 20;

/// For each soft formula `(w, phi(xs))` a fresh parameter predicate `P(xs)`
/// with the sentence `forall xs (P(xs) <-> phi)` and weights `(e^w, 1)`.
/// Hard formulas become `forall xs phi`. Parameter predicates are named
/// `P0`, `P1`, ... skipping names the model already uses.
pub fn encode_mln(m: &MlnModel) -> Result<WfomcEncoding, EncodeError> {
    let mut namer = FreshNamer::new();
    for f in &m.formulas {
        for p in f.formula.predicates() {
            namer.reserve(p.name());
        }
    }
    let mut sentences = Vec::with_capacity(m.formulas.len());
    let mut weights = WeightFn::new();
    for f in &m.formulas {
        let xs = f.formula.free_vars_ordered();
        match &f.weight {
            MlnWeight::Hard => sentences.push(Formula::forall_many(&xs, f.formula.clone())),
            MlnWeight::Soft(w) => {
                let p = namer.fresh("P", xs.len());
                let args = xs.iter().map(|v| crate::logic::Term::var(v)).collect();
                let atom = Formula::Atom(crate::logic::Atom::new(p.clone(), args)?);
                sentences.push(Formula::forall_many(
                    &xs,
                    Formula::iff(atom, f.formula.clone()),
                ));
                weights.set(p, Weight::Exp(w.clone()), Weight::one());
            }
        }
    }
    let mut theory = WeightedTheory::new(sentences, weights)?;
    for p in theory.predicates() {
        theory.weights.declare(p);
    }
    Ok(WfomcEncoding::new(theory))
}

struct Worlds {
    /// Log-weight of each world, `None` when a hard formula fails.
    log_weights: Vec<Option<f64>>,
    /// Whether the query holds in each world.
    query: Vec<bool>,
}

/// Enumerates the worlds of the ground MLN directly from its semantics.
fn enumerate(m: &MlnModel, d: &Domain, phi: &Formula) -> Result<Worlds, EncodeError> {
    let free = phi.free_vars_ordered();
    if !free.is_empty() {
        return Err(LogicError::FreeVariables {
            sentence: 0,
            vars: free,
        }
        .into());
    }
    let mut closed: Vec<Formula> = m
        .formulas
        .iter()
        .map(|f| Formula::forall_many(&f.formula.free_vars_ordered(), f.formula.clone()))
        .collect();
    closed.push(phi.clone());
    let signature = WeightedTheory::new(closed, WeightFn::new())?;
    let base = herbrand_base(&signature, d)?;
    if base.len() > MAX_ORACLE_ATOMS {
        return Err(EncodeError::TooLarge {
            what: "ground MLN",
            found: base.len(),
            cap: MAX_ORACLE_ATOMS,
        });
    }
    let groundings: Vec<_> = m
        .formulas
        .iter()
        .map(|f| assignments(&f.formula.free_vars_ordered(), d.len()))
        .collect();
    let n = base.len();
    let mut worlds = Worlds {
        log_weights: Vec::with_capacity(1 << n),
        query: Vec::with_capacity(1 << n),
    };
    let mut truth = vec![false; n];
    for bits in 0u64..1 << n {
        for (i, t) in truth.iter_mut().enumerate() {
            *t = bits >> i & 1 == 1;
        }
        let mut log_w = Some(0.0);
        for (f, envs) in m.formulas.iter().zip(&groundings) {
            for env in envs {
                let sat = holds(&f.formula, d, &base, &truth, &mut env.clone());
                match (&f.weight, sat) {
                    (MlnWeight::Hard, false) => log_w = None,
                    (MlnWeight::Soft(w), true) => {
                        let w = num_traits::ToPrimitive::to_f64(w).unwrap_or(f64::NAN);
                        log_w = log_w.map(|l| l + w);
                    }
                    _ => {}
                }
            }
        }
        worlds.log_weights.push(log_w);
        worlds
            .query
            .push(holds(phi, d, &base, &truth, &mut Vec::new()));
    }
    Ok(worlds)
}

/// Sum of `e^(l - shift)` over the selected worlds, and the shift used.
fn shifted_sum(w: &Worlds, select: impl Fn(usize) -> bool) -> (f64, f64) {
    let shift = w
        .log_weights
        .iter()
        .flatten()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let sum = w
        .log_weights
        .iter()
        .enumerate()
        .filter(|(i, _)| select(*i))
        .filter_map(|(_, l)| *l)
        .map(|l| (l - shift).exp())
        .sum();
    (sum, shift)
}

/// `Pr(phi)` in the ground MLN over `d`, by enumerating every world.
pub fn mln_oracle(m: &MlnModel, d: &Domain, phi: &Formula) -> Result<f64, EncodeError> {
    let w = enumerate(m, d, phi)?;
    let (z, _) = shifted_sum(&w, |_| true);
    if z == 0.0 || z.is_nan() {
        return Err(EncodeError::ZeroPartition);
    }
    let (num, _) = shifted_sum(&w, |i| w.query[i]);
    Ok(num / z)
}

/// Sum of world weights of the ground MLN over `d`.
pub fn mln_partition_function(m: &MlnModel, d: &Domain) -> Result<f64, EncodeError> {
    let w = enumerate(m, d, &Formula::True)?;
    let (z, shift) = shifted_sum(&w, |_| true);
    Ok(z * shift.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::{wfomc, Engine};
    use crate::parse::{parse_formula, parse_mln, print_theory};

    const WORKS: &str = "1.3 exists y (WorksFor(x,y) | Boss(x))";

    #[test]
    fn works_encoding() {
        let e = encode_mln(&parse_mln(WORKS).unwrap()).unwrap();
        assert!(!e.skolemized);
        assert_eq!(
            print_theory(&e.theory, None),
            "weight Boss 1 1 1\nweight P0 1 exp(1.3) 1\nweight WorksFor 2 1 1\n\
             forall x (P0(x) <-> (exists y (WorksFor(x,y) | Boss(x))))\n"
        );
    }

    #[test]
    fn hard_formulas_are_constraints() {
        let e = encode_mln(&parse_mln("inf Smokes(x) -> Cancer(x)").unwrap()).unwrap();
        assert_eq!(
            e.theory.sentences[0].to_string(),
            "forall x (Smokes(x) -> Cancer(x))"
        );
        assert!(e
            .theory
            .weights
            .iter()
            .all(|(_, w)| w.pos.is_one() && w.neg.is_one()));
    }

    #[test]
    fn quantifier_free_formulas_give_skolem_form() {
        let e =
            encode_mln(&parse_mln("0.5 Smokes(x) & Friends(x,y) -> Smokes(y)").unwrap()).unwrap();
        assert!(e.skolemized);
    }

    #[test]
    fn parameter_names_avoid_model_predicates() {
        let e = encode_mln(&parse_mln("1 P0(x)\n2 P1 | P0(A)").unwrap()).unwrap();
        let names: Vec<String> = e
            .theory
            .predicates()
            .iter()
            .map(|p| p.name().to_string())
            .collect();
        assert_eq!(names, ["P0", "P1", "P2", "P3"]);
    }

    #[test]
    fn oracle_on_single_person() {
        let m = parse_mln(WORKS).unwrap();
        let d = Domain::new(["A"]).unwrap();
        let e13 = 1.3f64.exp();
        let p = mln_oracle(&m, &d, &parse_formula("Boss(A)").unwrap()).unwrap();
        assert!((p - 2.0 * e13 / (3.0 * e13 + 1.0)).abs() < 1e-12);
        let z = mln_partition_function(&m, &d).unwrap();
        assert!((z - (3.0 * e13 + 1.0)).abs() < 1e-9);
    }

    #[test]
    fn entailed_query_is_certain() {
        let m = parse_mln("inf P(x)\ninf P(x) -> Q(x)").unwrap();
        let d = Domain::with_size(2, &[]).unwrap();
        let p = mln_oracle(&m, &d, &parse_formula("forall x Q(x)").unwrap()).unwrap();
        assert_eq!(p, 1.0);
    }

    #[test]
    fn partition_matches_encoding() {
        let m = parse_mln(WORKS).unwrap();
        let e = encode_mln(&m).unwrap();
        for n in 1..=2 {
            let d = Domain::with_size(n, &[]).unwrap();
            let z = mln_partition_function(&m, &d).unwrap();
            let c: f64 = wfomc(&e.theory, &d, Engine::Brute).unwrap();
            assert!((z - c).abs() <= 1e-9 * z, "n={n}: {z} vs {c}");
        }
    }

    #[test]
    fn oracle_cap() {
        let m = parse_mln("1 R(x,y,z)").unwrap();
        let d = Domain::with_size(3, &[]).unwrap();
        assert!(matches!(
            mln_oracle(&m, &d, &Formula::True),
            Err(EncodeError::TooLarge { found: 27, .. })
        ));
    }
}
