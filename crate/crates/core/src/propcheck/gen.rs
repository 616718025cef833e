use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ground::DEFAULT_MAX_ATOMS;
use crate::logic::{Atom, Domain, Formula, PredicateSig, Term, Weight, WeightFn, WeightedTheory};

const PRED_NAMES: [&str; 6] = ["P", "Q", "R", "T", "U", "V"];

/// Constant used when an atom has no variable in scope.
pub const GEN_CONSTANT: &str = "A";

/// Caps for random theories. Generation is a pure function of the config.
#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    /// At most 6.
    pub max_predicates: usize,
    /// At most 2.
    pub max_arity: usize,
    /// Nesting depth of quantifiers, at most 3.
    pub max_quantifier_depth: usize,
    pub max_connective_depth: usize,
    /// Quantifiers per sentence.
    pub max_quantifiers: usize,
    pub max_sentences: usize,
    /// Subset of `{1, 2, 3}`.
    pub sizes: Vec<usize>,
    pub weight_pool: Vec<BigRational>,
    /// Instances whose original Herbrand base exceeds this are skipped by
    /// the property runs.
    pub max_atoms: usize,
    pub seed: u64,
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_predicates: 3,
            max_arity: 2,
            max_quantifier_depth: 2,
            max_connective_depth: 3,
            max_quantifiers: 3,
            max_sentences: 2,
            sizes: vec![1, 2],
            weight_pool: vec![
                ratio(1, 1),
                ratio(2, 1),
                ratio(1, 2),
                ratio(-1, 1),
                ratio(-3, 2),
                ratio(3, 1),
                ratio(0, 1),
            ],
            max_atoms: DEFAULT_MAX_ATOMS,
            seed: 0,
        }
    }
}

impl GenConfig {
    /// Defaults sized so that size-3 Herbrand bases of generated theories
    /// stay within the brute-force cap.
    pub fn for_size_three() -> Self {
        GenConfig {
            max_predicates: 2,
            sizes: vec![3],
            ..GenConfig::default()
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        GenConfig {
            seed,
            ..self.clone()
        }
    }
}

struct Gen<'a> {
    rng: &'a mut ChaCha8Rng,
    preds: Vec<PredicateSig>,
    quantifiers_left: usize,
    next_var: usize,
}

impl Gen<'_> {
    fn atom(&mut self, scope: &[String]) -> Formula {
        let pred = self.preds.choose(self.rng).expect("predicates").clone();
        let args = (0..pred.arity())
            .map(|_| {
                if scope.is_empty() || self.rng.gen_bool(0.1) {
                    Term::constant(GEN_CONSTANT)
                } else if self.rng.gen_bool(0.5) {
                    Term::var(scope.last().expect("non-empty"))
                } else {
                    Term::var(scope.choose(self.rng).expect("non-empty"))
                }
            })
            .collect();
        Formula::Atom(Atom::new(pred, args).expect("arity matches"))
    }

    fn formula(&mut self, scope: &mut Vec<String>, qdepth: usize, cdepth: usize) -> Formula {
        let roll = self.rng.gen_range(0..100);
        let can_quantify = qdepth > 0 && self.quantifiers_left > 0;
        if can_quantify && (roll < 30 || scope.is_empty() && roll < 80) {
            self.quantifiers_left -= 1;
            let var = format!("x{}", self.next_var);
            self.next_var += 1;
            scope.push(var.clone());
            let body = self.formula(scope, qdepth - 1, cdepth);
            scope.pop();
            return if self.rng.gen_bool(0.6) {
                Formula::exists(var, body)
            } else {
                Formula::forall(var, body)
            };
        }
        if cdepth == 0 || roll >= 75 {
            return self.atom(scope);
        }
        let op = self.rng.gen_range(0..5);
        let a = self.formula(scope, qdepth, cdepth - 1);
        if op == 0 {
            return Formula::not(a);
        }
        let b = self.formula(scope, qdepth, cdepth - 1);
        match op {
            1 => Formula::and(a, b),
            2 => Formula::or(a, b),
            3 => Formula::implies(a, b),
            _ => Formula::iff(a, b),
        }
    }
}

/// A random weighted theory within the caps of `cfg`, determined by
/// `cfg.seed`. Caps above their documented maxima are clamped.
pub fn gen_theory(cfg: &GenConfig) -> WeightedTheory {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let max_arity = cfg.max_arity.min(2);
    let qdepth = cfg.max_quantifier_depth.min(3);
    let num_preds = rng.gen_range(1..=cfg.max_predicates.clamp(1, PRED_NAMES.len()));
    let preds: Vec<PredicateSig> = PRED_NAMES[..num_preds]
        .iter()
        .map(|n| PredicateSig::new(*n, rng.gen_range(0..=max_arity)).expect("valid name"))
        .collect();
    let pool = if cfg.weight_pool.is_empty() {
        vec![ratio(1, 1)]
    } else {
        cfg.weight_pool.clone()
    };
    let pair: Vec<(BigRational, BigRational)> = preds
        .iter()
        .map(|_| {
            (
                pool.choose(&mut rng).expect("non-empty").clone(),
                pool.choose(&mut rng).expect("non-empty").clone(),
            )
        })
        .collect();
    let num_sentences = rng.gen_range(1..=cfg.max_sentences.max(1));
    let mut g = Gen {
        rng: &mut rng,
        preds: preds.clone(),
        quantifiers_left: 0,
        next_var: 0,
    };
    let sentences: Vec<Formula> = (0..num_sentences)
        .map(|_| {
            g.quantifiers_left = cfg.max_quantifiers;
            g.formula(&mut Vec::new(), qdepth, cfg.max_connective_depth)
        })
        .collect();
    let mut weights = WeightFn::new();
    let used: Vec<PredicateSig> = sentences.iter().flat_map(|s| s.predicates()).collect();
    for (p, (pos, neg)) in preds.into_iter().zip(pair) {
        if used.contains(&p) {
            weights.set(p, Weight::Rational(pos), Weight::Rational(neg));
        }
    }
    WeightedTheory::new(sentences, weights).expect("generated theory is well formed")
}

/// A conjunction of one to three ground literals over the predicates of
/// `t`'s sentences and the constants of `d`.
pub fn gen_query(t: &WeightedTheory, d: &Domain, rng: &mut impl Rng) -> Formula {
    let preds: Vec<PredicateSig> = t.sentence_predicates().into_iter().collect();
    if preds.is_empty() {
        return Formula::True;
    }
    let k = rng.gen_range(1..=3);
    Formula::conjoin((0..k).map(|_| {
        let p = preds.choose(rng).expect("non-empty").clone();
        let args = (0..p.arity())
            .map(|_| Term::constant(d.constants().choose(rng).expect("non-empty domain")))
            .collect();
        let atom = Formula::Atom(Atom::new(p, args).expect("arity matches"));
        if rng.gen_bool(0.5) {
            atom
        } else {
            Formula::not(atom)
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Quantifier;
    use crate::transform::internal_quantifiers;

    fn depth(f: &Formula) -> usize {
        let own = usize::from(f.as_quantifier().is_some());
        own + f.children().into_iter().map(depth).max().unwrap_or(0)
    }

    #[test]
    fn generation_is_deterministic() {
        let cfg = GenConfig::default().with_seed(42);
        assert_eq!(gen_theory(&cfg), gen_theory(&cfg));
        assert_ne!(gen_theory(&cfg), gen_theory(&cfg.with_seed(43)));
    }

    #[test]
    fn caps_are_respected() {
        let base = GenConfig::default();
        for seed in 0..300 {
            let t = gen_theory(&base.with_seed(seed));
            assert!(t.sentences.len() <= base.max_sentences);
            assert!(t.predicates().len() <= base.max_predicates);
            for s in &t.sentences {
                assert!(s.is_sentence());
                assert!(depth(s) <= base.max_quantifier_depth);
                assert!(s.quantifier_count() <= base.max_quantifiers);
            }
            assert!(t.predicates().iter().all(|p| p.arity() <= 2));
        }
    }

    #[test]
    fn zero_depth_gives_quantifier_free_theories() {
        let cfg = GenConfig {
            max_quantifier_depth: 0,
            ..GenConfig::default()
        };
        for seed in 0..50 {
            let t = gen_theory(&cfg.with_seed(seed));
            assert!(t.sentences.iter().all(Formula::is_quantifier_free));
        }
    }

    #[test]
    fn existentials_are_common() {
        let cfg = GenConfig::default();
        let with_exists = (0..100)
            .filter(|&s| {
                let t = gen_theory(&cfg.with_seed(s));
                t.sentences.iter().any(|f| {
                    internal_quantifiers(f)
                        .iter()
                        .any(|(_, q, _)| *q == Quantifier::Exists)
                })
            })
            .count();
        assert!(with_exists >= 30, "{with_exists}");
    }

    #[test]
    fn queries_are_ground_conjunctions() {
        let t = gen_theory(&GenConfig::default().with_seed(7));
        let d = Domain::with_size(2, &t.constants()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let q = gen_query(&t, &d, &mut rng);
            assert!(q.is_sentence() && q.is_quantifier_free());
            assert!(q.predicates().is_subset(&t.sentence_predicates()));
        }
    }
}
