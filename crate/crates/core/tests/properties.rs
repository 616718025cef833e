use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use wfomc::encode::{Literal, LogicProgram, MlnFormula, MlnModel, MlnWeight, ProbFact, Rule};
use wfomc::ground::{ground, ground_tseitin, wmc_bruteforce, wmc_dpll};
use wfomc::logic::{
    classify_normal_form, format_rational, parse_rational, Atom, Domain, Formula, Term, Weight,
    WeightedTheory,
};
use wfomc::parse::{
    parse_formula, parse_mln, parse_problog, parse_theory, parse_weight, print_mln, print_problog,
    print_theory,
};
use wfomc::propcheck::{gen_theory, oracle_count, GenConfig};
use wfomc::transform::{skolemize, to_cnf_distribute, unit_propagate};

fn generated(seed: u64) -> WeightedTheory {
    gen_theory(&GenConfig::default().with_seed(seed))
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-40i64..40, 1i64..24).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn probability() -> impl Strategy<Value = BigRational> {
    (1i64..20)
        .prop_flat_map(|d| (0..=d, Just(d)))
        .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn term() -> impl Strategy<Value = Term> {
    prop_oneof![
        Just(Term::var("x")),
        Just(Term::var("y")),
        Just(Term::constant("A")),
        Just(Term::constant("B")),
    ]
}

/// Atoms over `P/1`, `Q/2` and `R/0`.
fn atom() -> impl Strategy<Value = Atom> {
    prop_oneof![
        term().prop_map(|t| Atom::build("P", vec![t]).unwrap()),
        (term(), term()).prop_map(|(a, b)| Atom::build("Q", vec![a, b]).unwrap()),
        Just(Atom::build("R", vec![]).unwrap()),
    ]
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        8 => atom().prop_map(Formula::atom),
        1 => Just(Formula::True),
        1 => Just(Formula::False),
    ];
    leaf.prop_recursive(4, 32, 2, |inner| {
        let var = prop_oneof![Just("x"), Just("y")];
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (var.clone(), inner.clone()).prop_map(|(v, f)| Formula::forall(v, f)),
            (var, inner).prop_map(|(v, f)| Formula::exists(v, f)),
        ]
    })
}

fn mln() -> impl Strategy<Value = MlnModel> {
    let weight = prop_oneof![
        4 => rational().prop_map(MlnWeight::Soft),
        1 => Just(MlnWeight::Hard),
    ];
    prop::collection::vec((weight, formula()), 1..4).prop_map(|v| MlnModel {
        formulas: v
            .into_iter()
            .map(|(weight, formula)| MlnFormula { weight, formula })
            .collect(),
    })
}

/// Range-restricted programs: head variables and variables of negated
/// literals all occur in a positive body literal.
fn program() -> impl Strategy<Value = LogicProgram> {
    let fact = (probability(), atom()).prop_map(|(prob, atom)| ProbFact { prob, atom });
    let rule = (
        prop::collection::vec(atom(), 1..3),
        prop::collection::vec(atom(), 0..2),
        any::<bool>(),
    )
        .prop_map(|(pos, neg, unary_head)| {
            let bound: Vec<&str> = pos.iter().flat_map(|a| a.vars()).collect();
            let v = |i: usize| -> Term {
                bound
                    .get(i)
                    .map(|x| Term::var(x))
                    .unwrap_or_else(|| Term::constant("A"))
            };
            let head = if unary_head {
                Atom::build("H", vec![v(0)]).unwrap()
            } else {
                Atom::build("G", vec![]).unwrap()
            };
            let mut body: Vec<Literal> = pos
                .iter()
                .map(|a| Literal {
                    positive: true,
                    atom: a.clone(),
                })
                .collect();
            for a in neg {
                if a.vars().all(|x| bound.contains(&x)) {
                    body.push(Literal {
                        positive: false,
                        atom: a,
                    });
                }
            }
            Rule { head, body }
        });
    (
        prop::collection::vec(fact, 0..3),
        prop::collection::vec(rule, 0..3),
    )
        .prop_map(|(facts, rules)| LogicProgram { facts, rules })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn formula_roundtrip(f in formula()) {
        let printed = f.to_string();
        prop_assert_eq!(parse_formula(&printed).unwrap(), f, "{}", printed);
    }

    #[test]
    fn theory_roundtrip(seed in any::<u64>()) {
        let t = generated(seed);
        let printed = print_theory(&t, None);
        let back = parse_theory(&printed).unwrap();
        prop_assert_eq!(&back.theory, &t, "{}", printed);
        prop_assert_eq!(print_theory(&back.theory, None), printed);
    }

    #[test]
    fn theory_roundtrip_with_domain(seed in any::<u64>(), n in 1usize..4) {
        let t = generated(seed);
        let d = Domain::with_size(n, &t.constants()).unwrap();
        let back = parse_theory(&print_theory(&t, Some(&d))).unwrap();
        prop_assert_eq!(back.theory, t);
        prop_assert_eq!(back.domain, Some(d));
    }

    #[test]
    fn mln_roundtrip(m in mln()) {
        let printed = print_mln(&m);
        prop_assert_eq!(parse_mln(&printed).unwrap(), m, "{}", printed);
    }

    #[test]
    fn problog_roundtrip(p in program()) {
        let printed = print_problog(&p);
        prop_assert_eq!(parse_problog(&printed).unwrap(), p, "{}", printed);
    }

    #[test]
    fn rational_roundtrip(r in rational()) {
        prop_assert_eq!(parse_rational(&format_rational(&r)), Some(r));
    }

    #[test]
    fn weight_roundtrip(r in rational(), exp in any::<bool>()) {
        let w = if exp { Weight::Exp(r) } else { Weight::Rational(r) };
        prop_assert_eq!(parse_weight(&w.to_string()).unwrap(), w);
    }

    #[test]
    fn parsers_reject_garbage_without_panicking(s in "\\PC{0,60}") {
        let _ = parse_theory(&s);
        let _ = parse_mln(&s);
        let _ = parse_problog(&s);
        let _ = parse_formula(&s);
        let _ = parse_weight(&s);
    }

    #[test]
    fn dpll_matches_brute_force(seed in any::<u64>(), n in 1usize..3) {
        let t = generated(seed);
        let d = Domain::with_size(n, &t.constants()).unwrap();
        let g = ground(&t, &d).unwrap();
        prop_assume!(g.base.len() <= 16);
        let brute: BigRational = wmc_bruteforce(&g).unwrap();
        let dpll: BigRational = wmc_dpll(&ground_tseitin(&g).unwrap()).unwrap();
        prop_assert_eq!(brute, dpll);
    }

    #[test]
    fn skolemize_reaches_skolem_form(seed in any::<u64>()) {
        let s = skolemize(&generated(seed));
        prop_assert!(classify_normal_form(&s).is_skolem(), "{}", print_theory(&s, None));
        prop_assert!(s.sentences.iter().all(|f| f.is_sentence()));
    }

    #[test]
    fn cnf_and_unit_propagation_preserve_counts(seed in any::<u64>(), n in 1usize..3) {
        let s = skolemize(&generated(seed));
        let cnf = to_cnf_distribute(&s).unwrap();
        let up = unit_propagate(&cnf);
        let d = Domain::with_size(n, &s.constants()).unwrap();
        let (Ok(a), Ok(b), Ok(c)) = (oracle_count(&s, &d), oracle_count(&cnf, &d), oracle_count(&up, &d)) else {
            return Ok(());
        };
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(&a, &c);
    }
}
