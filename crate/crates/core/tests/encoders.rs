use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use wfomc::encode::{
    encode_mln, encode_problog, mln_oracle, problog_oracle, problog_worlds, query_probability,
    query_probability_with, tightness_check, EncodeError, Literal, LogicProgram, MlnFormula,
    MlnModel, MlnWeight, ProbFact, QueryOptions, QueryOrder, Rule,
};
use wfomc::ground::{wfomc as wmc, Engine};
use wfomc::logic::{Atom, Count, Domain, Formula, Mode, Term, WeightFn, WeightedTheory};
use wfomc::parse::parse_formula;

/// Absolute tolerance for float-mode MLN probabilities.
const MLN_TOL: f64 = 1e-9;

fn var(v: &str) -> Term {
    Term::var(v)
}

/// `F/1` and `G/0` carry the probabilistic facts; `H/1` and `K/0` are
/// defined by rules. Either kind may appear in a body.
fn body_atom() -> impl Strategy<Value = Atom> {
    prop_oneof![
        prop_oneof![Just("x"), Just("y")].prop_map(|v| Atom::build("F", vec![var(v)]).unwrap()),
        Just(Atom::build("G", vec![]).unwrap()),
        prop_oneof![Just("x"), Just("y")].prop_map(|v| Atom::build("H", vec![var(v)]).unwrap()),
        Just(Atom::build("K", vec![]).unwrap()),
    ]
}

fn probability() -> impl Strategy<Value = BigRational> {
    (0i64..=10).prop_map(|n| BigRational::new(BigInt::from(n), BigInt::from(10)))
}

fn rule() -> impl Strategy<Value = Rule> {
    (
        prop::collection::vec(body_atom(), 1..3),
        prop::option::of(body_atom()),
        any::<bool>(),
    )
        .prop_map(|(pos, neg, unary)| {
            let bound: Vec<String> = pos
                .iter()
                .flat_map(|a| a.vars().map(str::to_string))
                .collect();
            let head = match bound.first() {
                Some(v) if unary => Atom::build("H", vec![var(v)]).unwrap(),
                _ => Atom::build("K", vec![]).unwrap(),
            };
            let mut body: Vec<Literal> = pos
                .into_iter()
                .map(|atom| Literal {
                    positive: true,
                    atom,
                })
                .collect();
            if let Some(atom) = neg {
                if atom.vars().all(|v| bound.iter().any(|b| b == v)) {
                    body.push(Literal {
                        positive: false,
                        atom,
                    });
                }
            }
            Rule { head, body }
        })
}

/// Tight programs over at most two fact predicates and two rules.
fn program() -> impl Strategy<Value = LogicProgram> {
    (
        probability(),
        probability(),
        any::<bool>(),
        prop::collection::vec(rule(), 0..=2),
    )
        .prop_map(|(pf, pg, both, rules)| {
            let mut facts = vec![ProbFact {
                prob: pf,
                atom: Atom::build("F", vec![var("x")]).unwrap(),
            }];
            if both {
                facts.push(ProbFact {
                    prob: pg,
                    atom: Atom::build("G", vec![]).unwrap(),
                });
            }
            LogicProgram { facts, rules }
        })
        .prop_filter("tight", |p| tightness_check(p).is_none())
}

fn query() -> impl Strategy<Value = Formula> {
    let lit = (
        prop_oneof![
            Just("F(C1)"),
            Just("G"),
            Just("H(C1)"),
            Just("K"),
            Just("F(C2)")
        ],
        any::<bool>(),
    )
        .prop_map(|(a, pos)| {
            let f = parse_formula(a).unwrap();
            if pos {
                f
            } else {
                Formula::not(f)
            }
        });
    prop::collection::vec(lit, 1..3).prop_map(Formula::conjoin)
}

/// Every predicate weighted `(1, 1)`, so the count is the number of models.
fn unweighted(t: &WeightedTheory) -> WeightedTheory {
    let mut w = WeightFn::new();
    for p in t.predicates() {
        w.declare(p);
    }
    WeightedTheory::new(t.sentences.clone(), w).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn problog_pipeline_matches_oracle(p in program(), q in query(), n in 2usize..=3) {
        let d = Domain::with_size(n, &[]).unwrap();
        let oracle = match problog_oracle(&p, &d, &q) {
            Err(EncodeError::NotStratified(_)) => return Ok(()),
            r => r.unwrap(),
        };
        let e = encode_problog(&p).unwrap();
        let got = query_probability(&e, &d, &q, Engine::Auto, Mode::Exact).unwrap();
        prop_assert_eq!(got, Count::Exact(oracle));
    }

    #[test]
    fn query_order_is_irrelevant(p in program(), q in query()) {
        let d = Domain::with_size(2, &[]).unwrap();
        let e = encode_problog(&p).unwrap();
        let opts = |order| QueryOptions { engine: Engine::Auto, mode: Mode::Exact, order };
        // Unstratified programs can have an unsatisfiable completion; both
        // orders must then agree on the error.
        let after = query_probability_with(&e, &d, &q, &opts(QueryOrder::AfterSkolemization));
        let before = query_probability_with(&e, &d, &q, &opts(QueryOrder::BeforeSkolemization));
        prop_assert_eq!(after, before);
    }

    #[test]
    fn completion_has_one_model_per_fact_world(p in program(), n in 1usize..=2) {
        let d = Domain::with_size(n, &[]).unwrap();
        let worlds = match problog_worlds(&p, &d) {
            Err(EncodeError::NotStratified(_)) => return Ok(()),
            r => r.unwrap(),
        };
        let t = unweighted(&encode_problog(&p).unwrap().theory);
        let base = wfomc::ground::herbrand_base(&t, &d).unwrap();
        let atom = |i: usize| parse_formula(&base.display(i)).unwrap();
        for w in &worlds {
            let facts = Formula::conjoin((0..base.len()).filter_map(|i| {
                let a = base.display(i);
                (a.starts_with("F(") || a == "G").then(|| {
                    if w.true_facts.contains(&a) { atom(i) } else { Formula::not(atom(i)) }
                })
            }));
            let model = Formula::conjoin((0..base.len()).map(|i| {
                if w.model.contains(&base.display(i)) { atom(i) } else { Formula::not(atom(i)) }
            }));
            let given: BigRational = wmc(&t.conjoin(facts.clone()), &d, Engine::Brute).unwrap();
            let exact: BigRational =
                wmc(&t.conjoin(Formula::and(facts, model)), &d, Engine::Brute).unwrap();
            prop_assert_eq!(&given, &BigRational::one(), "{:?}", w);
            prop_assert_eq!(&exact, &BigRational::one(), "{:?}", w);
        }
    }
}

fn mln_formula() -> impl Strategy<Value = Formula> {
    let atom = prop_oneof![
        prop_oneof![Just("x"), Just("y")].prop_map(|v| Atom::build("P", vec![var(v)]).unwrap()),
        (
            prop_oneof![Just("x"), Just("y")],
            prop_oneof![Just("x"), Just("y")]
        )
            .prop_map(|(a, b)| Atom::build("Q", vec![var(a), var(b)]).unwrap()),
    ]
    .prop_map(Formula::atom);
    let qf = atom.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::and(a, b)),
        ]
    });
    (qf, 0u8..4).prop_map(|(f, q)| match q {
        0 => Formula::exists("y", f),
        1 => Formula::forall("y", f),
        _ => f,
    })
}

fn mln() -> impl Strategy<Value = MlnModel> {
    let weight = prop_oneof![
        6 => (-20i64..=20).prop_map(|n| MlnWeight::Soft(BigRational::new(n.into(), 10.into()))),
        1 => Just(MlnWeight::Hard),
    ];
    prop::collection::vec((weight, mln_formula()), 1..=2).prop_map(|v| MlnModel {
        formulas: v
            .into_iter()
            .map(|(weight, formula)| MlnFormula { weight, formula })
            .collect(),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn mln_pipeline_matches_oracle(m in mln(), n in 1usize..=2, q in prop_oneof![Just("P(C1)"), Just("~Q(C1,C1)"), Just("P(C1) & Q(C1,C1)")]) {
        let d = Domain::with_size(n, &[]).unwrap();
        let phi = parse_formula(q).unwrap();
        let want = match mln_oracle(&m, &d, &phi) {
            Err(EncodeError::ZeroPartition) => return Ok(()),
            r => r.unwrap(),
        };
        let e = encode_mln(&m).unwrap();
        let got = query_probability(&e, &d, &phi, Engine::Auto, Mode::Float).unwrap().to_f64();
        prop_assert!((got - want).abs() <= MLN_TOL, "{} vs {}", got, want);
    }
}

#[test]
fn noisy_or_identity() {
    let p = wfomc::parse::parse_problog(
        "0.1 :: Attends(x).\n0.3 :: ToSeries(x).\nSeries :- Attends(x), ToSeries(x).\n",
    )
    .unwrap();
    let series = parse_formula("Series").unwrap();
    for n in 1..=3u32 {
        let d = Domain::with_size(n as usize, &[]).unwrap();
        let pa = BigRational::new(1.into(), 10.into());
        let pt = BigRational::new(3.into(), 10.into());
        let none = num_traits::Pow::pow(BigRational::one() - pa * pt, n);
        assert_eq!(
            problog_oracle(&p, &d, &series).unwrap(),
            BigRational::one() - none
        );
    }
}

#[test]
fn undefined_query_predicates_are_false() {
    let p = wfomc::parse::parse_problog("0.5 :: F(x).\n").unwrap();
    let e = encode_problog(&p).unwrap();
    let d = Domain::with_size(2, &[]).unwrap();
    for (q, want) in [("~G", 1), ("G", 0), ("exists x R(x,x)", 0)] {
        let phi = parse_formula(q).unwrap();
        let got = query_probability(&e, &d, &phi, Engine::Auto, Mode::Exact).unwrap();
        assert_eq!(
            got,
            Count::Exact(BigRational::from_integer(want.into())),
            "{q}"
        );
        assert_eq!(
            problog_oracle(&p, &d, &phi).unwrap(),
            BigRational::from_integer(want.into())
        );
    }
}
