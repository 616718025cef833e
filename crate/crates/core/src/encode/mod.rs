//! Reductions from Markov logic networks and probabilistic logic programs to
//! weighted model counting, with brute-force oracles for both languages.

pub(crate) mod eval;
mod mln;
mod model;
mod problog;

use thiserror::Error;

pub use mln::{encode_mln, mln_oracle, mln_partition_function, MAX_ORACLE_ATOMS};
pub use model::{Literal, LogicProgram, MlnFormula, MlnModel, MlnWeight, ProbFact, Rule};
pub use problog::{
    clarks_completion, encode_problog, problog_oracle, problog_worlds, tightness_check, FactWorld,
    MAX_ORACLE_FACTS,
};

use crate::ground::{count, CountError, Engine};
use crate::logic::{Count, Domain, Formula, LogicError, Mode, WeightedTheory};
use crate::transform::{skolemize_with, FreshNamer, SkolemConfig};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error("program is not tight: positive cycle {}", .0.join(" -> "))]
    NotTight(Vec<String>),
    #[error("program is not stratified: {} depends negatively on itself", .0)]
    NotStratified(String),
    #[error("`{0}` is not over distinct variables; its completion would need equality")]
    RequiresEquality(String),
    #[error("{what} has {found} ground elements, over the oracle cap of {cap}")]
    TooLarge {
        what: &'static str,
        found: usize,
        cap: usize,
    },
    #[error("model has zero partition function")]
    ZeroPartition,
}

impl EncodeError {
    pub fn is_resource(&self) -> bool {
        match self {
            EncodeError::TooLarge { .. } => true,
            EncodeError::Count(e) => e.is_resource(),
            _ => false,
        }
    }
}

/// A weighted theory whose models correspond to the source model's worlds.
#[derive(Clone, Debug, PartialEq)]
pub struct WfomcEncoding {
    pub theory: WeightedTheory,
    /// Whether `theory` is already in Skolem normal form.
    pub skolemized: bool,
    /// Whether predicates absent from `theory` are false rather than free.
    pub closed_world: bool,
}

impl WfomcEncoding {
    pub fn new(theory: WeightedTheory) -> Self {
        let skolemized = crate::logic::classify_normal_form(&theory).is_skolem();
        WfomcEncoding {
            theory,
            skolemized,
            closed_world: false,
        }
    }

    pub fn closed_world(mut self) -> Self {
        self.closed_world = true;
        self
    }
}

/// Where the query is conjoined relative to Skolemization.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum QueryOrder {
    #[default]
    AfterSkolemization,
    BeforeSkolemization,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryOptions {
    pub engine: Engine,
    pub mode: Mode,
    pub order: QueryOrder,
}

fn skolemize_avoiding(t: &WeightedTheory, phi: &Formula) -> WeightedTheory {
    let mut namer = FreshNamer::for_theory(t);
    for p in phi.predicates() {
        namer.reserve(p.name());
    }
    skolemize_with(t, &SkolemConfig::default(), &mut namer)
        .expect("sites come from the driver")
        .0
}

fn divide(num: Count, den: Count) -> Result<Count, EncodeError> {
    use crate::logic::Scalar;
    match (num, den) {
        (Count::Exact(a), Count::Exact(b)) => Scalar::checked_div(&a, &b).map(Count::Exact),
        (a, b) => Scalar::checked_div(&a.to_f64(), &b.to_f64()).map(Count::Float),
    }
    .ok_or(EncodeError::ZeroPartition)
}

/// `Pr(phi) = WFOMC(Δ ∧ phi) / WFOMC(Δ)` over `d`, with `phi` conjoined
/// after Skolemization.
pub fn query_probability(
    e: &WfomcEncoding,
    d: &Domain,
    phi: &Formula,
    engine: Engine,
    mode: Mode,
) -> Result<Count, EncodeError> {
    query_probability_with(
        e,
        d,
        phi,
        &QueryOptions {
            engine,
            mode,
            order: QueryOrder::AfterSkolemization,
        },
    )
}

pub fn query_probability_with(
    e: &WfomcEncoding,
    d: &Domain,
    phi: &Formula,
    opts: &QueryOptions,
) -> Result<Count, EncodeError> {
    let free = phi.free_vars_ordered();
    if !free.is_empty() {
        return Err(LogicError::FreeVariables {
            sentence: 0,
            vars: free,
        }
        .into());
    }
    let mut base = e.theory.clone();
    for p in phi.predicates() {
        if !base.predicates().contains(&p) {
            base.weights.declare(p.clone());
            if e.closed_world {
                let xs: Vec<String> = (0..p.arity()).map(|i| format!("x{i}")).collect();
                let args = xs.iter().map(|x| crate::logic::Term::var(x)).collect();
                let atom = crate::logic::Atom::new(p, args)?;
                base.sentences
                    .push(Formula::forall_many(&xs, Formula::not(Formula::Atom(atom))));
            }
        }
    }
    base.validate()?;
    let (num_theory, den_theory) = match (opts.order, e.skolemized) {
        (_, true) => (base.conjoin(phi.clone()), base),
        (QueryOrder::AfterSkolemization, false) => {
            let sk = skolemize_avoiding(&base, phi);
            (sk.conjoin(phi.clone()), sk)
        }
        (QueryOrder::BeforeSkolemization, false) => {
            let with_phi = base.conjoin(phi.clone());
            let num = skolemize_avoiding(&with_phi, phi);
            (num, skolemize_avoiding(&base, phi))
        }
    };
    let den = count(&den_theory, d, opts.engine, opts.mode)?;
    let num = count(&num_theory, d, opts.engine, opts.mode)?;
    divide(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_formula, parse_theory};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    #[test]
    fn true_query_has_probability_one() {
        let t = parse_theory("weight P 1 1/4 3/4\nforall x exists y (P(x) | Q(y))")
            .unwrap()
            .theory;
        let e = WfomcEncoding::new(t);
        assert!(!e.skolemized);
        let d = Domain::with_size(2, &[]).unwrap();
        let p = query_probability(&e, &d, &Formula::True, Engine::Auto, Mode::Exact).unwrap();
        assert_eq!(p, Count::Exact(BigRational::from_integer(BigInt::from(1))));
    }

    #[test]
    fn query_order_does_not_matter() {
        let t = parse_theory("weight P 1 1/4 3/4\nforall x exists y (P(x) | Q(x,y))")
            .unwrap()
            .theory;
        let e = WfomcEncoding::new(t);
        let d = Domain::new(["A", "B"]).unwrap();
        let phi = parse_formula("~P(A) & Q(A,B)").unwrap();
        let mut opts = QueryOptions::default();
        let after = query_probability_with(&e, &d, &phi, &opts).unwrap();
        opts.order = QueryOrder::BeforeSkolemization;
        assert_eq!(query_probability_with(&e, &d, &phi, &opts).unwrap(), after);
    }

    #[test]
    fn zero_partition_is_an_error() {
        let e = WfomcEncoding::new(parse_theory("P(A) & ~P(A)").unwrap().theory);
        let d = Domain::new(["A"]).unwrap();
        let phi = parse_formula("P(A)").unwrap();
        assert_eq!(
            query_probability(&e, &d, &phi, Engine::Auto, Mode::Exact),
            Err(EncodeError::ZeroPartition)
        );
    }

    #[test]
    fn open_queries_are_rejected() {
        let e = WfomcEncoding::new(parse_theory("P(A)").unwrap().theory);
        let d = Domain::new(["A"]).unwrap();
        let phi = parse_formula("P(x)").unwrap();
        assert!(matches!(
            query_probability(&e, &d, &phi, Engine::Auto, Mode::Exact),
            Err(EncodeError::Logic(LogicError::FreeVariables { .. }))
        ));
    }
}
