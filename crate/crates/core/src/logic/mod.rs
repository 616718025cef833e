//! Function-free first-order logic over finite domains.

mod normal_form;
mod syntax;
mod theory;
mod weight;

use thiserror::Error;

pub use normal_form::{
    classify_normal_form, classify_sentence, clause_literals, split_prefix, split_universal_prefix,
    NormalForm,
};
pub use syntax::{
    fresh_variable, is_bare_constant, is_identifier, is_valid_constant, is_variable_name, Atom,
    Formula, PredicateSig, Quantifier, Term,
};
pub use theory::{
    standardize_apart, standardize_formula, Domain, ScaleFactor, WeightFn, WeightPair,
    WeightedTheory,
};
pub use weight::{format_rational, parse_rational, Count, Mode, Scalar, Weight, WeightError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("invalid name `{0}`")]
    InvalidName(String),
    #[error("{pred} applied to {found} arguments")]
    ArityMismatch { pred: PredicateSig, found: usize },
    #[error("predicate {name} used with arity {first} and {second}")]
    InconsistentArity {
        name: String,
        first: usize,
        second: usize,
    },
    #[error("sentence {sentence} has free variables {vars:?}")]
    FreeVariables { sentence: usize, vars: Vec<String> },
    #[error("cannot bind `{0}`: it is only used as a quantified variable")]
    BindsBoundVariable(String),
    #[error("the domain must contain at least one constant")]
    EmptyDomain,
    #[error("constant {0} listed twice in the domain")]
    DuplicateConstant(String),
    #[error("constant {0} is not in the domain")]
    MissingConstant(String),
}
