use num_rational::BigRational;

use crate::logic::{Atom, Formula};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MlnWeight {
    Soft(BigRational),
    Hard,
}

/// One weighted formula. Free variables are read as universally quantified
/// when the model is encoded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MlnFormula {
    pub weight: MlnWeight,
    pub formula: Formula,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MlnModel {
    pub formulas: Vec<MlnFormula>,
}

/// `p :: atom`; every grounding of `atom` is an independent coin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbFact {
    pub prob: BigRational,
    pub atom: Atom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

/// `head :- body`; an empty body makes every grounding of `head` true.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub head: Atom,
    pub body: Vec<Literal>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LogicProgram {
    pub facts: Vec<ProbFact>,
    pub rules: Vec<Rule>,
}
