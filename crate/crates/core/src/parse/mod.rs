//! Concrete syntax: `.fol` theories, `.mln` files and `.plp` programs, plus
//! printers that invert the parsers and the JSON result schema.

mod formula;
mod json;
mod lexer;
mod mln;
mod print;
mod problog;
mod theory;

use std::fmt;

use thiserror::Error;

pub use json::{count_from_json, count_to_json, probability_to_json};
pub use mln::parse_mln;
pub use print::{print_formula, print_mln, print_problog, print_theory};
pub use problog::parse_problog;
pub use theory::{parse_formula, parse_theory, parse_weight, ParsedTheory};

/// Deepest formula tree the parsers build. Deeper input is rejected so
/// that recursive passes over the tree stay within the stack.
pub const MAX_FORMULA_DEPTH: usize = 200;

/// Deepest nesting of parentheses, negations and quantifiers accepted.
/// Printing adds at most one pair of parentheses per tree level, so every
/// printed formula of an accepted depth parses again.
pub const MAX_NESTING: usize = 2 * MAX_FORMULA_DEPTH + 2;

/// Largest predicate arity accepted.
pub const MAX_ARITY: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}
