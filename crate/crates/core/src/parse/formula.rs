use std::collections::HashMap;

use num_rational::BigRational;

use super::lexer::{tokenize, Spanned, Tok};
use super::{ParseError, MAX_ARITY, MAX_FORMULA_DEPTH, MAX_NESTING};
use crate::logic::{is_variable_name, parse_rational, Atom, Formula, PredicateSig, Term, Weight};

const RESERVED: [&str; 4] = ["forall", "exists", "true", "false"];

/// Recursive-descent parser shared by the three input languages.
///
/// Precedence from loosest to tightest: `<->`, `->`, `|`, `&`, then `~` and
/// quantifiers. Binary connectives associate to the right and a quantifier
/// body extends as far right as possible.
pub(crate) struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    nesting: usize,
    arities: HashMap<String, usize>,
}

#[derive(Clone, Copy)]
enum Op {
    Iff,
    Implies,
    Or,
    And,
}

impl Op {
    const LEVELS: [Op; 4] = [Op::Iff, Op::Implies, Op::Or, Op::And];

    fn token(self) -> Tok {
        match self {
            Op::Iff => Tok::DoubleArrow,
            Op::Implies => Tok::Arrow,
            Op::Or => Tok::Bar,
            Op::And => Tok::Amp,
        }
    }

    fn build(self, a: Formula, b: Formula) -> Formula {
        match self {
            Op::Iff => Formula::iff(a, b),
            Op::Implies => Formula::implies(a, b),
            Op::Or => Formula::or(a, b),
            Op::And => Formula::and(a, b),
        }
    }
}

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: tokenize(src)?,
            pos: 0,
            nesting: 0,
            arities: HashMap::new(),
        })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub(crate) fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub(crate) fn location(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    pub(crate) fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.location();
        ParseError::new(line, col, message)
    }

    pub(crate) fn unexpected(&self, wanted: &str) -> ParseError {
        self.error(format!(
            "expected {wanted}, found {}",
            self.peek().describe()
        ))
    }

    pub(crate) fn expect(&mut self, tok: Tok, wanted: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    pub(crate) fn skip_newlines(&mut self) {
        while *self.peek() == Tok::Newline {
            self.bump();
        }
    }

    pub(crate) fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    /// Consumes the end of a line-oriented statement: an optional `.`
    /// followed by a newline or end of input, or a `.` alone.
    pub(crate) fn end_statement(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Dot => {
                self.bump();
                Ok(())
            }
            Tok::Newline | Tok::Eof => Ok(()),
            _ => Err(self.unexpected("end of statement")),
        }
    }

    /// Records the arity of `name`, rejecting a conflicting earlier use.
    pub(crate) fn register_arity(
        &mut self,
        name: &str,
        arity: usize,
        at: (usize, usize),
    ) -> Result<(), ParseError> {
        if arity > MAX_ARITY {
            return Err(ParseError::new(
                at.0,
                at.1,
                format!("predicate {name} has arity {arity}; at most {MAX_ARITY} is supported"),
            ));
        }
        match self.arities.get(name) {
            Some(&a) if a != arity => Err(ParseError::new(
                at.0,
                at.1,
                format!("predicate {name} used with arity {arity} but earlier with arity {a}"),
            )),
            _ => {
                self.arities.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    pub(crate) fn formula(&mut self) -> Result<Formula, ParseError> {
        self.binary(0).map(|(f, _)| f)
    }

    /// Parses one precedence level; returns the formula and its tree depth.
    fn binary(&mut self, level: usize) -> Result<(Formula, usize), ParseError> {
        let Some(&op) = Op::LEVELS.get(level) else {
            return self.unary();
        };
        let mut items = vec![self.binary(level + 1)?];
        let mut ops_at = Vec::new();
        while *self.peek() == op.token() {
            ops_at.push(self.location());
            self.bump();
            items.push(self.binary(level + 1)?);
        }
        let (mut acc, mut depth) = items.pop().expect("at least one operand");
        while let Some((f, d)) = items.pop() {
            depth = depth.max(d) + 1;
            if depth > MAX_FORMULA_DEPTH {
                let (line, col) = ops_at[items.len()];
                return Err(ParseError::new(line, col, "formula nested too deeply"));
            }
            acc = op.build(f, acc);
        }
        Ok((acc, depth))
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.nesting += 1;
        if self.nesting > MAX_NESTING {
            return Err(self.error("formula nested too deeply"));
        }
        Ok(())
    }

    fn unary(&mut self) -> Result<(Formula, usize), ParseError> {
        let at = self.location();
        self.enter()?;
        let out = self.unary_inner();
        self.nesting -= 1;
        match out {
            Ok((_, d)) if d > MAX_FORMULA_DEPTH => {
                Err(ParseError::new(at.0, at.1, "formula nested too deeply"))
            }
            other => other,
        }
    }

    fn unary_inner(&mut self) -> Result<(Formula, usize), ParseError> {
        let at = self.location();
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                let (f, d) = self.unary()?;
                Ok((Formula::not(f), d + 1))
            }
            Tok::LParen => {
                self.bump();
                let (f, d) = self.binary(0)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok((f, d))
            }
            Tok::Ident(word) if word == "forall" || word == "exists" => {
                self.bump();
                let var = match self.bump() {
                    Tok::Ident(v) if is_variable_name(&v) && !RESERVED.contains(&v.as_str()) => v,
                    _ => {
                        return Err(ParseError::new(
                            at.0,
                            at.1,
                            format!("`{word}` must be followed by a lowercase variable"),
                        ))
                    }
                };
                let (body, d) = self.binary(0)?;
                let f = if word == "forall" {
                    Formula::forall(var, body)
                } else {
                    Formula::exists(var, body)
                };
                Ok((f, d + 1))
            }
            Tok::Ident(word) if word == "true" => {
                self.bump();
                Ok((Formula::True, 1))
            }
            Tok::Ident(word) if word == "false" => {
                self.bump();
                Ok((Formula::False, 1))
            }
            Tok::Ident(_) => Ok((Formula::Atom(self.atom()?), 1)),
            _ => Err(self.unexpected("a formula")),
        }
    }

    /// `Name` or `Name(term, ...)`.
    pub(crate) fn atom(&mut self) -> Result<Atom, ParseError> {
        let at = self.location();
        let name = match self.peek().clone() {
            Tok::Ident(n) if !RESERVED.contains(&n.as_str()) => n,
            _ => return Err(self.unexpected("an atom")),
        };
        self.bump();
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.bump();
            loop {
                args.push(self.term()?);
                match self.peek() {
                    Tok::Comma => self.bump(),
                    Tok::RParen => {
                        self.bump();
                        break;
                    }
                    _ => return Err(self.unexpected("`,` or `)`")),
                };
            }
        }
        self.register_arity(&name, args.len(), at)?;
        let pred = PredicateSig::new(name, args.len())
            .map_err(|e| ParseError::new(at.0, at.1, e.to_string()))?;
        Atom::new(pred, args).map_err(|e| ParseError::new(at.0, at.1, e.to_string()))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Quoted(c) => {
                self.bump();
                Ok(Term::constant(&c))
            }
            Tok::Ident(v) if RESERVED.contains(&v.as_str()) => {
                Err(self.error(format!("`{v}` is reserved")))
            }
            Tok::Ident(v) => {
                self.bump();
                Ok(if is_variable_name(&v) {
                    Term::var(&v)
                } else {
                    Term::constant(&v)
                })
            }
            _ => Err(self.unexpected("a variable or constant")),
        }
    }

    pub(crate) fn rational(&mut self) -> Result<BigRational, ParseError> {
        match self.peek().clone() {
            Tok::Number(s) => {
                let r = parse_rational(&s)
                    .ok_or_else(|| self.error(format!("malformed number {s}")))?;
                self.bump();
                Ok(r)
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    /// A number or `exp(number)`.
    pub(crate) fn weight(&mut self) -> Result<Weight, ParseError> {
        match self.peek() {
            Tok::Ident(w) if w == "exp" => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let r = self.rational()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Weight::Exp(r))
            }
            _ => Ok(Weight::Rational(self.rational()?)),
        }
    }

    pub(crate) fn natural(&mut self) -> Result<usize, ParseError> {
        match self.peek().clone() {
            Tok::Number(s) => {
                let n = s
                    .parse::<usize>()
                    .map_err(|_| self.error(format!("expected an arity, found {s}")))?;
                if n > MAX_ARITY {
                    return Err(self.error(format!("arity {n} exceeds the limit of {MAX_ARITY}")));
                }
                self.bump();
                Ok(n)
            }
            _ => Err(self.unexpected("an arity")),
        }
    }
}
