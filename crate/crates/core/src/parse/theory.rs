use super::formula::Parser;
use super::lexer::Tok;
use super::ParseError;
use crate::logic::{
    is_valid_constant, Domain, Formula, PredicateSig, ScaleFactor, Weight, WeightFn, WeightedTheory,
};

/// A `.fol` file: a weighted theory and an optional domain declaration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedTheory {
    pub theory: WeightedTheory,
    pub domain: Option<Domain>,
}

/// Parses a `.fol` file.
///
/// Statements, one per line or terminated by `.`:
///
/// ```text
/// weight Pred arity w_true w_false
/// domain A, B, 'c d'
/// scale w arity
/// forall x exists y (WorksFor(x,y) | Boss(x))
/// ```
pub fn parse_theory(src: &str) -> Result<ParsedTheory, ParseError> {
    let mut p = Parser::new(src)?;
    let mut sentences = Vec::new();
    let mut weights = WeightFn::new();
    let mut scale = Vec::new();
    let mut domain = None;
    loop {
        p.skip_newlines();
        if p.at_eof() {
            break;
        }
        let at = p.location();
        let keyword = match p.peek() {
            Tok::Ident(w)
                if matches!(
                    p.peek_at(1),
                    Tok::Ident(_) | Tok::Number(_) | Tok::Quoted(_)
                ) =>
            {
                Some(w.clone())
            }
            _ => None,
        };
        match keyword.as_deref() {
            Some("weight") => {
                p.bump();
                let name = match p.bump() {
                    Tok::Ident(n) => n,
                    _ => return Err(ParseError::new(at.0, at.1, "expected a predicate name")),
                };
                let arity = p.natural()?;
                p.register_arity(&name, arity, at)?;
                let pos = p.weight()?;
                let neg = p.weight()?;
                let pred = PredicateSig::new(name, arity)
                    .map_err(|e| ParseError::new(at.0, at.1, e.to_string()))?;
                if weights.contains(&pred) {
                    return Err(ParseError::new(
                        at.0,
                        at.1,
                        format!("{pred} weighted twice"),
                    ));
                }
                weights.set(pred, pos, neg);
            }
            Some("domain") => {
                p.bump();
                if domain.is_some() {
                    return Err(ParseError::new(at.0, at.1, "second domain declaration"));
                }
                let mut constants = Vec::new();
                loop {
                    match p.peek().clone() {
                        Tok::Ident(c) | Tok::Quoted(c) if is_valid_constant(&c) => {
                            p.bump();
                            constants.push(c);
                        }
                        _ => return Err(p.unexpected("a constant")),
                    }
                    if *p.peek() == Tok::Comma {
                        p.bump();
                    } else if matches!(p.peek(), Tok::Dot | Tok::Newline | Tok::Eof) {
                        break;
                    }
                }
                domain = Some(
                    Domain::new(constants)
                        .map_err(|e| ParseError::new(at.0, at.1, e.to_string()))?,
                );
            }
            Some("scale") => {
                p.bump();
                let weight = p.weight()?;
                let arity = p.natural()?;
                scale.push(ScaleFactor { weight, arity });
            }
            _ => {
                let f = p.formula()?;
                let free = f.free_vars_ordered();
                if let Some(v) = free.first() {
                    return Err(ParseError::new(
                        at.0,
                        at.1,
                        format!("sentence has free variable `{v}`"),
                    ));
                }
                sentences.push(f);
            }
        }
        p.end_statement()?;
    }
    let mut theory = WeightedTheory::new(sentences, weights)
        .map_err(|e| ParseError::new(1, 1, e.to_string()))?;
    theory.scale = scale;
    Ok(ParsedTheory { theory, domain })
}

/// Parses a single formula. Free variables are allowed.
pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(src)?;
    p.skip_newlines();
    let f = p.formula()?;
    p.skip_newlines();
    if !p.at_eof() {
        return Err(p.unexpected("end of input"));
    }
    Ok(f)
}

/// Parses a weight literal: a decimal, a fraction `n/d` or `exp(r)`.
pub fn parse_weight(src: &str) -> Result<Weight, ParseError> {
    let mut p = Parser::new(src)?;
    let w = p.weight()?;
    if !p.at_eof() {
        return Err(p.unexpected("end of input"));
    }
    Ok(w)
}
