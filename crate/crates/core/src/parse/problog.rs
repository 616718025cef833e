use num_traits::{One, Signed};

use super::formula::Parser;
use super::lexer::Tok;
use super::ParseError;
use crate::encode::{Literal, LogicProgram, ProbFact, Rule};

/// Parses a `.plp` program of probabilistic facts `p :: atom.`, rules
/// `head :- lit, ..., lit.` and certain facts `atom.`. Negative body
/// literals are written `\+ atom` or `~atom`.
pub fn parse_problog(src: &str) -> Result<LogicProgram, ParseError> {
    let mut p = Parser::new(src)?;
    let mut prog = LogicProgram::default();
    loop {
        p.skip_newlines();
        if p.at_eof() {
            break;
        }
        if let Tok::Number(_) = p.peek() {
            let at = p.location();
            let prob = p.rational()?;
            if prob.is_negative() || prob > One::one() {
                return Err(ParseError::new(
                    at.0,
                    at.1,
                    "probability must lie in [0, 1]",
                ));
            }
            p.expect(Tok::ColonColon, "`::`")?;
            p.skip_newlines();
            let atom = p.atom()?;
            prog.facts.push(ProbFact { prob, atom });
        } else {
            let head = p.atom()?;
            let mut body = Vec::new();
            if *p.peek() == Tok::ColonDash {
                p.bump();
                loop {
                    p.skip_newlines();
                    let positive = !matches!(p.peek(), Tok::NotProvable | Tok::Tilde);
                    if !positive {
                        p.bump();
                    }
                    body.push(Literal {
                        positive,
                        atom: p.atom()?,
                    });
                    p.skip_newlines();
                    if *p.peek() == Tok::Comma {
                        p.bump();
                    } else {
                        break;
                    }
                }
            }
            prog.rules.push(Rule { head, body });
        }
        p.skip_newlines();
        p.expect(Tok::Dot, "`.`")?;
    }
    Ok(prog)
}
