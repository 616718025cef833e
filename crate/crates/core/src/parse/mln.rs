use super::formula::Parser;
use super::lexer::Tok;
use super::ParseError;
use crate::encode::{MlnFormula, MlnModel, MlnWeight};

/// Parses a `.mln` file: one `weight formula` pair per line, where the weight
/// is a decimal or `inf` for a hard formula.
pub fn parse_mln(src: &str) -> Result<MlnModel, ParseError> {
    let mut p = Parser::new(src)?;
    let mut formulas = Vec::new();
    loop {
        p.skip_newlines();
        if p.at_eof() {
            break;
        }
        let weight = match p.peek() {
            Tok::Ident(w) if w == "inf" => {
                p.bump();
                MlnWeight::Hard
            }
            Tok::Number(_) => MlnWeight::Soft(p.rational()?),
            _ => return Err(p.unexpected("a weight or `inf`")),
        };
        let formula = p.formula()?;
        formulas.push(MlnFormula { weight, formula });
        p.end_statement()?;
    }
    Ok(MlnModel { formulas })
}
